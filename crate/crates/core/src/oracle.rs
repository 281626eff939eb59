// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Numerical cross-check path: a small adaptive Runge-Kutta integrator plus
//! the raw equations of motion written directly from the master-equation
//! moment systems.
//!
//! Nothing in this module reuses the closed-form propagators; it exists so
//! every analytic result in the crate can be validated against plain ODE
//! integration of the defining dynamics.

use crate::model::OscillatorModel;
use crate::twoosc::TwoOscModel;

/// Dormand-Prince 5(4) adaptive step integrator.
///
/// Integrates `y' = f(t, y)` from `t0` to `t1` with mixed absolute/relative
/// error control. Tolerances down to ~1e-13 are practical for the small
/// systems used here.
pub fn rk45<F>(f: F, t0: f64, t1: f64, y0: &[f64], rtol: f64, atol: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    // 4th-order embedded weights.
    const E1: f64 = 5179.0 / 57600.0;
    const E3: f64 = 7571.0 / 16695.0;
    const E4: f64 = 393.0 / 640.0;
    const E5: f64 = -92097.0 / 339200.0;
    const E6: f64 = 187.0 / 2100.0;
    const E7: f64 = 1.0 / 40.0;

    let n = y0.len();
    let mut y = y0.to_vec();
    if (t1 - t0).abs() == 0.0 {
        return y;
    }
    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut h = dir * ((t1 - t0).abs() / 100.0).min(1e-2_f64.max((t1 - t0).abs() * 1e-6));
    let mut k1 = vec![0.0; n];
    let mut k = vec![vec![0.0; n]; 7];
    f(t, &y, &mut k1);
    k[0].copy_from_slice(&k1);
    let mut ytmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    let mut y4 = vec![0.0; n];
    let max_steps = 50_000_000usize;
    for _ in 0..max_steps {
        if (t - t1) * dir >= 0.0 {
            break;
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        // Stage evaluations.
        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k[0][i];
        }
        f(t + h / 5.0, &ytmp, &mut k[1]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        f(t + 3.0 * h / 10.0, &ytmp, &mut k[2]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        f(t + 4.0 * h / 5.0, &ytmp, &mut k[3]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        f(t + 8.0 * h / 9.0, &ytmp, &mut k[4]);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i]
                    + A65 * k[4][i]);
        }
        f(t + h, &ytmp, &mut k[5]);
        for i in 0..n {
            y5[i] = y[i]
                + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        f(t + h, &y5, &mut k[6]);
        for i in 0..n {
            y4[i] = y[i]
                + h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i]
                    + E7 * k[6][i]);
        }
        // Error estimate and step control.
        let mut err: f64 = 0.0;
        for i in 0..n {
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = (err / n as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            let (head, tail) = k.split_at_mut(6);
            head[0].copy_from_slice(&tail[0]); // FSAL
        }
        let fac = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= fac;
        if h.abs() < 1e3 * f64::EPSILON * t.abs().max(1.0) {
            h = dir * 1e3 * f64::EPSILON * t.abs().max(1.0);
        }
    }
    y
}

/// Right-hand side of the coupled mean equations for one damped oscillator:
/// `dq/dt = -(lambda - mu) q + p / m`, `dp/dt = -m w^2 q - (lambda + mu) p`.
pub fn mean_rhs(model: &OscillatorModel) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |_t, y, dy| {
        dy[0] = -(model.lambda - model.mu) * y[0] + y[1] / model.m;
        dy[1] = -model.m * model.omega * model.omega * y[0] - (model.lambda + model.mu) * y[1];
    }
}

/// Right-hand side of the variance equations for one damped oscillator
/// (`y = [s_qq, s_pp, s_pq]`).
pub fn variance_rhs(model: &OscillatorModel) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |_t, y, dy| {
        let (l, mu, m, w) = (model.lambda, model.mu, model.m, model.omega);
        dy[0] = -2.0 * (l - mu) * y[0] + 2.0 / m * y[2] + 2.0 * model.d_qq;
        dy[1] = -2.0 * (l + mu) * y[1] - 2.0 * m * w * w * y[2] + 2.0 * model.d_pp;
        dy[2] = -m * w * w * y[0] + y[1] / m - 2.0 * l * y[2] + 2.0 * model.d_pq;
    }
}

/// Right-hand side of the characteristic-function coefficient system
/// (`y = [R, I, h]`, drive `[Re C, Im C, L]` with `L = lambda - D2`,
/// `C = (mu + D1*)/2`).
pub fn charfun_rhs(model: &OscillatorModel) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    let dc = crate::model::derive(model).expect("valid model");
    let c = 0.5 * (crate::C64::new(model.mu, 0.0) + dc.d1.conj());
    let l_coef = model.lambda - dc.d2;
    move |_t, y, dy| {
        let (l, mu, w) = (model.lambda, model.mu, model.omega);
        dy[0] = -2.0 * l * y[0] - 2.0 * w * y[1] - mu * y[2] + c.re;
        dy[1] = -2.0 * l * y[1] + 2.0 * w * y[0] + c.im;
        dy[2] = -4.0 * mu * y[0] - 2.0 * l * y[2] + l_coef;
    }
}

/// Right-hand side of the generating-function coefficient system in complex
/// form (`y = [Re B, Im B, Re D, Im D, Re F, Im F]`):
/// `B' = -2(lambda + i w)B - mu F + 2(D1 - mu)`,
/// `D' = -2(lambda - i w)D - mu F + 2(D1* - mu)`,
/// `F' = -2 mu (B + D) - 2 lambda F - 4(D2 + lambda)`.
pub fn genfun_rhs(model: &OscillatorModel) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    let dc = crate::model::derive(model).expect("valid model");
    move |_t, y, dy| {
        let (l, mu, w) = (model.lambda, model.mu, model.omega);
        let b = crate::C64::new(y[0], y[1]);
        let d = crate::C64::new(y[2], y[3]);
        let f = crate::C64::new(y[4], y[5]);
        let db = -2.0 * crate::C64::new(l, w) * b - mu * f + 2.0 * (dc.d1 - mu);
        let dd = -2.0 * crate::C64::new(l, -w) * d - mu * f + 2.0 * (dc.d1.conj() - mu);
        let df = -2.0 * mu * (b + d) - 2.0 * l * f - 4.0 * (dc.d2 + l);
        dy[0] = db.re;
        dy[1] = db.im;
        dy[2] = dd.re;
        dy[3] = dd.im;
        dy[4] = df.re;
        dy[5] = df.im;
    }
}

/// Right-hand side of the 4x4 two-oscillator covariance equation
/// `dS/dt = Y S + S Y^T + 2 D`, flattened row-major (`y[4*i + j] = S_ij`).
pub fn twoosc_cov_rhs(model: &TwoOscModel) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    let y_mat = model.drift_matrix();
    let d_mat = model.dmat;
    move |_t, s, ds| {
        for i in 0..4 {
            for j in 0..4 {
                let mut v = 2.0 * d_mat[(i, j)];
                for k in 0..4 {
                    v += y_mat[(i, k)] * s[4 * k + j] + s[4 * i + k] * y_mat[(j, k)];
                }
                ds[4 * i + j] = v;
            }
        }
    }
}
