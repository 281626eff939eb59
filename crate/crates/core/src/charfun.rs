// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Characteristic-function route to the moments: coefficient functions
//! `u, v, f, h` of the normally ordered characteristic function and the
//! moment formulas that follow from them.
//!
//! This is a second analytic path, fully independent of the
//! [`crate::moments`] propagators at the formula level, and is used to
//! cross-validate them. `gamma = sqrt(mu^2 - omega^2)` is kept complex so
//! the overdamped and underdamped regimes share one code path; real parts
//! are extracted (and checked) at the API boundary.

use crate::model::{derive, OscillatorModel, Regime};
use crate::moments::MomentState;
use crate::{Error, Result, C64};

/// Time-dependent coefficients of the characteristic function.
///
/// `u(0) = 1`, `v(0) = 0`, `f(0) = 0`, `h(0) = 0`. The decay constants
/// `n_coef`, `p_coef` are real in the overdamped regime and conjugate-paired
/// in the underdamped one; `m_coef` is always real.
#[derive(Debug, Clone, Copy)]
pub struct CharFunCoefficients {
    pub u: C64,
    pub v: C64,
    pub f: C64,
    pub h: f64,
    pub t: f64,
    pub m_coef: f64,
    pub n_coef: C64,
    pub p_coef: C64,
    pub f_inf: C64,
    pub h_inf: f64,
}

/// Mean-propagator entries `u(t)`, `v(t)`; `v` is real for all regimes.
pub fn u_v(model: &OscillatorModel, t: f64) -> Result<(C64, C64)> {
    let dc = derive(model)?;
    if dc.regime == Regime::Critical {
        return Err(Error::Degenerate(
            "u, v closed forms need mu != omega; use the numerical path".into(),
        ));
    }
    let g = dc.gamma;
    let el = (-model.lambda * t).exp();
    let (ch, sh) = ((g * t).cosh(), (g * t).sinh());
    let u = el * (ch + C64::i() * model.omega * sh / g);
    let v = -model.mu * el * sh / g;
    Ok((u, v))
}

fn real_part_checked(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "{what} should be real, got imaginary residue {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Evaluates `u, v, f, h` and the associated constants at time `t`.
pub fn coefficients(model: &OscillatorModel, t: f64) -> Result<CharFunCoefficients> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let dc = derive(model)?;
    if dc.regime == Regime::Critical {
        return Err(Error::Degenerate(
            "characteristic-function closed forms need mu != omega".into(),
        ));
    }
    let (u, v) = u_v(model, t)?;
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let g = dc.gamma;
    let g2 = mu * mu - w * w; // gamma^2, real in both regimes
    let l_coef = l - dc.d2;
    let c = 0.5 * (C64::new(mu, 0.0) + dc.d1.conj());

    let drive_scale = dc.d2.abs().max(l).max(1.0);
    if c.norm() < 1e-300 && l_coef.abs() < 1e-15 * drive_scale {
        // No inhomogeneity: f and h stay at their zero initial conditions.
        return Ok(CharFunCoefficients {
            u,
            v,
            f: C64::new(0.0, 0.0),
            h: 0.0,
            t,
            m_coef: 0.0,
            n_coef: C64::new(0.0, 0.0),
            p_coef: C64::new(0.0, 0.0),
            f_inf: C64::new(0.0, 0.0),
            h_inf: 0.0,
        });
    }

    let l2g2 = l * l - g2;
    if l <= 0.0 || l2g2.abs() < 1e-12 * (l * l).max(g2.abs()) {
        return Err(Error::NoSteadyState(
            "f, h asymptotes need lambda > 0 and lambda^2 != gamma^2".into(),
        ));
    }

    // Asymptotes; rational in gamma^2, hence valid in both regimes.
    let r_inf = (2.0 * (l * c.re - w * c.im) - l_coef * mu) / (4.0 * l2g2);
    let i_inf = (2.0 * w * l * c.re + 2.0 * (l * l - mu * mu) * c.im - l_coef * mu * w)
        / (4.0 * l * l2g2);
    let h_inf = (l_coef * (l * l + w * w) - 2.0 * mu * (l * c.re - w * c.im)) / (2.0 * l * l2g2);
    let f_inf = C64::new(r_inf, i_inf);

    // Transient through the spectral projectors of the real drift
    //   x' = -a x + b, x = (R, I, h), eigenvalues of a: 2l, 2(l -+ gamma).
    // One code path covers both regimes; in the overdamped regime the
    // h-components reproduce the hyperbolic constants M, N, P.
    let a = [
        [2.0 * l, 2.0 * w, mu],
        [-2.0 * w, 2.0 * l, 0.0],
        [4.0 * mu, 0.0, 2.0 * l],
    ];
    let eigs = [
        C64::new(2.0 * l, 0.0),
        2.0 * (l - g),
        2.0 * (l + g),
    ];
    let x_inf = [r_inf, i_inf, h_inf];
    let mut coefs = [[C64::new(0.0, 0.0); 3]; 3]; // coefs[k] = -P_k x_inf
    for k in 0..3 {
        // P_k = prod_{j != k} (a - e_j I) / (e_k - e_j), applied to x_inf.
        let mut vec = [
            C64::new(-x_inf[0], 0.0),
            C64::new(-x_inf[1], 0.0),
            C64::new(-x_inf[2], 0.0),
        ];
        for j in 0..3 {
            if j == k {
                continue;
            }
            let denom = eigs[k] - eigs[j];
            let mut out = [C64::new(0.0, 0.0); 3];
            for (r, out_r) in out.iter_mut().enumerate() {
                let mut acc = -eigs[j] * vec[r];
                for (cidx, v) in vec.iter().enumerate() {
                    acc += a[r][cidx] * v;
                }
                *out_r = acc / denom;
            }
            vec = out;
        }
        coefs[k] = vec;
    }
    let mut x_t = [
        C64::new(x_inf[0], 0.0),
        C64::new(x_inf[1], 0.0),
        C64::new(x_inf[2], 0.0),
    ];
    for k in 0..3 {
        let decay = (-eigs[k] * t).exp();
        for (r, x) in x_t.iter_mut().enumerate() {
            *x += coefs[k][r] * decay;
        }
    }
    let r_t = real_part_checked(x_t[0], "Re f(t)")?;
    let i_t = real_part_checked(x_t[1], "Im f(t)")?;
    let h = real_part_checked(x_t[2], "h(t)")?;
    let m_coef = real_part_checked(coefs[0][2], "M")?;

    Ok(CharFunCoefficients {
        u,
        v,
        f: C64::new(r_t, i_t),
        h,
        t,
        m_coef,
        n_coef: coefs[1][2],
        p_coef: coefs[2][2],
        f_inf,
        h_inf,
    })
}

fn first_moment(coeff: &CharFunCoefficients, alpha0: C64) -> C64 {
    // <a^+(t)> for a coherent-state start.
    coeff.u * alpha0.conj() - coeff.v * alpha0
}

/// Moments of an initially coherent state `|alpha0>` at time `t`.
pub fn coherent_moments(model: &OscillatorModel, alpha0: C64, t: f64) -> Result<MomentState> {
    let coeff = coefficients(model, t)?;
    let a_dag = first_moment(&coeff, alpha0);
    let mw = model.m * model.omega;
    let re_f = coeff.f.re;
    let im_f = coeff.f.im;
    let h = coeff.h;
    Ok(MomentState {
        sigma_q: (2.0 * model.hbar / mw).sqrt() * a_dag.re,
        sigma_p: -(2.0 * model.hbar * mw).sqrt() * a_dag.im,
        sigma_qq: 0.5 * model.hbar / mw * (4.0 * re_f - 2.0 * h + 1.0),
        sigma_pp: 0.5 * model.hbar * mw * (1.0 - 2.0 * h - 4.0 * re_f),
        sigma_pq: -2.0 * model.hbar * im_f,
        t,
    })
}

/// Energy expectation
/// `E(t) = hbar w (<a^+ a> + 1/2) + i hbar mu (<a^+2> - <a^2>) / 2`.
pub fn energy_expectation(model: &OscillatorModel, alpha0: C64, t: f64) -> Result<f64> {
    let coeff = coefficients(model, t)?;
    let a_dag = first_moment(&coeff, alpha0);
    let a_dag_a = a_dag.norm_sqr() - coeff.h;
    let a_dag2 = a_dag * a_dag + 2.0 * coeff.f;
    let a2 = a_dag.conj() * a_dag.conj() + 2.0 * coeff.f.conj();
    let e = model.hbar * model.omega * (a_dag_a + 0.5)
        + C64::i() * model.hbar * model.mu / 2.0 * (a_dag2 - a2);
    if e.im.abs() > 1e-12 * e.re.abs().max(model.hbar * model.omega) {
        return Err(Error::Inconsistent(format!(
            "energy has imaginary residue {:.3e}",
            e.im
        )));
    }
    Ok(e.re)
}
