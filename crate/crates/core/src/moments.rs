// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form time evolution of the first and second moments of the damped
//! oscillator, their asymptotic values, the energy and the uncertainty
//! monitors.
//!
//! The variance dynamics is solved through the scaled vector
//! `X = (m w s_qq, s_pp/(m w), s_pq)` which obeys `X' = R X + D` with a
//! constant drift `R`. In the overdamped and underdamped regimes the
//! propagator `e^{R t}` has explicit hyperbolic/trigonometric entries; at
//! critical damping a dense matrix-exponential fallback is used.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::linalg::affine_flow;
use crate::model::{derive, OscillatorModel, Regime};
use crate::{Error, Result, C64};

/// First and second moments at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub sigma_q: f64,
    pub sigma_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
    pub t: f64,
}

impl MomentState {
    /// Moments of a pure coherent state centred on `alpha0`.
    pub fn coherent(model: &OscillatorModel, alpha0: C64) -> Self {
        let mw = model.m * model.omega;
        MomentState {
            sigma_q: (2.0 * model.hbar / mw).sqrt() * alpha0.re,
            sigma_p: (2.0 * model.hbar * mw).sqrt() * alpha0.im,
            sigma_qq: 0.5 * model.hbar / mw,
            sigma_pp: 0.5 * model.hbar * mw,
            sigma_pq: 0.0,
            t: 0.0,
        }
    }

    /// Generalized uncertainty product `s_qq s_pp - s_pq^2`.
    pub fn uncertainty_product(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_pq * self.sigma_pq
    }
}

/// Result of a mean propagation; `used_fallback` marks the critical-damping
/// matrix-exponential path.
#[derive(Debug, Clone, Copy)]
pub struct MeanPropagation {
    pub sigma_q: f64,
    pub sigma_p: f64,
    pub used_fallback: bool,
}

/// Result of a variance propagation. `x_inf_valid` is false when no
/// asymptotic state exists (overdamped with `lambda <= nu`, or `lambda = 0`);
/// propagation itself is still exact.
#[derive(Debug, Clone, Copy)]
pub struct VariancePropagation {
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
    pub used_fallback: bool,
    pub x_inf_valid: bool,
}

/// The `R = T K T` structure of the variance drift.
#[derive(Debug, Clone)]
pub struct VarianceDecomposition {
    /// Involution `T` (real only in the overdamped regime; `None` otherwise).
    pub t_mat: Option<Matrix3<f64>>,
    /// Diagonal of `K`: real in the overdamped regime, complex-conjugate
    /// paired in the underdamped regime.
    pub k_diag: [C64; 3],
    /// Drift matrix of the scaled variance vector.
    pub r: Matrix3<f64>,
    /// Scaled diffusion vector `(2 m w D_qq, 2 D_pp/(m w), 2 D_pq)`.
    pub d_vec: Vector3<f64>,
    /// Asymptotic scaled variances, when a steady state exists.
    pub x_inf: Option<Vector3<f64>>,
}

/// Drift matrix of the scaled variance vector.
pub fn variance_drift(model: &OscillatorModel) -> Matrix3<f64> {
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    Matrix3::new(
        -2.0 * (l - mu),
        0.0,
        2.0 * w,
        0.0,
        -2.0 * (l + mu),
        -2.0 * w,
        -w,
        w,
        -2.0 * l,
    )
}

/// Scaled diffusion vector.
pub fn diffusion_vector(model: &OscillatorModel) -> Vector3<f64> {
    let mw = model.m * model.omega;
    Vector3::new(
        2.0 * mw * model.d_qq,
        2.0 * model.d_pp / mw,
        2.0 * model.d_pq,
    )
}

/// True when the variance dynamics relaxes: `lambda (lambda^2 + w^2 - mu^2) > 0`.
pub fn steady_state_exists(model: &OscillatorModel) -> bool {
    let g = model.lambda * model.lambda + model.omega * model.omega - model.mu * model.mu;
    model.lambda > 0.0 && g > 0.0
}

/// Mean drift matrix of `(s_q, s_p)`.
fn mean_drift(model: &OscillatorModel) -> Matrix2<f64> {
    Matrix2::new(
        -(model.lambda - model.mu),
        1.0 / model.m,
        -model.m * model.omega * model.omega,
        -(model.lambda + model.mu),
    )
}

/// Propagates the first moments to time `t`.
pub fn propagate_mean(
    model: &OscillatorModel,
    mean0: (f64, f64),
    t: f64,
) -> Result<MeanPropagation> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let dc = derive(model)?;
    let (q0, p0) = mean0;
    if t == 0.0 {
        return Ok(MeanPropagation {
            sigma_q: q0,
            sigma_p: p0,
            used_fallback: false,
        });
    }
    let el = (-model.lambda * t).exp();
    match dc.regime {
        Regime::Overdamped => {
            let nu = dc.nu;
            let (ch, sh) = ((nu * t).cosh(), (nu * t).sinh());
            let q = el * ((ch + model.mu / nu * sh) * q0 + sh / (model.m * nu) * p0);
            let p = el
                * (-model.m * model.omega * model.omega / nu * sh * q0
                    + (ch - model.mu / nu * sh) * p0);
            Ok(MeanPropagation {
                sigma_q: q,
                sigma_p: p,
                used_fallback: false,
            })
        }
        Regime::Underdamped => {
            let om = dc.omega_big;
            let (co, si) = ((om * t).cos(), (om * t).sin());
            let q = el * ((co + model.mu / om * si) * q0 + si / (model.m * om) * p0);
            let p = el
                * (-model.m * model.omega * model.omega / om * si * q0
                    + (co - model.mu / om * si) * p0);
            Ok(MeanPropagation {
                sigma_q: q,
                sigma_p: p,
                used_fallback: false,
            })
        }
        Regime::Critical => {
            let m = mean_drift(model);
            let x = affine_flow(&m, &Vector2::zeros(), &Vector2::new(q0, p0), t);
            Ok(MeanPropagation {
                sigma_q: x[0],
                sigma_p: x[1],
                used_fallback: true,
            })
        }
    }
}

/// Explicit propagator `T e^{K t} T` of the scaled variance vector.
///
/// Only valid away from critical damping; entries per the hyperbolic
/// (overdamped) or trigonometric (underdamped) closed forms.
fn variance_propagator(model: &OscillatorModel, t: f64) -> Result<Matrix3<f64>> {
    let dc = derive(model)?;
    let (mu, w) = (model.mu, model.omega);
    let e2l = (-2.0 * model.lambda * t).exp();
    match dc.regime {
        Regime::Overdamped => {
            let nu = dc.nu;
            let (ch, sh) = ((2.0 * nu * t).cosh(), (2.0 * nu * t).sinh());
            let pref = e2l / (2.0 * nu * nu);
            let a13 = 2.0 * w * (mu * ch + nu * sh - mu);
            let a23 = 2.0 * w * (mu * ch - nu * sh - mu);
            Ok(pref
                * Matrix3::new(
                    (mu * mu + nu * nu) * ch + 2.0 * mu * nu * sh - w * w,
                    (mu * mu - nu * nu) * ch - w * w,
                    a13,
                    (mu * mu - nu * nu) * ch - w * w,
                    (mu * mu + nu * nu) * ch - 2.0 * mu * nu * sh - w * w,
                    a23,
                    -0.5 * a13,
                    -0.5 * a23,
                    -2.0 * (w * w * ch - mu * mu),
                ))
        }
        Regime::Underdamped => {
            let om = dc.omega_big;
            let (co, si) = ((2.0 * om * t).cos(), (2.0 * om * t).sin());
            let pref = -e2l / (2.0 * om * om);
            let b13 = 2.0 * w * (mu * co - om * si - mu);
            let b23 = 2.0 * w * (mu * co + om * si - mu);
            Ok(pref
                * Matrix3::new(
                    (mu * mu - om * om) * co - 2.0 * mu * om * si - w * w,
                    (mu * mu + om * om) * co - w * w,
                    b13,
                    (mu * mu + om * om) * co - w * w,
                    (mu * mu - om * om) * co + 2.0 * mu * om * si - w * w,
                    b23,
                    -0.5 * b13,
                    -0.5 * b23,
                    -2.0 * (w * w * co - mu * mu),
                ))
        }
        Regime::Critical => Err(Error::Degenerate(
            "variance propagator closed form is singular at critical damping".into(),
        )),
    }
}

/// Explicit inverse of the variance drift, valid whenever
/// `lambda (lambda^2 + omega^2 - mu^2) != 0`.
pub(crate) fn variance_drift_inverse(model: &OscillatorModel) -> Result<Matrix3<f64>> {
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let g = l * l + w * w - mu * mu;
    if l * g == 0.0 {
        return Err(Error::NoSteadyState(
            "variance drift is singular: lambda (lambda^2 + omega^2 - mu^2) = 0".into(),
        ));
    }
    let pref = -1.0 / (4.0 * l * g);
    Ok(pref
        * Matrix3::new(
            2.0 * l * (l + mu) + w * w,
            w * w,
            2.0 * w * (l + mu),
            w * w,
            2.0 * l * (l - mu) + w * w,
            -2.0 * w * (l - mu),
            -(l + mu) * w,
            (l - mu) * w,
            2.0 * (l * l - mu * mu),
        ))
}

/// Closed-form solution of the generic scaled flow `x' = R x + d`.
///
/// Shared by the physical variances and by the quasiprobability covariance
/// flows, which obey the same drift with representation-shifted diffusion.
/// Returns `(x(t), used_fallback, x_inf_valid)`.
pub(crate) fn propagate_scaled(
    model: &OscillatorModel,
    x0: &Vector3<f64>,
    d: &Vector3<f64>,
    t: f64,
) -> Result<(Vector3<f64>, bool, bool)> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    derive(model)?;
    let relaxes = steady_state_exists(model);
    let critical = model.regime() == Regime::Critical;
    if t == 0.0 {
        return Ok((*x0, critical, relaxes));
    }
    if critical || !relaxes {
        // Exact affine flow; covers critical damping and non-relaxing models.
        let x = affine_flow(&variance_drift(model), d, x0, t);
        Ok((x, critical, relaxes))
    } else {
        let p = variance_propagator(model, t)?;
        let x_inf = -(variance_drift_inverse(model)? * d);
        Ok((p * (x0 - x_inf) + x_inf, false, true))
    }
}

/// Propagates the variances `(s_qq, s_pp, s_pq)` to time `t`.
pub fn propagate_variances(
    model: &OscillatorModel,
    var0: (f64, f64, f64),
    t: f64,
) -> Result<VariancePropagation> {
    let mw = model.m * model.omega;
    let x0 = Vector3::new(mw * var0.0, var0.1 / mw, var0.2);
    let (x, used_fallback, x_inf_valid) =
        propagate_scaled(model, &x0, &diffusion_vector(model), t)?;
    Ok(VariancePropagation {
        sigma_qq: x[0] / mw,
        sigma_pp: x[1] * mw,
        sigma_pq: x[2],
        used_fallback,
        x_inf_valid,
    })
}

/// Propagates a full moment state to time `t`.
pub fn propagate(model: &OscillatorModel, state0: &MomentState, t: f64) -> Result<MomentState> {
    let dt = t - state0.t;
    let mean = propagate_mean(model, (state0.sigma_q, state0.sigma_p), dt)?;
    let var = propagate_variances(
        model,
        (state0.sigma_qq, state0.sigma_pp, state0.sigma_pq),
        dt,
    )?;
    Ok(MomentState {
        sigma_q: mean.sigma_q,
        sigma_p: mean.sigma_p,
        sigma_qq: var.sigma_qq,
        sigma_pp: var.sigma_pp,
        sigma_pq: var.sigma_pq,
        t,
    })
}

/// Asymptotic variances; identical rational expressions for both regimes.
pub fn asymptotic_variances(model: &OscillatorModel) -> Result<(f64, f64, f64)> {
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let g = l * l + w * w - mu * mu;
    if !(l * g > 0.0) {
        return Err(Error::NoSteadyState(format!(
            "lambda (lambda^2 + omega^2 - mu^2) = {:.3e} <= 0",
            l * g
        )));
    }
    let mw = model.m * model.omega;
    let (dqq, dpp, dpq) = (model.d_qq, model.d_pp, model.d_pq);
    let qq = (mw * mw * (2.0 * l * (l + mu) + w * w) * dqq
        + w * w * dpp
        + 2.0 * model.m * w * w * (l + mu) * dpq)
        / (2.0 * mw * mw * l * g);
    let pp = (mw * mw * w * w * dqq + (2.0 * l * (l - mu) + w * w) * dpp
        - 2.0 * model.m * w * w * (l - mu) * dpq)
        / (2.0 * l * g);
    let pq = (-(l + mu) * mw * mw * dqq + (l - mu) * dpp + 2.0 * model.m * (l * l - mu * mu) * dpq)
        / (2.0 * model.m * l * g);
    Ok((qq, pp, pq))
}

/// Asymptotic mean energy
/// `E(inf) = (D_pp/(2m) + m w^2 D_qq / 2 + mu D_pq) / lambda`.
///
/// Also verifies the determinant identity relating `det sigma(inf)` to the
/// diffusion matrix and the reality bound; a violation beyond 1e-10 relative
/// reports an internal-consistency error.
pub fn asymptotic_energy(model: &OscillatorModel) -> Result<f64> {
    let (qq, pp, pq) = asymptotic_variances(model)?;
    let (l, mu, w, m) = (model.lambda, model.mu, model.omega, model.m);
    let e = (model.d_pp / (2.0 * m) + 0.5 * m * w * w * model.d_qq + mu * model.d_pq) / l;
    let g = l * l + w * w - mu * mu;
    let det_sigma = qq * pp - pq * pq;
    let det_d_tilde = 4.0 * (model.d_qq * model.d_pp - model.d_pq * model.d_pq);
    let e_sigma = pp / (2.0 * m) + 0.5 * m * w * w * qq + mu * pq;
    let lhs = g * det_sigma;
    let rhs_coeff = 0.25 * det_d_tilde + e * e;
    let rhs_sigma = 0.25 * det_d_tilde + e_sigma * e_sigma;
    let scale = lhs.abs().max(rhs_coeff.abs()).max(f64::MIN_POSITIVE);
    if (lhs - rhs_coeff).abs() > 1e-10 * scale || (lhs - rhs_sigma).abs() > 1e-10 * scale {
        return Err(Error::Inconsistent(format!(
            "determinant identity violated: {lhs:.17e} vs {rhs_coeff:.17e} / {rhs_sigma:.17e}"
        )));
    }
    if det_sigma < 0.25 * det_d_tilde / g * (1.0 - 1e-10) {
        return Err(Error::Inconsistent(
            "reality bound on det sigma(inf) violated".into(),
        ));
    }
    Ok(e)
}

/// One row of the uncertainty monitor.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyPoint {
    pub t: f64,
    /// `s_qq s_pp - s_pq^2`.
    pub sigma_product: f64,
    /// Product at or above `hbar^2 / 4` (up to 1e-12 relative slack).
    pub ok: bool,
    /// Sufficient condition `D_qq s_pp + D_pp s_qq - 2 D_pq s_pq >= hbar^2 lambda / 2`.
    pub sufficient: bool,
}

/// Evaluates the uncertainty product and the sufficient condition on a grid.
pub fn uncertainty_monitor(
    model: &OscillatorModel,
    var0: (f64, f64, f64),
    t_grid: &[f64],
) -> Result<Vec<UncertaintyPoint>> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("t_grid must be strictly ascending".into()));
    }
    let h2_4 = 0.25 * model.hbar * model.hbar;
    let bound = 0.5 * model.hbar * model.hbar * model.lambda;
    t_grid
        .iter()
        .map(|&t| {
            let v = propagate_variances(model, var0, t)?;
            let product = v.sigma_qq * v.sigma_pp - v.sigma_pq * v.sigma_pq;
            let lhs =
                model.d_qq * v.sigma_pp + model.d_pp * v.sigma_qq - 2.0 * model.d_pq * v.sigma_pq;
            Ok(UncertaintyPoint {
                t,
                sigma_product: product,
                ok: product >= h2_4 * (1.0 - 1e-12),
                sufficient: lhs >= bound * (1.0 - 1e-12),
            })
        })
        .collect()
}

/// The `R = T K T` decomposition of the variance drift.
pub fn decomposition(model: &OscillatorModel) -> Result<VarianceDecomposition> {
    let dc = derive(model)?;
    let r = variance_drift(model);
    let d_vec = diffusion_vector(model);
    let x_inf = if steady_state_exists(model) {
        let (qq, pp, pq) = asymptotic_variances(model)?;
        let mw = model.m * model.omega;
        Some(Vector3::new(mw * qq, pp / mw, pq))
    } else {
        None
    };
    let l = model.lambda;
    match dc.regime {
        Regime::Overdamped => {
            let (mu, w, nu) = (model.mu, model.omega, dc.nu);
            let t_mat = Matrix3::new(
                mu + nu,
                mu - nu,
                2.0 * w,
                mu - nu,
                mu + nu,
                2.0 * w,
                -w,
                -w,
                -2.0 * mu,
            ) / (2.0 * nu);
            let k_diag = [
                C64::new(-2.0 * (l - nu), 0.0),
                C64::new(-2.0 * (l + nu), 0.0),
                C64::new(-2.0 * l, 0.0),
            ];
            Ok(VarianceDecomposition {
                t_mat: Some(t_mat),
                k_diag,
                r,
                d_vec,
                x_inf,
            })
        }
        Regime::Underdamped => {
            let om = dc.omega_big;
            let k_diag = [
                C64::new(-2.0 * l, 2.0 * om),
                C64::new(-2.0 * l, -2.0 * om),
                C64::new(-2.0 * l, 0.0),
            ];
            Ok(VarianceDecomposition {
                t_mat: None,
                k_diag,
                r,
                d_vec,
                x_inf,
            })
        }
        Regime::Critical => Err(Error::Degenerate(
            "no T K T decomposition at critical damping".into(),
        )),
    }
}
