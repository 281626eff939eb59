// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fokker-Planck picture of the damped oscillator for the normally ordered
//! P, symmetric W and antinormally ordered Q distributions.
//!
//! In the scaled real coordinates the drift is one fixed linear map and only
//! the diffusion matrix depends on the ordering parameter `s`; the dynamics
//! is an Ornstein-Uhlenbeck process. Distributions are handled
//! parametrically (mean + covariance) throughout; no grids.

use nalgebra::{Matrix2, Vector3};

use crate::model::{derive, OscillatorModel};
use crate::moments;
use crate::{Error, Result};

/// Ordering parameter of the quasiprobability family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Ordering {
    /// Glauber P distribution, `s = +1`.
    P,
    /// Wigner distribution, `s = 0`.
    W,
    /// Husimi Q distribution, `s = -1`.
    Q,
}

impl Ordering {
    pub fn s(self) -> f64 {
        match self {
            Ordering::P => 1.0,
            Ordering::W => 0.0,
            Ordering::Q => -1.0,
        }
    }

    pub const ALL: [Ordering; 3] = [Ordering::P, Ordering::W, Ordering::Q];
}

/// Drift and diffusion of the Fokker-Planck equation in scaled coordinates.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSpaceFP {
    pub ordering: Ordering,
    /// Drift matrix `A = [[l - mu, -w], [w, l + mu]]`.
    pub a: Matrix2<f64>,
    /// Symmetric diffusion matrix `D^(s)`.
    pub ds: Matrix2<f64>,
    /// Whether `D^(s)` is positive definite (always true for W and Q of a
    /// valid model, not necessarily for P).
    pub positive_definite: bool,
}

/// Stationary Gaussian of one representation.
#[derive(Debug, Clone, Copy)]
pub struct SteadyGaussian {
    /// Stationary covariance in scaled coordinates.
    pub covariance: Matrix2<f64>,
    /// Total integral of the stationary Gaussian: 1 when the covariance is
    /// positive definite, NaN otherwise.
    pub normalization_check: f64,
    /// False when the representation's diffusion matrix is not positive
    /// definite, in which case the algebraic solution is still returned but
    /// the distribution does not exist as a well-behaved function.
    pub representable: bool,
}

/// Assembles the Fokker-Planck drift and diffusion for ordering `s`.
pub fn assemble(model: &OscillatorModel, ordering: Ordering) -> Result<PhaseSpaceFP> {
    derive(model)?;
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let s = ordering.s();
    let mw = model.m * model.omega;
    let a = Matrix2::new(l - mu, -w, w, l + mu);
    let d11 = mw * model.d_qq / model.hbar - 0.5 * s * (l - mu);
    let d22 = model.d_pp / (model.hbar * mw) - 0.5 * s * (l + mu);
    let d12 = model.d_pq / model.hbar;
    let ds = Matrix2::new(d11, d12, d12, d22);
    let positive_definite = d11 > 0.0 && d11 * d22 - d12 * d12 > 0.0;
    Ok(PhaseSpaceFP {
        ordering,
        a,
        ds,
        positive_definite,
    })
}

fn steady_vector(model: &OscillatorModel, fp: &PhaseSpaceFP) -> Result<Vector3<f64>> {
    let (l, mu, w) = (model.lambda, model.mu, model.omega);
    let g = l * l + w * w - mu * mu;
    if !(l * g > 0.0) {
        return Err(Error::NoSteadyState(format!(
            "lambda (lambda^2 + omega^2 - mu^2) = {:.3e} <= 0",
            l * g
        )));
    }
    let (d11, d22, d12) = (fp.ds[(0, 0)], fp.ds[(1, 1)], fp.ds[(0, 1)]);
    let denom = 4.0 * l * g;
    Ok(Vector3::new(
        ((2.0 * l * (l + mu) + w * w) * d11 + w * w * d22 + 2.0 * w * (l + mu) * d12) / denom,
        (w * w * d11 + (2.0 * l * (l - mu) + w * w) * d22 - 2.0 * w * (l - mu) * d12) / denom,
        (-w * (l + mu) * d11 + w * (l - mu) * d22 + 2.0 * (l * l - mu * mu) * d12) / denom,
    ))
}

/// Stationary covariance of the `s`-ordered distribution.
pub fn steady_state(model: &OscillatorModel, ordering: Ordering) -> Result<SteadyGaussian> {
    let fp = assemble(model, ordering)?;
    let v = steady_vector(model, &fp)?;
    let covariance = Matrix2::new(v[0], v[2], v[2], v[1]);
    let det = v[0] * v[1] - v[2] * v[2];
    Ok(SteadyGaussian {
        covariance,
        normalization_check: if det > 0.0 { 1.0 } else { f64::NAN },
        representable: fp.positive_definite,
    })
}

/// Converts physical variances to the `s`-plane covariance vector
/// `(s11, s22, s12)`.
pub fn to_plane(model: &OscillatorModel, ordering: Ordering, var: (f64, f64, f64)) -> Vector3<f64> {
    let mw = model.m * model.omega;
    let s = ordering.s();
    Vector3::new(
        var.0 * mw / (2.0 * model.hbar) - 0.25 * s,
        var.1 / (2.0 * model.hbar * mw) - 0.25 * s,
        var.2 / (2.0 * model.hbar),
    )
}

/// Converts an `s`-plane covariance vector back to the physical variances.
pub fn to_physical(
    model: &OscillatorModel,
    ordering: Ordering,
    v: &Vector3<f64>,
) -> (f64, f64, f64) {
    let mw = model.m * model.omega;
    let s = ordering.s();
    (
        (v[0] + 0.25 * s) * 2.0 * model.hbar / mw,
        (v[1] + 0.25 * s) * 2.0 * model.hbar * mw,
        v[2] * 2.0 * model.hbar,
    )
}

/// Propagates the `s`-ordered covariance from physical initial variances.
///
/// The dynamics shares the drift of the physical variance flow; only the
/// (constant) diffusion differs per representation, so the closed-form
/// machinery of [`crate::moments`] applies unchanged.
pub fn variance_flow(
    model: &OscillatorModel,
    ordering: Ordering,
    var0: (f64, f64, f64),
    t: f64,
) -> Result<Matrix2<f64>> {
    let fp = assemble(model, ordering)?;
    let v0 = to_plane(model, ordering, var0);
    let d = Vector3::new(fp.ds[(0, 0)], fp.ds[(1, 1)], fp.ds[(0, 1)]);
    let (v, _, _) = moments::propagate_scaled(model, &v0, &d, t)?;
    Ok(Matrix2::new(v[0], v[2], v[2], v[1]))
}
