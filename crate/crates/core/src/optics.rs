// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Extended optical Bloch equations for a two-level medium coupled to its
//! environment: transient dynamics of the atomic expectation values,
//! rotating-frame steady-state polarization, absorption and dispersion,
//! population difference and spectral line-shape relations.
//!
//! Beyond the classical decay rates, the environment contributes a
//! frequency shift `s`, observable cross couplings `gamma1`, `gamma2` and
//! diffusion drives `D1..D3`; the classical Bloch–Feynman equations are the
//! special case `s = gamma1 = gamma2 = 0`, `D1 = D2 = 0`,
//! `gamma'_perp = gamma''_perp`.

use nalgebra::{Matrix3, Vector3};

use crate::linalg::affine_flow;
use crate::{Error, Result};

/// Rates, drives and field parameters of the atom-environment model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEnvModel {
    pub gamma_perp_prime: f64,
    pub gamma_perp_dblprime: f64,
    pub gamma_parallel: f64,
    /// Environment frequency shift.
    pub s: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(rename = "D1")]
    pub d1: f64,
    #[serde(rename = "D2")]
    pub d2: f64,
    #[serde(rename = "D3")]
    pub d3: f64,
    pub omega0: f64,
    pub omega: f64,
    /// Static normalized field amplitude (enters the saturation parameter).
    pub chi0: f64,
    /// First-harmonic normalized field amplitude.
    pub chi1: f64,
    /// Saturation amplitude; use [`AtomEnvModel::with_derived_saturation`]
    /// to fill it from the rates.
    pub chi_s: f64,
    /// Equilibrium population difference.
    #[serde(rename = "N_e")]
    pub n_e: f64,
    /// Unsaturated line-center absorption scale.
    #[serde(default = "default_alpha0")]
    pub alpha0: f64,
}

fn default_alpha0() -> f64 {
    1.0
}

/// Derived operating-point parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedOptics {
    /// `Gamma = (gamma2 - 2 chi0)/gamma1`.
    pub big_gamma: f64,
    /// `zeta = (gamma'_perp / gamma''_perp) Gamma`.
    pub zeta: f64,
    /// Normalized detuning `delta = (omega0 - s - omega)/gamma''_perp`.
    pub delta: f64,
    /// Normalized field `epsilon = chi1 / chi_s`.
    pub epsilon: f64,
    /// `gamma'_par = gamma_par (1 - gamma1^2/(gamma'_perp gamma_par))`.
    pub gamma_parallel_prime: f64,
}

/// The six positivity checks on the atomic openness constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub lambda_xy_ok: bool,
    pub lambda_yz_ok: bool,
    pub lambda_zx_ok: bool,
    pub schwartz_x_ok: bool,
    pub schwartz_y_ok: bool,
    pub schwartz_z_ok: bool,
}

impl PositivityReport {
    pub fn all_ok(&self) -> bool {
        self.lambda_xy_ok
            && self.lambda_yz_ok
            && self.lambda_zx_ok
            && self.schwartz_x_ok
            && self.schwartz_y_ok
            && self.schwartz_z_ok
    }
}

impl AtomEnvModel {
    /// Builds the model from explicit coefficient vectors of the openness
    /// operators (`A_j`, `B_j`, `C_j` multiply the three Pauli components);
    /// the positivity suite then holds by construction.
    #[allow(clippy::too_many_arguments)]
    pub fn from_coefficient_vectors(
        a: &[crate::C64],
        b: &[crate::C64],
        c: &[crate::C64],
        hbar: f64,
        omega0: f64,
        omega: f64,
        chi0: f64,
        chi1: f64,
        n_e: f64,
        alpha0: f64,
    ) -> Result<Self> {
        if a.len() != b.len() || b.len() != c.len() {
            return Err(Error::Config("coefficient vectors must share a length".into()));
        }
        let dotc = |x: &[crate::C64], y: &[crate::C64]| -> crate::C64 {
            x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
        };
        let lam_xy = dotc(c, c).re / (2.0 * hbar);
        let lam_yz = dotc(a, a).re / (2.0 * hbar);
        let lam_zx = dotc(b, b).re / (2.0 * hbar);
        let gam_xy = -0.5 / hbar * dotc(a, b).re;
        let d_z = 0.5 / hbar * dotc(a, b).im * 2.0 / 2.0; // -(i/2h)(A*B - A B*) = Im(A*.B)/h
        let gam_yz = -0.5 / hbar * dotc(b, c).re;
        let d_x = dotc(b, c).im / hbar;
        let gam_zx = -0.5 / hbar * dotc(c, a).re;
        let d_y = dotc(c, a).im / hbar;
        let _ = d_z;
        let d_z = dotc(a, b).im / hbar;
        let model = AtomEnvModel {
            gamma_perp_prime: 4.0 * (lam_xy + lam_zx),
            gamma_perp_dblprime: 4.0 * (lam_xy + lam_yz),
            gamma_parallel: 4.0 * (lam_zx + lam_yz),
            s: 4.0 * gam_xy,
            gamma1: 4.0 * gam_zx,
            gamma2: 4.0 * gam_yz,
            d1: 4.0 * d_x,
            d2: 4.0 * d_y,
            d3: 4.0 * d_z,
            omega0,
            omega,
            chi0,
            chi1,
            chi_s: 0.0,
            n_e,
            alpha0,
        };
        model.with_derived_saturation()
    }

    /// Recovers the per-channel constants `Lambda`, `Gamma`, `D` from the
    /// rates and evaluates the positivity suite.
    pub fn positivity_report(&self) -> PositivityReport {
        let lam_xy = (self.gamma_perp_prime + self.gamma_perp_dblprime - self.gamma_parallel) / 8.0;
        let lam_yz = (self.gamma_perp_dblprime + self.gamma_parallel - self.gamma_perp_prime) / 8.0;
        let lam_zx = (self.gamma_perp_prime + self.gamma_parallel - self.gamma_perp_dblprime) / 8.0;
        let gam_xy = self.s / 4.0;
        let gam_zx = self.gamma1 / 4.0;
        let gam_yz = self.gamma2 / 4.0;
        let (d_x, d_y, d_z) = (self.d1 / 4.0, self.d2 / 4.0, self.d3 / 4.0);
        let tol = 1e-12;
        PositivityReport {
            lambda_xy_ok: lam_xy >= -tol,
            lambda_yz_ok: lam_yz >= -tol,
            lambda_zx_ok: lam_zx >= -tol,
            schwartz_x_ok: lam_xy * lam_zx - gam_yz * gam_yz >= 0.25 * d_x * d_x - tol,
            schwartz_y_ok: lam_yz * lam_xy - gam_zx * gam_zx >= 0.25 * d_y * d_y - tol,
            schwartz_z_ok: lam_zx * lam_yz - gam_xy * gam_xy >= 0.25 * d_z * d_z - tol,
        }
    }

    /// Fills `chi_s` from `chi_s^2 = gamma'_par gamma''_perp / 2`.
    pub fn with_derived_saturation(mut self) -> Result<Self> {
        let gpp = self.gamma_parallel_prime();
        let chi_s2 = 0.5 * gpp * self.gamma_perp_dblprime;
        if !(chi_s2 > 0.0) {
            return Err(Error::InvalidModel(format!(
                "saturation amplitude undefined: gamma'_par gamma''_perp / 2 = {chi_s2:.3e}"
            )));
        }
        self.chi_s = chi_s2.sqrt();
        Ok(self)
    }

    fn gamma_parallel_prime(&self) -> f64 {
        self.gamma_parallel
            * (1.0 - self.gamma1 * self.gamma1 / (self.gamma_perp_prime * self.gamma_parallel))
    }

    /// Derived operating-point parameters.
    pub fn derived(&self) -> Result<DerivedOptics> {
        if self.gamma1 == 0.0 {
            return Err(Error::SingularOperatingPoint(
                "Gamma = (gamma2 - 2 chi0)/gamma1 needs gamma1 != 0".into(),
            ));
        }
        if !(self.chi_s > 0.0) {
            return Err(Error::InvalidModel(
                "chi_s must be positive; call with_derived_saturation".into(),
            ));
        }
        let big_gamma = (self.gamma2 - 2.0 * self.chi0) / self.gamma1;
        Ok(DerivedOptics {
            big_gamma,
            zeta: self.gamma_perp_prime / self.gamma_perp_dblprime * big_gamma,
            delta: (self.omega0 - self.s - self.omega) / self.gamma_perp_dblprime,
            epsilon: self.chi1 / self.chi_s,
            gamma_parallel_prime: self.gamma_parallel_prime(),
        })
    }
}

/// Drift matrix of the atomic expectation values at fixed field `chi_bar`.
pub fn bloch_drift(model: &AtomEnvModel, chi_bar: f64) -> Matrix3<f64> {
    let w = model.omega0 - model.s;
    Matrix3::new(
        -model.gamma_perp_prime,
        w,
        -model.gamma1,
        -w,
        -model.gamma_perp_dblprime,
        -(model.gamma2 - chi_bar),
        -model.gamma1,
        -(model.gamma2 + chi_bar),
        -model.gamma_parallel,
    )
}

/// Integrates the atomic expectation values on an ascending time grid at
/// fixed field (`chi_bar = chi0`); closed form by matrix exponential.
pub fn transient(
    model: &AtomEnvModel,
    sigma0: (f64, f64, f64),
    t_grid: &[f64],
) -> Result<Vec<(f64, f64, f64, f64)>> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] < 0.0 {
        return Err(Error::Config(
            "t_grid must be nonempty, nonnegative and strictly ascending".into(),
        ));
    }
    let m = bloch_drift(model, model.chi0);
    let b = Vector3::new(model.d1, model.d2, model.d3);
    let x0 = Vector3::new(sigma0.0, sigma0.1, sigma0.2);
    Ok(t_grid
        .iter()
        .map(|&t| {
            let x = affine_flow(&m, &b, &x0, t);
            (t, x[0], x[1], x[2])
        })
        .collect())
}

fn denominator(d: &DerivedOptics) -> f64 {
    let gd = 1.0 + d.big_gamma * d.delta;
    let dz = d.delta - d.zeta;
    gd * gd + dz * dz + gd * d.epsilon * d.epsilon
}

/// Steady-state polarization amplitude in the rotating frame.
pub fn steady_polarization(model: &AtomEnvModel) -> Result<crate::C64> {
    let d = model.derived()?;
    let den = denominator(&d);
    if den.abs() < 1e-300 {
        return Err(Error::SingularOperatingPoint(
            "polarization denominator vanishes".into(),
        ));
    }
    let num = crate::C64::new(d.delta - d.zeta, 1.0 + d.big_gamma * d.delta) * d.epsilon;
    Ok(2.0 * model.n_e * model.chi_s / model.gamma_perp_dblprime * num / den)
}

/// Absorption coefficient and phase gradient `(alpha, d theta / d z)`.
pub fn absorption(model: &AtomEnvModel) -> Result<(f64, f64)> {
    let d = model.derived()?;
    let den = denominator(&d);
    if den.abs() < 1e-300 {
        return Err(Error::SingularOperatingPoint(
            "absorption denominator vanishes".into(),
        ));
    }
    let gd = 1.0 + d.big_gamma * d.delta;
    let alpha = 0.5 * model.alpha0 * gd / den;
    let dtheta = -alpha * (d.delta - d.zeta) / gd;
    Ok((alpha, dtheta))
}

/// Absorption at an explicit detuning `delta` (in units of `gamma''_perp`),
/// holding every other operating parameter fixed.
pub fn absorption_at(model: &AtomEnvModel, delta: f64) -> Result<(f64, f64, f64)> {
    let mut shifted = *model;
    shifted.omega = model.omega0 - model.s - delta * model.gamma_perp_dblprime;
    let (alpha, dtheta) = absorption(&shifted)?;
    let n0 = population(&shifted)?;
    Ok((alpha, dtheta, n0))
}

/// Population difference at the operating point; exceeds the equilibrium
/// value when `1 + Gamma delta < 0`.
pub fn population(model: &AtomEnvModel) -> Result<f64> {
    let d = model.derived()?;
    let gd = 1.0 + d.big_gamma * d.delta;
    let dz = d.delta - d.zeta;
    let den = dz * dz + gd * gd;
    if den.abs() < 1e-300 {
        return Err(Error::SingularOperatingPoint(
            "population denominator vanishes".into(),
        ));
    }
    let chi_ratio = model.chi1 * model.chi1 / (model.chi_s * model.chi_s);
    Ok(model.n_e / (1.0 + gd / den * chi_ratio))
}

/// Spectral line width and resonance shift `(W, Delta omega0)`:
/// `W = 2 gamma''_perp (1 + Gamma xi)`, `Delta omega0 = gamma''_perp xi`
/// with `xi` the zeta parameter of the operating point.
pub fn line_shape(model: &AtomEnvModel) -> Result<(f64, f64)> {
    let d = model.derived()?;
    Ok((
        2.0 * model.gamma_perp_dblprime * (1.0 + d.big_gamma * d.zeta),
        model.gamma_perp_dblprime * d.zeta,
    ))
}
