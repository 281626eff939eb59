// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phase-space flow of the Wigner function: Gaussian state evolution,
//! coordinate/momentum marginals and the Weyl-operator coefficient flow.
//!
//! Gaussian states stay Gaussian under the evolution equation, so states are
//! carried as mean + covariance and share the closed-form moment engine.
//! The Weyl flow gives the dual description: a positive-phase-space
//! trajectory `(xi(t), eta(t))` plus a Gaussian attenuation factor
//! `e^{g(t)}` whose quadratic exponent has closed-form coefficients.

use nalgebra::{Matrix2, Vector2};

use crate::linalg::expm;
use crate::model::OscillatorModel;
use crate::moments::{self, MomentState};
use crate::{Error, Result};

/// Gaussian Wigner function: mean vector and covariance at time `t`.
#[derive(Debug, Clone, Copy)]
pub struct WignerGaussian {
    pub mean: (f64, f64),
    /// `(s_qq, s_pp, s_pq)`.
    pub cov: (f64, f64, f64),
    pub t: f64,
}

impl WignerGaussian {
    /// Validates positive definiteness of the covariance.
    pub fn new(mean: (f64, f64), cov: (f64, f64, f64), t: f64) -> Result<Self> {
        if !(cov.0 > 0.0 && cov.1 > 0.0 && cov.0 * cov.1 - cov.2 * cov.2 > 0.0) {
            return Err(Error::InvalidModel(format!(
                "covariance ({}, {}, {}) is not positive definite",
                cov.0, cov.1, cov.2
            )));
        }
        Ok(Self { mean, cov, t })
    }

    /// Coherent state centred at `(q, p)`: minimum uncertainty with
    /// `s_pp = hbar^2 / (4 s_qq)` and no correlation.
    pub fn coherent(model: &OscillatorModel, q: f64, p: f64) -> Self {
        let mw = model.m * model.omega;
        WignerGaussian {
            mean: (q, p),
            cov: (
                0.5 * model.hbar / mw,
                0.5 * model.hbar * mw,
                0.0,
            ),
            t: 0.0,
        }
    }

    /// `det cov`; at or above `hbar^2/4` for physical states.
    pub fn det_cov(&self) -> f64 {
        self.cov.0 * self.cov.1 - self.cov.2 * self.cov.2
    }

    /// Physicality monitor: `det cov >= hbar^2/4 (1 - 1e-9)`.
    pub fn physical(&self, hbar: f64) -> bool {
        self.det_cov() >= 0.25 * hbar * hbar * (1.0 - 1e-9)
    }

    /// Value of the normalized Gaussian at phase-space point `(x, y)`.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let det = self.det_cov();
        let dx = x - self.mean.0;
        let dy = y - self.mean.1;
        let quad = self.cov.1 * dx * dx + self.cov.0 * dy * dy - 2.0 * self.cov.2 * dx * dy;
        (-(0.5 / det) * quad).exp() / (2.0 * std::f64::consts::PI * det.sqrt())
    }

    pub fn as_moment_state(&self) -> MomentState {
        MomentState {
            sigma_q: self.mean.0,
            sigma_p: self.mean.1,
            sigma_qq: self.cov.0,
            sigma_pp: self.cov.1,
            sigma_pq: self.cov.2,
            t: self.t,
        }
    }
}

/// One-dimensional Gaussian marginal; integrates to 1 by parameterization.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian1D {
    pub mean: f64,
    pub variance: f64,
}

impl Gaussian1D {
    pub fn value(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-(0.5 / self.variance) * d * d).exp()
            / (2.0 * std::f64::consts::PI * self.variance).sqrt()
    }
}

/// Coefficient flow of the Weyl operator.
#[derive(Debug, Clone, Copy)]
pub struct WeylFlow {
    /// Linear map `(alpha, beta; gamma, delta)` carrying `(xi, eta)`.
    pub abcd: Matrix2<f64>,
    /// `(A(t), B(t), C(t))`: `g = -(A xi^2 + B eta^2 + 2 C xi eta)/hbar^2`.
    pub g_quadratic: (f64, f64, f64),
    /// `alpha delta - beta gamma`; decays as `e^{-2 lambda t}`.
    pub commutator_scale: f64,
}

/// Evolves a Gaussian Wigner function; mean and covariance propagate with
/// the shared moment engine and the state stays Gaussian.
pub fn evolve(model: &OscillatorModel, w0: &WignerGaussian, t: f64) -> Result<WignerGaussian> {
    let s = moments::propagate(model, &w0.as_moment_state(), w0.t + t)?;
    Ok(WignerGaussian {
        mean: (s.sigma_q, s.sigma_p),
        cov: (s.sigma_qq, s.sigma_pp, s.sigma_pq),
        t: s.t,
    })
}

/// Coordinate and momentum probability distributions of a Gaussian state.
pub fn marginals(w: &WignerGaussian) -> (Gaussian1D, Gaussian1D) {
    (
        Gaussian1D {
            mean: w.mean.0,
            variance: w.cov.0,
        },
        Gaussian1D {
            mean: w.mean.1,
            variance: w.cov.1,
        },
    )
}

/// Drift of the Weyl phase-space coordinates:
/// `xi' = -(lambda + mu) xi - eta / m`, `eta' = m w^2 xi - (lambda - mu) eta`.
pub fn weyl_drift(model: &OscillatorModel) -> Matrix2<f64> {
    Matrix2::new(
        -(model.lambda + model.mu),
        -1.0 / model.m,
        model.m * model.omega * model.omega,
        -(model.lambda - model.mu),
    )
}

/// Full Weyl coefficient flow at time `t`.
///
/// The quadratic coefficients come from the closed-form variance engine:
/// `A = s_pp(t)/2`, `B = s_qq(t)/2`, `C = -s_pq(t)/2` where the variances
/// start from zero initial data. All regimes included (the matrix
/// exponential handles critical damping).
pub fn weyl_quadratic(model: &OscillatorModel, t: f64) -> Result<WeylFlow> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let abcd = expm(&weyl_drift(model), t);
    let v = moments::propagate_variances(model, (0.0, 0.0, 0.0), t)?;
    let g_quadratic = (0.5 * v.sigma_pp, 0.5 * v.sigma_qq, -0.5 * v.sigma_pq);
    let commutator_scale = abcd[(0, 0)] * abcd[(1, 1)] - abcd[(0, 1)] * abcd[(1, 0)];
    Ok(WeylFlow {
        abcd,
        g_quadratic,
        commutator_scale,
    })
}

/// Propagates one Weyl phase-space point and its attenuation exponent.
pub fn weyl_flow(
    model: &OscillatorModel,
    xi0: (f64, f64),
    t: f64,
) -> Result<((f64, f64), f64)> {
    let flow = weyl_quadratic(model, t)?;
    let v = flow.abcd * Vector2::new(xi0.0, xi0.1);
    let (a, b, c) = flow.g_quadratic;
    let h2 = model.hbar * model.hbar;
    let g = -(a * xi0.0 * xi0.0 + b * xi0.1 * xi0.1 + 2.0 * c * xi0.0 * xi0.1) / h2;
    Ok(((v[0], v[1]), g))
}

/// Characteristic function of a Gaussian state at Weyl point `(xi, eta)`:
/// `Tr(rho W(xi, eta)) = exp[i(eta q - xi p)/hbar - Var(eta q - xi p)/(2 hbar^2)]`.
pub fn characteristic_function(
    state: &WignerGaussian,
    hbar: f64,
    xi: f64,
    eta: f64,
) -> crate::C64 {
    let phase = (eta * state.mean.0 - xi * state.mean.1) / hbar;
    let var = eta * eta * state.cov.0 + xi * xi * state.cov.1 - 2.0 * xi * eta * state.cov.2;
    (crate::C64::new(0.0, phase) - var / (2.0 * hbar * hbar)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn underdamped() -> OscillatorModel {
        OscillatorModel::new(1.3, 1.1, 0.25, 0.4, 0.31, 0.52, 0.05, 1.0).unwrap()
    }

    fn overdamped() -> OscillatorModel {
        OscillatorModel::new(0.8, 1.0, 1.0, 1.3, 0.45, 0.85, -0.04, 1.0).unwrap()
    }

    /// 64-point Gauss-Legendre quadrature of the defining `g` integrand;
    /// the independent oracle for the closed-form coefficients.
    fn g_quadrature(model: &OscillatorModel, xi0: (f64, f64), t: f64) -> f64 {
        let (nodes, weights) = gauss_legendre_64();
        let drift = weyl_drift(model);
        let mut total = 0.0;
        for (&x, &w) in nodes.iter().zip(weights.iter()) {
            let s = 0.5 * t * (x + 1.0);
            let m = expm(&drift, s);
            let v = m * Vector2::new(xi0.0, xi0.1);
            let integrand = model.d_pp * v[0] * v[0] + model.d_qq * v[1] * v[1]
                - 2.0 * model.d_pq * v[0] * v[1];
            total += w * integrand;
        }
        -0.5 * t * total / (model.hbar * model.hbar)
    }

    fn gauss_legendre_64() -> (Vec<f64>, Vec<f64>) {
        // Newton iteration on Legendre P_64; standard construction.
        let n = 64usize;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    }

    #[test]
    fn evolve_is_identity_at_t_zero() {
        let m = underdamped();
        let w0 = WignerGaussian::coherent(&m, 0.4, -0.2);
        let w1 = evolve(&m, &w0, 0.0).unwrap();
        assert_eq!(w0.cov, w1.cov);
        assert_eq!(w0.mean, w1.mean);
    }

    #[test]
    fn evolved_moments_match_moment_engine() {
        let m = overdamped();
        let w0 = WignerGaussian::new((0.5, 0.1), (0.7, 0.9, 0.1), 0.0).unwrap();
        let t = 1.3;
        let w1 = evolve(&m, &w0, t).unwrap();
        let s = moments::propagate(&m, &w0.as_moment_state(), t).unwrap();
        assert_relative_eq!(w1.cov.0, s.sigma_qq, max_relative = 1e-12);
        assert_relative_eq!(w1.cov.1, s.sigma_pp, max_relative = 1e-12);
        assert_relative_eq!(w1.cov.2, s.sigma_pq, max_relative = 1e-12, epsilon = 1e-15);
        assert_relative_eq!(w1.mean.0, s.sigma_q, max_relative = 1e-12);
    }

    #[test]
    fn coherent_marginal_widths() {
        let m = underdamped();
        let w = WignerGaussian::coherent(&m, 0.0, 0.0);
        let (px, py) = marginals(&w);
        let mw = m.m * m.omega;
        assert_relative_eq!(px.variance, 0.5 * m.hbar / mw, epsilon = 1e-15);
        assert_relative_eq!(py.variance, 0.5 * m.hbar * mw, epsilon = 1e-15);
        assert_relative_eq!(px.mean, 0.0, epsilon = 1e-15);
        // Peak value of a normalized Gaussian.
        let peak = px.value(px.mean);
        assert_relative_eq!(
            peak,
            1.0 / (2.0 * std::f64::consts::PI * px.variance).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn thermal_marginals_reach_gibbs_widths() {
        let coth = 2.0;
        let m = OscillatorModel::thermal(1.0, 1.0, 0.3, 0.0, coth, 1.0).unwrap();
        let w0 = WignerGaussian::coherent(&m, 1.0, 0.0);
        let w1 = evolve(&m, &w0, 50.0 / m.lambda).unwrap();
        let (px, py) = marginals(&w1);
        let mw = m.m * m.omega;
        assert_relative_eq!(px.variance, 0.5 * coth / mw, max_relative = 1e-6);
        assert_relative_eq!(py.variance, 0.5 * coth * mw, max_relative = 1e-6);
    }

    #[test]
    fn weyl_flow_fixed_point_at_origin() {
        let m = underdamped();
        let ((xi, eta), g) = weyl_flow(&m, (0.0, 0.0), 1.0).unwrap();
        assert_eq!(xi, 0.0);
        assert_eq!(eta, 0.0);
        assert_eq!(g, 0.0);
    }

    #[test]
    fn weyl_quadratic_initial_conditions() {
        let m = overdamped();
        let f = weyl_quadratic(&m, 0.0).unwrap();
        assert_relative_eq!(f.abcd[(0, 0)], 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.abcd[(1, 1)], 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.abcd[(0, 1)], 0.0, epsilon = 1e-14);
        assert_eq!(f.g_quadratic, (0.0, 0.0, 0.0));
        assert_relative_eq!(f.commutator_scale, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn commutator_scale_decays_at_twice_friction() {
        for m in [underdamped(), overdamped()] {
            for &t in &[0.5, 1.7] {
                let f = weyl_quadratic(&m, t).unwrap();
                assert_relative_eq!(
                    f.commutator_scale,
                    (-2.0 * m.lambda * t).exp(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn g_matches_gauss_legendre_oracle() {
        for m in [underdamped(), overdamped()] {
            for &t in &[0.4, 1.9] {
                for xi0 in [(1.0, 0.0), (0.0, 1.0), (0.6, -0.8)] {
                    let (_, g) = weyl_flow(&m, xi0, t).unwrap();
                    let g_ref = g_quadrature(&m, xi0, t);
                    assert_relative_eq!(g, g_ref, max_relative = 1e-10, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn g_nonpositive_for_valid_diffusion() {
        for m in [underdamped(), overdamped()] {
            for &t in &[0.3, 1.0, 4.0] {
                for i in 0..20 {
                    let angle = i as f64 * 0.314;
                    let (_, g) = weyl_flow(&m, (angle.cos(), angle.sin()), t).unwrap();
                    assert!(g <= 1e-14, "g = {g}");
                }
            }
        }
    }

    #[test]
    fn g_derivative_matches_defining_integrand() {
        let m = underdamped();
        let xi0 = (0.8, 0.3);
        let (t, dt) = (1.1, 1e-5);
        let (_, g_plus) = weyl_flow(&m, xi0, t + dt).unwrap();
        let (_, g_minus) = weyl_flow(&m, xi0, t - dt).unwrap();
        let dg = (g_plus - g_minus) / (2.0 * dt);
        let (v, _) = weyl_flow(&m, xi0, t).unwrap();
        let expect = -(m.d_pp * v.0 * v.0 + m.d_qq * v.1 * v.1 - 2.0 * m.d_pq * v.0 * v.1)
            / (m.hbar * m.hbar);
        assert_relative_eq!(dg, expect, max_relative = 1e-6);
    }

    #[test]
    fn characteristic_function_consistency() {
        // Fourier duality: the characteristic function of the evolved state
        // equals the initial one at the flowed Weyl point times e^{g}.
        for m in [underdamped(), overdamped()] {
            let w0 = WignerGaussian::new((0.3, -0.5), (0.6, 0.8, 0.1), 0.0).unwrap();
            let t = 1.2;
            let w1 = evolve(&m, &w0, t).unwrap();
            for i in 0..25 {
                let xi = 0.8 * ((i * 7 % 11) as f64 / 11.0 - 0.5);
                let eta = 0.8 * ((i * 5 % 13) as f64 / 13.0 - 0.5);
                let lhs = characteristic_function(&w1, m.hbar, xi, eta);
                let ((xi_t, eta_t), g) = weyl_flow(&m, (xi, eta), t).unwrap();
                let rhs = characteristic_function(&w0, m.hbar, xi_t, eta_t) * g.exp();
                assert!(
                    (lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1e-12),
                    "mismatch at ({xi}, {eta}): {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn uncertainty_preserved_from_minimum_start() {
        for m in [underdamped(), overdamped()] {
            let w0 = WignerGaussian::coherent(&m, 0.7, -0.1);
            for i in 1..=60 {
                let t = 0.15 * i as f64;
                let w1 = evolve(&m, &w0, t).unwrap();
                assert!(w1.physical(m.hbar), "det cov dipped at t = {t}");
            }
        }
    }
}
