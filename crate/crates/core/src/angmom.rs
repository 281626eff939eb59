// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Angular-momentum damping for three rotationally symmetric openness
//! choices: angular-momentum operators (depolarization with conserved
//! total angular momentum), Lorentz-group generators (exponential heating),
//! and linear coordinate/momentum operators (three-dimensional damped
//! motion with decaying angular momentum).
//!
//! Everything lives at the expectation-value level; the closed systems of
//! equations are integrated exactly.

use nalgebra::{Matrix4, Vector4};

use crate::linalg::affine_flow;
use crate::{Error, Result};

/// Depolarization case: openness proportional to the angular-momentum
/// components. The total `L^2` is conserved and the component squares
/// equalize.
#[derive(Debug, Clone, Copy)]
pub struct AngMomCase1 {
    /// `|alpha|^2`, the squared openness strength.
    pub alpha_sq: f64,
    /// Conserved `<L^2>`.
    pub l2: f64,
    /// Initial `<L_i^2>` components.
    pub li2_0: [f64; 3],
    pub hbar: f64,
}

impl AngMomCase1 {
    pub fn new(alpha_sq: f64, li2_0: [f64; 3], hbar: f64) -> Result<Self> {
        if alpha_sq < 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidModel(
                "alpha_sq must be >= 0 and hbar > 0".into(),
            ));
        }
        if li2_0.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidModel("component squares must be >= 0".into()));
        }
        let l2 = li2_0.iter().sum();
        Ok(Self {
            alpha_sq,
            l2,
            li2_0,
            hbar,
        })
    }
}

/// Component squares at time `t`; their sum equals the conserved `<L^2>`
/// identically.
pub fn case1_evolve(c: &AngMomCase1, t: f64) -> Result<(f64, [f64; 3])> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let decay = (-3.0 * c.hbar * c.alpha_sq * t).exp();
    let third = c.l2 / 3.0;
    let mut li2 = [0.0; 3];
    for (out, &init) in li2.iter_mut().zip(c.li2_0.iter()) {
        *out = third + (init - third) * decay;
    }
    Ok((c.l2, li2))
}

/// Result of the Lorentz-generator case.
#[derive(Debug, Clone, Copy)]
pub struct Case2Result {
    pub l2: f64,
    pub n2: f64,
    /// The closed solution assumes `[H, N^2] = 0`; recorded, not checked.
    pub assumes_h_commutes: bool,
}

/// Exponential growth of `<L^2>` and `<N^2>` under Lorentz-group openness:
/// both increase by `(1/2)(<L^2>_0 + <N^2>_0)(e^{4 |alpha|^2 hbar t} - 1)`.
pub fn case2_evolve(alpha_sq: f64, l2_0: f64, n2_0: f64, hbar: f64, t: f64) -> Result<Case2Result> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    if alpha_sq < 0.0 || hbar <= 0.0 || l2_0 < 0.0 || n2_0 < 0.0 {
        return Err(Error::InvalidModel(
            "alpha_sq, l2_0, n2_0 must be >= 0 and hbar > 0".into(),
        ));
    }
    let grow = 0.5 * (l2_0 + n2_0) * ((4.0 * alpha_sq * hbar * t).exp() - 1.0);
    Ok(Case2Result {
        l2: l2_0 + grow,
        n2: n2_0 + grow,
        assumes_h_commutes: true,
    })
}

/// Linear-openness case with the equality constraint
/// `D_qq D_pp - D_pq^2 = hbar^2 lambda^2 / 4` (a single openness operator
/// triple forces equality, not just the inequality).
#[derive(Debug, Clone, Copy)]
pub struct AngMomCase3 {
    pub lambda: f64,
    pub d_qq: f64,
    pub d_pp: f64,
    pub d_pq: f64,
    pub m: f64,
    /// Oscillator frequency; 0 selects the free-rotor Hamiltonian.
    pub omega: f64,
    /// Moment of inertia of the rotor Hamiltonian `L^2 / (2 Theta)`.
    pub theta: f64,
    pub hbar: f64,
}

impl AngMomCase3 {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: f64,
        d_qq: f64,
        d_pp: f64,
        d_pq: f64,
        m: f64,
        omega: f64,
        theta: f64,
        hbar: f64,
    ) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::NoSteadyState(
                "lambda must be > 0 for relaxation".into(),
            ));
        }
        if m <= 0.0 || theta <= 0.0 || hbar <= 0.0 || omega < 0.0 {
            return Err(Error::InvalidModel(
                "m, theta, hbar must be > 0 and omega >= 0".into(),
            ));
        }
        let lhs = d_qq * d_pp - d_pq * d_pq;
        let rhs = 0.25 * hbar * hbar * lambda * lambda;
        if (lhs - rhs).abs() > 1e-10 * rhs.max(lhs.abs()).max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidModel(format!(
                "equality constraint D_qq D_pp - D_pq^2 = hbar^2 lambda^2/4 violated: {lhs:.6e} vs {rhs:.6e}"
            )));
        }
        Ok(Self {
            lambda,
            d_qq,
            d_pp,
            d_pq,
            m,
            omega,
            theta,
            hbar,
        })
    }

    /// Minimal-diffusion choice `D_qq = lambda hbar/(2 m w)`,
    /// `D_pp = lambda hbar m w / 2`, `D_pq = 0`.
    pub fn minimal_diffusion(lambda: f64, m: f64, omega: f64, theta: f64, hbar: f64) -> Result<Self> {
        Self::new(
            lambda,
            0.5 * lambda * hbar / (m * omega),
            0.5 * lambda * hbar * m * omega,
            0.0,
            m,
            omega,
            theta,
            hbar,
        )
    }
}

/// Hamiltonian choice for the linear-openness case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case3Hamiltonian {
    /// `H = L^2 / (2 Theta)`: all commutators with the tracked observables
    /// vanish and every expectation decays exponentially.
    RotorL2,
    /// `H = p^2/(2m) + m w^2 q^2 / 2` in three dimensions.
    SphericalOscillator,
}

/// Expectation values tracked in the linear-openness case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case3State {
    /// `<q^2>` summed over the three axes.
    pub q2: f64,
    pub p2: f64,
    /// `<(qp + pq)/2>` summed over the axes.
    pub qp_sym: f64,
    pub l2: f64,
}

/// Propagates the four tracked expectation values to time `t`.
pub fn case3_evolve(
    c: &AngMomCase3,
    init: &Case3State,
    t: f64,
    hamiltonian: Case3Hamiltonian,
) -> Result<Case3State> {
    if t < 0.0 {
        return Err(Error::Config(format!("t must be >= 0, got {t}")));
    }
    let l = c.lambda;
    match hamiltonian {
        Case3Hamiltonian::RotorL2 => {
            let a = init.q2 - 3.0 * c.d_qq / l;
            let b = init.p2 - 3.0 * c.d_pp / l;
            let cc = init.qp_sym - 3.0 * c.d_pq / l;
            let mix = 2.0 / l * (a * c.d_pp + b * c.d_qq - 2.0 * cc * c.d_pq);
            let d = init.l2 - mix;
            let e2 = (-2.0 * l * t).exp();
            let e4 = (-4.0 * l * t).exp();
            Ok(Case3State {
                q2: a * e2 + 3.0 * c.d_qq / l,
                p2: b * e2 + 3.0 * c.d_pp / l,
                qp_sym: cc * e2 + 3.0 * c.d_pq / l,
                l2: d * e4 + mix * e2,
            })
        }
        Case3Hamiltonian::SphericalOscillator => {
            let w2 = c.omega * c.omega;
            let drift = Matrix4::new(
                -2.0 * l,
                0.0,
                2.0 / c.m,
                0.0,
                0.0,
                -2.0 * l,
                -2.0 * c.m * w2,
                0.0,
                -c.m * w2,
                1.0 / c.m,
                -2.0 * l,
                0.0,
                4.0 * c.d_pp,
                4.0 * c.d_qq,
                -8.0 * c.d_pq,
                -4.0 * l,
            );
            let forcing = Vector4::new(
                6.0 * c.d_qq,
                6.0 * c.d_pp,
                6.0 * c.d_pq,
                -6.0 * l * c.hbar * c.hbar,
            );
            let x0 = Vector4::new(init.q2, init.p2, init.qp_sym, init.l2);
            let x = affine_flow(&drift, &forcing, &x0, t);
            Ok(Case3State {
                q2: x[0],
                p2: x[1],
                qp_sym: x[2],
                l2: x[3],
            })
        }
    }
}

/// Asymptotic `<L^2>` of the spherical-oscillator case.
pub fn oscillator_l2_inf(c: &AngMomCase3) -> f64 {
    let w2 = c.omega * c.omega;
    6.0 / (c.lambda * c.lambda * (c.lambda * c.lambda + w2))
        * (0.25 * (c.d_pp / c.m - c.m * w2 * c.d_qq).powi(2) + w2 * c.d_pq * c.d_pq)
}

/// Asymptotic energy of the spherical-oscillator case.
pub fn oscillator_energy_inf(c: &AngMomCase3) -> f64 {
    1.5 / c.lambda * (c.d_pp / c.m + c.m * c.omega * c.omega * c.d_qq)
}

/// Near-barrier criterion for an inverted parabola of curvature `kappa`:
/// angular momentum is damped when the friction exceeds the curvature.
pub fn inverted_barrier_note(lambda: f64, kappa: f64) -> Result<bool> {
    if kappa <= 0.0 {
        return Err(Error::Config(format!("kappa must be > 0, got {kappa}")));
    }
    Ok(lambda > kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::rk45;
    use approx::assert_relative_eq;

    #[test]
    fn case1_components_equalize_and_sum_is_conserved() {
        let c = AngMomCase1::new(0.2, [4.0, 1.0, 0.5], 1.0).unwrap();
        for &t in &[0.0, 0.5, 2.0, 50.0] {
            let (l2, li2) = case1_evolve(&c, t).unwrap();
            assert_relative_eq!(l2, 5.5, epsilon = 1e-14);
            let sum: f64 = li2.iter().sum();
            assert_relative_eq!(sum, l2, epsilon = 1e-12);
        }
        let (_, late) = case1_evolve(&c, 200.0).unwrap();
        for v in late {
            assert_relative_eq!(v, 5.5 / 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn case1_isotropic_start_is_stationary() {
        let c = AngMomCase1::new(0.3, [2.0, 2.0, 2.0], 1.0).unwrap();
        let (_, li2) = case1_evolve(&c, 3.7).unwrap();
        for v in li2 {
            assert_relative_eq!(v, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn case1_matches_scalar_ode() {
        let c = AngMomCase1::new(0.17, [3.0, 0.4, 1.1], 1.3).unwrap();
        let t = 1.9;
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            for i in 0..3 {
                dy[i] = -c.alpha_sq * c.hbar * (3.0 * y[i] - c.l2);
            }
        };
        let y = rk45(rhs, 0.0, t, &c.li2_0, 1e-13, 1e-14);
        let (_, li2) = case1_evolve(&c, t).unwrap();
        for i in 0..3 {
            assert_relative_eq!(li2[i], y[i], max_relative = 1e-10);
        }
    }

    #[test]
    fn case2_growth_law_and_difference_identity() {
        let (alpha_sq, hbar) = (0.12, 1.0);
        let (l2_0, n2_0) = (0.8, 2.3);
        let mut prev = l2_0;
        for &t in &[0.0, 0.4, 1.1, 2.6] {
            let r = case2_evolve(alpha_sq, l2_0, n2_0, hbar, t).unwrap();
            assert!(r.l2 >= prev - 1e-12, "growth must be monotone");
            assert_relative_eq!(r.l2 - l2_0, r.n2 - n2_0, max_relative = 1e-12, epsilon = 1e-14);
            assert!(r.assumes_h_commutes);
            prev = r.l2;
        }
        let t = 0.9;
        let r = case2_evolve(alpha_sq, 0.0, n2_0, hbar, t).unwrap();
        assert_relative_eq!(
            r.l2,
            0.5 * n2_0 * ((4.0 * alpha_sq * hbar * t).exp() - 1.0),
            max_relative = 1e-13
        );
    }

    fn rotor_case() -> AngMomCase3 {
        // D_pq = 0, D_qq D_pp = (hbar lambda / 2)^2.
        let (lambda, hbar) = (0.4, 1.0);
        let d_qq = 0.35;
        let d_pp = 0.25 * hbar * hbar * lambda * lambda / d_qq;
        AngMomCase3::new(lambda, d_qq, d_pp, 0.0, 1.0, 0.0, 2.0, hbar).unwrap()
    }

    #[test]
    fn equality_constraint_is_enforced() {
        assert!(AngMomCase3::new(0.4, 0.5, 0.5, 0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(AngMomCase3::minimal_diffusion(0.4, 1.0, 1.2, 1.0, 1.0).is_ok());
    }

    #[test]
    fn rotor_reaches_printed_fixed_points_and_l2_dies() {
        let c = rotor_case();
        let init = Case3State {
            q2: 2.0,
            p2: 1.4,
            qp_sym: 0.3,
            l2: 3.0,
        };
        let s = case3_evolve(&c, &init, 80.0, Case3Hamiltonian::RotorL2).unwrap();
        assert_relative_eq!(s.q2, 3.0 * c.d_qq / c.lambda, max_relative = 1e-10);
        assert_relative_eq!(s.p2, 3.0 * c.d_pp / c.lambda, max_relative = 1e-10);
        assert_relative_eq!(s.qp_sym, 3.0 * c.d_pq / c.lambda, epsilon = 1e-10);
        assert!(s.l2.abs() < 1e-10);
    }

    #[test]
    fn rotor_matches_ode_oracle() {
        let c = rotor_case();
        let init = Case3State {
            q2: 1.1,
            p2: 0.6,
            qp_sym: -0.2,
            l2: 2.4,
        };
        let t = 1.3;
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = -2.0 * c.lambda * y[0] + 6.0 * c.d_qq;
            dy[1] = -2.0 * c.lambda * y[1] + 6.0 * c.d_pp;
            dy[2] = -2.0 * c.lambda * y[2] + 6.0 * c.d_pq;
            dy[3] = 4.0 * (c.d_pp * y[0] + c.d_qq * y[1] - 2.0 * c.d_pq * y[2])
                - 4.0 * c.lambda * y[3]
                - 6.0 * c.lambda * c.hbar * c.hbar;
        };
        let y = rk45(rhs, 0.0, t, &[init.q2, init.p2, init.qp_sym, init.l2], 1e-13, 1e-14);
        let s = case3_evolve(&c, &init, t, Case3Hamiltonian::RotorL2).unwrap();
        assert_relative_eq!(s.q2, y[0], max_relative = 1e-10);
        assert_relative_eq!(s.p2, y[1], max_relative = 1e-10);
        assert_relative_eq!(s.qp_sym, y[2], max_relative = 1e-10, epsilon = 1e-13);
        assert_relative_eq!(s.l2, y[3], max_relative = 1e-10);
    }

    #[test]
    fn rotor_monotone_relaxation_from_both_sides() {
        let c = rotor_case();
        for start in [0.2, 5.0] {
            let init = Case3State {
                q2: start,
                p2: start,
                qp_sym: 0.0,
                l2: 1.0,
            };
            let target = 3.0 * c.d_qq / c.lambda;
            let mut prev = (init.q2 - target).abs();
            for i in 1..30 {
                let s = case3_evolve(&c, &init, 0.2 * i as f64, Case3Hamiltonian::RotorL2)
                    .unwrap();
                let dist = (s.q2 - target).abs();
                assert!(dist <= prev + 1e-12);
                prev = dist;
            }
        }
    }

    #[test]
    fn oscillator_minimal_diffusion_reaches_ground_energy() {
        let c = AngMomCase3::minimal_diffusion(0.5, 1.2, 0.9, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            oscillator_energy_inf(&c),
            1.5 * c.hbar * c.omega,
            max_relative = 1e-12
        );
        assert!(oscillator_l2_inf(&c).abs() < 1e-12);
        // Long-horizon propagation agrees.
        let init = Case3State {
            q2: 2.0,
            p2: 2.0,
            qp_sym: 0.2,
            l2: 1.5,
        };
        let s = case3_evolve(&c, &init, 100.0, Case3Hamiltonian::SphericalOscillator).unwrap();
        let energy = 0.5 * s.p2 / c.m + 0.5 * c.m * c.omega * c.omega * s.q2;
        assert_relative_eq!(energy, 1.5 * c.hbar * c.omega, max_relative = 1e-9);
        assert!(s.l2.abs() < 1e-9);
    }

    #[test]
    fn oscillator_identity_between_l2_and_energy() {
        // Generic diffusion (equality constraint holds, D_pq != 0).
        let (lambda, hbar, m, w) = (0.45, 1.0, 1.1, 1.3);
        let d_pq = 0.1;
        let d_qq = 0.5;
        let d_pp = (0.25 * hbar * hbar * lambda * lambda + d_pq * d_pq) / d_qq;
        let c = AngMomCase3::new(lambda, d_qq, d_pp, d_pq, m, w, 1.0, hbar).unwrap();
        let h_inf = oscillator_energy_inf(&c);
        let l2_inf = oscillator_l2_inf(&c);
        let identity = 2.0 / (3.0 * (lambda * lambda + w * w))
            * (h_inf * h_inf - (1.5 * hbar * w).powi(2));
        assert_relative_eq!(l2_inf, identity, max_relative = 1e-11);
        // And the dynamics converges to the printed asymptote.
        let init = Case3State {
            q2: 1.0,
            p2: 1.0,
            qp_sym: 0.0,
            l2: 2.0,
        };
        let s = case3_evolve(&c, &init, 120.0, Case3Hamiltonian::SphericalOscillator).unwrap();
        assert_relative_eq!(s.l2, l2_inf, max_relative = 1e-8, epsilon = 1e-10);
    }

    #[test]
    fn oscillator_matches_ode_oracle() {
        let c = AngMomCase3::minimal_diffusion(0.3, 1.0, 1.1, 1.0, 1.0).unwrap();
        let init = Case3State {
            q2: 1.4,
            p2: 0.9,
            qp_sym: 0.1,
            l2: 2.2,
        };
        let t = 2.1;
        let w2 = c.omega * c.omega;
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = 2.0 / c.m * y[2] - 2.0 * c.lambda * y[0] + 6.0 * c.d_qq;
            dy[1] = -2.0 * c.m * w2 * y[2] - 2.0 * c.lambda * y[1] + 6.0 * c.d_pp;
            dy[2] = y[1] / c.m - c.m * w2 * y[0] - 2.0 * c.lambda * y[2] + 6.0 * c.d_pq;
            dy[3] = 4.0 * (c.d_pp * y[0] + c.d_qq * y[1] - 2.0 * c.d_pq * y[2])
                - 4.0 * c.lambda * y[3]
                - 6.0 * c.lambda * c.hbar * c.hbar;
        };
        let y = rk45(rhs, 0.0, t, &[init.q2, init.p2, init.qp_sym, init.l2], 1e-13, 1e-14);
        let s = case3_evolve(&c, &init, t, Case3Hamiltonian::SphericalOscillator).unwrap();
        assert_relative_eq!(s.q2, y[0], max_relative = 1e-9);
        assert_relative_eq!(s.p2, y[1], max_relative = 1e-9);
        assert_relative_eq!(s.qp_sym, y[2], max_relative = 1e-9, epsilon = 1e-12);
        assert_relative_eq!(s.l2, y[3], max_relative = 1e-9);
    }

    #[test]
    fn barrier_criterion_is_strict() {
        assert!(inverted_barrier_note(2.0, 1.0).unwrap());
        assert!(!inverted_barrier_note(1.0, 1.0).unwrap());
        assert!(!inverted_barrier_note(0.5, 1.0).unwrap());
        assert!(inverted_barrier_note(0.5, -1.0).is_err());
    }
}
