// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Property tests for the structural invariants of the solution set.

use lindblad_lab::model::{self, OscillatorModel};
use lindblad_lab::{moments, tunnel, wigner};
use proptest::prelude::*;

fn admissible_model() -> impl Strategy<Value = OscillatorModel> {
    // (m, omega, mu/omega, lambda scale, g1, g2, rho) with the Schwartz
    // bound enforced by construction.
    (
        0.5f64..2.0,
        0.5f64..2.0,
        0.0f64..1.5,
        0.15f64..2.0,
        1.1f64..4.0,
        1.1f64..4.0,
        -0.9f64..0.9,
    )
        .prop_map(|(m, omega, mu_ratio, lam_scale, g1, g2, rho)| {
            let mu = mu_ratio * omega;
            let nu2 = mu * mu - omega * omega;
            let lambda = if nu2 > 0.0 {
                // Overdamped: keep a steady state.
                lam_scale.max(1.05) * nu2.sqrt()
            } else {
                lam_scale * omega
            };
            let ga = lambda * g1;
            let gb = lambda * g2;
            let head = (ga * gb - 1.01 * lambda * lambda).max(0.0).sqrt();
            let g3 = rho * head;
            let mw = m * omega;
            OscillatorModel {
                m,
                omega,
                lambda,
                mu,
                d_qq: 0.5 / mw * ga,
                d_pp: 0.5 * mw * gb,
                d_pq: 0.5 * g3,
                hbar: 1.0,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validate_is_scale_consistent(m in admissible_model(), c in 0.01f64..100.0) {
        let before = model::validate(&m);
        let mut scaled = m;
        scaled.hbar *= c;
        scaled.d_qq *= c;
        scaled.d_pp *= c;
        scaled.d_pq *= c;
        let after = model::validate(&scaled);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn variance_semigroup_property(m in admissible_model(), t1 in 0.0f64..3.0, t2 in 0.0f64..3.0) {
        let var0 = (0.8, 1.1, 0.1);
        let once = moments::propagate_variances(&m, var0, t1 + t2).unwrap();
        let mid = moments::propagate_variances(&m, var0, t1).unwrap();
        let twice = moments::propagate_variances(&m, (mid.sigma_qq, mid.sigma_pp, mid.sigma_pq), t2).unwrap();
        let scale = once.sigma_qq.abs().max(once.sigma_pp.abs()).max(1e-3);
        prop_assert!((once.sigma_qq - twice.sigma_qq).abs() < 1e-10 * scale);
        prop_assert!((once.sigma_pp - twice.sigma_pp).abs() < 1e-10 * scale);
        prop_assert!((once.sigma_pq - twice.sigma_pq).abs() < 1e-10 * scale);
    }

    #[test]
    fn weyl_attenuation_never_amplifies(m in admissible_model(), xi in -2.0f64..2.0, eta in -2.0f64..2.0, t in 0.0f64..5.0) {
        let (_, g) = wigner::weyl_flow(&m, (xi, eta), t).unwrap();
        prop_assert!(g <= 1e-12, "g = {}", g);
    }

    #[test]
    fn minimum_uncertainty_is_preserved(m in admissible_model(), t in 0.0f64..6.0) {
        let w0 = wigner::WignerGaussian::coherent(&m, 0.3, -0.7);
        let w1 = wigner::evolve(&m, &w0, t).unwrap();
        prop_assert!(w1.physical(m.hbar), "det cov = {} at t = {}", w1.det_cov(), t);
    }

    #[test]
    fn background_strength_nonnegative(m in admissible_model(), q in -1.0f64..1.0, s in -1.0f64..1.0) {
        let elems = tunnel::BarrierMatrixElements {
            q_i0: q,
            s_0i: s,
            ..tunnel::BarrierMatrixElements::gamow_preset()
        };
        prop_assert!(tunnel::phi(&m, &elems) >= -1e-12);
    }

    #[test]
    fn asymptotic_variances_satisfy_uncertainty(m in admissible_model()) {
        let (qq, pp, pq) = moments::asymptotic_variances(&m).unwrap();
        let h2_4 = 0.25 * m.hbar * m.hbar;
        prop_assert!(qq * pp - pq * pq >= h2_4 * (1.0 - 1e-9));
    }
}
