// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random model generation for cross-validation sweeps.
//!
//! Uses ChaCha8 so the same seed yields the same models on every platform;
//! generated single-oscillator models are always constraint-valid with an
//! existing steady state, alternating between the damping regimes.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{validate, Classification, OscillatorModel, Regime};

/// Deterministic RNG for sweeps.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One random constraint-valid model with a relaxing steady state.
///
/// Overdamped draws keep a sizable spectral gap (`lambda >= 1.3 nu`) so
/// long-horizon asymptotic tests converge at reasonable times.
pub fn random_admissible(rng: &mut ChaCha8Rng, regime: Regime) -> OscillatorModel {
    loop {
        let m: f64 = rng.gen_range(0.5..2.0);
        let omega: f64 = rng.gen_range(0.5..2.0);
        let (mu, lambda) = match regime {
            Regime::Underdamped => (
                rng.gen_range(0.0..0.85) * omega,
                rng.gen_range(0.1..1.2) * omega,
            ),
            Regime::Overdamped => {
                let mu: f64 = rng.gen_range(1.1..1.6) * omega;
                let nu = (mu * mu - omega * omega).sqrt();
                (mu, rng.gen_range(1.3..2.5) * nu)
            }
            Regime::Critical => (omega, rng.gen_range(0.3..1.2) * omega),
        };
        // Diffusion scaled so the Schwartz bound holds with margin.
        let g1 = lambda * rng.gen_range(1.2..4.0);
        let g2 = lambda * rng.gen_range(1.2..4.0);
        let head = (g1 * g2 - 1.05 * lambda * lambda).max(0.0_f64).sqrt();
        let g3 = rng.gen_range(-0.5..0.5) * head;
        let hbar = 1.0;
        let mw = m * omega;
        let model = OscillatorModel {
            m,
            omega,
            lambda,
            mu,
            d_qq: 0.5 * hbar / mw * g1,
            d_pp: 0.5 * hbar * mw * g2,
            d_pq: 0.5 * hbar * g3,
            hbar,
        };
        let relaxes = lambda * (lambda * lambda + omega * omega - mu * mu) > 0.0;
        if relaxes && validate(&model).classification == Classification::LindbladValid {
            return model;
        }
    }
}

/// `n` seeded models alternating between the two regimes.
pub fn seeded_models(seed: u64, n: usize) -> Vec<OscillatorModel> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let regime = if i % 2 == 0 {
                Regime::Underdamped
            } else {
                Regime::Overdamped
            };
            random_admissible(&mut r, regime)
        })
        .collect()
}
