// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Built-in named scenarios reproducing the library's worked cases.

use lindblad_lab::model::OscillatorModel;
use lindblad_lab::optics::AtomEnvModel;
use lindblad_lab::tunnel::BarrierMatrixElements;

use crate::scenario::{
    AngMomConfig, FockConfig, FockInitial, HamiltonianKind, MomentInitial, MomentMethod,
    MomentsConfig, OpticsConfig, QuasiprobConfig, RunSpec, Scenario, Spacing, TimeGrid,
    TunnelConfig, TwoOscConfig, TwoOscModelConfig, VerifySpec, WignerConfig,
};

/// Charge-equilibration frame in MeV/s units: mass `B = 1.6127e-40 MeV s^2`
/// and stiffness `K = 1.6363e4 MeV` give `hbar omega = 6.63 MeV`; the mode
/// is overdamped (`mu > omega`). The friction and diffusion magnitudes are
/// not fixed by the printed frame; this preset uses `lambda = 2.4e22 1/s`
/// (above both `mu` and the relaxation bound) with Gibbs-form diffusion at
/// `coth = 5`, which satisfies every fundamental constraint.
fn charge_equilibration() -> Scenario {
    let b: f64 = 1.6127e-40;
    let k: f64 = 1.6363e4;
    let omega = (k / b).sqrt(); // 1.0073e22 1/s
    let hbar = 6.582119569e-22; // MeV s
    let model = OscillatorModel::thermal(b, omega, 2.4e22, 2.33e22, 5.0, hbar)
        .expect("valid charge-equilibration frame");
    Scenario {
        name: "charge-equilibration-FeBi".into(),
        seed: 0,
        run: Some(RunSpec::Moments(MomentsConfig {
            model,
            initial: MomentInitial::Moments {
                sigma_q: 0.12,
                sigma_p: 0.0,
                sigma_qq: 0.5 * hbar / (b * omega),
                sigma_pp: 0.5 * hbar * b * omega,
                sigma_pq: 0.0,
            },
            method: MomentMethod::Closed,
            time_grid: TimeGrid {
                t_max: 5e-21,
                n_points: 101,
                spacing: Spacing::Linear,
                t_min: None,
            },
        })),
        outputs: None,
        verify: None,
    }
}

/// Thermal bath from the vacuum: the populations relax to the
/// Bose-Einstein diagonal.
fn thermal_relaxation() -> Scenario {
    let x = 1.0f64; // hbar w / k T
    let coth = 1.0 / (0.5 * x).tanh();
    let model = OscillatorModel::thermal(1.0, 1.0, 0.5, 0.0, coth, 1.0).expect("valid bath");
    Scenario {
        name: "thermal-relaxation".into(),
        seed: 0,
        run: Some(RunSpec::Fock(FockConfig {
            model,
            initial: FockInitial::Vacuum,
            dim: 40,
            t_max: 80.0, // 40 / lambda
            form: lindblad_lab::fock::OracleForm::Recurrence,
            dt: None,
        })),
        outputs: None,
        verify: None,
    }
}

/// Zero-dissipation tunneling: the spectrum collapses to the
/// energy-conserving line and the summed rate approaches the golden rule.
fn gamow_limit() -> Scenario {
    let model =
        OscillatorModel::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0).expect("closed system");
    Scenario {
        name: "gamow-limit".into(),
        seed: 0,
        run: Some(RunSpec::Tunnel(TunnelConfig {
            model,
            elements: BarrierMatrixElements::golden_rule_preset(),
            t: 50.0,
            n_points: 4096,
            x_span: 12.0,
        })),
        outputs: None,
        verify: None,
    }
}

fn quasiprob_steady() -> Scenario {
    let model = OscillatorModel::new(1.3, 1.1, 0.25, 0.4, 0.31, 0.52, 0.05, 1.0).unwrap();
    Scenario {
        name: "quasiprob-steady".into(),
        seed: 0,
        run: Some(RunSpec::Quasiprob(QuasiprobConfig { model })),
        outputs: None,
        verify: None,
    }
}

fn wigner_coherent() -> Scenario {
    let model = OscillatorModel::thermal(1.0, 1.0, 0.3, 0.0, 2.0, 1.0).unwrap();
    Scenario {
        name: "wigner-coherent".into(),
        seed: 0,
        run: Some(RunSpec::Wigner(WignerConfig {
            model,
            mean: [1.0, 0.0],
            cov: [0.5, 0.5, 0.0],
            t: 1.5,
            grid_points: 129,
            half_width_sigmas: 4.0,
        })),
        outputs: None,
        verify: None,
    }
}

fn twoosc_uncoupled() -> Scenario {
    let mut dmat = [[0.0; 4]; 4];
    for (i, row) in dmat.iter_mut().enumerate() {
        row[i] = 0.5;
    }
    dmat[0][1] = 0.1;
    dmat[1][0] = 0.1;
    dmat[2][3] = 0.08;
    dmat[3][2] = 0.08;
    Scenario {
        name: "twoosc-uncoupled".into(),
        seed: 0,
        run: Some(RunSpec::TwoOsc(TwoOscConfig {
            model: TwoOscModelConfig {
                m1: 1.0,
                m2: 1.3,
                omega1: 1.0,
                omega2: 1.4,
                k12: 0.0,
                mu_matrix: [[0.0; 2]; 2],
                nu12: 0.0,
                alpha12: 0.0,
                beta12: 0.0,
                lambda_matrix: [[0.25, 0.0], [0.0, 0.35]],
                dmat,
                hbar: 1.0,
            },
            mvec: [0.5, -0.3, 0.0, 0.2],
            sigma: {
                let mut s = [[0.0; 4]; 4];
                for (i, row) in s.iter_mut().enumerate() {
                    row[i] = 0.7;
                }
                s
            },
            time_grid: TimeGrid {
                t_max: 12.0,
                n_points: 121,
                spacing: Spacing::Linear,
                t_min: None,
            },
        })),
        outputs: None,
        verify: None,
    }
}

fn angmom_rotor() -> Scenario {
    let (lambda, hbar) = (0.4, 1.0);
    let d_qq = 0.35;
    let d_pp = 0.25 * hbar * hbar * lambda * lambda / d_qq;
    Scenario {
        name: "angmom-rotor".into(),
        seed: 0,
        run: Some(RunSpec::AngMom(AngMomConfig::Linear {
            lambda,
            d_qq,
            d_pp,
            d_pq: 0.0,
            m: 1.0,
            omega: 0.0,
            theta: 2.0,
            hbar,
            hamiltonian: HamiltonianKind::Rotor,
            q2_0: 2.0,
            p2_0: 1.4,
            qp_sym_0: 0.3,
            l2_0: 3.0,
            time_grid: TimeGrid {
                t_max: 15.0,
                n_points: 151,
                spacing: Spacing::Linear,
                t_min: None,
            },
        })),
        outputs: None,
        verify: None,
    }
}

fn optics_absorption() -> Scenario {
    let model = AtomEnvModel {
        gamma_perp_prime: 1.1,
        gamma_perp_dblprime: 0.9,
        gamma_parallel: 1.3,
        s: 0.2,
        gamma1: 0.25,
        gamma2: 0.15,
        d1: 0.04,
        d2: -0.03,
        d3: 0.5,
        omega0: 5.0,
        omega: 4.7,
        chi0: 0.02,
        chi1: 0.3,
        chi_s: 0.0,
        n_e: 1.0,
        alpha0: 1.0,
    }
    .with_derived_saturation()
    .expect("valid optics model");
    Scenario {
        name: "optics-absorption".into(),
        seed: 0,
        run: Some(RunSpec::Optics(OpticsConfig {
            model,
            delta_min: -10.0,
            delta_max: 10.0,
            n_points: 401,
        })),
        outputs: None,
        verify: None,
    }
}

fn verify_moments() -> Scenario {
    Scenario {
        name: "verify-moments-vs-oracle".into(),
        seed: 1234,
        run: None,
        outputs: None,
        verify: Some(VerifySpec::MomentsVsOracle {
            n_models: 20,
            n_times: 8,
            tolerance: 1e-8,
        }),
    }
}

fn verify_genfun() -> Scenario {
    Scenario {
        name: "verify-genfun-vs-oracle".into(),
        seed: 0,
        run: None,
        outputs: None,
        verify: Some(VerifySpec::GenfunVsFockOracle {
            alpha0: [0.8, -0.5],
            t: 1.0,
            max_mn: 12,
            dim: 28,
            tolerance: 1e-7,
        }),
    }
}

fn verify_quasiprob() -> Scenario {
    Scenario {
        name: "verify-quasiprob-relations".into(),
        seed: 777,
        run: None,
        outputs: None,
        verify: Some(VerifySpec::QuasiprobRelations {
            n_models: 50,
            tolerance: 1e-12,
        }),
    }
}

/// All built-in presets.
pub fn all() -> Vec<Scenario> {
    vec![
        charge_equilibration(),
        thermal_relaxation(),
        gamow_limit(),
        quasiprob_steady(),
        wigner_coherent(),
        twoosc_uncoupled(),
        angmom_rotor(),
        optics_absorption(),
        verify_moments(),
        verify_genfun(),
        verify_quasiprob(),
    ]
}

pub fn by_name(name: &str) -> Option<Scenario> {
    all().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip_through_json() {
        for preset in all() {
            let text = preset.to_json();
            let back = Scenario::from_json(&text).unwrap();
            assert_eq!(preset, back, "{} changed in round trip", preset.name);
        }
    }

    #[test]
    fn charge_equilibration_is_overdamped_and_valid() {
        let s = by_name("charge-equilibration-FeBi").unwrap();
        let model = *s.oscillator_model().unwrap();
        assert_eq!(model.regime(), lindblad_lab::model::Regime::Overdamped);
        assert!(model.omega < model.mu);
        assert!((model.omega - 1.0073e22).abs() < 5e18);
        assert_eq!(
            lindblad_lab::model::validate(&model).classification,
            lindblad_lab::model::Classification::LindbladValid
        );
        // hbar omega = 6.63 MeV within print precision.
        assert!((model.hbar * model.omega - 6.63).abs() < 0.01);
    }
}
