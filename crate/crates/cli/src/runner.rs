// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Executes run scenarios: propagates the requested module and writes its
//! artifacts. Outputs are deterministic for a fixed scenario and seed.

use std::path::{Path, PathBuf};

use lindblad_lab::fock::{self, FockDensityMatrix, OracleOptions};
use lindblad_lab::model::{validate, Classification};
use lindblad_lab::moments::{self, MomentState};
use lindblad_lab::wigner::WignerGaussian;
use lindblad_lab::{angmom, charfun, optics, quasiprob, tunnel, twoosc};

use crate::output::{write_json_value, write_table, Format, Table};
use crate::scenario::{
    alpha0_of, AngMomConfig, FockInitial, MomentInitial, MomentMethod, RunSpec, Scenario,
};
use crate::CliError;

/// Runs a scenario's run section into `dir`.
pub fn run(
    scenario: &Scenario,
    dir: &Path,
    strict: bool,
    format: Format,
) -> Result<Vec<PathBuf>, CliError> {
    let spec = scenario
        .run
        .as_ref()
        .ok_or_else(|| CliError::Schema("scenario has no run section".into()))?;
    if strict {
        if let Some(model) = scenario.oscillator_model() {
            let report = validate(model);
            if report.classification != Classification::LindbladValid {
                return Err(CliError::Constraint(format!(
                    "model violates the fundamental constraints ({:?})",
                    report.classification
                )));
            }
        }
    }
    let wanted = scenario
        .outputs
        .clone()
        .unwrap_or_else(|| spec.default_outputs());
    for name in &wanted {
        if !spec.default_outputs().iter().any(|d| d == name) {
            return Err(CliError::Schema(format!(
                "unknown artifact `{name}` for module `{}`",
                spec.module_name()
            )));
        }
    }
    let keep = |name: &str| wanted.iter().any(|w| w == name);
    let mut written = Vec::new();

    match spec {
        RunSpec::Moments(cfg) => {
            let grid = cfg.time_grid.build()?;
            let state0 = match cfg.initial {
                MomentInitial::Coherent { alpha0 } => {
                    MomentState::coherent(&cfg.model, alpha0_of(alpha0))
                }
                MomentInitial::Moments {
                    sigma_q,
                    sigma_p,
                    sigma_qq,
                    sigma_pp,
                    sigma_pq,
                } => MomentState {
                    sigma_q,
                    sigma_p,
                    sigma_qq,
                    sigma_pp,
                    sigma_pq,
                    t: 0.0,
                },
            };
            let mut table = Table::new(
                "timeseries",
                &[
                    "t",
                    "sigma_q",
                    "sigma_p",
                    "sigma_qq",
                    "sigma_pp",
                    "sigma_pq",
                    "uncertainty_product",
                ],
            );
            for &t in &grid {
                let s = match cfg.method {
                    MomentMethod::Closed => moments::propagate(&cfg.model, &state0, t)?,
                    MomentMethod::Charfun => {
                        let alpha0 = match cfg.initial {
                            MomentInitial::Coherent { alpha0 } => alpha0_of(alpha0),
                            _ => {
                                return Err(CliError::Schema(
                                    "method=charfun needs a coherent initial state".into(),
                                ));
                            }
                        };
                        charfun::coherent_moments(&cfg.model, alpha0, t)?
                    }
                };
                table.push(vec![
                    t,
                    s.sigma_q,
                    s.sigma_p,
                    s.sigma_qq,
                    s.sigma_pp,
                    s.sigma_pq,
                    s.uncertainty_product(),
                ]);
            }
            if keep("timeseries") {
                written.push(write_table(dir, &table, format)?);
            }
        }
        RunSpec::Quasiprob(cfg) => {
            let mut table = Table::new("steady", &["s", "sigma11", "sigma22", "sigma12"]);
            for ordering in quasiprob::Ordering::ALL {
                let sg = quasiprob::steady_state(&cfg.model, ordering)?;
                table.push(vec![
                    ordering.s(),
                    sg.covariance[(0, 0)],
                    sg.covariance[(1, 1)],
                    sg.covariance[(0, 1)],
                ]);
            }
            if keep("steady") {
                written.push(write_table(dir, &table, format)?);
            }
        }
        RunSpec::Wigner(cfg) => {
            let w0 = WignerGaussian::new(
                (cfg.mean[0], cfg.mean[1]),
                (cfg.cov[0], cfg.cov[1], cfg.cov[2]),
                0.0,
            )?;
            let w1 = lindblad_lab::wigner::evolve(&cfg.model, &w0, cfg.t)?;
            if keep("header") {
                let header = serde_json::json!({
                    "t": w1.t,
                    "mean": [w1.mean.0, w1.mean.1],
                    "cov": [w1.cov.0, w1.cov.1, w1.cov.2],
                });
                written.push(write_json_value(dir, "header", &header)?);
            }
            if keep("grid") {
                let n = cfg.grid_points.max(3);
                let wx = cfg.half_width_sigmas * w1.cov.0.sqrt();
                let wy = cfg.half_width_sigmas * w1.cov.1.sqrt();
                let mut table = Table::new("grid", &["x", "y", "f"]);
                for i in 0..n {
                    let x = w1.mean.0 - wx + 2.0 * wx * i as f64 / (n - 1) as f64;
                    for j in 0..n {
                        let y = w1.mean.1 - wy + 2.0 * wy * j as f64 / (n - 1) as f64;
                        table.push(vec![x, y, w1.value(x, y)]);
                    }
                }
                written.push(write_table(dir, &table, format)?);
            }
        }
        RunSpec::Fock(cfg) => {
            let rho0 = match cfg.initial {
                FockInitial::Vacuum => FockDensityMatrix::vacuum(cfg.dim),
                FockInitial::Coherent { alpha0 } => {
                    FockDensityMatrix::coherent(alpha0_of(alpha0), cfg.dim)
                }
                FockInitial::Thermal { x } => FockDensityMatrix::bose_einstein(x, cfg.dim),
            };
            let opts = OracleOptions {
                form: cfg.form,
                dt: cfg.dt,
                ..Default::default()
            };
            let run = fock::oracle_evolve(&cfg.model, &rho0, cfg.t_max, &opts)?;
            if keep("populations") {
                let mut table = Table::new("populations", &["n", "population"]);
                for n in 0..run.rho.dim {
                    table.push(vec![n as f64, run.rho.entries[(n, n)].re]);
                }
                written.push(write_table(dir, &table, format)?);
            }
            if keep("rho") {
                let snap = run.rho.snapshot();
                let value = serde_json::to_value(&snap).expect("serializable snapshot");
                written.push(write_json_value(dir, "rho", &value)?);
            }
        }
        RunSpec::TwoOsc(cfg) => {
            let model = cfg.model.build()?;
            let state0 = cfg.initial_state();
            let grid = cfg.time_grid.build()?;
            let mut table = Table::new(
                "timeseries",
                &[
                    "t", "m_q1", "m_q2", "m_p1", "m_p2", "s_q1q1", "s_q1q2", "s_q1p1", "s_q1p2",
                    "s_q2q2", "s_q2p1", "s_q2p2", "s_p1p1", "s_p1p2", "s_p2p2",
                ],
            );
            for &t in &grid {
                let s = twoosc::propagate(&model, &state0, t)?;
                table.push(vec![
                    t,
                    s.mvec[0],
                    s.mvec[1],
                    s.mvec[2],
                    s.mvec[3],
                    s.sigma[(0, 0)],
                    s.sigma[(0, 1)],
                    s.sigma[(0, 2)],
                    s.sigma[(0, 3)],
                    s.sigma[(1, 1)],
                    s.sigma[(1, 2)],
                    s.sigma[(1, 3)],
                    s.sigma[(2, 2)],
                    s.sigma[(2, 3)],
                    s.sigma[(3, 3)],
                ]);
            }
            if keep("timeseries") {
                written.push(write_table(dir, &table, format)?);
            }
        }
        RunSpec::AngMom(cfg) => {
            let grid = cfg.time_grid().build()?;
            let table = match cfg {
                AngMomConfig::Depolarization { .. } => {
                    let case = cfg.case1().unwrap()?;
                    let mut table =
                        Table::new("timeseries", &["t", "l2", "l1_sq", "l2_sq", "l3_sq"]);
                    for &t in &grid {
                        let (l2, li2) = angmom::case1_evolve(&case, t)?;
                        table.push(vec![t, l2, li2[0], li2[1], li2[2]]);
                    }
                    table
                }
                AngMomConfig::Lorentz {
                    alpha_sq,
                    l2_0,
                    n2_0,
                    hbar,
                    ..
                } => {
                    let mut table = Table::new("timeseries", &["t", "l2", "n2"]);
                    for &t in &grid {
                        let r = angmom::case2_evolve(*alpha_sq, *l2_0, *n2_0, *hbar, t)?;
                        table.push(vec![t, r.l2, r.n2]);
                    }
                    table
                }
                AngMomConfig::Linear { .. } => {
                    let (case, init, ham) = cfg.case3().unwrap()?;
                    let mut table =
                        Table::new("timeseries", &["t", "q2", "p2", "qp_sym", "l2"]);
                    for &t in &grid {
                        let s = angmom::case3_evolve(&case, &init, t, ham)?;
                        table.push(vec![t, s.q2, s.p2, s.qp_sym, s.l2]);
                    }
                    table
                }
            };
            if keep("timeseries") {
                written.push(write_table(dir, &table, format)?);
            }
        }
        RunSpec::Tunnel(cfg) => {
            let span = cfg.x_span / cfg.t;
            let n = cfg.n_points.max(2);
            let grid: Vec<f64> = (0..n)
                .map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64)
                .collect();
            let pts = tunnel::spectrum(&cfg.model, &cfg.elements, cfg.t, Some(&grid))?;
            let mut table = Table::new(
                "spectrum",
                &[
                    "omega_i", "gamma", "rho_g", "rho_l", "rho_lambda", "rho_d", "rho_n",
                    "rho_a", "rho_b", "rho_c", "rho_f",
                ],
            );
            for p in &pts {
                table.push(vec![
                    p.omega_i,
                    p.gamma,
                    p.components.g,
                    p.components.l,
                    p.components.lambda,
                    p.components.d,
                    p.components.n,
                    p.components.a,
                    p.components.b,
                    p.components.c,
                    p.components.f,
                ]);
            }
            if keep("spectrum") {
                written.push(write_table(dir, &table, format)?);
            }
        }
        RunSpec::Optics(cfg) => {
            if cfg.n_points < 2 || !(cfg.delta_max > cfg.delta_min) {
                return Err(CliError::Schema(
                    "optics scan needs n_points >= 2 and delta_max > delta_min".into(),
                ));
            }
            let mut table = Table::new("absorption", &["delta", "alpha", "dtheta_dz", "N0"]);
            for i in 0..cfg.n_points {
                let delta = cfg.delta_min
                    + (cfg.delta_max - cfg.delta_min) * i as f64 / (cfg.n_points - 1) as f64;
                let (alpha, dtheta, n0) = optics::absorption_at(&cfg.model, delta)?;
                table.push(vec![delta, alpha, dtheta, n0]);
            }
            if keep("absorption") {
                written.push(write_table(dir, &table, format)?);
            }
        }
    }
    Ok(written)
}
