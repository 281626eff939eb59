// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Verification scenarios: each pairs an analytic path with an independent
//! oracle path and reports machine-readable pass/fail with max deviations.

use std::path::{Path, PathBuf};

use lindblad_lab::fock::{self, FockDensityMatrix, GenFunInit, OracleForm, OracleOptions};
use lindblad_lab::moments;
use lindblad_lab::oracle::{mean_rhs, rk45, variance_rhs};
use lindblad_lab::{quasiprob, sweep};
use serde::{Deserialize, Serialize};

use crate::output::write_json_value;
use crate::scenario::{alpha0_of, Scenario, VerifySpec};
use crate::CliError;

/// One verified check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

/// Machine-readable verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

/// Runs the verify section and writes `report.json` into `dir`.
pub fn verify(scenario: &Scenario, dir: &Path) -> Result<(VerifyReport, PathBuf), CliError> {
    let spec = scenario.verify.as_ref().ok_or_else(|| {
        CliError::Schema("scenario defines no verify section (missing oracle pairing)".into())
    })?;
    let checks = match spec {
        VerifySpec::MomentsVsOracle {
            n_models,
            n_times,
            tolerance,
        } => moments_vs_oracle(scenario.seed, *n_models, *n_times, *tolerance)?,
        VerifySpec::GenfunVsFockOracle {
            alpha0,
            t,
            max_mn,
            dim,
            tolerance,
        } => genfun_vs_fock(alpha0_of(*alpha0), *t, *max_mn, *dim, *tolerance)?,
        VerifySpec::QuasiprobRelations {
            n_models,
            tolerance,
        } => quasiprob_relations(scenario.seed, *n_models, *tolerance)?,
    };
    let report = VerifyReport {
        scenario: scenario.name.clone(),
        seed: scenario.seed,
        pass: checks.iter().all(|c| c.pass),
        checks,
    };
    let value = serde_json::to_value(&report).expect("serializable report");
    let path = write_json_value(dir, "report", &value)?;
    Ok((report, path))
}

fn check(name: &str, max_deviation: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass: max_deviation <= tolerance,
        max_deviation,
        tolerance,
    }
}

fn moments_vs_oracle(
    seed: u64,
    n_models: usize,
    n_times: usize,
    tolerance: f64,
) -> Result<Vec<CheckResult>, CliError> {
    let models = sweep::seeded_models(seed, n_models);
    let mut worst_mean: f64 = 0.0;
    let mut worst_var: f64 = 0.0;
    for model in &models {
        let mean0 = (0.8, -0.4);
        let var0 = (0.9, 1.2, 0.1);
        for k in 1..=n_times {
            let t = 8.0 * k as f64 / n_times as f64 / model.lambda.max(model.omega);
            let m = moments::propagate_mean(model, mean0, t)?;
            let y = rk45(mean_rhs(model), 0.0, t, &[mean0.0, mean0.1], 1e-12, 1e-14);
            let scale = mean0.0.abs().max(mean0.1.abs());
            worst_mean = worst_mean
                .max((m.sigma_q - y[0]).abs() / scale)
                .max((m.sigma_p - y[1]).abs() / scale);
            let v = moments::propagate_variances(model, var0, t)?;
            let yv = rk45(
                variance_rhs(model),
                0.0,
                t,
                &[var0.0, var0.1, var0.2],
                1e-12,
                1e-14,
            );
            let vscale = yv.iter().fold(0.1f64, |a, b| a.max(b.abs()));
            worst_var = worst_var
                .max((v.sigma_qq - yv[0]).abs() / vscale)
                .max((v.sigma_pp - yv[1]).abs() / vscale)
                .max((v.sigma_pq - yv[2]).abs() / vscale);
        }
    }
    Ok(vec![
        check("means-vs-rk45", worst_mean, tolerance),
        check("variances-vs-rk45", worst_var, tolerance),
    ])
}

fn genfun_vs_fock(
    alpha0: lindblad_lab::C64,
    t: f64,
    max_mn: usize,
    dim: usize,
    tolerance: f64,
) -> Result<Vec<CheckResult>, CliError> {
    // Zero-temperature bath whose analytic solution is the decaying packet.
    let lambda = 0.35;
    let model = lindblad_lab::model::OscillatorModel::new(
        1.0,
        1.0,
        lambda,
        0.0,
        0.5 * lambda,
        0.5 * lambda,
        0.0,
        1.0,
    )?;
    let state = fock::genfun_evolve(&model, &GenFunInit::glauber(alpha0), t)?;
    let analytic = fock::genfun_density_matrix(&state, max_mn + 1)?;
    let opts = OracleOptions {
        form: OracleForm::Recurrence,
        ..Default::default()
    };
    let run = fock::oracle_evolve(&model, &FockDensityMatrix::coherent(alpha0, dim), t, &opts)?;
    let mut worst: f64 = 0.0;
    for m in 0..=max_mn {
        for n in 0..=max_mn {
            worst = worst.max((analytic.entries[(m, n)] - run.rho.entries[(m, n)]).norm());
        }
    }
    Ok(vec![check("genfun-vs-fock-oracle", worst, tolerance)])
}

fn quasiprob_relations(
    seed: u64,
    n_models: usize,
    tolerance: f64,
) -> Result<Vec<CheckResult>, CliError> {
    let models = sweep::seeded_models(seed, n_models);
    let mut worst_mean: f64 = 0.0;
    let mut worst_offset: f64 = 0.0;
    for model in &models {
        let p = quasiprob::steady_state(model, quasiprob::Ordering::P)?.covariance;
        let w = quasiprob::steady_state(model, quasiprob::Ordering::W)?.covariance;
        let q = quasiprob::steady_state(model, quasiprob::Ordering::Q)?.covariance;
        for i in 0..2 {
            for j in 0..2 {
                worst_mean = worst_mean.max((w[(i, j)] - 0.5 * (p[(i, j)] + q[(i, j)])).abs());
            }
            worst_offset = worst_offset
                .max((w[(i, i)] - p[(i, i)] - 0.25).abs())
                .max((w[(i, i)] - q[(i, i)] + 0.25).abs());
        }
        worst_offset = worst_offset
            .max((w[(0, 1)] - p[(0, 1)]).abs())
            .max((w[(0, 1)] - q[(0, 1)]).abs());
    }
    Ok(vec![
        check("wigner-is-mean-of-p-and-q", worst_mean, tolerance),
        check("quarter-offsets", worst_offset, tolerance),
    ])
}

#[derive(Debug, Serialize)]
pub struct SummaryLine<'a> {
    pub check: &'a str,
    pub pass: bool,
}
