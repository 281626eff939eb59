// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario schema: JSON configs in, validated typed configs out.
//!
//! The outer object carries `name`, `seed` and exactly one of a `run`
//! section (module selector plus module-specific model/initial/grid) or a
//! `verify` section (a named analytic-vs-oracle cross-check pair). Unknown
//! keys are rejected everywhere.

use lindblad_lab::angmom::{AngMomCase1, AngMomCase3, Case3Hamiltonian, Case3State};
use lindblad_lab::fock::OracleForm;
use lindblad_lab::model::OscillatorModel;
use lindblad_lab::optics::AtomEnvModel;
use lindblad_lab::tunnel::BarrierMatrixElements;
use lindblad_lab::twoosc::TwoOscModel;
use lindblad_lab::C64;
use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Time grid specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
    /// First point of a logarithmic grid (default `t_max / 1000`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

impl TimeGrid {
    pub fn build(&self) -> Result<Vec<f64>, CliError> {
        if self.n_points == 0 || !(self.t_max > 0.0) {
            return Err(CliError::Schema(
                "time grid needs n_points > 0 and t_max > 0".into(),
            ));
        }
        let n = self.n_points;
        let grid: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.t_max * i as f64 / (n.max(2) - 1) as f64)
                .collect(),
            Spacing::Log => {
                let t_min = self.t_min.unwrap_or(self.t_max * 1e-3);
                if !(t_min > 0.0) || t_min >= self.t_max {
                    return Err(CliError::Schema(
                        "log grid needs 0 < t_min < t_max".into(),
                    ));
                }
                (0..n)
                    .map(|i| {
                        t_min * (self.t_max / t_min).powf(i as f64 / (n.max(2) - 1) as f64)
                    })
                    .collect()
            }
        };
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Schema("time grid must be ascending".into()));
        }
        Ok(grid)
    }
}

/// Initial state of a single-oscillator moment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MomentInitial {
    /// Coherent state `|alpha0>`.
    Coherent { alpha0: [f64; 2] },
    /// Explicit first and second moments.
    Moments {
        sigma_q: f64,
        sigma_p: f64,
        sigma_qq: f64,
        sigma_pp: f64,
        sigma_pq: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MomentMethod {
    #[default]
    Closed,
    Charfun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    pub model: OscillatorModel,
    pub initial: MomentInitial,
    #[serde(default)]
    pub method: MomentMethod,
    pub time_grid: TimeGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiprobConfig {
    pub model: OscillatorModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    pub model: OscillatorModel,
    pub mean: [f64; 2],
    /// `(sigma_qq, sigma_pp, sigma_pq)`.
    pub cov: [f64; 3],
    pub t: f64,
    /// Rendered grid points per axis (default 513).
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    /// Half-width of the rendered square in standard deviations.
    #[serde(default = "default_half_width")]
    pub half_width_sigmas: f64,
}

fn default_grid_points() -> usize {
    513
}

fn default_half_width() -> f64 {
    4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FockInitial {
    Vacuum,
    Coherent { alpha0: [f64; 2] },
    Thermal { x: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockConfig {
    pub model: OscillatorModel,
    pub initial: FockInitial,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub t_max: f64,
    #[serde(default = "default_form")]
    pub form: OracleForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

fn default_dim() -> usize {
    40
}

fn default_form() -> OracleForm {
    OracleForm::OperatorLindblad
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoOscModelConfig {
    pub m1: f64,
    pub m2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub k12: f64,
    pub mu_matrix: [[f64; 2]; 2],
    pub nu12: f64,
    pub alpha12: f64,
    pub beta12: f64,
    pub lambda_matrix: [[f64; 2]; 2],
    pub dmat: [[f64; 4]; 4],
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

fn default_hbar() -> f64 {
    1.0
}

impl TwoOscModelConfig {
    pub fn build(&self) -> Result<TwoOscModel, CliError> {
        let mu = Matrix2::from_fn(|i, j| self.mu_matrix[i][j]);
        let lam = Matrix2::from_fn(|i, j| self.lambda_matrix[i][j]);
        let dmat = Matrix4::from_fn(|i, j| self.dmat[i][j]);
        TwoOscModel::new(
            self.m1,
            self.m2,
            self.omega1,
            self.omega2,
            self.k12,
            mu,
            self.nu12,
            self.alpha12,
            self.beta12,
            lam,
            dmat,
            self.hbar,
        )
        .map_err(CliError::Numerics)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoOscConfig {
    pub model: TwoOscModelConfig,
    pub mvec: [f64; 4],
    pub sigma: [[f64; 4]; 4],
    pub time_grid: TimeGrid,
}

impl TwoOscConfig {
    pub fn initial_state(&self) -> lindblad_lab::twoosc::TwoOscState {
        lindblad_lab::twoosc::TwoOscState {
            mvec: Vector4::from_fn(|i, _| self.mvec[i]),
            sigma: Matrix4::from_fn(|i, j| self.sigma[i][j]),
            t: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum AngMomConfig {
    Depolarization {
        alpha_sq: f64,
        li2_0: [f64; 3],
        hbar: f64,
        time_grid: TimeGrid,
    },
    Lorentz {
        alpha_sq: f64,
        l2_0: f64,
        n2_0: f64,
        hbar: f64,
        time_grid: TimeGrid,
    },
    Linear {
        lambda: f64,
        #[serde(rename = "D_qq")]
        d_qq: f64,
        #[serde(rename = "D_pp")]
        d_pp: f64,
        #[serde(rename = "D_pq")]
        d_pq: f64,
        m: f64,
        omega: f64,
        theta: f64,
        hbar: f64,
        hamiltonian: HamiltonianKind,
        q2_0: f64,
        p2_0: f64,
        qp_sym_0: f64,
        l2_0: f64,
        time_grid: TimeGrid,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamiltonianKind {
    Rotor,
    SphericalOscillator,
}

impl From<HamiltonianKind> for Case3Hamiltonian {
    fn from(k: HamiltonianKind) -> Self {
        match k {
            HamiltonianKind::Rotor => Case3Hamiltonian::RotorL2,
            HamiltonianKind::SphericalOscillator => Case3Hamiltonian::SphericalOscillator,
        }
    }
}

impl AngMomConfig {
    pub fn case1(&self) -> Option<Result<AngMomCase1, CliError>> {
        if let AngMomConfig::Depolarization {
            alpha_sq,
            li2_0,
            hbar,
            ..
        } = self
        {
            Some(AngMomCase1::new(*alpha_sq, *li2_0, *hbar).map_err(CliError::Numerics))
        } else {
            None
        }
    }

    pub fn case3(&self) -> Option<Result<(AngMomCase3, Case3State, Case3Hamiltonian), CliError>> {
        if let AngMomConfig::Linear {
            lambda,
            d_qq,
            d_pp,
            d_pq,
            m,
            omega,
            theta,
            hbar,
            hamiltonian,
            q2_0,
            p2_0,
            qp_sym_0,
            l2_0,
            ..
        } = self
        {
            let case = match AngMomCase3::new(*lambda, *d_qq, *d_pp, *d_pq, *m, *omega, *theta, *hbar)
            {
                Ok(c) => c,
                Err(e) => return Some(Err(CliError::Numerics(e))),
            };
            let init = Case3State {
                q2: *q2_0,
                p2: *p2_0,
                qp_sym: *qp_sym_0,
                l2: *l2_0,
            };
            Some(Ok((case, init, (*hamiltonian).into())))
        } else {
            None
        }
    }

    pub fn time_grid(&self) -> &TimeGrid {
        match self {
            AngMomConfig::Depolarization { time_grid, .. } => time_grid,
            AngMomConfig::Lorentz { time_grid, .. } => time_grid,
            AngMomConfig::Linear { time_grid, .. } => time_grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunnelConfig {
    pub model: OscillatorModel,
    pub elements: BarrierMatrixElements,
    pub t: f64,
    #[serde(default = "default_tunnel_points")]
    pub n_points: usize,
    /// Grid half-span in units of `1/t` (default 12).
    #[serde(default = "default_tunnel_span")]
    pub x_span: f64,
}

fn default_tunnel_points() -> usize {
    2048
}

fn default_tunnel_span() -> f64 {
    12.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsConfig {
    pub model: AtomEnvModel,
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_points: usize,
}

/// Module-specific run section.
#[derive(Debug, Clone, PartialEq)]
pub enum RunSpec {
    Moments(MomentsConfig),
    Quasiprob(QuasiprobConfig),
    Wigner(WignerConfig),
    Fock(FockConfig),
    TwoOsc(TwoOscConfig),
    AngMom(AngMomConfig),
    Tunnel(TunnelConfig),
    Optics(OpticsConfig),
}

impl RunSpec {
    pub fn module_name(&self) -> &'static str {
        match self {
            RunSpec::Moments(_) => "moments",
            RunSpec::Quasiprob(_) => "quasiprob",
            RunSpec::Wigner(_) => "wigner",
            RunSpec::Fock(_) => "fock",
            RunSpec::TwoOsc(_) => "twoosc",
            RunSpec::AngMom(_) => "angmom",
            RunSpec::Tunnel(_) => "tunnel",
            RunSpec::Optics(_) => "optics",
        }
    }

    /// Default artifact names of each module.
    pub fn default_outputs(&self) -> Vec<String> {
        let names: &[&str] = match self {
            RunSpec::Moments(_) => &["timeseries"],
            RunSpec::Quasiprob(_) => &["steady"],
            RunSpec::Wigner(_) => &["grid", "header"],
            RunSpec::Fock(_) => &["populations", "rho"],
            RunSpec::TwoOsc(_) => &["timeseries"],
            RunSpec::AngMom(_) => &["timeseries"],
            RunSpec::Tunnel(_) => &["spectrum"],
            RunSpec::Optics(_) => &["absorption"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

/// Cross-check pair of a verification scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VerifySpec {
    /// Closed-form moments vs adaptive integration of the moment equations.
    MomentsVsOracle {
        n_models: usize,
        n_times: usize,
        tolerance: f64,
    },
    /// Generating-function density matrix vs the truncated-basis oracle.
    GenfunVsFockOracle {
        alpha0: [f64; 2],
        t: f64,
        max_mn: usize,
        dim: usize,
        tolerance: f64,
    },
    /// Steady-state relations between the P, W and Q representations.
    QuasiprobRelations { n_models: usize, tolerance: f64 },
}

/// One scenario: named, seeded, and carrying a run and/or verify section.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub run: Option<RunSpec>,
    pub outputs: Option<Vec<String>>,
    pub verify: Option<VerifySpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioWire {
    name: String,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verify: Option<VerifySpec>,
}

fn parse_config<T: serde::de::DeserializeOwned>(
    module: &str,
    v: serde_json::Value,
) -> Result<T, CliError> {
    serde_json::from_value(v)
        .map_err(|e| CliError::Schema(format!("invalid `{module}` config: {e}")))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let wire: ScenarioWire =
            serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        let run = match (&wire.module, wire.config) {
            (Some(module), Some(cfg)) => Some(match module.as_str() {
                "moments" => RunSpec::Moments(parse_config(module, cfg)?),
                "quasiprob" => RunSpec::Quasiprob(parse_config(module, cfg)?),
                "wigner" => RunSpec::Wigner(parse_config(module, cfg)?),
                "fock" => RunSpec::Fock(parse_config(module, cfg)?),
                "twoosc" => RunSpec::TwoOsc(parse_config(module, cfg)?),
                "angmom" => RunSpec::AngMom(parse_config(module, cfg)?),
                "tunnel" => RunSpec::Tunnel(parse_config(module, cfg)?),
                "optics" => RunSpec::Optics(parse_config(module, cfg)?),
                other => {
                    return Err(CliError::Schema(format!("unknown module `{other}`")));
                }
            }),
            (None, None) => None,
            _ => {
                return Err(CliError::Schema(
                    "`module` and `config` must be given together".into(),
                ));
            }
        };
        if run.is_none() && wire.verify.is_none() {
            return Err(CliError::Schema(
                "scenario needs a run section (`module` + `config`) or a `verify` section".into(),
            ));
        }
        Ok(Scenario {
            name: wire.name,
            seed: wire.seed,
            run,
            outputs: wire.outputs,
            verify: wire.verify,
        })
    }

    pub fn to_json(&self) -> String {
        let (module, config) = match &self.run {
            Some(spec) => {
                let v = match spec {
                    RunSpec::Moments(c) => serde_json::to_value(c),
                    RunSpec::Quasiprob(c) => serde_json::to_value(c),
                    RunSpec::Wigner(c) => serde_json::to_value(c),
                    RunSpec::Fock(c) => serde_json::to_value(c),
                    RunSpec::TwoOsc(c) => serde_json::to_value(c),
                    RunSpec::AngMom(c) => serde_json::to_value(c),
                    RunSpec::Tunnel(c) => serde_json::to_value(c),
                    RunSpec::Optics(c) => serde_json::to_value(c),
                }
                .expect("serializable config");
                (Some(spec.module_name().to_string()), Some(v))
            }
            None => (None, None),
        };
        let wire = ScenarioWire {
            name: self.name.clone(),
            seed: self.seed,
            module,
            config,
            outputs: self.outputs.clone(),
            verify: self.verify.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("serializable scenario")
    }

    /// The primary oscillator model of the run section, when there is one
    /// (used for `--strict` constraint checking).
    pub fn oscillator_model(&self) -> Option<&OscillatorModel> {
        match &self.run {
            Some(RunSpec::Moments(c)) => Some(&c.model),
            Some(RunSpec::Quasiprob(c)) => Some(&c.model),
            Some(RunSpec::Wigner(c)) => Some(&c.model),
            Some(RunSpec::Fock(c)) => Some(&c.model),
            Some(RunSpec::Tunnel(c)) => Some(&c.model),
            _ => None,
        }
    }
}

pub fn alpha0_of(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}
