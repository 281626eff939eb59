// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phenomenological constants of the single damped oscillator, derived
//! coefficients, fundamental constraint checks and the catalogue of
//! literature parameterizations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Relative slack used when evaluating the constraint inequalities.
pub const CONSTRAINT_SLACK: f64 = 1e-12;

/// The seven phenomenological constants of a linearly damped oscillator.
///
/// `lambda` is the friction constant, `mu` the Hamiltonian-mixing constant
/// and `d_qq`, `d_pp`, `d_pq` the diffusion coefficients. All formulas are
/// unit-agnostic once `hbar` is explicit; `hbar` defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorModel {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub mu: f64,
    #[serde(rename = "D_qq")]
    pub d_qq: f64,
    #[serde(rename = "D_pp")]
    pub d_pp: f64,
    #[serde(rename = "D_pq")]
    pub d_pq: f64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

fn default_hbar() -> f64 {
    1.0
}

/// Damping regime, decided by the sign of `mu^2 - omega^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Overdamped,
    Underdamped,
    Critical,
}

/// Coefficients derived from the model constants.
#[derive(Debug, Clone, Copy)]
pub struct DerivedCoefficients {
    /// `D1 = (m w D_qq - D_pp/(m w) + 2 i D_pq) / hbar`.
    pub d1: C64,
    /// `D2 = (m w D_qq + D_pp/(m w)) / hbar`.
    pub d2: f64,
    /// `nu = sqrt(mu^2 - omega^2)` in the overdamped regime, 0 otherwise.
    pub nu: f64,
    /// `Omega = sqrt(omega^2 - mu^2)` in the underdamped regime, 0 otherwise.
    pub omega_big: f64,
    /// `gamma = sqrt(mu^2 - omega^2)` as a complex scalar (imaginary when
    /// underdamped), so both regimes share one code path.
    pub gamma: C64,
    /// `mu_+ = lambda + nu` (real part of `lambda + gamma`).
    pub mu_plus: f64,
    /// `mu_- = lambda - nu` (real part of `lambda - gamma`).
    pub mu_minus: f64,
    pub regime: Regime,
}

/// Outcome of the fundamental constraint checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// All three constraints hold: a genuine Lindblad generator.
    LindbladValid,
    /// `lambda = mu` (translation invariant) but the constraints fail;
    /// such models dynamically violate the uncertainty principle.
    ValidatesUncertaintyViolation,
    /// `lambda != mu` and the constraints fail.
    OutsideLindblad,
}

/// Report of the fundamental constraints; a pure function of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub d_pp_positive: bool,
    pub d_qq_positive: bool,
    /// `D_pp D_qq - D_pq^2 >= lambda^2 hbar^2 / 4`.
    pub schwartz_ok: bool,
    /// `mu = lambda` within a relative tolerance.
    pub translation_invariant: bool,
    pub classification: Classification,
}

impl ConstraintReport {
    pub fn all_ok(&self) -> bool {
        self.d_pp_positive && self.d_qq_positive && self.schwartz_ok
    }
}

impl OscillatorModel {
    /// Validates the hard invariants and returns the model.
    pub fn new(
        m: f64,
        omega: f64,
        lambda: f64,
        mu: f64,
        d_qq: f64,
        d_pp: f64,
        d_pq: f64,
        hbar: f64,
    ) -> Result<Self> {
        let model = Self {
            m,
            omega,
            lambda,
            mu,
            d_qq,
            d_pp,
            d_pq,
            hbar,
        };
        model.check_invariants()?;
        Ok(model)
    }

    pub fn check_invariants(&self) -> Result<()> {
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidModel(format!("m must be > 0, got {}", self.m)));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidModel(format!(
                "omega must be > 0, got {}",
                self.omega
            )));
        }
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(Error::InvalidModel(format!(
                "hbar must be > 0, got {}",
                self.hbar
            )));
        }
        if self.lambda < 0.0 || !self.lambda.is_finite() {
            return Err(Error::InvalidModel(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Gibbs-bath coefficients: diffusion constants whose steady state is a
    /// thermal state with `coth(hbar omega / 2 k T) = coth_factor` (requires
    /// `lambda > mu` for positive `D_qq`).
    pub fn thermal(m: f64, omega: f64, lambda: f64, mu: f64, coth_factor: f64, hbar: f64) -> Result<Self> {
        let d_pp = 0.5 * (lambda + mu) * hbar * m * omega * coth_factor;
        let d_qq = 0.5 * (lambda - mu) * hbar / (m * omega) * coth_factor;
        Self::new(m, omega, lambda, mu, d_qq, d_pp, 0.0, hbar)
    }

    /// Boundary tolerance for the critical regime: `1e-12 * max(mu, omega)`.
    pub fn tol_regime(&self) -> f64 {
        1e-12 * self.mu.abs().max(self.omega)
    }

    pub fn regime(&self) -> Regime {
        if (self.mu - self.omega).abs() <= self.tol_regime() {
            Regime::Critical
        } else if self.mu > self.omega {
            Regime::Overdamped
        } else {
            Regime::Underdamped
        }
    }
}

/// Derives the dependent coefficients; rejects non-positive `m`, `omega`, `hbar`.
pub fn derive(model: &OscillatorModel) -> Result<DerivedCoefficients> {
    model.check_invariants()?;
    let mw = model.m * model.omega;
    let d1 = C64::new(
        (mw * model.d_qq - model.d_pp / mw) / model.hbar,
        2.0 * model.d_pq / model.hbar,
    );
    let d2 = (mw * model.d_qq + model.d_pp / mw) / model.hbar;
    let disc = model.mu * model.mu - model.omega * model.omega;
    let gamma = C64::new(disc, 0.0).sqrt();
    let regime = model.regime();
    let nu = if regime == Regime::Overdamped { disc.sqrt() } else { 0.0 };
    let omega_big = if regime == Regime::Underdamped { (-disc).sqrt() } else { 0.0 };
    Ok(DerivedCoefficients {
        d1,
        d2,
        nu,
        omega_big,
        gamma,
        mu_plus: model.lambda + nu,
        mu_minus: model.lambda - nu,
        regime,
    })
}

/// Evaluates the fundamental constraints. Always returns a report.
///
/// Strict positivity treats 0 as failure; the Schwartz inequality carries a
/// relative slack of [`CONSTRAINT_SLACK`] to absorb rounding.
pub fn validate(model: &OscillatorModel) -> ConstraintReport {
    let d_pp_positive = model.d_pp > 0.0;
    let d_qq_positive = model.d_qq > 0.0;
    let lhs = model.d_pp * model.d_qq - model.d_pq * model.d_pq;
    let rhs = 0.25 * model.lambda * model.lambda * model.hbar * model.hbar;
    let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    let schwartz_ok = lhs - rhs >= -CONSTRAINT_SLACK * scale;
    let trans_scale = model.lambda.abs().max(model.mu.abs()).max(f64::MIN_POSITIVE);
    let translation_invariant = (model.lambda - model.mu).abs() <= 1e-12 * trans_scale;
    let all = d_pp_positive && d_qq_positive && schwartz_ok;
    let classification = if all {
        Classification::LindbladValid
    } else if translation_invariant {
        Classification::ValidatesUncertaintyViolation
    } else {
        Classification::OutsideLindblad
    };
    ConstraintReport {
        d_pp_positive,
        d_qq_positive,
        schwartz_ok,
        translation_invariant,
        classification,
    }
}

/// Expected verdict of a catalogue entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZooVerdict {
    /// The source fixes the verdict for every admissible magnitude.
    Always(Classification),
    /// The verdict depends on the supplied magnitudes.
    DependsOnParameters,
}

/// Base frame (mass, frequency, hbar) shared by all catalogue templates.
#[derive(Debug, Clone, Copy)]
pub struct ZooFrame {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Default for ZooFrame {
    fn default() -> Self {
        Self {
            m: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }
}

/// Named magnitudes resolving a template's symbolic placeholders.
pub type ZooParams = BTreeMap<String, f64>;

/// One literature parameterization of the master equation.
pub struct ZooEntry {
    pub name: &'static str,
    /// Placeholder names the template requires.
    pub required: &'static [&'static str],
    pub verdict: ZooVerdict,
    pub build: fn(&ZooFrame, &ZooParams) -> Result<OscillatorModel>,
}

fn need(params: &ZooParams, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::UnresolvedPlaceholder(key.to_string()))
}

fn dekker(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let lambda = need(p, "lambda")?;
    OscillatorModel::new(
        f.m,
        f.omega,
        lambda,
        lambda,
        need(p, "D_qq")?,
        need(p, "D_pp")?,
        need(p, "D_pq")?,
        f.hbar,
    )
}

fn hofmann(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "gamma")?;
    let t_star = need(p, "T_star")?;
    let lambda = gamma / (2.0 * f.m);
    OscillatorModel::new(f.m, f.omega, lambda, lambda, 0.0, gamma * t_star, 0.0, f.hbar)
}

fn hasse(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "gamma")?;
    OscillatorModel::new(
        f.m,
        f.omega,
        gamma / 2.0,
        gamma / 2.0,
        0.0,
        need(p, "D")?,
        -need(p, "d")? / 2.0,
        f.hbar,
    )
}

fn spina_weidenmueller_i(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "Gamma")?;
    OscillatorModel::new(
        f.m,
        f.omega,
        gamma / 2.0,
        gamma / 2.0,
        0.0,
        need(p, "D")? / 2.0,
        need(p, "B")? / 2.0,
        f.hbar,
    )
}

fn spina_weidenmueller_ii(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    OscillatorModel::new(
        f.m,
        f.omega,
        need(p, "Gamma")?,
        0.0,
        need(p, "D_R")? / 2.0,
        need(p, "D_p")? / 2.0,
        0.0,
        f.hbar,
    )
}

/// Recovers `(D_qq, D_pp, D_pq)` from complex `D1` and real `D2`.
fn from_d1_d2(f: &ZooFrame, d1: C64, d2: f64, lambda: f64, mu: f64) -> Result<OscillatorModel> {
    let mw = f.m * f.omega;
    let d_qq = f.hbar * (d2 + d1.re) / (2.0 * mw);
    let d_pp = f.hbar * mw * (d2 - d1.re) / 2.0;
    let d_pq = f.hbar * d1.im / 2.0;
    OscillatorModel::new(f.m, f.omega, lambda, mu, d_qq, d_pp, d_pq, f.hbar)
}

fn squeezed_bath(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "gamma")?;
    let m_sq = need(p, "M")?;
    let n_sq = need(p, "N")?;
    from_d1_d2(
        f,
        C64::new(2.0 * gamma * m_sq, 0.0),
        gamma * (2.0 * n_sq + 1.0),
        gamma,
        0.0,
    )
}

fn harmonic_environment(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "gamma")?;
    let n_bar = need(p, "n_bar")?;
    let d_pp = 2.0 * gamma * (n_bar + 0.5) * f.m * f.omega * f.hbar;
    OscillatorModel::new(f.m, f.omega, gamma, gamma, 0.0, d_pp, 0.0, f.hbar)
}

fn correlated_emission_laser(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let l1 = C64::new(need(p, "Lambda1_re")?, need(p, "Lambda1_im")?);
    let l2 = C64::new(need(p, "Lambda2_re")?, need(p, "Lambda2_im")?);
    let l3 = C64::new(need(p, "Lambda3_re")?, need(p, "Lambda3_im")?);
    let l4 = C64::new(need(p, "Lambda4_re")?, need(p, "Lambda4_im")?);
    // D1 + mu = 2 L4, D1 - mu = 2 L3, D2 + lambda + i w = 2 L2, D2 - lambda - i w = 2 L1.
    let mu = l4 - l3;
    if mu.im.abs() > 1e-12 * mu.norm().max(1.0) {
        return Err(Error::Config(
            "correlated-emission parameters give a complex mu".into(),
        ));
    }
    let d1 = l4 + l3;
    let d2c = l1 + l2;
    if d2c.im.abs() > 1e-12 * d2c.norm().max(1.0) {
        return Err(Error::Config(
            "correlated-emission parameters give a complex D2".into(),
        ));
    }
    let lw = l2 - l1;
    let lambda = lw.re;
    let omega = lw.im;
    let frame = ZooFrame {
        m: f.m,
        omega,
        hbar: f.hbar,
    };
    from_d1_d2(&frame, d1, d2c.re, lambda, mu.re)
}

fn jang_yannouleas_i(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "Gamma")?;
    let n_avg = need(p, "n_avg")?;
    let d_qq = (2.0 * n_avg + 1.0) * gamma * f.hbar / (4.0 * f.m * f.omega);
    let d_pp = f.m * f.m * f.omega * f.omega * d_qq;
    OscillatorModel::new(f.m, f.omega, gamma / 2.0, 0.0, d_qq, d_pp, 0.0, f.hbar)
}

fn jang_yannouleas_ii(f: &ZooFrame, p: &ZooParams) -> Result<OscillatorModel> {
    let gamma = need(p, "Gamma")?;
    let n_avg = need(p, "n_avg")?;
    let d_pp = 0.5 * f.hbar * f.m * f.omega * (2.0 * n_avg + 1.0) * gamma;
    OscillatorModel::new(f.m, f.omega, gamma / 2.0, gamma / 2.0, 0.0, d_pp, 0.0, f.hbar)
}

/// The eight literature parameterizations (two of them in two variants).
///
/// Templates carry symbolic placeholders; callers supply the magnitudes.
/// Verdicts marked `Always` are the ones the sources fix independent of the
/// magnitudes (given admissible inputs, e.g. nonnegative occupation numbers).
pub fn model_zoo() -> Vec<ZooEntry> {
    vec![
        ZooEntry {
            name: "dekker",
            required: &["lambda", "D_qq", "D_pp", "D_pq"],
            verdict: ZooVerdict::DependsOnParameters,
            build: dekker,
        },
        ZooEntry {
            name: "hofmann",
            required: &["gamma", "T_star"],
            verdict: ZooVerdict::Always(Classification::ValidatesUncertaintyViolation),
            build: hofmann,
        },
        ZooEntry {
            name: "hasse",
            required: &["gamma", "D", "d"],
            verdict: ZooVerdict::Always(Classification::ValidatesUncertaintyViolation),
            build: hasse,
        },
        ZooEntry {
            name: "spina-weidenmueller-i",
            required: &["Gamma", "D", "B"],
            verdict: ZooVerdict::Always(Classification::ValidatesUncertaintyViolation),
            build: spina_weidenmueller_i,
        },
        ZooEntry {
            name: "spina-weidenmueller-ii",
            required: &["Gamma", "D_p", "D_R"],
            verdict: ZooVerdict::DependsOnParameters,
            build: spina_weidenmueller_ii,
        },
        ZooEntry {
            name: "squeezed-bath",
            required: &["gamma", "M", "N"],
            verdict: ZooVerdict::DependsOnParameters,
            build: squeezed_bath,
        },
        ZooEntry {
            name: "harmonic-environment",
            required: &["gamma", "n_bar"],
            verdict: ZooVerdict::Always(Classification::ValidatesUncertaintyViolation),
            build: harmonic_environment,
        },
        ZooEntry {
            name: "correlated-emission-laser",
            required: &[
                "Lambda1_re",
                "Lambda1_im",
                "Lambda2_re",
                "Lambda2_im",
                "Lambda3_re",
                "Lambda3_im",
                "Lambda4_re",
                "Lambda4_im",
            ],
            verdict: ZooVerdict::DependsOnParameters,
            build: correlated_emission_laser,
        },
        ZooEntry {
            name: "jang-yannouleas-i",
            required: &["Gamma", "n_avg"],
            verdict: ZooVerdict::Always(Classification::LindbladValid),
            build: jang_yannouleas_i,
        },
        ZooEntry {
            name: "jang-yannouleas-ii",
            required: &["Gamma", "n_avg"],
            verdict: ZooVerdict::Always(Classification::ValidatesUncertaintyViolation),
            build: jang_yannouleas_ii,
        },
    ]
}

/// Looks up a catalogue entry by name.
pub fn zoo_entry(name: &str) -> Result<ZooEntry> {
    model_zoo()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Config(format!("unknown zoo model `{name}`")))
}
