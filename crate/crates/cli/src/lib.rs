// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runner for the damped-open-system library: JSON configs in,
//! CSV/JSON artifacts out, plus verification scenarios pairing every
//! analytic path with an independent numerical oracle.

pub mod output;
pub mod presets;
pub mod runner;
pub mod scenario;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

/// CLI error taxonomy; each variant maps onto a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit 2: malformed configuration or missing oracle pairing.
    #[error("schema violation: {0}")]
    Schema(String),
    /// Exit 3: the model violates the fundamental constraints and
    /// `--strict` was requested.
    #[error("constraint violation: {0}")]
    Constraint(String),
    /// Exit 4: a numerical operation failed.
    #[error("numerical failure: {0}")]
    Numerics(#[from] lindblad_lab::Error),
    /// Exit 4: filesystem trouble writing artifacts.
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Numerics(_) | CliError::Io(_) => 4,
        }
    }
}

/// Resolves a config argument: a readable file path first, then a built-in
/// preset name.
pub fn load_scenario(arg: &str) -> Result<scenario::Scenario, CliError> {
    let path = PathBuf::from(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(e.to_string()))?;
        return scenario::Scenario::from_json(&text);
    }
    presets::by_name(arg).ok_or_else(|| {
        CliError::Schema(format!(
            "`{arg}` is neither a readable config file nor a preset name"
        ))
    })
}

/// Output directory resolution: `LINDBLAD_LAB_OUT` overrides `--out`,
/// which defaults to the current directory.
pub fn resolve_out_dir(flag: Option<&str>) -> PathBuf {
    if let Ok(env) = std::env::var("LINDBLAD_LAB_OUT") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from(flag.unwrap_or("."))
}
