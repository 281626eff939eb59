// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the analytic propagators and oracles.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Model parameters violate a hard type invariant (m, omega, hbar > 0, ...).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A named template parameter was not supplied.
    #[error("unresolved placeholder `{0}` in model template")]
    UnresolvedPlaceholder(String),

    /// The requested closed form needs a relaxing steady state that does not exist.
    #[error("no steady state: {0}")]
    NoSteadyState(String),

    /// Degenerate eigenvalues or a degenerate gauge; the closed form does not apply.
    #[error("degenerate case, use the numerical path: {0}")]
    Degenerate(String),

    /// A quantity that must be real came out with a large imaginary residue,
    /// or two algebraically identical routes disagree.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    /// Truncated-basis evolution leaked probability into the boundary level.
    #[error("truncation leakage: boundary occupancy {occupancy:.3e} at dim {dim}; retry with dim >= {suggested}")]
    TruncationLeakage {
        occupancy: f64,
        dim: usize,
        suggested: usize,
    },

    /// Density-matrix element evaluation would overflow.
    #[error("overflow evaluating density matrix element ({m},{n}); reduce the basis size")]
    Overflow { m: usize, n: usize },

    /// Operating point sits on a pole of a closed-form expression.
    #[error("singular operating point: {0}")]
    SingularOperatingPoint(String),

    /// Scenario or configuration input is structurally invalid.
    #[error("configuration error: {0}")]
    Config(String),
}
