// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Analytic solution set for linearly damped open quantum systems, with
//! independent numerical oracles for every closed form.
//!
//! The library covers the single damped harmonic oscillator (moments,
//! characteristic function, quasiprobability distributions, Wigner flow,
//! number-basis density matrix), two coupled damped oscillators, angular
//! momentum damping, dissipative tunneling spectra and extended optical
//! Bloch equations. Every module exposes the closed-form propagators next
//! to a plain ODE integration path so results can be cross-checked at
//! machine precision.

pub mod angmom;
pub mod charfun;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod moments;
pub mod optics;
pub mod oracle;
pub mod quasiprob;
pub mod sweep;
pub mod tunnel;
pub mod twoosc;
pub mod wigner;

mod error;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex double shorthand matching the ladder-operator algebra.
pub type C64 = num_complex::Complex64;
