// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance harness for the workspace. The criteria live in
//! `tests/acceptance.rs`; run them with
//! `cargo test -p lindblad-lab-acceptance -- --nocapture` to see one
//! pass/fail line per criterion.
