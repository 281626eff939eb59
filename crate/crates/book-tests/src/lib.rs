// Copyright 2026 Lindblad Lab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Placeholder.
