// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

pub mod cp;
pub mod error;
pub mod estimators;
pub mod fixtures;
pub mod hadamard;
pub mod liouville;
pub mod matfun;
pub mod synth;

pub use error::{Error, ErrorKind, Result};
