// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! File configuration and its merge with command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::{BasisArg, Method, StructureArg};
use crate::error::{CliError, CliResult};

/// Settings a config file may provide. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub times: Option<Vec<f64>>,
    pub noise_sigma: Option<f64>,
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub structure: Option<StructureArg>,
    pub penalty_weight: Option<f64>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub basis: Option<BasisArg>,
    pub degeneracy_tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })
    }
}

pub const DEFAULT_TIMES: [f64; 4] = [0.4, 0.8, 1.6, 3.2];

/// `flag`, else the config value, else `default`.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
