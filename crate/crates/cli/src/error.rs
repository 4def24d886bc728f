// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;

use lindfit::ErrorKind;

#[derive(Debug)]
pub enum CliError {
    Core(lindfit::Error),
    Io { path: PathBuf, source: std::io::Error },
    Parse { path: PathBuf, message: String },
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Domain => 3,
                ErrorKind::Numerical => 4,
            },
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
        }
    }

    pub fn hint(&self) -> Option<&'static str> {
        use lindfit::Error as E;
        match self {
            CliError::Core(E::BranchCut { .. }) => {
                Some("the principal logarithm is undefined here; try --method richardson or --method eiglog")
            }
            CliError::Core(E::NoConvergence(_)) => Some("raise --max-iter or loosen --tol"),
            CliError::Core(E::WrongBasis { .. }) => Some("convert the generator first with `lindfit convert --basis ...`"),
            CliError::Core(E::NotCompletelyPositive(_)) => {
                Some("the rates are not completely positive; fit with --method cpfit first")
            }
            CliError::Core(E::InvalidDataset(msg)) if msg.contains("doubling") => {
                Some("simulate or measure at times t, 2t, 4t, ... or use --method eiglog")
            }
            _ => None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lindfit::Error> for CliError {
    fn from(e: lindfit::Error) -> Self {
        CliError::Core(e)
    }
}
