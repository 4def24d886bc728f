// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("length {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("eigenvalue {re:.6e}{im:+.6e}i lies on the branch cut of the principal logarithm")]
    BranchCut { re: f64, im: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("map is not completely positive (most negative eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),

    #[error("generator is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("operator basis is rank deficient or incomplete")]
    RankDeficient,

    #[error("expected a matrix in the {expected} basis, got {got}")]
    WrongBasis { expected: String, got: String },

    #[error("non-finite objective at parameters {params:?}")]
    NonFinite { params: Vec<f64> },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Domain,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Json(_) | Error::Invalid(_) | Error::InvalidDataset(_) => ErrorKind::Input,
            Error::Singular
            | Error::BranchCut { .. }
            | Error::NoConvergence(_)
            | Error::NonFinite { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
