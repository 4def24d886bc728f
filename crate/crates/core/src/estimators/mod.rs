// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Supergenerator estimators: single-time logarithm, Richardson
//! extrapolation, eigenvalue-modulus averaging and the penalized fit.

pub mod dataset;
mod eiglog;
pub mod fit;
mod naive;
pub mod nelder_mead;
mod richardson;
mod state_pairs;

pub use dataset::{Records, StatePair, TomographyDataset};
pub use eiglog::eigenlog_average_estimate;
pub use fit::{cp_constrained_fit, FitConfig, FitReport, Parameterization, Structure};
pub use naive::{naive_log_estimate, NaiveEstimate};
pub use richardson::{richardson_estimate, richardson_relaxation};
pub use state_pairs::propagator_from_state_pairs;

use crate::error::Result;
use crate::liouville::matrix::{ComplexMatrix, I};
use crate::liouville::commutation_superoperator;

/// `i` times the dataset Hamiltonian's commutation superoperator (Zeeman basis).
pub fn hamiltonian_part(ds: &TomographyDataset) -> Result<ComplexMatrix> {
    Ok(commutation_superoperator(&ds.hamiltonian)? * I)
}
