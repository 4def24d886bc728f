// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use super::dataset::TomographyDataset;
use super::hamiltonian_part;
use crate::cp::{cp_penalty, Supergenerator};
use crate::error::{Error, Result};
use crate::matfun::logm_principal;

/// Single-time logarithm estimate together with its CP penalty.
#[derive(Debug, Clone)]
pub struct NaiveEstimate {
    pub estimate: Supergenerator,
    /// `None` when the estimate is not trace preserving enough to test.
    pub cp_penalty: Option<f64>,
}

/// `R = (−iH − log P_m) / t_m` with the principal logarithm.
///
/// Correct only when `‖iH‖ t_m` stays well inside the principal strip;
/// larger rotations alias by multiples of `2πi` and the estimate is
/// meaningless.
pub fn naive_log_estimate(ds: &TomographyDataset, index: usize) -> Result<NaiveEstimate> {
    let ps = ds.propagators()?;
    let p = ps.get(index).ok_or_else(|| {
        Error::InvalidDataset(format!("time index {index} out of range ({} points)", ps.len()))
    })?;
    let t = ds.times[index];
    let ih = hamiltonian_part(ds)?;
    let log = logm_principal(p)?;
    let r = (-&ih - log).unscale(t);
    let estimate = Supergenerator::new(ds.n, ih, r, crate::liouville::BasisKind::Zeeman)?;
    let cp_penalty = cp_penalty(&estimate).ok();
    Ok(NaiveEstimate { estimate, cp_penalty })
}
