// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use super::dataset::StatePair;
use crate::error::{Error, Result};
use crate::liouville::matrix::ComplexMatrix;
use crate::liouville::vec;

/// Singular values below this fraction of the largest count as rank loss.
pub const RANK_TOL: f64 = 1e-10;

/// Least-squares superpropagator `P` with `P vec(ρ_in) ≈ vec(ρ_out)`.
pub fn propagator_from_state_pairs(pairs: &[StatePair]) -> Result<ComplexMatrix> {
    let first = pairs.first().ok_or(Error::RankDeficient)?;
    let n = first.input.nrows();
    let d = n * n;
    if pairs.len() < d {
        return Err(Error::RankDeficient);
    }
    let mut x = ComplexMatrix::zeros(d, pairs.len());
    let mut y = ComplexMatrix::zeros(d, pairs.len());
    for (k, pair) in pairs.iter().enumerate() {
        for m in [&pair.input, &pair.output] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
            }
        }
        x.set_column(k, &vec(&pair.input)?.column(0));
        y.set_column(k, &vec(&pair.output)?.column(0));
    }
    // Solve Xᵀ Pᵀ = Yᵀ in the least-squares sense.
    let svd = x.transpose().svd(true, true);
    let largest = svd.singular_values.max();
    if svd.singular_values.min() <= RANK_TOL * largest {
        return Err(Error::RankDeficient);
    }
    let pt = svd
        .solve(&y.transpose(), RANK_TOL * largest)
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(pt.transpose())
}
