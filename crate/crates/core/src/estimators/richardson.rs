// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Richardson extrapolation of a symmetric central difference about `t = 0`.
//!
//! With the Hamiltonian rotation split symmetrically around the data,
//! `F(t) = e^{itH/2} P(t) e^{itH/2}` satisfies `F(−t) = F(t)⁻¹`, so
//! `(F(t) − F(−t)) / 2t = −R + c₂t² + c₄t⁴ + …` contains only even powers.
//! On a doubling grid each elimination step removes the next power of
//! `t²`, leaving an error of order `t₁^{2M}`.

use super::dataset::TomographyDataset;
use super::hamiltonian_part;
use crate::cp::Supergenerator;
use crate::error::{Error, Result};
use crate::liouville::matrix::ComplexMatrix;
use crate::liouville::BasisKind;
use crate::matfun::expm;

/// Central difference `(F(t) − F(−t)) / 2t`.
fn central_difference(ih: &ComplexMatrix, p: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let forward = expm(ih, t / 2.0)?;
    let backward = expm(ih, -t / 2.0)?;
    let p_inv = p.clone().try_inverse().ok_or(Error::Singular)?;
    Ok((&forward * p * &forward - &backward * p_inv * &backward).unscale(2.0 * t))
}

/// Extrapolation tableau over the full dataset; returns the relaxation supermatrix.
pub fn richardson_relaxation(ih: &ComplexMatrix, propagators: &[ComplexMatrix], times: &[f64]) -> Result<ComplexMatrix> {
    let m = times.len();
    if m == 0 || propagators.len() != m {
        return Err(Error::InvalidDataset("richardson needs one propagator per time".into()));
    }
    // Column c holds data at time t_{M−c}: longest time first, so the last
    // column rests on the shortest time and carries the highest order.
    let mut prev: Vec<ComplexMatrix> = Vec::new();
    for c in 0..m {
        let k = m - 1 - c;
        let mut col = Vec::with_capacity(c + 1);
        col.push(central_difference(ih, &propagators[k], times[k])?);
        for level in 0..c {
            let factor = 4f64.powi(level as i32 + 1) - 1.0;
            let next = &col[level] + (&col[level] - &prev[level]).unscale(factor);
            col.push(next);
        }
        prev = col;
    }
    Ok(-prev.pop().expect("non-empty tableau"))
}

/// Richardson estimate; requires `t_m = 2^(m−1) t_1`.
pub fn richardson_estimate(ds: &TomographyDataset) -> Result<Supergenerator> {
    if !ds.is_doubling_grid() {
        return Err(Error::InvalidDataset(
            "richardson requires a doubling time grid (t_m = 2^(m-1) t_1)".into(),
        ));
    }
    let ih = hamiltonian_part(ds)?;
    let r = richardson_relaxation(&ih, &ds.propagators()?, &ds.times)?;
    Supergenerator::new(ds.n, ih, r, BasisKind::Zeeman)
}
