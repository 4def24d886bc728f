// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::Supergenerator;
use crate::error::{Error, Result};
use crate::liouville::matrix::{self, exact_sqrt, hermitize, ComplexMatrix};
use crate::liouville::{unvec, vec, BasisKind};
use crate::matfun::{eig, hermitian_eigenvalues, psd_project};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiSource {
    Propagator,
    Generator,
}

#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub n: usize,
    pub matrix: ComplexMatrix,
    pub source: ChoiSource,
}

/// Index reshuffle `C[(a,i),(b,j)] = S[(a,b),(i,j)]`, where a pair `(r,c)`
/// denotes the column-stacked position `c·N + r`.
///
/// Equivalently `C = Σᵢⱼ |i⟩⟨j| ⊗ P(|i⟩⟨j|)`, so the eigenvectors of `C`
/// are column-stacked Kraus (or Lindblad) operators. The map is an
/// involution.
pub fn reshuffle(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = matrix::ensure_square(s)?;
    let n = exact_sqrt(d).ok_or(Error::NotPerfectSquare(d))?;
    Ok(ComplexMatrix::from_fn(d, d, |row, col| {
        let (i, a) = (row / n, row % n);
        let (j, b) = (col / n, col % n);
        s[(b * n + a, j * n + i)]
    }))
}

pub fn choi_from_supermatrix(s: &ComplexMatrix) -> Result<ChoiMatrix> {
    let d = s.nrows();
    Ok(ChoiMatrix {
        n: exact_sqrt(d).unwrap_or(0),
        matrix: reshuffle(s)?,
        source: ChoiSource::Propagator,
    })
}

/// Kraus operators `K` with `P(ρ) = Σ K ρ K†`, from the Choi spectrum.
pub fn kraus_from_propagator(p: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let c = reshuffle(p)?;
    let e = eig(&hermitize(&c), true)?;
    let lowest = e.values.last().map_or(0.0, |z| z.re);
    if lowest < -tol {
        return Err(Error::NotCompletelyPositive(lowest));
    }
    e.values
        .iter()
        .enumerate()
        .filter(|(_, z)| z.re > tol)
        .map(|(k, z)| {
            let v = e.vectors.columns(k, 1).into_owned();
            Ok(unvec(&v)?.scale(z.re.sqrt()))
        })
        .collect()
}

/// Nearest supermatrix (Frobenius) whose Choi matrix is PSD, together with
/// the negative eigenvalue mass removed.
pub fn cp_filter_with_mass(p: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let c = reshuffle(p)?;
    let mass: f64 = hermitian_eigenvalues(&c).iter().filter(|&&x| x < 0.0).fold(0.0, |acc, x| acc - x);
    Ok((reshuffle(&psd_project(&c))?, mass))
}

pub fn cp_filter_propagator(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(cp_filter_with_mass(p)?.0)
}

/// `E = I − |v⟩⟨v|` with `v = vec(I)/√N`.
pub fn identity_complement_projector(n: usize) -> ComplexMatrix {
    let v = vec(&ComplexMatrix::identity(n, n)).expect("square").unscale((n as f64).sqrt());
    ComplexMatrix::identity(n * n, n * n) - &v * v.adjoint()
}

/// Trace-preservation tolerance for relaxation supermatrices.
pub const TRACE_TOL: f64 = 1e-8;

/// `E · Choi(−R) · E` for a Zeeman-basis relaxation supermatrix, without checks.
pub(crate) fn projected_choi_zeeman(r_zee: &ComplexMatrix, e: &ComplexMatrix) -> Result<ComplexMatrix> {
    let c = reshuffle(&(-r_zee))?;
    Ok(hermitize(&(e * c * e)))
}

pub fn projected_choi(g: &Supergenerator) -> Result<ComplexMatrix> {
    let z = g.to_basis(BasisKind::Zeeman)?;
    let id = vec(&ComplexMatrix::identity(g.n, g.n))?;
    let dev = matrix::max_abs(&(id.adjoint() * &z.relaxation_part));
    if dev > TRACE_TOL * z.relaxation_part.norm().max(1.0) {
        return Err(Error::NotTracePreserving(dev));
    }
    projected_choi_zeeman(&z.relaxation_part, &identity_complement_projector(g.n))
}

/// Sum of squared negative eigenvalues of a Hermitian matrix.
pub fn negative_square_sum(m: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().filter(|&&x| x < 0.0).fold(0.0, |acc, x| acc + x * x)
}

pub fn cp_penalty(g: &Supergenerator) -> Result<f64> {
    Ok(negative_square_sum(&projected_choi(g)?))
}
