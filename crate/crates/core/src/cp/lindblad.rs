// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::choi::projected_choi;
use super::Supergenerator;
use crate::error::{Error, Result};
use crate::liouville::matrix::{self, trace, ComplexMatrix};
use crate::liouville::unvec;
use crate::matfun::eig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Spectral,
    HadamardT1,
    HadamardT2Nonadiabatic,
    HadamardT2Adiabatic,
}

/// One dissipative channel. The operator carries its rate: `weight = ‖L‖²_F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindbladTerm {
    pub weight: f64,
    #[serde(with = "matrix::json")]
    pub matrix: ComplexMatrix,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl LindbladTerm {
    pub fn new(matrix: ComplexMatrix, provenance: Provenance) -> Self {
        LindbladTerm {
            weight: matrix.norm_squared(),
            matrix,
            provenance,
            label: None,
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LindbladSystem {
    pub n: usize,
    pub terms: Vec<LindbladTerm>,
}

impl LindbladSystem {
    pub fn new(n: usize) -> Self {
        LindbladSystem { n, terms: Vec::new() }
    }

    pub fn push(&mut self, term: LindbladTerm) {
        self.terms.push(term);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.weight).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn extend(&mut self, other: LindbladSystem) {
        self.terms.extend(other.terms);
    }
}

/// Zeeman-basis supermatrix of `ρ ↦ Σ (LρL† − ½{L†L, ρ})`.
pub fn dissipator_from_lindblads(ls: &LindbladSystem) -> Result<ComplexMatrix> {
    let n = ls.n;
    let id = ComplexMatrix::identity(n, n);
    let mut d = ComplexMatrix::zeros(n * n, n * n);
    for term in &ls.terms {
        let l = &term.matrix;
        if l.nrows() != n || l.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: l.nrows() });
        }
        let ldl = l.adjoint() * l;
        d += l.conjugate().kronecker(l);
        d -= id.kronecker(&ldl).scale(0.5);
        d -= ldl.transpose().kronecker(&id).scale(0.5);
    }
    Ok(d)
}

/// Rotates `l` by the global phase that maximizes its Hermitian part, then
/// fixes the sign so the dominant entry of `l + l†` is positive.
pub fn fix_phase(l: &ComplexMatrix) -> ComplexMatrix {
    let t = trace(&(l * l));
    let theta = if t.norm() > 1e-300 { -t.arg() / 2.0 } else { 0.0 };
    let mut out = l * Complex64::from_polar(1.0, theta);
    let herm = &out + out.adjoint();
    let n = herm.nrows();
    let diag_max = (0..n).map(|k| herm[(k, k)].norm()).fold(0.0, f64::max);
    let pick = if diag_max > 1e-12 * herm.norm().max(f64::MIN_POSITIVE) {
        (0..n)
            .map(|k| herm[(k, k)])
            .find(|z| z.norm() >= diag_max * (1.0 - 1e-9))
    } else {
        let all_max = matrix::max_abs(&herm);
        herm.iter().copied().find(|z| z.norm() >= all_max * (1.0 - 1e-9) && all_max > 0.0)
    };
    if pick.is_some_and(|z| z.re < 0.0) {
        out = -out;
    }
    out
}

/// Default eigenvalue cut: `1e−8 · trace` of the projected Choi matrix.
pub fn default_cut(g: &Supergenerator) -> Result<f64> {
    Ok(1e-8 * trace(&projected_choi(g)?).re.max(0.0))
}

/// Lindblad operators from the projected Choi spectrum of `g`.
///
/// Eigenvalues above `tol` become channels `√λ · unvec(v)`; an eigenvalue
/// below `−tol` is an error.
pub fn lindblads_from_generator(g: &Supergenerator, tol: f64) -> Result<LindbladSystem> {
    let m = projected_choi(g)?;
    let e = eig(&m, true)?;
    let lowest = e.values.last().map_or(0.0, |z| z.re);
    if lowest < -tol {
        return Err(Error::NotCompletelyPositive(lowest));
    }
    let mut out = LindbladSystem::new(g.n);
    for (k, z) in e.values.iter().enumerate() {
        if z.re <= tol {
            continue;
        }
        let v = e.vectors.columns(k, 1).into_owned();
        let l = fix_phase(&unvec(&v)?.scale(z.re.sqrt()));
        out.push(LindbladTerm::new(l, Provenance::Spectral));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::matrix::{c, max_abs_diff};
    use crate::liouville::{paulis, vec};

    #[test]
    fn empty_system_gives_zero() {
        let d = dissipator_from_lindblads(&LindbladSystem::new(3)).unwrap();
        assert_eq!(matrix::max_abs(&d), 0.0);
    }

    #[test]
    fn single_qubit_dephasing_rate() {
        let mut ls = LindbladSystem::new(2);
        ls.push(LindbladTerm::new(paulis()[3].unscale(2f64.sqrt()), Provenance::Spectral));
        let d = dissipator_from_lindblads(&ls).unwrap();
        let want = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 0.0),
        ]));
        assert!(max_abs_diff(&d, &want) < 1e-15);
        let id = vec(&ComplexMatrix::identity(2, 2)).unwrap();
        assert!(matrix::max_abs(&(id.adjoint() * d)) < 1e-15);
    }

    #[test]
    fn phase_makes_anti_hermitian_hermitian() {
        let x = &paulis()[1] * c(0.0, 1.0);
        let fixed = fix_phase(&x);
        assert!(max_abs_diff(&fixed, &fixed.adjoint()) < 1e-14);
        let z = &paulis()[3] * c(-1.0, 0.0);
        assert!(fix_phase(&z)[(0, 0)].re > 0.0);
    }

    #[test]
    fn zero_relaxation_has_no_channels() {
        let g = Supergenerator::new(
            2,
            ComplexMatrix::zeros(4, 4),
            ComplexMatrix::zeros(4, 4),
            crate::liouville::BasisKind::Zeeman,
        )
        .unwrap();
        assert!(lindblads_from_generator(&g, 1e-12).unwrap().is_empty());
    }
}
