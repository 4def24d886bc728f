// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense matrix functions.

mod eig;
mod expm;
mod logm;

pub use eig::{eig, hermitian_eigenvalues, schur, EigenDecomposition};
pub use expm::{expm, expm_generic};
pub use logm::{logm_principal, BRANCH_CUT_TOL};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::liouville::matrix::{hermitize, ComplexMatrix};

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.norm()
}

/// Nearest positive-semidefinite matrix in Frobenius norm to the Hermitian
/// part of `a`, by clipping negative eigenvalues.
pub fn psd_project(a: &ComplexMatrix) -> ComplexMatrix {
    let se = nalgebra::SymmetricEigen::new(hermitize(a));
    let clipped = DVector::from_iterator(
        se.eigenvalues.len(),
        se.eigenvalues.iter().map(|&x| Complex64::new(x.max(0.0), 0.0)),
    );
    let v = &se.eigenvectors;
    hermitize(&(v * ComplexMatrix::from_diagonal(&clipped) * v.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::matrix::{from_real_rows, max_abs_diff};

    #[test]
    fn norms() {
        assert_eq!(frobenius_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        assert!((frobenius_norm(&ComplexMatrix::identity(4, 4)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn psd_project_clips_diagonal() {
        let p = psd_project(&from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]));
        assert!(max_abs_diff(&p, &from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])) < 1e-15);
        let id = ComplexMatrix::identity(3, 3);
        assert!(max_abs_diff(&psd_project(&id), &id) < 1e-14);
    }
}
