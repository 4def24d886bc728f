// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::matrix::{ensure_square, hermitian_deviation, hermitize, ComplexMatrix};
use crate::liouville::HERMITIAN_TOL;

const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// Eigenvectors as columns, each of unit 2-norm.
    pub vectors: ComplexMatrix,
    pub is_hermitian_path: bool,
}

impl EigenDecomposition {
    /// `V Λ V⁻¹` (or `V Λ V†` on the Hermitian path).
    pub fn recompose(&self) -> Result<ComplexMatrix> {
        let lambda = ComplexMatrix::from_diagonal(&DVector::from_vec(self.values.clone()));
        if self.is_hermitian_path {
            return Ok(&self.vectors * lambda * self.vectors.adjoint());
        }
        let inv = self.vectors.clone().try_inverse().ok_or(Error::Singular)?;
        Ok(&self.vectors * lambda * inv)
    }
}

/// Upper-triangular Schur factor `T` and unitary `Q` with `a = Q T Q†`.
pub fn schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    ensure_square(a)?;
    let s = Schur::try_new(a.clone(), f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("Schur iteration"))?;
    let (q, mut t) = s.unpack();
    for j in 0..t.ncols() {
        for i in j + 1..t.nrows() {
            t[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok((q, t))
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitize(a)).eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let se = SymmetricEigen::try_new(hermitize(a), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence("Hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));
    let n = a.nrows();
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
        values.push(Complex64::new(se.eigenvalues[src], 0.0));
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        is_hermitian_path: true,
    })
}

/// Eigenvectors of an upper-triangular matrix by back substitution.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.nrows();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * scale;
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[(i, k)] = -s / d;
        }
        let norm = y.column(k).norm();
        y.column_mut(k).unscale_mut(norm);
    }
    y
}

fn general_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let (q, t) = schur(a)?;
    let y = triangular_eigenvectors(&t);
    let raw = q * y;
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    let key = |i: usize| t[(i, i)];
    order.sort_by(|&i, &j| {
        let (a, b) = (key(i), key(j));
        b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
    });
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let col = raw.column(src);
        vectors.set_column(dst, &col.unscale(col.norm()));
        values.push(key(src));
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        is_hermitian_path: false,
    })
}

/// Eigendecomposition, sorted by descending real part then imaginary part.
pub fn eig(a: &ComplexMatrix, hermitian: bool) -> Result<EigenDecomposition> {
    ensure_square(a)?;
    if hermitian {
        let dev = hermitian_deviation(a);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        hermitian_eig(a)
    } else {
        general_eig(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::matrix::{c, from_real_rows, max_abs_diff};

    #[test]
    fn diagonal_sorted() {
        let d = from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, -2.0]]);
        for herm in [true, false] {
            let e = eig(&d, herm).unwrap();
            let v: Vec<f64> = e.values.iter().map(|z| z.re).collect();
            assert_eq!(v, vec![3.0, 1.0, -2.0]);
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = eig(&x, true).unwrap();
        assert!((e.values[0].re - 1.0).abs() < 1e-14 && (e.values[1].re + 1.0).abs() < 1e-14);
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!(max_abs_diff(&gram, &ComplexMatrix::identity(2, 2)) < 1e-14);
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let r = from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = eig(&r, false).unwrap();
        assert!((e.values[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((e.values[1] - c(0.0, -1.0)).norm() < 1e-14);
        assert!(max_abs_diff(&e.recompose().unwrap(), &r) < 1e-13);
    }

    #[test]
    fn non_hermitian_rejected_on_hermitian_path() {
        let m = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig(&m, true), Err(Error::NotHermitian(_))));
    }
}
