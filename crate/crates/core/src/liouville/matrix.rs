// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices and their JSON form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense complex matrix used for operators, supermatrices and Choi matrices.
pub type ComplexMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    ComplexMatrix::from_fn(r, cols, |i, j| c(rows[i][j], 0.0))
}

pub fn from_real(m: &DMatrix<f64>) -> ComplexMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn real_part(m: &ComplexMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

/// Integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Relative deviation ‖m − m†‖_F / ‖m‖_F (zero for the zero matrix).
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / norm
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && hermitian_deviation(m) <= tol
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && {
        let n = m.nrows();
        (m.adjoint() * m - ComplexMatrix::identity(n, n)).norm() <= tol
    }
}

/// True when `m` is Hermitian and its smallest eigenvalue is at least `-tol`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> bool {
    is_hermitian(m, tol.max(1e-12))
        && crate::matfun::hermitian_eigenvalues(&hermitize(m))
            .iter()
            .all(|&x| x >= -tol)
}

/// (m + m†)/2.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl MatrixRepr {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixRepr {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Invalid("matrix must have at least one row and column".into()));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Invalid(format!(
                "matrix declares {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c(re, im)
        }))
    }
}

/// Serde adapter for the `{"rows", "cols", "data": [[re, im], ...]}` layout.
///
/// Use with `#[serde(with = "lindfit::liouville::matrix::json")]`.
pub mod json {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        MatrixRepr::deserialize(d)?
            .into_matrix()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<ComplexMatrix>`.
pub mod json_vec {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let reprs: Vec<_> = ms.iter().map(MatrixRepr::from_matrix).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<ComplexMatrix>, D::Error> {
        Vec::<MatrixRepr>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_matrix().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for real matrices as a list of rows.
pub mod real_json {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        real_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Real matrix from equal-length rows.
pub fn real_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("matrix rows must be non-empty and of equal length".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

/// Standalone matrix document (a file containing a single matrix).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(transparent)]
pub struct MatrixDoc(#[serde(with = "json")] pub ComplexMatrix);

pub fn to_json(m: &ComplexMatrix) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MatrixDoc(m.clone()))?)
}

pub fn from_json(s: &str) -> Result<ComplexMatrix> {
    Ok(serde_json::from_str::<MatrixDoc>(s)?.0)
}
