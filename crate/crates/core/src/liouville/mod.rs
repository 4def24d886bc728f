// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Liouville-space algebra.
//!
//! Density matrices are vectorized by stacking columns: entry `m[(i, k)]`
//! lands at index `k * N + i`. Under this convention `vec(A X B) =
//! (Bᵀ ⊗ A) vec(X)`, and every superoperator formula in the crate is
//! written against it.

pub mod basis;
pub mod matrix;

pub use basis::{
    basis_change_matrix, convert_superoperator, BasisKind, OperatorBasis, COHERENCE_ORDER_BLOCKS, TRANSITION_BLOCKS,
};
pub use matrix::ComplexMatrix;

use crate::error::{Error, Result};
use matrix::{c, exact_sqrt, hermitian_deviation, ONE, ZERO};

/// Default relative tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Column-stacks a square matrix into an `N² × 1` column.
pub fn vec(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix::ensure_square(m)?;
    Ok(ComplexMatrix::from_column_slice(m.len(), 1, m.as_slice()))
}

/// Inverse of [`vec`]. Accepts a column or row of perfect-square length.
pub fn unvec(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if v.ncols() != 1 && v.nrows() != 1 {
        return Err(Error::Invalid(format!(
            "expected a vector, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let n = exact_sqrt(v.len()).ok_or(Error::NotPerfectSquare(v.len()))?;
    let data: Vec<_> = v.iter().copied().collect();
    Ok(ComplexMatrix::from_column_slice(n, n, &data))
}

/// Superoperator of `ρ ↦ hρ − ρh`, i.e. `I ⊗ h − hᵀ ⊗ I`.
pub fn commutation_superoperator(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = matrix::ensure_square(h)?;
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let id = ComplexMatrix::identity(n, n);
    Ok(id.kronecker(h) - h.transpose().kronecker(&id))
}

/// Traceless Hamiltonian whose commutation superoperator is `hc`.
///
/// Diagonal block `k` of `I ⊗ H − Hᵀ ⊗ I` equals `H − H_kk I`, so the
/// block average is the traceless part of `H`.
pub fn hamiltonian_from_commutator(hc: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = matrix::ensure_square(hc)?;
    let n = exact_sqrt(d).ok_or(Error::NotPerfectSquare(d))?;
    let mut h = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        h += hc.view((k * n, k * n), (n, n));
    }
    Ok(h.unscale(n as f64))
}

/// Pauli matrices `[I, X, Y, Z]`.
pub fn paulis() -> [ComplexMatrix; 4] {
    [
        ComplexMatrix::identity(2, 2),
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Two-qubit Pauli product `σ_a ⊗ σ_b` (indices into [`paulis`]).
pub fn pauli2(a: usize, b: usize) -> ComplexMatrix {
    let p = paulis();
    p[a].kronecker(&p[b])
}

/// Chemical shift of the first spin and scalar coupling, both in Hz.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TwoSpinHamiltonian {
    pub nu1: f64,
    pub j: f64,
}

impl TwoSpinHamiltonian {
    /// Parameters of the dibromothiophene sample used throughout the tests.
    pub const DIBROMOTHIOPHENE: TwoSpinHamiltonian = TwoSpinHamiltonian { nu1: 161.63, j: 5.77 };
}

/// `π (ν₁ σz¹ + J/2 σ¹·σ²)` in rad/s, computational (Zeeman) ordering.
pub fn two_spin_hamiltonian(spec: TwoSpinHamiltonian) -> ComplexMatrix {
    let dot = pauli2(1, 1) + pauli2(2, 2) + pauli2(3, 3);
    (pauli2(3, 0).scale(spec.nu1) + dot.scale(spec.j / 2.0)).scale(std::f64::consts::PI)
}
