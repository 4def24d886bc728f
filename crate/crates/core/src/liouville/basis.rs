// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Operator bases and superoperator basis changes.
//!
//! Elements are stored unnormalized. A supermatrix "in basis B" is the
//! matrix of the map on coefficient vectors with respect to the
//! normalized elements of B, so changing basis is a unitary similarity
//! whenever both bases are orthogonal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::{ensure_square, ComplexMatrix};
use super::{pauli2, vec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Pauli product operators.
    Cartesian,
    /// Hermitian two-spin basis ordered by coherence order.
    Transition,
    /// Elementary matrices `|r⟩⟨c|`, in column-stacking order.
    Zeeman,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Cartesian => "cartesian",
            BasisKind::Transition => "transition",
            BasisKind::Zeeman => "zeeman",
        }
    }

    /// Scale at which supermatrices in this basis are reported.
    ///
    /// Hermitian-basis matrices are printed at half the Zeeman scale, so a
    /// conversion from a Hermitian basis to the Zeeman basis carries a
    /// factor of 2.
    pub fn report_scale(self) -> f64 {
        match self {
            BasisKind::Zeeman => 1.0,
            BasisKind::Cartesian | BasisKind::Transition => 0.5,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cartesian" => Ok(BasisKind::Cartesian),
            "transition" => Ok(BasisKind::Transition),
            "zeeman" => Ok(BasisKind::Zeeman),
            other => Err(Error::Invalid(format!(
                "unknown basis '{other}' (expected cartesian, transition or zeeman)"
            ))),
        }
    }
}

/// Transition-basis index blocks sharing coherence structure: identity,
/// populations, zero-quantum, single-quantum, double-quantum.
pub const TRANSITION_BLOCKS: [std::ops::Range<usize>; 5] = [0..1, 1..4, 4..6, 6..14, 14..16];

/// Transition-basis index ranges grouped by coherence order 0, 1, 2.
pub const COHERENCE_ORDER_BLOCKS: [std::ops::Range<usize>; 3] = [0..6, 6..14, 14..16];

#[derive(Debug, Clone)]
pub struct OperatorBasis {
    kind: BasisKind,
    n: usize,
    elements: Vec<ComplexMatrix>,
    coherence_orders: Option<Vec<u8>>,
}

impl OperatorBasis {
    pub fn new(kind: BasisKind, n: usize) -> Result<Self> {
        match kind {
            BasisKind::Zeeman => Ok(Self::zeeman(n)),
            BasisKind::Cartesian => Self::cartesian(n),
            BasisKind::Transition if n == 4 => Ok(Self::transition()),
            BasisKind::Transition => Err(Error::DimensionMismatch { expected: 4, got: n }),
        }
    }

    /// `|i⟩⟨k|` at position `k * n + i`.
    pub fn zeeman(n: usize) -> Self {
        let elements = (0..n * n)
            .map(|idx| {
                let mut e = ComplexMatrix::zeros(n, n);
                e[(idx % n, idx / n)] = super::matrix::ONE;
                e
            })
            .collect();
        OperatorBasis {
            kind: BasisKind::Zeeman,
            n,
            elements,
            coherence_orders: None,
        }
    }

    /// Pauli products for `n = 2^q` (`q` ≤ 3).
    pub fn cartesian(n: usize) -> Result<Self> {
        let qubits = match n {
            2 => 1,
            4 => 2,
            8 => 3,
            _ => return Err(Error::Invalid(format!("cartesian basis needs n in {{2, 4, 8}}, got {n}"))),
        };
        let p = super::paulis();
        let mut elements = Vec::with_capacity(n * n);
        for idx in 0..n * n {
            let mut m = ComplexMatrix::identity(1, 1);
            for q in (0..qubits).rev() {
                let digit = (idx >> (2 * q)) & 3;
                m = m.kronecker(&p[digit]);
            }
            elements.push(m);
        }
        Ok(OperatorBasis {
            kind: BasisKind::Cartesian,
            n,
            elements,
            coherence_orders: None,
        })
    }

    /// The Hermitian two-spin transition basis.
    pub fn transition() -> Self {
        // Pauli indices: 0 = I, 1 = X, 2 = Y, 3 = Z.
        let p = pauli2;
        let elements = vec![
            p(0, 0),
            p(3, 0),
            p(0, 3),
            p(3, 3),
            p(1, 1) + p(2, 2),
            p(1, 2) - p(2, 1),
            p(1, 0),
            p(2, 0),
            p(0, 1),
            p(0, 2),
            p(1, 3),
            p(2, 3),
            p(3, 1),
            p(3, 2),
            p(1, 1) - p(2, 2),
            p(1, 2) + p(2, 1),
        ];
        let coherence_orders = (0..16)
            .map(|k| match k {
                0..=5 => 0,
                6..=13 => 1,
                _ => 2,
            })
            .collect();
        OperatorBasis {
            kind: BasisKind::Transition,
            n: 4,
            elements,
            coherence_orders: Some(coherence_orders),
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn coherence_orders(&self) -> Option<&[u8]> {
        self.coherence_orders.as_deref()
    }

    /// `N² × N²` matrix whose columns are the vectorized, unit-norm elements.
    pub fn vectorized(&self) -> ComplexMatrix {
        let d = self.n * self.n;
        let mut t = ComplexMatrix::zeros(d, d);
        for (k, e) in self.elements.iter().enumerate() {
            let v = vec(e).expect("basis elements are square");
            let norm = v.norm();
            t.set_column(k, &v.column(0).unscale(norm));
        }
        t
    }

    /// Coefficients of `m` with respect to the normalized elements.
    pub fn coefficients(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = ensure_square(m)?;
        if n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: n });
        }
        let t = self.vectorized();
        t.clone()
            .lu()
            .solve(&vec(m)?)
            .ok_or(Error::RankDeficient)
    }

    /// Inverse of [`coefficients`](Self::coefficients).
    pub fn reconstruct(&self, coeffs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if coeffs.len() != self.n * self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n * self.n,
                got: coeffs.len(),
            });
        }
        super::unvec(&(self.vectorized() * coeffs))
    }

    /// Checks linear independence and pairwise trace orthogonality.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let t = self.vectorized();
        let gram = t.adjoint() * &t;
        let d = gram.nrows();
        if (gram - ComplexMatrix::identity(d, d)).norm() > tol {
            return Err(Error::RankDeficient);
        }
        Ok(())
    }
}

/// Matrix taking coefficient vectors in `from` to coefficient vectors in `to`.
pub fn basis_change_matrix(from: &OperatorBasis, to: &OperatorBasis) -> Result<ComplexMatrix> {
    if from.n != to.n {
        return Err(Error::DimensionMismatch { expected: from.n, got: to.n });
    }
    let t_from = from.vectorized();
    let t_to = to.vectorized();
    let smallest = t_to.singular_values().min();
    if smallest < 1e-10 {
        return Err(Error::RankDeficient);
    }
    t_to.lu().solve(&t_from).ok_or(Error::RankDeficient)
}

/// Re-expresses supermatrix `s` from basis `from` in basis `to`, including
/// the report-scale factor between the two bases.
pub fn convert_superoperator(
    s: &ComplexMatrix,
    from: &OperatorBasis,
    to: &OperatorBasis,
) -> Result<ComplexMatrix> {
    let u = basis_change_matrix(from, to)?;
    if s.nrows() != u.nrows() || s.ncols() != u.nrows() {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            got: s.nrows(),
        });
    }
    let u_inv = basis_change_matrix(to, from)?;
    let factor = to.kind.report_scale() / from.kind.report_scale();
    Ok((u * s * u_inv).scale(factor))
}
