// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::matrix::{self, ComplexMatrix, I};
use crate::liouville::{basis_change_matrix, commutation_superoperator, vec, BasisKind, OperatorBasis};
use crate::matfun::expm;

/// Markovian generator `G = iH + R`; states evolve as `exp(−G t)`.
///
/// Both parts are supermatrices on coefficient vectors of the normalized
/// elements of `basis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Supergenerator {
    pub n: usize,
    /// `i` times the commutation superoperator.
    #[serde(with = "matrix::json")]
    pub hamiltonian_part: ComplexMatrix,
    #[serde(with = "matrix::json")]
    pub relaxation_part: ComplexMatrix,
    pub basis: BasisKind,
}

impl Supergenerator {
    /// Generator in the Zeeman basis from an `N × N` Hamiltonian and relaxation supermatrix.
    pub fn from_hamiltonian(h: &ComplexMatrix, relaxation: ComplexMatrix) -> Result<Self> {
        let hc = commutation_superoperator(h)? * I;
        Self::new(h.nrows(), hc, relaxation, BasisKind::Zeeman)
    }

    pub fn new(
        n: usize,
        hamiltonian_part: ComplexMatrix,
        relaxation_part: ComplexMatrix,
        basis: BasisKind,
    ) -> Result<Self> {
        let d = n * n;
        for m in [&hamiltonian_part, &relaxation_part] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, got: m.nrows() });
            }
        }
        Ok(Supergenerator {
            n,
            hamiltonian_part,
            relaxation_part,
            basis,
        })
    }

    pub fn with_relaxation(&self, relaxation_part: ComplexMatrix) -> Self {
        Supergenerator {
            relaxation_part,
            ..self.clone()
        }
    }

    pub fn generator(&self) -> ComplexMatrix {
        &self.hamiltonian_part + &self.relaxation_part
    }

    /// `exp(−G t)`.
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        expm(&self.generator(), -t)
    }

    /// Same generator expressed on another basis (exact similarity).
    pub fn to_basis(&self, kind: BasisKind) -> Result<Self> {
        if kind == self.basis {
            return Ok(self.clone());
        }
        let from = OperatorBasis::new(self.basis, self.n)?;
        let to = OperatorBasis::new(kind, self.n)?;
        let u = basis_change_matrix(&from, &to)?;
        let u_inv = basis_change_matrix(&to, &from)?;
        Ok(Supergenerator {
            n: self.n,
            hamiltonian_part: &u * &self.hamiltonian_part * &u_inv,
            relaxation_part: &u * &self.relaxation_part * &u_inv,
            basis: kind,
        })
    }

    /// Max-norm of `⟨vec(I)| G`, which vanishes for trace-preserving generators.
    pub fn trace_deviation(&self) -> Result<f64> {
        let z = self.to_basis(BasisKind::Zeeman)?;
        let id = vec(&ComplexMatrix::identity(self.n, self.n))?;
        Ok(matrix::max_abs(&(id.adjoint() * z.generator())))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: Supergenerator = serde_json::from_str(s)?;
        Supergenerator::new(g.n, g.hamiltonian_part, g.relaxation_part, g.basis)
    }
}
