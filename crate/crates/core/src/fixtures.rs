// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Reference rate matrices for the dibromothiophene two-spin sample.
//!
//! All matrices are 4×4, in s⁻¹, rounded to four decimals. Zeeman
//! ordering is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::cp::Supergenerator;
use crate::error::Result;
use crate::hadamard::{model_superoperator, HadamardRelaxationMatrix};
use crate::liouville::matrix::real_from_rows;
use crate::liouville::{two_spin_hamiltonian, TwoSpinHamiltonian};

#[derive(Debug, Clone, Deserialize)]
pub struct Fixture {
    pub description: String,
    pub units: String,
    pub rows: Vec<Vec<f64>>,
}

impl Fixture {
    pub fn matrix(&self) -> DMatrix<f64> {
        real_from_rows(&self.rows).expect("fixture rows are rectangular")
    }
}

fn load(text: &str) -> Fixture {
    serde_json::from_str(text).expect("fixture is valid JSON")
}

/// Populations block, transition basis, before symmetrization.
pub fn t1_transition() -> Fixture {
    load(include_str!("../fixtures/t1_transition.json"))
}

/// Populations block, Zeeman basis, before symmetrization.
pub fn t1_zeeman() -> Fixture {
    load(include_str!("../fixtures/t1_zeeman.json"))
}

pub fn t1_transition_symmetrized() -> Fixture {
    load(include_str!("../fixtures/t1_transition_symmetrized.json"))
}

pub fn t1_zeeman_symmetrized() -> Fixture {
    load(include_str!("../fixtures/t1_zeeman_symmetrized.json"))
}

/// Off-diagonal T2 rates read from the superoperator diagonal (not symmetrized).
pub fn t2_zeeman() -> Fixture {
    load(include_str!("../fixtures/t2_zeeman.json"))
}

pub fn t2_adiabatic() -> Fixture {
    load(include_str!("../fixtures/t2_adiabatic.json"))
}

/// Nonadiabatic T2 rate (mean diagonal of the symmetrized Zeeman block).
pub const NONADIABATIC_RATE: f64 = 0.3312;

/// Zeeman-basis generator holding the reference T1 block on the
/// population positions and the T2 rates on the diagonal.
pub fn reference_generator() -> Result<Supergenerator> {
    let t2 = HadamardRelaxationMatrix::new(t2_zeeman().matrix())?;
    let r = model_superoperator(&t1_zeeman().matrix(), &t2)?;
    Supergenerator::from_hamiltonian(&two_spin_hamiltonian(TwoSpinHamiltonian::DIBROMOTHIOPHENE), r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{decompose, DecompositionOptions};

    #[test]
    fn reference_generator_decomposes_to_the_fixture_spectrum() {
        let d = decompose(&reference_generator().unwrap(), &DecompositionOptions::default()).unwrap();
        for (got, want) in d.adiabatic_eigenvalues.iter().zip([0.9560, 0.2913, 0.1721]) {
            assert!((got - want).abs() / want <= 0.01, "{got} vs {want}");
        }
        assert!((d.nonadiabatic_rate - NONADIABATIC_RATE).abs() <= 1e-4);
        // Only the non-centrosymmetric part of the rounded fixtures remains.
        assert!(d.discrepancy <= 1e-3, "{}", d.discrepancy);
    }

    #[test]
    fn all_fixtures_parse_as_4x4() {
        for f in [
            t1_transition(),
            t1_zeeman(),
            t1_transition_symmetrized(),
            t1_zeeman_symmetrized(),
            t2_zeeman(),
            t2_adiabatic(),
        ] {
            let m = f.matrix();
            assert_eq!(m.shape(), (4, 4), "{}", f.description);
            assert_eq!(f.units, "1/s");
        }
    }

    #[test]
    fn printed_matrices_are_nearly_symmetric() {
        for f in [t1_zeeman(), t1_zeeman_symmetrized(), t2_zeeman(), t2_adiabatic()] {
            let m = f.matrix();
            assert!((&m - m.transpose()).abs().max() <= 1.5e-4, "{}", f.description);
        }
    }
}
