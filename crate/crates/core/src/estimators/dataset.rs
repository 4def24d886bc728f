// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::state_pairs::propagator_from_state_pairs;
use crate::error::{Error, Result};
use crate::liouville::matrix::{self, hermitian_deviation, trace, ComplexMatrix};
use crate::liouville::HERMITIAN_TOL;

/// An input state and the state it evolved into.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePair {
    #[serde(with = "matrix::json")]
    pub input: ComplexMatrix,
    #[serde(with = "matrix::json")]
    pub output: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Records {
    /// One Zeeman-basis superpropagator per time.
    #[serde(with = "matrix::json_vec")]
    Propagators(Vec<ComplexMatrix>),
    /// One complete set of state pairs per time.
    StatePairs(Vec<Vec<StatePair>>),
}

/// Time-stamped process tomography data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyDataset {
    pub n: usize,
    #[serde(with = "matrix::json")]
    pub hamiltonian: ComplexMatrix,
    pub times: Vec<f64>,
    #[serde(flatten)]
    pub records: Records,
}

/// Relative tolerance for the doubling-grid check.
pub const DOUBLING_TOL: f64 = 1e-9;

/// Tolerance on unit trace and positivity of density matrices.
pub const STATE_TOL: f64 = 1e-6;

impl TomographyDataset {
    pub fn from_propagators(hamiltonian: ComplexMatrix, times: Vec<f64>, propagators: Vec<ComplexMatrix>) -> Result<Self> {
        let ds = TomographyDataset {
            n: hamiltonian.nrows(),
            hamiltonian,
            times,
            records: Records::Propagators(propagators),
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn from_state_pairs(hamiltonian: ComplexMatrix, times: Vec<f64>, pairs: Vec<Vec<StatePair>>) -> Result<Self> {
        let ds = TomographyDataset {
            n: hamiltonian.nrows(),
            hamiltonian,
            times,
            records: Records::StatePairs(pairs),
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDataset(msg));
        if self.hamiltonian.nrows() != self.n || self.hamiltonian.ncols() != self.n {
            return bad(format!("hamiltonian must be {0}x{0}", self.n));
        }
        let dev = hermitian_deviation(&self.hamiltonian);
        if dev > HERMITIAN_TOL {
            return bad(format!("hamiltonian is not Hermitian (deviation {dev:.2e})"));
        }
        if self.times.is_empty() {
            return bad("no time points".into());
        }
        if self.times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return bad("times must be positive and finite".into());
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("times must be strictly increasing".into());
        }
        let d = self.n * self.n;
        match &self.records {
            Records::Propagators(ps) => {
                if ps.len() != self.times.len() {
                    return bad(format!("{} propagators for {} times", ps.len(), self.times.len()));
                }
                if ps.iter().any(|p| p.nrows() != d || p.ncols() != d) {
                    return bad(format!("propagators must be {d}x{d}"));
                }
            }
            Records::StatePairs(sets) => {
                if sets.len() != self.times.len() {
                    return bad(format!("{} state-pair sets for {} times", sets.len(), self.times.len()));
                }
                for pair in sets.iter().flatten() {
                    for rho in [&pair.input, &pair.output] {
                        validate_state(rho, self.n)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// True when `t_m = 2^(m−1) t_1` for every point.
    pub fn is_doubling_grid(&self) -> bool {
        let t1 = self.times[0];
        self.times
            .iter()
            .enumerate()
            .all(|(m, &t)| (t - t1 * 2f64.powi(m as i32)).abs() <= DOUBLING_TOL * t)
    }

    /// Superpropagators, reconstructing them from state pairs when needed.
    pub fn propagators(&self) -> Result<Vec<ComplexMatrix>> {
        match &self.records {
            Records::Propagators(ps) => Ok(ps.clone()),
            Records::StatePairs(sets) => sets.iter().map(|s| propagator_from_state_pairs(s)).collect(),
        }
    }

    /// Equivalent dataset holding superpropagators.
    pub fn with_propagators(&self) -> Result<Self> {
        Ok(TomographyDataset {
            records: Records::Propagators(self.propagators()?),
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ds: TomographyDataset = serde_json::from_str(s)?;
        ds.validate()?;
        Ok(ds)
    }
}

fn validate_state(rho: &ComplexMatrix, n: usize) -> Result<()> {
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::InvalidDataset(format!("density matrices must be {n}x{n}")));
    }
    let dev = hermitian_deviation(rho);
    if dev > STATE_TOL {
        return Err(Error::InvalidDataset(format!("density matrix not Hermitian ({dev:.2e})")));
    }
    let tr = trace(rho);
    if (tr - matrix::ONE).norm() > STATE_TOL {
        return Err(Error::InvalidDataset(format!("density matrix trace {:.6} ≠ 1", tr.re)));
    }
    if !matrix::is_psd(rho, STATE_TOL) {
        return Err(Error::InvalidDataset("density matrix is not positive semidefinite".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(times: Vec<f64>) -> Result<TomographyDataset> {
        let ps = times.iter().map(|_| ComplexMatrix::identity(4, 4)).collect();
        TomographyDataset::from_propagators(ComplexMatrix::zeros(2, 2), times, ps)
    }

    #[test]
    fn doubling_grid_detection() {
        assert!(ds(vec![0.4, 0.8, 1.6, 3.2]).unwrap().is_doubling_grid());
        assert!(!ds(vec![0.4, 0.8, 1.5]).unwrap().is_doubling_grid());
    }

    #[test]
    fn rejects_unordered_or_nonpositive_times() {
        assert!(ds(vec![0.8, 0.4]).is_err());
        assert!(ds(vec![0.0, 0.4]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = ds(vec![0.1, 0.2]).unwrap();
        let s = d.to_json().unwrap();
        assert!(s.contains("\"propagators\""));
        assert_eq!(TomographyDataset::from_json(&s).unwrap(), d);
    }

    #[test]
    fn rejects_non_unit_trace_state() {
        let pair = StatePair {
            input: ComplexMatrix::identity(2, 2),
            output: ComplexMatrix::identity(2, 2).scale(0.5),
        };
        let r = TomographyDataset::from_state_pairs(ComplexMatrix::zeros(2, 2), vec![1.0], vec![vec![pair]]);
        assert!(matches!(r, Err(Error::InvalidDataset(_))));
    }
}
