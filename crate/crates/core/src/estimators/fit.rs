// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Penalized least-squares fit of the relaxation supermatrix.
//!
//! The relaxation part is parameterized in a Hermitian operator basis, where
//! a Hermiticity-preserving supermatrix is real. Symmetry, the zero identity
//! row and column, and the block mask are built into the parameter map so
//! they hold exactly.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::dataset::TomographyDataset;
use super::nelder_mead::{self, Coefficients};
use super::richardson::richardson_estimate;
use crate::cp::{identity_complement_projector, negative_square_sum, reshuffle, Supergenerator};
use crate::error::{Error, Result};
use crate::liouville::basis::TRANSITION_BLOCKS;
use crate::liouville::matrix::{from_real, hermitize, ComplexMatrix, I};
use crate::liouville::{basis_change_matrix, commutation_superoperator, BasisKind, OperatorBasis};
use crate::matfun::expm_generic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// Every independent entry of a symmetric supermatrix.
    FullSymmetric,
    /// Block-diagonal transition-basis structure of a secular two-spin
    /// relaxation supermatrix (two-spin systems only).
    RedfieldKite,
    /// Unstructured real supermatrix.
    None,
}

impl std::str::FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full_symmetric" => Ok(Structure::FullSymmetric),
            "kite" | "redfield_kite" => Ok(Structure::RedfieldKite),
            "none" => Ok(Structure::None),
            other => Err(Error::Invalid(format!("unknown structure '{other}' (expected full, kite or none)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    /// Weight of the CP penalty; `None` picks `10³ χ²₀ / (penalty₀ + ε)`.
    pub penalty_weight: Option<f64>,
    /// When false the penalty is omitted (plain least squares).
    pub enforce_cp: bool,
    pub max_iterations: usize,
    pub simplex_tolerance: f64,
    pub structure: Structure,
    pub detailed_balance: bool,
    pub border_identity_row: bool,
    /// Extra Nelder–Mead runs restarted from the best point.
    pub restarts: usize,
    pub adaptive_coefficients: bool,
    pub initial_step_relative: f64,
    pub initial_step_floor: f64,
    /// Starting generator; the Richardson estimate is used when absent.
    #[serde(skip)]
    pub seed_generator: Option<Supergenerator>,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            penalty_weight: None,
            enforce_cp: true,
            max_iterations: 20_000,
            simplex_tolerance: 1e-9,
            structure: Structure::RedfieldKite,
            detailed_balance: true,
            border_identity_row: true,
            restarts: 0,
            adaptive_coefficients: false,
            initial_step_relative: 0.05,
            initial_step_floor: 1e-3,
            seed_generator: None,
        }
    }
}

/// Regularization in the default penalty weight.
pub const PENALTY_EPS: f64 = 1e-12;

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.penalty_weight {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Invalid(format!("penalty weight must be positive, got {w}")));
            }
        }
        if self.simplex_tolerance.is_nan() || self.simplex_tolerance <= 0.0 {
            return Err(Error::Invalid("simplex tolerance must be positive".into()));
        }
        if !(self.initial_step_relative > 0.0 && self.initial_step_floor > 0.0) {
            return Err(Error::Invalid("initial simplex steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub estimate: Supergenerator,
    pub chi_squared: f64,
    pub penalty_at_solution: f64,
    pub penalty_weight: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub method: String,
    pub residual_per_time: Vec<f64>,
    pub parameters: Vec<f64>,
    pub seed_chi_squared: f64,
    pub seed_penalty: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_finite_at: Option<Vec<f64>>,
}

/// Map from a parameter vector to a real `N² × N²` supermatrix.
#[derive(Debug, Clone)]
pub struct Parameterization {
    dim: usize,
    basis: BasisKind,
    slots: Vec<Vec<(usize, usize)>>,
}

impl Parameterization {
    pub fn new(n: usize, cfg: &FitConfig) -> Result<Self> {
        let dim = n * n;
        let basis = hermitian_basis(n, cfg.structure)?;
        let start = usize::from(cfg.border_identity_row);
        let mut slots = Vec::new();
        let symmetric_pairs = |range: std::ops::Range<usize>, slots: &mut Vec<Vec<(usize, usize)>>| {
            for i in range.clone() {
                for j in i..range.end {
                    slots.push(if i == j { vec![(i, i)] } else { vec![(i, j), (j, i)] });
                }
            }
        };
        match cfg.structure {
            Structure::RedfieldKite => {
                if !cfg.border_identity_row {
                    slots.push(vec![(0, 0)]);
                }
                for block in TRANSITION_BLOCKS.iter().skip(1) {
                    symmetric_pairs(block.clone(), &mut slots);
                }
            }
            Structure::FullSymmetric => symmetric_pairs(start..dim, &mut slots),
            Structure::None if cfg.detailed_balance => symmetric_pairs(start..dim, &mut slots),
            Structure::None => {
                for j in start..dim {
                    for i in start..dim {
                        slots.push(vec![(i, j)]);
                    }
                }
            }
        }
        Ok(Parameterization { dim, basis, slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn matrix(&self, p: &[f64]) -> DMatrix<f64> {
        let mut r = DMatrix::zeros(self.dim, self.dim);
        for (v, slot) in p.iter().zip(&self.slots) {
            for &(i, j) in slot {
                r[(i, j)] = *v;
            }
        }
        r
    }

    /// Least-squares parameters for `r` (averaging tied entries).
    pub fn extract(&self, r: &DMatrix<f64>) -> Vec<f64> {
        self.slots
            .iter()
            .map(|slot| slot.iter().map(|&(i, j)| r[(i, j)]).sum::<f64>() / slot.len() as f64)
            .collect()
    }

    fn pattern(&self) -> DMatrix<bool> {
        let mut m = DMatrix::from_element(self.dim, self.dim, false);
        for &(i, j) in self.slots.iter().flatten() {
            m[(i, j)] = true;
        }
        m
    }
}

fn hermitian_basis(n: usize, structure: Structure) -> Result<BasisKind> {
    match (n, structure) {
        (4, _) => Ok(BasisKind::Transition),
        (_, Structure::RedfieldKite) => Err(Error::DimensionMismatch { expected: 4, got: n }),
        _ => Ok(BasisKind::Cartesian),
    }
}

/// Connected index groups of the union of two sparsity patterns.
fn coupled_blocks(g0: &DMatrix<f64>, pattern: &DMatrix<bool>) -> Vec<Vec<usize>> {
    let d = g0.nrows();
    let scale = g0.amax().max(1.0);
    let mut label: Vec<usize> = (0..d).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..d {
        for j in 0..d {
            if pattern[(i, j)] || g0[(i, j)].abs() > 1e-12 * scale {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; d];
    for i in 0..d {
        let r = root(&mut label, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    groups
}

/// χ² and CP penalty as functions of the parameter vector.
pub struct Objective {
    param: Parameterization,
    g0: DMatrix<f64>,
    blocks: Vec<Vec<usize>>,
    targets: Vec<DMatrix<f64>>,
    /// Squared norm of target entries the model cannot reach (imaginary
    /// parts and entries outside the coupled blocks), per time.
    unreachable: Vec<f64>,
    times: Vec<f64>,
    to_zeeman: ComplexMatrix,
    projector: ComplexMatrix,
    ih_native: ComplexMatrix,
    targets_native: Vec<ComplexMatrix>,
    n: usize,
}

impl Objective {
    pub fn new(ds: &TomographyDataset, param: Parameterization) -> Result<Self> {
        let n = ds.n;
        let basis = OperatorBasis::new(param.basis, n)?;
        let zeeman = OperatorBasis::zeeman(n);
        let to_native = basis_change_matrix(&zeeman, &basis)?;
        let to_zeeman = basis_change_matrix(&basis, &zeeman)?;
        let ih = commutation_superoperator(&ds.hamiltonian)? * I;
        let ih_native = &to_native * ih * &to_zeeman;
        let g0 = ih_native.map(|z| z.re);
        let blocks = coupled_blocks(&g0, &param.pattern());
        let targets_native: Vec<ComplexMatrix> = ds
            .propagators()?
            .iter()
            .map(|p| &to_native * p * &to_zeeman)
            .collect();
        let mut targets = Vec::new();
        let mut unreachable = Vec::new();
        for p in &targets_native {
            let re = p.map(|z| z.re);
            let mut in_block = DMatrix::from_element(re.nrows(), re.ncols(), false);
            for b in &blocks {
                for &i in b {
                    for &j in b {
                        in_block[(i, j)] = true;
                    }
                }
            }
            // Summed directly rather than as a difference of norms, which
            // would leave a rounding floor of order ε‖P‖².
            let rest: f64 = p
                .iter()
                .zip(in_block.iter())
                .map(|(z, &inside)| z.im * z.im + if inside { 0.0 } else { z.re * z.re })
                .sum();
            unreachable.push(rest);
            targets.push(re);
        }
        Ok(Objective {
            projector: identity_complement_projector(n),
            param,
            g0,
            blocks,
            targets,
            unreachable,
            times: ds.times.clone(),
            to_zeeman,
            ih_native,
            targets_native,
            n,
        })
    }

    pub fn parameterization(&self) -> &Parameterization {
        &self.param
    }

    pub fn chi_squared(&self, p: &[f64]) -> f64 {
        let g = &self.g0 + self.param.matrix(p);
        let mut total = 0.0;
        for (m, &t) in self.times.iter().enumerate() {
            let target = &self.targets[m];
            let mut s = self.unreachable[m];
            for b in &self.blocks {
                let k = b.len();
                let gb = DMatrix::from_fn(k, k, |i, j| g[(b[i], b[j])]);
                let q = match expm_generic(&gb, -t) {
                    Ok(q) => q,
                    Err(_) => return f64::NAN,
                };
                for i in 0..k {
                    for j in 0..k {
                        let diff = q[(i, j)] - target[(b[i], b[j])];
                        s += diff * diff;
                    }
                }
            }
            total += s;
        }
        total
    }

    /// Relaxation supermatrix in the Zeeman basis.
    pub fn zeeman_relaxation(&self, p: &[f64]) -> ComplexMatrix {
        &self.to_zeeman * from_real(&self.param.matrix(p)) * self.to_zeeman.adjoint()
    }

    pub fn penalty(&self, p: &[f64]) -> f64 {
        let r = self.zeeman_relaxation(p);
        match reshuffle(&(-r)) {
            Ok(c) => negative_square_sum(&hermitize(&(&self.projector * c * &self.projector))),
            Err(_) => f64::NAN,
        }
    }

    pub fn residual_per_time(&self, p: &[f64]) -> Result<Vec<f64>> {
        let g = &self.ih_native + from_real(&self.param.matrix(p));
        self.times
            .iter()
            .zip(&self.targets_native)
            .map(|(&t, target)| Ok((expm_generic(&g, -t)? - target).norm()))
            .collect()
    }

    pub fn generator(&self, p: &[f64]) -> Result<Supergenerator> {
        Supergenerator::new(
            self.n,
            self.ih_native.clone(),
            from_real(&self.param.matrix(p)),
            self.param.basis,
        )
    }
}

/// Penalized Nelder–Mead fit (penalty omitted when `cfg.enforce_cp` is false).
pub fn cp_constrained_fit(ds: &TomographyDataset, cfg: &FitConfig) -> Result<FitReport> {
    cfg.validate()?;
    ds.validate()?;
    let param = Parameterization::new(ds.n, cfg)?;
    let objective = Objective::new(ds, param)?;

    let seed = match &cfg.seed_generator {
        Some(g) => g.clone(),
        None => richardson_estimate(ds)?,
    };
    if seed.n != ds.n {
        return Err(Error::DimensionMismatch { expected: ds.n, got: seed.n });
    }
    let seed_native = seed.to_basis(objective.param.basis)?;
    let p0 = objective.param.extract(&seed_native.relaxation_part.map(|z| z.re));

    let chi0 = objective.chi_squared(&p0);
    let pen0 = objective.penalty(&p0);
    if !chi0.is_finite() || !pen0.is_finite() {
        return Err(Error::NonFinite { params: p0 });
    }
    let weight = if cfg.enforce_cp {
        cfg.penalty_weight.unwrap_or_else(|| {
            let w = 1e3 * chi0 / (pen0 + PENALTY_EPS);
            if w > 0.0 && w.is_finite() { w } else { 1.0 }
        })
    } else {
        0.0
    };

    let f = |p: &[f64]| {
        let chi = objective.chi_squared(p);
        if weight > 0.0 {
            chi + weight * objective.penalty(p)
        } else {
            chi
        }
    };
    let opts = nelder_mead::Options {
        coefficients: if cfg.adaptive_coefficients {
            Coefficients::adaptive(p0.len())
        } else {
            Coefficients::STANDARD
        },
        max_iterations: cfg.max_iterations,
        x_tol: cfg.simplex_tolerance,
        f_tol: cfg.simplex_tolerance,
    };

    let mut best = p0.clone();
    let mut best_f = f(&p0);
    let (mut iterations, mut evaluations) = (0, 1);
    let mut converged = false;
    let mut non_finite_at = None;
    for _ in 0..=cfg.restarts {
        let simplex = nelder_mead::axis_simplex(&best, cfg.initial_step_relative, cfg.initial_step_floor);
        let out = nelder_mead::minimize(&f, simplex, &opts);
        iterations += out.iterations;
        evaluations += out.evaluations;
        non_finite_at = non_finite_at.or(out.non_finite_at);
        converged = out.converged;
        let improved = out.f < best_f;
        if out.f <= best_f {
            best = out.x;
            best_f = out.f;
        }
        if !improved {
            break;
        }
    }

    let chi = objective.chi_squared(&best);
    let penalty = objective.penalty(&best);
    if cfg.enforce_cp && penalty > 10.0 * cfg.simplex_tolerance {
        converged = false;
    }
    Ok(FitReport {
        estimate: objective.generator(&best)?,
        chi_squared: chi,
        penalty_at_solution: penalty,
        penalty_weight: weight,
        iterations,
        evaluations,
        converged,
        method: if cfg.enforce_cp { "cp_constrained_nelder_mead" } else { "nelder_mead" }.into(),
        residual_per_time: objective.residual_per_time(&best)?,
        parameters: best,
        seed_chi_squared: chi0,
        seed_penalty: pen0,
        non_finite_at,
    })
}
