// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Hadamard-matrix analysis of two-spin relaxation.
//!
//! A 16×16 relaxation superoperator is split into a population-transfer
//! block (T1) and the entrywise decay rates of the density matrix (T2).
//! Each part is then written as a small set of Lindblad operators.
//!
//! Zeeman ordering is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`: the first spin is the high
//! bit of a state index.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::cp::{fix_phase, LindbladSystem, LindbladTerm, Provenance, Supergenerator};
use crate::error::{Error, Result};
use crate::liouville::matrix::{self, c, from_real, ComplexMatrix};
use crate::liouville::{pauli2, BasisKind};

pub type RealMatrix = DMatrix<f64>;

const N: usize = 4;

/// Entries smaller than this fraction of the largest one count as zero.
const RELATIVE_ZERO: f64 = 1e-12;

/// `½ [[1,1,1,1],[1,1,−1,−1],[1,−1,1,−1],[1,−1,−1,1]]`.
pub fn hadamard_transform_4() -> RealMatrix {
    RealMatrix::from_row_slice(
        N,
        N,
        &[
            1.0, 1.0, 1.0, 1.0, //
            1.0, 1.0, -1.0, -1.0, //
            1.0, -1.0, 1.0, -1.0, //
            1.0, -1.0, -1.0, 1.0,
        ],
    )
    .scale(0.5)
}

/// Exchange (anti-identity) matrix; for `n = 4` this is `σx¹σx²`.
pub fn exchange_matrix(n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { 1.0 } else { 0.0 })
}

fn ensure_square_real(m: &RealMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

fn ensure_4x4(m: &RealMatrix) -> Result<()> {
    if ensure_square_real(m)? != N {
        return Err(Error::DimensionMismatch { expected: N, got: m.nrows() });
    }
    Ok(())
}

/// `½ (R + J R J)`, the centrosymmetric part of `r`.
pub fn centrosymmetrize(r: &RealMatrix) -> Result<RealMatrix> {
    let n = ensure_square_real(r)?;
    let j = exchange_matrix(n);
    Ok((r + &j * r * &j).scale(0.5))
}

/// Zeeman populations block to the transition basis, at transition report scale.
pub fn t1_zeeman_to_transition(r_zee: &RealMatrix) -> Result<RealMatrix> {
    ensure_4x4(r_zee)?;
    let w = hadamard_transform_4();
    Ok((&w * r_zee * &w).scale(0.5))
}

/// Inverse of [`t1_zeeman_to_transition`].
pub fn t1_transition_to_zeeman(r_tra: &RealMatrix) -> Result<RealMatrix> {
    ensure_4x4(r_tra)?;
    let w = hadamard_transform_4();
    Ok((&w * r_tra * &w).scale(2.0))
}

fn expect_basis(g: &Supergenerator, kind: BasisKind) -> Result<&ComplexMatrix> {
    if g.basis != kind {
        return Err(Error::WrongBasis {
            expected: kind.to_string(),
            got: g.basis.to_string(),
        });
    }
    if g.n != N {
        return Err(Error::DimensionMismatch { expected: N, got: g.n });
    }
    Ok(&g.relaxation_part)
}

#[derive(Debug, Clone, PartialEq)]
pub struct T1Block {
    pub rates: RealMatrix,
    /// Largest discarded imaginary part, on the same scale as `rates`.
    pub imaginary_residue: f64,
}

/// Leading 4×4 (populations) block of a transition-basis generator.
///
/// The block is returned at the transition report scale, i.e. half of the
/// orthonormal-basis coefficients.
pub fn extract_t1_block(g: &Supergenerator) -> Result<T1Block> {
    let r = expect_basis(g, BasisKind::Transition)?;
    let scale = BasisKind::Transition.report_scale() / BasisKind::Zeeman.report_scale();
    let block = r.view((0, 0), (N, N));
    Ok(T1Block {
        rates: RealMatrix::from_fn(N, N, |i, j| block[(i, j)].re * scale),
        imaginary_residue: block.iter().map(|z| z.im.abs()).fold(0.0, f64::max) * scale,
    })
}

/// Population-to-population entries `⟨jj|R|kk⟩` of a Zeeman generator.
pub fn zeeman_t1_block(g: &Supergenerator) -> Result<RealMatrix> {
    let r = expect_basis(g, BasisKind::Zeeman)?;
    Ok(RealMatrix::from_fn(N, N, |j, k| r[(j * (N + 1), k * (N + 1))].re))
}

fn t2_rates_raw(r: &ComplexMatrix) -> RealMatrix {
    RealMatrix::from_fn(N, N, |j, k| if j == k { 0.0 } else { r[(k * N + j, k * N + j)].re })
}

/// Rate matrix acting on a density matrix by entrywise product:
/// `dρⱼₖ/dt = −rateⱼₖ ρⱼₖ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HadamardRelaxationMatrix {
    #[serde(with = "matrix::real_json")]
    pub rates: RealMatrix,
}

impl HadamardRelaxationMatrix {
    pub fn new(rates: RealMatrix) -> Result<Self> {
        ensure_square_real(&rates)?;
        if rates.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("rate matrix has non-finite entries".into()));
        }
        Ok(HadamardRelaxationMatrix { rates })
    }

    pub fn zeros(n: usize) -> Self {
        HadamardRelaxationMatrix { rates: RealMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.rates.nrows()
    }

    pub fn has_zero_diagonal(&self, tol: f64) -> bool {
        self.rates.diagonal().iter().all(|x| x.abs() <= tol)
    }

    pub fn symmetric_deviation(&self) -> f64 {
        (&self.rates - self.rates.transpose()).abs().max()
    }

    /// Time derivative `−rates ⊙ ρ`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != self.rates.shape() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: rho.nrows() });
        }
        Ok(rho.zip_map(&from_real(&self.rates), |x, r| -x * r))
    }

    /// Equivalent diagonal supermatrix `R` (so that `dρ/dt = −R vec(ρ)`).
    pub fn superoperator(&self) -> ComplexMatrix {
        let n = self.n();
        let mut s = ComplexMatrix::zeros(n * n, n * n);
        for k in 0..n {
            for j in 0..n {
                s[(k * n + j, k * n + j)] = c(self.rates[(j, k)], 0.0);
            }
        }
        s
    }

    /// `−E R E` with `E = I − 11ᵀ/n`. Positive semidefinite for physical T2.
    pub fn projected(&self) -> RealMatrix {
        let e = centering_projector(self.n());
        -(&e * &self.rates * &e)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        let p = self.projected();
        let lowest = SymmetricEigen::new(p.clone()).eigenvalues.min();
        lowest >= -tol * p.abs().max().max(1.0)
    }
}

/// `I − 11ᵀ/n`.
pub fn centering_projector(n: usize) -> RealMatrix {
    RealMatrix::identity(n, n) - RealMatrix::from_element(n, n, 1.0 / n as f64)
}

/// Degenerate-rate merging for [`t1_lindblads`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeOptions {
    pub merge_degenerate: bool,
    /// Largest `(max − min) / mean` spread of rates treated as degenerate.
    pub degeneracy_tolerance: f64,
}

impl Default for MergeOptions {
    fn default() -> Self {
        MergeOptions {
            merge_degenerate: true,
            degeneracy_tolerance: 0.05,
        }
    }
}

struct FlipGroup {
    name: &'static str,
    pairs: [(usize, usize); 2],
    /// Pauli indices of the Hermitian replacements and their labels.
    operators: [(usize, usize, &'static str); 4],
}

const FLIP_GROUPS: [FlipGroup; 3] = [
    FlipGroup {
        name: "spin 1",
        pairs: [(0, 2), (1, 3)],
        operators: [(1, 0, "XI"), (2, 0, "YI"), (1, 3, "XZ"), (2, 3, "YZ")],
    },
    FlipGroup {
        name: "spin 2",
        pairs: [(0, 1), (2, 3)],
        operators: [(0, 1, "IX"), (0, 2, "IY"), (3, 1, "ZX"), (3, 2, "ZY")],
    },
    FlipGroup {
        name: "multiple quantum",
        pairs: [(0, 3), (1, 2)],
        operators: [(1, 1, "XX"), (1, 2, "XY"), (2, 1, "YX"), (2, 2, "YY")],
    },
];

/// Transfer rates `j → k` read from the off-diagonal of `r` (rate `= −R[k, j]`).
fn transfer_rates(r: &RealMatrix) -> Result<RealMatrix> {
    let tol = 1e-9 * r.abs().max();
    let mut rates = RealMatrix::zeros(N, N);
    for j in 0..N {
        for k in 0..N {
            if j == k {
                continue;
            }
            let v = -r[(k, j)];
            if v < -tol {
                return Err(Error::NotCompletelyPositive(v));
            }
            rates[(j, k)] = v.max(0.0);
        }
    }
    Ok(rates)
}

fn flip(j: usize, k: usize, rate: f64) -> LindbladTerm {
    let mut m = ComplexMatrix::zeros(N, N);
    m[(k, j)] = c(rate.sqrt(), 0.0);
    LindbladTerm::new(m, Provenance::HadamardT1).labeled(format!("flip {j}->{k}"))
}

/// Population-transfer Lindblad operators for a Zeeman T1 block.
///
/// Each off-diagonal entry yields `√(−R[k,j]) |k⟩⟨j|`. With merging, each
/// group of four flips whose rates agree within the tolerance (first spin,
/// second spin, zero plus double quantum) is replaced by the Hermitian
/// Pauli products at the group's average rate, which leaves the dissipator
/// unchanged up to the rate averaging.
pub fn t1_lindblads(r_t1_zee: &RealMatrix, opts: MergeOptions) -> Result<LindbladSystem> {
    ensure_4x4(r_t1_zee)?;
    let rates = transfer_rates(r_t1_zee)?;
    let mut out = LindbladSystem::new(N);
    for group in &FLIP_GROUPS {
        let directed: Vec<(usize, usize)> = group.pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        let values: Vec<f64> = directed.iter().map(|&(j, k)| rates[(j, k)]).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        if mean <= 0.0 {
            continue;
        }
        let spread = (values.iter().copied().fold(f64::MIN, f64::max) - values.iter().copied().fold(f64::MAX, f64::min)) / mean;
        if opts.merge_degenerate && spread <= opts.degeneracy_tolerance {
            for &(a, b, label) in &group.operators {
                let m = pauli2(a, b).scale(0.5 * mean.sqrt());
                out.push(LindbladTerm::new(m, Provenance::HadamardT1).labeled(format!("{label} ({})", group.name)));
            }
        } else {
            for (&(j, k), &v) in directed.iter().zip(&values) {
                if v > 0.0 {
                    out.push(flip(j, k, v));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonadiabaticT2 {
    pub lindblads: LindbladSystem,
    /// Mean diagonal of the T1 block.
    pub rate: f64,
    /// `(max − min) / mean` of the diagonal that was averaged.
    pub spread: f64,
}

/// Diagonal Lindblads `√d̄ · ½ {σz¹, σz², σz¹σz²}` with `d̄` the mean T1 diagonal.
///
/// They reproduce the coherence decay implied by the population flips, on
/// their own. The identity channel is omitted since its dissipator vanishes.
pub fn nonadiabatic_t2_lindblads(r_t1_zee: &RealMatrix) -> Result<NonadiabaticT2> {
    ensure_4x4(r_t1_zee)?;
    let d = r_t1_zee.diagonal();
    let rate = d.mean();
    let spread = if rate.abs() > 0.0 { (d.max() - d.min()) / rate.abs() } else { 0.0 };
    let mut lindblads = LindbladSystem::new(N);
    if rate > 0.0 {
        for (a, b, label) in [(3, 0, "ZI"), (0, 3, "IZ"), (3, 3, "ZZ")] {
            let m = pauli2(a, b).scale(0.5 * rate.sqrt());
            lindblads.push(LindbladTerm::new(m, Provenance::HadamardT2Nonadiabatic).labeled(label));
        }
    }
    Ok(NonadiabaticT2 { lindblads, rate, spread })
}

/// `rate · (11ᵀ − I)`.
pub fn nonadiabatic_matrix(rate: f64) -> HadamardRelaxationMatrix {
    HadamardRelaxationMatrix {
        rates: (RealMatrix::from_element(N, N, 1.0) - RealMatrix::identity(N, N)).scale(rate),
    }
}

/// Net Hadamard relaxation matrix of Lindblads that are real and diagonal.
///
/// For `ℓ = diag(L)`: `R_L = ½(ℓ⊙ℓ)1ᵀ + ½·1(ℓ⊙ℓ)ᵀ − ℓℓᵀ`, summed over `L`.
pub fn hadamard_matrix_of_diagonal_lindblads(ls: &LindbladSystem) -> Result<HadamardRelaxationMatrix> {
    let n = ls.n;
    let mut rates = RealMatrix::zeros(n, n);
    for term in &ls.terms {
        let l = &term.matrix;
        if l.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, got: l.nrows() });
        }
        let tol = RELATIVE_ZERO * matrix::max_abs(l).max(f64::MIN_POSITIVE);
        let off_diagonal = (0..n).any(|i| (0..n).any(|j| i != j && l[(i, j)].norm() > tol));
        if off_diagonal || l.diagonal().iter().any(|z| z.im.abs() > tol) {
            return Err(Error::Invalid(format!(
                "Lindblad operator {} is not real and diagonal",
                term.label.as_deref().unwrap_or("(unlabeled)")
            )));
        }
        let ell: Vec<f64> = l.diagonal().iter().map(|z| z.re).collect();
        for i in 0..n {
            for j in 0..n {
                rates[(i, j)] += 0.5 * ell[i] * ell[i] + 0.5 * ell[j] * ell[j] - ell[i] * ell[j];
            }
        }
    }
    Ok(HadamardRelaxationMatrix { rates })
}

/// Diagonal superoperator entries arranged by density-matrix position, with
/// the population diagonal removed and the result centrosymmetrized.
pub fn t2_diag_matrix(g: &Supergenerator) -> Result<HadamardRelaxationMatrix> {
    let r = expect_basis(g, BasisKind::Zeeman)?;
    HadamardRelaxationMatrix::new(centrosymmetrize(&t2_rates_raw(r))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticT2 {
    /// `R_T2 − R_na`.
    pub rates: HadamardRelaxationMatrix,
    /// Spectrum of `−E R E`, descending.
    pub eigenvalues: Vec<f64>,
    pub lindblads: LindbladSystem,
}

/// Diagonal Lindblads from the spectrum of `−E (R_T2 − R_na) E`.
///
/// Every eigenpair `(μ, v)` with `μ` above `tol` (relative to the largest
/// entry) becomes `diag(√μ v)`. An eigenvalue below `−tol` means the T2
/// rates cannot come from a completely positive process.
pub fn adiabatic_decomposition(
    r_t2_zee: &HadamardRelaxationMatrix,
    r_t2_na: &HadamardRelaxationMatrix,
    tol: f64,
) -> Result<AdiabaticT2> {
    if r_t2_zee.rates.shape() != r_t2_na.rates.shape() {
        return Err(Error::DimensionMismatch { expected: r_t2_zee.n(), got: r_t2_na.n() });
    }
    let n = r_t2_zee.n();
    let rates = HadamardRelaxationMatrix::new(&r_t2_zee.rates - &r_t2_na.rates)?;
    let p = rates.projected();
    let cut = tol * p.abs().max();
    let eig = SymmetricEigen::new(p);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if let Some(&lowest) = eigenvalues.last() {
        if lowest < -cut {
            return Err(Error::NotCompletelyPositive(lowest));
        }
    }
    let mut lindblads = LindbladSystem::new(n);
    for (mode, &k) in order.iter().enumerate() {
        let mu = eig.eigenvalues[k];
        if mu <= cut {
            continue;
        }
        let diag: Vec<_> = eig.eigenvectors.column(k).iter().map(|&x| c(x * mu.sqrt(), 0.0)).collect();
        let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
        lindblads.push(LindbladTerm::new(fix_phase(&m), Provenance::HadamardT2Adiabatic).labeled(format!("mode {}", mode + 1)));
    }
    Ok(AdiabaticT2 { rates, eigenvalues, lindblads })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecompositionOptions {
    /// Replace the T1 block and T2 rates by their centrosymmetric parts.
    pub centrosymmetric: bool,
    pub merge: MergeOptions,
    /// Relative eigenvalue cut for the adiabatic modes.
    pub eigen_tolerance: f64,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions {
            centrosymmetric: true,
            merge: MergeOptions::default(),
            eigen_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationDecomposition {
    #[serde(with = "matrix::real_json")]
    pub r_t1_tra: RealMatrix,
    #[serde(with = "matrix::real_json")]
    pub r_t1_zee: RealMatrix,
    /// T1 block before symmetrization.
    #[serde(with = "matrix::real_json")]
    pub r_t1_zee_raw: RealMatrix,
    pub r_t2_zee: HadamardRelaxationMatrix,
    pub r_t2_na: HadamardRelaxationMatrix,
    pub r_t2_ad: HadamardRelaxationMatrix,
    pub nonadiabatic_rate: f64,
    pub diagonal_spread: f64,
    pub adiabatic_eigenvalues: Vec<f64>,
    /// T1, nonadiabatic T2 and adiabatic T2 operators.
    pub lindblads: LindbladSystem,
    pub discrepancy: f64,
}

impl RelaxationDecomposition {
    /// Operators whose dissipators sum to the modelled relaxation.
    ///
    /// The nonadiabatic set is left out: the T1 flips already produce
    /// that coherence decay.
    pub fn model_lindblads(&self) -> LindbladSystem {
        LindbladSystem {
            n: self.lindblads.n,
            terms: self
                .lindblads
                .terms
                .iter()
                .filter(|t| t.provenance != Provenance::HadamardT2Nonadiabatic)
                .cloned()
                .collect(),
        }
    }

    /// `1 / R_tra[k, k]` for the two single-spin longitudinal modes.
    pub fn longitudinal_times(&self) -> [f64; 2] {
        [1.0 / self.r_t1_tra[(1, 1)], 1.0 / self.r_t1_tra[(2, 2)]]
    }
}

/// Full two-spin decomposition of the relaxation part of `g`.
pub fn decompose(g: &Supergenerator, opts: &DecompositionOptions) -> Result<RelaxationDecomposition> {
    if g.n != N {
        return Err(Error::DimensionMismatch { expected: N, got: g.n });
    }
    let zee = g.to_basis(BasisKind::Zeeman)?;
    let sym = |m: RealMatrix| if opts.centrosymmetric { centrosymmetrize(&m) } else { Ok(m) };

    let r_t1_zee_raw = zeeman_t1_block(&zee)?;
    let r_t1_zee = sym(r_t1_zee_raw.clone())?;
    let r_t1_tra = t1_zeeman_to_transition(&r_t1_zee)?;
    let t1 = t1_lindblads(&r_t1_zee, opts.merge)?;
    let na = nonadiabatic_t2_lindblads(&r_t1_zee)?;

    let r_t2_zee = HadamardRelaxationMatrix::new(sym(t2_rates_raw(&zee.relaxation_part))?)?;
    let r_t2_na = nonadiabatic_matrix(na.rate.max(0.0));
    let ad = adiabatic_decomposition(&r_t2_zee, &r_t2_na, opts.eigen_tolerance)?;

    let mut lindblads = t1;
    lindblads.extend(na.lindblads);
    lindblads.extend(ad.lindblads);
    let discrepancy = discrepancy_of(&zee.relaxation_part, &r_t1_zee, &r_t2_zee)?;
    Ok(RelaxationDecomposition {
        r_t1_tra,
        r_t1_zee,
        r_t1_zee_raw,
        r_t2_zee,
        r_t2_na,
        r_t2_ad: ad.rates,
        nonadiabatic_rate: na.rate,
        diagonal_spread: na.spread,
        adiabatic_eigenvalues: ad.eigenvalues,
        lindblads,
        discrepancy,
    })
}

/// Supermatrix with the T2 rates on the diagonal and the T1 block on the
/// population positions, zero elsewhere.
pub fn model_superoperator(r_t1_zee: &RealMatrix, r_t2_zee: &HadamardRelaxationMatrix) -> Result<ComplexMatrix> {
    ensure_4x4(r_t1_zee)?;
    ensure_4x4(&r_t2_zee.rates)?;
    let mut s = r_t2_zee.superoperator();
    for j in 0..N {
        for k in 0..N {
            s[(j * (N + 1), k * (N + 1))] = c(r_t1_zee[(j, k)], 0.0);
        }
    }
    Ok(s)
}

fn discrepancy_of(r_zee: &ComplexMatrix, t1: &RealMatrix, t2: &HadamardRelaxationMatrix) -> Result<f64> {
    if r_zee.shape() != (N * N, N * N) {
        return Err(Error::DimensionMismatch { expected: N * N, got: r_zee.nrows() });
    }
    let model = model_superoperator(t1, t2)?;
    let denom = r_zee.norm_squared();
    let num = (r_zee - model).norm_squared();
    Ok(if denom > 0.0 { num / denom } else { 0.0 })
}

/// Relative squared Frobenius residual of the Zeeman supermatrix `r_zee`
/// against the decomposition's T1 block and T2 rates.
pub fn discrepancy(r_zee: &ComplexMatrix, decomp: &RelaxationDecomposition) -> Result<f64> {
    discrepancy_of(r_zee, &decomp.r_t1_zee, &decomp.r_t2_zee)
}
