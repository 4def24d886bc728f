// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Forward simulation and synthetic datasets.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cp::{cp_penalty, dissipator_from_lindblads, LindbladSystem, LindbladTerm, Provenance, Supergenerator};
use crate::error::{Error, Result};
use crate::estimators::{FitConfig, Parameterization, Records, StatePair, TomographyDataset};
use crate::liouville::matrix::{self, from_real, hermitize, max_abs, trace, ComplexMatrix, I, ONE};
use crate::liouville::{hamiltonian_from_commutator, pauli2, unvec, vec, BasisKind, OperatorBasis};
use crate::matfun::hermitian_eigenvalues;

/// Exact superpropagators `exp(−G t)` at each time.
pub fn simulate_propagators(g: &Supergenerator, times: &[f64]) -> Result<TomographyDataset> {
    let z = g.to_basis(BasisKind::Zeeman)?;
    let h = hamiltonian_from_commutator(&(-(&z.hamiltonian_part * I)))?;
    let propagators = times.iter().map(|&t| z.propagator(t)).collect::<Result<Vec<_>>>()?;
    TomographyDataset::from_propagators(hermitize(&h), times.to_vec(), propagators)
}

/// Positive-definite input state associated with a basis element.
///
/// Hermitian elements `B` give `(I + ½ B/‖B‖) / tr(·)`; a non-Hermitian
/// element `|r⟩⟨c|` is first replaced by its Hermitian partner
/// (`|r⟩⟨c| + |c⟩⟨r|` when `r < c`, `i|r⟩⟨c| − i|c⟩⟨r|` otherwise).
pub fn input_state(element: &ComplexMatrix) -> ComplexMatrix {
    let n = element.nrows();
    let id = ComplexMatrix::identity(n, n);
    let b = if matrix::is_hermitian(element, 1e-12) {
        element.clone()
    } else {
        let anti = element - element.adjoint();
        let sym = element + element.adjoint();
        let (r, c) = element
            .iter()
            .enumerate()
            .find(|(_, z)| z.norm() > 0.0)
            .map(|(k, _)| (k % n, k / n))
            .unwrap_or((0, 0));
        if r < c { sym } else { anti * I }
    };
    let spectral = hermitian_eigenvalues(&b).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if spectral == 0.0 || (&b - id.scale(b[(0, 0)].re)).norm() < 1e-12 * b.norm() {
        return id.unscale(n as f64);
    }
    let rho = id + b.unscale(2.0 * spectral);
    let tr = trace(&rho).re;
    hermitize(&rho.unscale(tr))
}

/// Input/output state pairs at one time, one input per basis element.
pub fn simulate_state_pairs(g: &Supergenerator, time: f64, basis: &OperatorBasis) -> Result<Vec<StatePair>> {
    if basis.dimension() != g.n || basis.elements().len() != g.n * g.n {
        return Err(Error::RankDeficient);
    }
    let p = g.to_basis(BasisKind::Zeeman)?.propagator(time)?;
    basis
        .elements()
        .iter()
        .map(|e| {
            let input = input_state(e);
            let output = hermitize(&unvec(&(&p * vec(&input)?))?);
            Ok(StatePair { input, output })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseTarget {
    DensityMatrices,
    Propagators,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Standard deviation relative to the largest element magnitude.
    pub sigma: f64,
    pub seed: u64,
    pub target: NoiseTarget,
}

fn perturb(m: &ComplexMatrix, sigma: f64, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let scale = sigma * max_abs(m);
    m.map(|z| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        z + Complex64::new(re, im) * scale
    })
}

/// Gaussian element noise; density matrices are re-Hermitized and
/// trace-renormalized after perturbation.
pub fn add_noise(ds: &TomographyDataset, spec: NoiseSpec) -> Result<TomographyDataset> {
    if spec.sigma.is_nan() || spec.sigma < 0.0 {
        return Err(Error::Invalid(format!("noise sigma must be non-negative, got {}", spec.sigma)));
    }
    if spec.sigma == 0.0 {
        return Ok(ds.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let records = match (spec.target, &ds.records) {
        (NoiseTarget::Propagators, _) => Records::Propagators(
            ds.propagators()?
                .iter()
                .map(|p| perturb(p, spec.sigma, &mut rng))
                .collect(),
        ),
        (NoiseTarget::DensityMatrices, Records::StatePairs(sets)) => Records::StatePairs(
            sets.iter()
                .map(|set| {
                    set.iter()
                        .map(|pair| {
                            let noisy = hermitize(&perturb(&pair.output, spec.sigma, &mut rng));
                            let tr = trace(&noisy).re;
                            StatePair {
                                input: pair.input.clone(),
                                output: noisy.unscale(tr),
                            }
                        })
                        .collect()
                })
                .collect(),
        ),
        (NoiseTarget::DensityMatrices, Records::Propagators(_)) => {
            return Err(Error::InvalidDataset(
                "density-matrix noise needs a state-pair dataset".into(),
            ))
        }
    };
    let out = TomographyDataset {
        records,
        ..ds.clone()
    };
    out.validate()?;
    Ok(out)
}

fn complex_gaussian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Random traceless Lindblads, each of squared norm `rate_scale`.
pub fn random_lindblads(n: usize, num_lindblads: usize, rate_scale: f64, seed: u64) -> Result<LindbladSystem> {
    if num_lindblads > n * n {
        return Err(Error::Invalid(format!("at most {} Lindblads for n = {n}", n * n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ls = LindbladSystem::new(n);
    for _ in 0..num_lindblads {
        let mut l = complex_gaussian(n, &mut rng);
        let shift = trace(&l) / Complex64::new(n as f64, 0.0);
        for k in 0..n {
            l[(k, k)] -= shift;
        }
        let l = l.unscale(l.norm()).scale(rate_scale.sqrt());
        ls.push(LindbladTerm::new(l, Provenance::Spectral));
    }
    Ok(ls)
}

/// Completely positive relaxation-only generator from random Lindblads.
pub fn random_cp_generator(n: usize, num_lindblads: usize, rate_scale: f64, seed: u64) -> Result<Supergenerator> {
    let ls = random_lindblads(n, num_lindblads, rate_scale, seed)?;
    let r = -dissipator_from_lindblads(&ls)?;
    Supergenerator::new(n, ComplexMatrix::zeros(n * n, n * n), r, BasisKind::Zeeman)
}

/// Orthonormal basis (rows) of kite parameter vectors whose relaxation
/// supermatrix commutes with the Hamiltonian part.
pub fn secular_kite_subspace(h: &ComplexMatrix) -> Result<(Parameterization, DMatrix<f64>)> {
    let param = Parameterization::new(4, &FitConfig::default())?;
    let g = Supergenerator::from_hamiltonian(h, ComplexMatrix::zeros(16, 16))?.to_basis(BasisKind::Transition)?;
    let g0 = g.hamiltonian_part.map(|z| z.re);
    let k = param.len();
    let mut a = DMatrix::<f64>::zeros(256, k);
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        let r = param.matrix(&e);
        let comm = &g0 * &r - &r * &g0;
        a.set_column(j, &nalgebra::DVector::from_column_slice(comm.as_slice()));
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.ok_or(Error::NoConvergence("singular value decomposition"))?;
    let cutoff = 1e-8 * svd.singular_values.max();
    let rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cutoff)
        .collect();
    let mut basis = DMatrix::zeros(rows.len(), k);
    for (dst, &src) in rows.iter().enumerate() {
        basis.set_row(dst, &vt.row(src));
    }
    Ok((param, basis))
}

/// Random physical two-spin relaxation: population-flip jumps between all
/// Zeeman levels plus correlated longitudinal dephasing.
fn physical_two_spin_relaxation(rate_scale: f64, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    let mut ls = LindbladSystem::new(4);
    for a in 0..4 {
        for b in a + 1..4 {
            for (r, c) in [(a, b), (b, a)] {
                let mut l = ComplexMatrix::zeros(4, 4);
                l[(r, c)] = ONE.scale((rate_scale * rng.random_range(0.1..0.5)).sqrt());
                ls.push(LindbladTerm::new(l, Provenance::Spectral));
            }
        }
    }
    let zs = [pauli2(3, 0), pauli2(0, 3), pauli2(3, 3)];
    for _ in 0..3 {
        let mut l = ComplexMatrix::zeros(4, 4);
        for z in &zs {
            let w: f64 = StandardNormal.sample(rng);
            l += z.scale(w * (rate_scale / 8.0).sqrt());
        }
        ls.push(LindbladTerm::new(l, Provenance::Spectral));
    }
    Ok(-dissipator_from_lindblads(&ls)?)
}

/// Attempts made by [`random_secular_kite_generator`] before giving up.
pub const SECULAR_ATTEMPTS: usize = 1000;

/// Random completely positive two-spin generator whose relaxation part has
/// the kite structure and commutes with the Hamiltonian part.
///
/// A physical relaxation supermatrix is projected onto the secular kite
/// subspace and rescaled so its mean decay rate is `rate_scale`; draws
/// whose projection is not completely positive are rejected. The result
/// is expressed in the transition basis.
pub fn random_secular_kite_generator(h: &ComplexMatrix, rate_scale: f64, seed: u64) -> Result<Supergenerator> {
    let (param, basis) = secular_kite_subspace(h)?;
    let g0 = Supergenerator::from_hamiltonian(h, ComplexMatrix::zeros(16, 16))?.to_basis(BasisKind::Transition)?;
    let zeeman = OperatorBasis::zeeman(4);
    let transition = OperatorBasis::transition();
    let to_tra = crate::liouville::basis_change_matrix(&zeeman, &transition)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SECULAR_ATTEMPTS {
        let r_zee = physical_two_spin_relaxation(rate_scale, &mut rng)?;
        let r_tra = (&to_tra * r_zee * to_tra.adjoint()).map(|z| z.re);
        let p = nalgebra::DVector::from_vec(param.extract(&r_tra));
        let projected = basis.transpose() * (&basis * p);
        let mut r = param.matrix(projected.as_slice());
        let mean_rate = r.diagonal().iter().skip(1).sum::<f64>() / 15.0;
        if mean_rate.is_nan() || mean_rate <= 0.0 {
            continue;
        }
        r *= rate_scale / mean_rate;
        let g = g0.with_relaxation(from_real(&r));
        if cp_penalty(&g)? <= 1e-24 {
            return Ok(g);
        }
    }
    Err(Error::NoConvergence("secular generator sampling"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::matrix::max_abs_diff;
    use crate::liouville::{two_spin_hamiltonian, TwoSpinHamiltonian};

    #[test]
    fn zero_time_and_identity_evolution() {
        let g = random_cp_generator(2, 0, 1.0, 1).unwrap();
        assert_eq!(max_abs(&g.relaxation_part), 0.0);
        let pairs = simulate_state_pairs(&g, 1.0, &OperatorBasis::cartesian(2).unwrap()).unwrap();
        for p in &pairs {
            assert!(max_abs_diff(&p.input, &p.output) < 1e-14);
        }
    }

    #[test]
    fn input_states_are_mixed_and_positive() {
        for b in [OperatorBasis::zeeman(4), OperatorBasis::transition()] {
            for e in b.elements() {
                let rho = input_state(e);
                assert!((trace(&rho).re - 1.0).abs() < 1e-14);
                assert!(hermitian_eigenvalues(&rho).iter().all(|&x| x > 0.05));
            }
        }
    }

    #[test]
    fn noise_is_seed_deterministic() {
        let g = random_cp_generator(2, 2, 0.5, 3).unwrap();
        let ds = simulate_propagators(&g, &[0.5, 1.0]).unwrap();
        let spec = NoiseSpec {
            sigma: 0.01,
            seed: 9,
            target: NoiseTarget::Propagators,
        };
        assert_eq!(add_noise(&ds, spec).unwrap(), add_noise(&ds, spec).unwrap());
        assert_eq!(add_noise(&ds, NoiseSpec { sigma: 0.0, ..spec }).unwrap(), ds);
    }

    #[test]
    fn secular_generator_commutes_with_hamiltonian() {
        let h = two_spin_hamiltonian(TwoSpinHamiltonian::DIBROMOTHIOPHENE);
        let g = random_secular_kite_generator(&h, 0.3, 5).unwrap();
        let (a, r) = (&g.hamiltonian_part, &g.relaxation_part);
        assert!(max_abs(&(a * r - r * a)) < 1e-9);
        assert!(cp_penalty(&g).unwrap() <= 1e-24);
    }
}
