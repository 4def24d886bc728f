// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DVector;
use num_complex::Complex64;

use super::dataset::TomographyDataset;
use super::hamiltonian_part;
use crate::cp::Supergenerator;
use crate::error::{Error, Result};
use crate::liouville::matrix::ComplexMatrix;
use crate::liouville::BasisKind;
use crate::matfun::eig;

/// Eigenvector matrices with reciprocal condition below this are treated as defective.
pub const DEFECTIVE_RCOND: f64 = 1e-12;

/// Relaxation estimate from the moduli of propagator eigenvalues.
///
/// Each `P_m = V diag(ζ) V⁻¹` contributes `V diag(−ln|ζ| / t_m) V⁻¹`; the
/// phases, which carry the Hamiltonian and its `2π` ambiguity, are
/// discarded. Valid when the Hamiltonian and relaxation parts (nearly)
/// commute. Estimates are averaged over all times.
pub fn eigenlog_average_estimate(ds: &TomographyDataset) -> Result<Supergenerator> {
    let ps = ds.propagators()?;
    let d = ds.n * ds.n;
    let mut acc = ComplexMatrix::zeros(d, d);
    for (p, &t) in ps.iter().zip(&ds.times) {
        let e = eig(p, false)?;
        let svd = e.vectors.clone().svd(false, false);
        if svd.singular_values.min() <= DEFECTIVE_RCOND * svd.singular_values.max() {
            return Err(Error::Singular);
        }
        let rates = e
            .values
            .iter()
            .map(|z| {
                let modulus = z.norm();
                if modulus <= f64::MIN_POSITIVE {
                    Err(Error::Singular)
                } else {
                    Ok(Complex64::new(-modulus.ln() / t, 0.0))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let inv = e.vectors.clone().try_inverse().ok_or(Error::Singular)?;
        acc += &e.vectors * ComplexMatrix::from_diagonal(&DVector::from_vec(rates)) * inv;
    }
    let r = acc.unscale(ps.len() as f64);
    Supergenerator::new(ds.n, hamiltonian_part(ds)?, r, BasisKind::Zeeman)
}
