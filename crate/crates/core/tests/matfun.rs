// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use lindfit::liouville::matrix::{c, max_abs_diff, ComplexMatrix};
use lindfit::matfun::{eig, expm, hermitian_eigenvalues, logm_principal, psd_project};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expm_semigroup(a in common::complex_matrix(4, 1.0), s in 0.0..2.0f64, t in 0.0..2.0f64) {
        let lhs = expm(&a, s).unwrap() * expm(&a, t).unwrap();
        let rhs = expm(&a, s + t).unwrap();
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn logm_inverts_expm(a in common::complex_matrix(4, 0.4)) {
        // Frobenius norm below π keeps the spectrum in the principal strip.
        let back = logm_principal(&expm(&a, 1.0).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&back, &a) <= 1e-8);
    }

    #[test]
    fn psd_projection(a in common::hermitian_matrix(5, 2.0)) {
        let p = psd_project(&a);
        let lowest = *hermitian_eigenvalues(&p).last().unwrap();
        prop_assert!(lowest >= -1e-10 * a.norm());
        prop_assert!(max_abs_diff(&psd_project(&p), &p) <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn eig_reconstructs(a in common::complex_matrix(5, 1.0)) {
        let e = eig(&a, false).unwrap();
        let v = e.vectors.clone();
        let cond = {
            let sv = v.singular_values();
            sv.max() / sv.min()
        };
        prop_assume!(cond < 1e6);
        let err = (e.recompose().unwrap() - &a).norm() / a.norm();
        prop_assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn hermitian_eig_reconstructs(a in common::hermitian_matrix(6, 1.0)) {
        let e = eig(&a, true).unwrap();
        let err = (e.recompose().unwrap() - &a).norm() / a.norm();
        prop_assert!(err <= 1e-10);
        let values: Vec<f64> = e.values.iter().map(|z| z.re).collect();
        prop_assert!(values.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn expm_of_rotation_generator() {
    let a = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let theta = 0.7f64;
    let want = ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(theta.cos(), 0.0), c(-theta.sin(), 0.0), c(theta.sin(), 0.0), c(theta.cos(), 0.0)],
    );
    assert!(max_abs_diff(&expm(&a, theta).unwrap(), &want) <= 1e-14);
}

#[test]
fn logm_rejects_negative_real_eigenvalue() {
    let a = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-1.0, 0.0), c(2.0, 0.0)]));
    assert!(matches!(logm_principal(&a), Err(lindfit::Error::BranchCut { .. })));
    let zero = ComplexMatrix::zeros(2, 2);
    assert!(matches!(logm_principal(&zero), Err(lindfit::Error::Singular)));
}

#[test]
fn expm_large_norm_matches_diagonal() {
    let d = nalgebra::DVector::from_vec(vec![c(-30.0, 5.0), c(1.0, -200.0), c(0.0, 0.0)]);
    let a = ComplexMatrix::from_diagonal(&d);
    let got = expm(&a, 1.0).unwrap();
    for k in 0..3 {
        let want = d[k].exp();
        assert!((got[(k, k)] - want).norm() <= 1e-12 * want.norm().max(1.0));
    }
}
