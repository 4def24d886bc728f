// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use lindfit::liouville::matrix::{max_abs, max_abs_diff, ComplexMatrix};
use lindfit::liouville::{
    basis_change_matrix, commutation_superoperator, convert_superoperator, unvec, vec, BasisKind, OperatorBasis,
    COHERENCE_ORDER_BLOCKS,
};
use proptest::prelude::*;

fn bases() -> Vec<OperatorBasis> {
    vec![OperatorBasis::zeeman(4), OperatorBasis::cartesian(4).unwrap(), OperatorBasis::transition()]
}

proptest! {
    #[test]
    fn vec_unvec_are_inverse(m in common::complex_matrix(5, 10.0)) {
        let v = vec(&m).unwrap();
        prop_assert_eq!(unvec(&v).unwrap(), m.clone());
        prop_assert_eq!(vec(&unvec(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn commutators_are_traceless(h in common::hermitian_matrix(4, 5.0)) {
        let hc = commutation_superoperator(&h).unwrap();
        let id = vec(&ComplexMatrix::identity(4, 4)).unwrap();
        prop_assert!(max_abs(&(id.adjoint() * hc)) <= 1e-12);
    }

    #[test]
    fn every_basis_reconstructs_hermitian_matrices(h in common::hermitian_matrix(4, 3.0)) {
        for b in bases() {
            let back = b.reconstruct(&b.coefficients(&h).unwrap()).unwrap();
            prop_assert!(max_abs_diff(&back, &h) <= 1e-10, "{}", b.kind());
        }
    }

    #[test]
    fn hermitian_basis_coefficients_are_real(h in common::hermitian_matrix(4, 3.0)) {
        for b in [OperatorBasis::cartesian(4).unwrap(), OperatorBasis::transition()] {
            let coeffs = b.coefficients(&h).unwrap();
            prop_assert!(coeffs.iter().all(|z| z.im.abs() <= 1e-12));
        }
    }

    #[test]
    fn conversion_round_trips(s in common::complex_matrix(16, 1.0)) {
        let z = OperatorBasis::zeeman(4);
        let t = OperatorBasis::transition();
        let there = convert_superoperator(&s, &z, &t).unwrap();
        let back = convert_superoperator(&there, &t, &z).unwrap();
        prop_assert!(max_abs_diff(&back, &s) <= 1e-12);
    }
}

#[test]
fn transition_coherence_orders() {
    let t = OperatorBasis::transition();
    let orders = t.coherence_orders().unwrap();
    let count = |o: u8| orders.iter().filter(|&&x| x == o).count();
    assert_eq!((count(0), count(1), count(2)), (6, 8, 2));
    for (order, block) in COHERENCE_ORDER_BLOCKS.iter().enumerate() {
        assert!(block.clone().all(|k| orders[k] as usize == order));
    }
}

#[test]
fn transition_elements_have_their_coherence_order() {
    // Zeeman |s⟩ has magnetic number m = (number of up spins) - 1; an element
    // of order q connects states whose m differ by q.
    let m = |s: usize| 2 - (s >> 1 & 1) - (s & 1);
    let t = OperatorBasis::transition();
    for (e, &order) in t.elements().iter().zip(t.coherence_orders().unwrap()) {
        for i in 0..4 {
            for j in 0..4 {
                if e[(i, j)].norm() > 0.0 {
                    assert_eq!((m(i) as i32 - m(j) as i32).unsigned_abs(), order as u32);
                }
            }
        }
    }
}

#[test]
fn basis_change_matrices_are_unitary() {
    for a in bases() {
        for b in bases() {
            let u = basis_change_matrix(&a, &b).unwrap();
            let d = &u.adjoint() * &u - ComplexMatrix::identity(16, 16);
            assert!(max_abs(&d) <= 1e-12, "{} -> {}", a.kind(), b.kind());
        }
    }
}

#[test]
fn conversion_factor_between_report_scales() {
    let z = OperatorBasis::zeeman(4);
    let t = OperatorBasis::transition();
    let id = ComplexMatrix::identity(16, 16);
    let got = convert_superoperator(&id, &t, &z).unwrap();
    let k = BasisKind::Zeeman.report_scale() / BasisKind::Transition.report_scale();
    assert!(max_abs_diff(&got, &id.scale(k)) <= 1e-12);
}
