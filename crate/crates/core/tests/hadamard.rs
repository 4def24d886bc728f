// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use lindfit::cp::{dissipator_from_lindblads, LindbladSystem, LindbladTerm, Provenance};
use lindfit::hadamard::{
    adiabatic_decomposition, centrosymmetrize, hadamard_matrix_of_diagonal_lindblads, hadamard_transform_4,
    t1_lindblads, t1_transition_to_zeeman, t1_zeeman_to_transition, HadamardRelaxationMatrix, MergeOptions,
    RealMatrix,
};
use lindfit::liouville::matrix::{c, max_abs_diff, ComplexMatrix};
use lindfit::liouville::{unvec, vec};
use proptest::prelude::*;

fn real_matrix(n: usize, scale: f64) -> impl Strategy<Value = RealMatrix> {
    prop::collection::vec(-scale..scale, n * n).prop_map(move |v| RealMatrix::from_vec(n, n, v))
}

fn diagonal_lindblads(n: usize) -> impl Strategy<Value = LindbladSystem> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), 1..5).prop_map(move |ds| {
        let mut sys = LindbladSystem::new(n);
        for d in ds {
            let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, d.iter().map(|&x| c(x, 0.0))));
            sys.push(LindbladTerm::new(m, Provenance::Spectral));
        }
        sys
    })
}

/// Zeeman T1 block with non-negative transfer rates `j → k` and
/// population conservation.
fn population_block() -> impl Strategy<Value = RealMatrix> {
    prop::collection::vec(0.0..1.0f64, 16).prop_map(|v| {
        let mut r = RealMatrix::zeros(4, 4);
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    r[(k, j)] = -v[4 * j + k];
                    r[(j, j)] += v[4 * j + k];
                }
            }
        }
        r
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t1_basis_maps_are_inverse(r in real_matrix(4, 2.0)) {
        let w = hadamard_transform_4();
        prop_assert!((&w * &w - RealMatrix::identity(4, 4)).abs().max() <= 1e-15);
        let back = t1_transition_to_zeeman(&t1_zeeman_to_transition(&r).unwrap()).unwrap();
        prop_assert!((back - &r).abs().max() <= 1e-14);
    }

    #[test]
    fn centrosymmetrization_is_a_linear_projection(a in real_matrix(4, 1.0), b in real_matrix(4, 1.0), k in -3.0..3.0f64) {
        let pa = centrosymmetrize(&a).unwrap();
        prop_assert!((centrosymmetrize(&pa).unwrap() - &pa).abs().max() <= 1e-15);
        let lhs = centrosymmetrize(&(&a * k + &b)).unwrap();
        let rhs = pa * k + centrosymmetrize(&b).unwrap();
        prop_assert!((lhs - rhs).abs().max() <= 1e-14);
    }

    #[test]
    fn entrywise_action_matches_the_dissipator(ls in diagonal_lindblads(4), rho in common::density_matrix(4)) {
        let h = hadamard_matrix_of_diagonal_lindblads(&ls).unwrap();
        prop_assert!(h.has_zero_diagonal(1e-14));
        let d = dissipator_from_lindblads(&ls).unwrap();
        let want = unvec(&(d * vec(&rho).unwrap())).unwrap();
        prop_assert!(max_abs_diff(&h.apply(&rho).unwrap(), &want) <= 1e-12);
    }

    #[test]
    fn adiabatic_weights_sum_to_the_projected_trace(ls in diagonal_lindblads(4)) {
        let h = hadamard_matrix_of_diagonal_lindblads(&ls).unwrap();
        let ad = adiabatic_decomposition(&h, &HadamardRelaxationMatrix::zeros(4), 1e-10).unwrap();
        let total: f64 = ad.lindblads.weights().iter().sum();
        prop_assert!((total - h.projected().trace()).abs() <= 1e-10);
        let rebuilt = hadamard_matrix_of_diagonal_lindblads(&ad.lindblads).unwrap();
        prop_assert!((rebuilt.rates - &h.rates).abs().max() <= 1e-10);
    }

    #[test]
    fn unmerged_t1_lindblads_rebuild_the_block(r in population_block()) {
        let ls = t1_lindblads(&r, MergeOptions { merge_degenerate: false, ..MergeOptions::default() }).unwrap();
        let rebuilt = -dissipator_from_lindblads(&ls).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                prop_assert!((rebuilt[(j * 5, k * 5)] - c(r[(j, k)], 0.0)).norm() <= 1e-12);
            }
        }
    }
}
