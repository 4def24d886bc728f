// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use lindfit::liouville::matrix::{c, hermitize, ComplexMatrix};
use proptest::prelude::*;

/// Arbitrary `n × n` complex matrix with entries in `[-scale, scale]`.
pub fn complex_matrix(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-scale..scale, 2 * n * n)
        .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| c(v[2 * (i * n + j)], v[2 * (i * n + j) + 1])))
}

pub fn hermitian_matrix(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n, scale).prop_map(|m| hermitize(&m))
}

/// Positive definite density matrix with unit trace.
pub fn density_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n, 1.0).prop_map(move |a| {
        let p = &a * a.adjoint() + ComplexMatrix::identity(n, n).scale(0.05);
        let t = p.trace().re;
        p.unscale(t)
    })
}
