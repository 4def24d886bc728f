// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring with diagonal Padé approximants.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::liouville::ComplexMatrix;

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Largest 1-norms for which each degree meets double precision.
const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

pub(crate) fn norm1<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|x| x.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, s: f64) -> DMatrix<T> {
    a.map(|x| x * T::from_real(s))
}

fn add_scaled<T: ComplexField<RealField = f64>>(acc: &mut DMatrix<T>, a: &DMatrix<T>, s: f64) {
    acc.zip_apply(a, |x, y| *x += y * T::from_real(s));
}

/// Odd part `u` and even part `v` of the degree-`m` Padé numerator.
fn pade_low<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, b: &[f64]) -> (DMatrix<T>, DMatrix<T>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut powers = vec![DMatrix::<T>::identity(n, n), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = DMatrix::<T>::zeros(n, n);
    let mut even = DMatrix::<T>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        add_scaled(&mut odd, p, b[2 * k + 1]);
        add_scaled(&mut even, p, b[2 * k]);
    }
    (a * odd, even)
}

fn pade13<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let b = &PADE13;
    let n = a.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut inner_u = scaled(&a6, b[13]);
    add_scaled(&mut inner_u, &a4, b[11]);
    add_scaled(&mut inner_u, &a2, b[9]);
    let mut outer_u = &a6 * inner_u;
    add_scaled(&mut outer_u, &a6, b[7]);
    add_scaled(&mut outer_u, &a4, b[5]);
    add_scaled(&mut outer_u, &a2, b[3]);
    add_scaled(&mut outer_u, &id, b[1]);
    let u = a * outer_u;

    let mut inner_v = scaled(&a6, b[12]);
    add_scaled(&mut inner_v, &a4, b[10]);
    add_scaled(&mut inner_v, &a2, b[8]);
    let mut v = &a6 * inner_v;
    add_scaled(&mut v, &a6, b[6]);
    add_scaled(&mut v, &a4, b[4]);
    add_scaled(&mut v, &a2, b[2]);
    add_scaled(&mut v, &id, b[0]);
    (u, v)
}

fn pade_quotient<T: ComplexField<RealField = f64>>(u: DMatrix<T>, v: DMatrix<T>) -> Result<DMatrix<T>> {
    (&v - &u).lu().solve(&(v + u)).ok_or(Error::Singular)
}

/// `exp(scale · a)` for any real or complex dense matrix.
pub fn expm_generic<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, scale: f64) -> Result<DMatrix<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.nrows(), a.ncols()));
    }
    let a = scaled(a, scale);
    let norm = norm1(&a);
    if !norm.is_finite() {
        return Err(Error::NonFinite { params: vec![norm] });
    }
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            let b: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = pade_low(&a, b);
            return pade_quotient(u, v);
        }
    }
    let squarings = (norm / THETA[4].1).log2().ceil().max(0.0) as i32;
    let a = scaled(&a, 0.5f64.powi(squarings));
    let (u, v) = pade13(&a);
    let mut r = pade_quotient(u, v)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// `exp(scale · a)`.
pub fn expm(a: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    expm_generic(a, scale)
}
