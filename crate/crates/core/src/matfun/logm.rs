// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Principal matrix logarithm by inverse scaling and squaring on the Schur form.

use num_complex::Complex64;

use super::eig::schur;
use crate::error::{Error, Result};
use crate::liouville::matrix::{ensure_square, ComplexMatrix};

/// Eigenvalues closer than this to the closed negative real axis are rejected.
pub const BRANCH_CUT_TOL: f64 = 1e-10;

const SQRT_TARGET: f64 = 0.25;
const MAX_SQRTS: usize = 100;
const QUADRATURE_POINTS: usize = 8;

/// Principal square root of an upper-triangular matrix.
fn sqrt_triangular(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.nrows();
    let mut u = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        u[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= u[(i, k)] * u[(k, j)];
            }
            u[(i, j)] = s / (u[(i, i)] + u[(j, j)]);
        }
    }
    u
}

/// Gauss–Legendre nodes and weights on [0, 1].
fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

fn solve_upper(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.solve_upper_triangular(b).ok_or(Error::Singular)
}

/// Principal logarithm; errors on singular input or spectrum on the branch cut.
pub fn logm_principal(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ensure_square(a)?;
    let (q, mut t) = schur(a)?;
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let z = t[(k, k)];
        if z.norm() <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        if z.re < 0.0 && z.im.abs() <= BRANCH_CUT_TOL {
            return Err(Error::BranchCut { re: z.re, im: z.im });
        }
    }

    let id = ComplexMatrix::identity(n, n);
    let mut roots = 0;
    while super::expm::norm1(&(&t - &id)) > SQRT_TARGET {
        if roots == MAX_SQRTS {
            return Err(Error::NoConvergence("logarithm square-root phase"));
        }
        t = sqrt_triangular(&t);
        roots += 1;
    }

    // log(I + X) = ∫₀¹ X (I + sX)⁻¹ ds, evaluated by quadrature.
    let x = &t - &id;
    let mut log = ComplexMatrix::zeros(n, n);
    for (node, weight) in gauss_legendre(QUADRATURE_POINTS) {
        let denom = &id + x.scale(node);
        log += solve_upper(&denom, &x)?.scale(weight);
    }
    log *= Complex64::new(2f64.powi(roots as i32), 0.0);
    Ok(&q * log * q.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::matrix::{c, from_real_rows, max_abs_diff};
    use crate::matfun::expm;

    #[test]
    fn identity_gives_zero() {
        let l = logm_principal(&ComplexMatrix::identity(4, 4)).unwrap();
        assert!(crate::liouville::matrix::max_abs(&l) < 1e-15);
    }

    #[test]
    fn quadrature_integrates_polynomials() {
        let rule = gauss_legendre(QUADRATURE_POINTS);
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        let cubic: f64 = rule.iter().map(|&(x, w)| w * x.powi(7)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!((cubic - 0.125).abs() < 1e-15);
    }

    #[test]
    fn inverts_expm_for_rotation() {
        let a = from_real_rows(&[&[0.0, -2.0], &[2.0, 0.0]]);
        let l = logm_principal(&expm(&a, 1.0).unwrap()).unwrap();
        assert!(max_abs_diff(&l, &a) < 1e-12);
    }

    #[test]
    fn minus_one_is_on_the_cut() {
        let m = from_real_rows(&[&[-1.0, 0.0], &[0.0, 2.0]]);
        assert!(matches!(logm_principal(&m), Err(Error::BranchCut { .. })));
        let s = from_real_rows(&[&[0.0, 0.0], &[0.0, 2.0]]);
        assert!(matches!(logm_principal(&s), Err(Error::Singular)));
    }

    #[test]
    fn non_normal_block() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(5.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let l = logm_principal(&m).unwrap();
        assert!(max_abs_diff(&expm(&l, 1.0).unwrap(), &m) < 1e-12);
    }
}
