// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Derivative-free Nelder–Mead simplex minimizer.

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub reflect: f64,
    pub expand: f64,
    pub contract: f64,
    pub shrink: f64,
}

impl Coefficients {
    pub const STANDARD: Coefficients = Coefficients {
        reflect: 1.0,
        expand: 2.0,
        contract: 0.5,
        shrink: 0.5,
    };

    /// Dimension-dependent coefficients that keep expansion and shrinkage
    /// from dominating in high dimension.
    pub fn adaptive(dim: usize) -> Coefficients {
        let n = dim.max(2) as f64;
        Coefficients {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 1.0 / (2.0 * n),
            shrink: 1.0 - 1.0 / n,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub coefficients: Coefficients,
    pub max_iterations: usize,
    /// Convergence threshold on simplex diameter (max-norm about the best vertex).
    pub x_tol: f64,
    /// Convergence threshold on the objective spread across vertices.
    pub f_tol: f64,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// First point where the objective was not finite, if any.
    pub non_finite_at: Option<Vec<f64>>,
}

/// Simplex `x0, x0 + δ₁e₁, …` with `δᵢ = max(rel·|x0ᵢ|, floor)`.
pub fn axis_simplex(x0: &[f64], rel: f64, floor: f64) -> Vec<Vec<f64>> {
    let mut out = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        let step = (rel * x0[i].abs()).max(floor);
        v[i] += if x0[i] < 0.0 { -step } else { step };
        out.push(v);
    }
    out
}

struct Tracker<'a, F> {
    f: &'a F,
    evaluations: usize,
    non_finite_at: Option<Vec<f64>>,
}

impl<F: Fn(&[f64]) -> f64 + Sync> Tracker<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        self.sanitize(x, v)
    }

    fn eval_many(&mut self, xs: &[Vec<f64>]) -> Vec<f64> {
        self.evaluations += xs.len();
        let f = self.f;
        let raw: Vec<f64> = xs.par_iter().map(|x| f(x)).collect();
        raw.into_iter().zip(xs).map(|(v, x)| self.sanitize(x, v)).collect()
    }

    fn sanitize(&mut self, x: &[f64], v: f64) -> f64 {
        if v.is_finite() {
            v
        } else {
            if self.non_finite_at.is_none() {
                self.non_finite_at = Some(x.to_vec());
            }
            f64::INFINITY
        }
    }
}

fn affine(c: &[f64], towards: &[f64], t: f64) -> Vec<f64> {
    c.iter().zip(towards).map(|(ci, xi)| ci + t * (xi - ci)).collect()
}

/// Minimizes `f` from the given initial simplex (`dim + 1` vertices).
///
/// Vertex evaluations that are independent (initialization, shrink) run in
/// parallel; the result does not depend on thread scheduling.
pub fn minimize<F>(f: &F, simplex: Vec<Vec<f64>>, opts: &Options) -> Outcome
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = simplex.len().saturating_sub(1);
    let mut tracker = Tracker {
        f,
        evaluations: 0,
        non_finite_at: None,
    };
    let mut values = tracker.eval_many(&simplex);
    let mut pts = simplex;
    let co = opts.coefficients;
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        pts = order.iter().map(|&i| std::mem::take(&mut pts[i])).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[dim] - values[0];
        let diameter = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if dim == 0 || (diameter <= opts.x_tol && spread <= opts.f_tol) {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for p in &pts[..dim] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let worst = pts[dim].clone();
        let xr = affine(&centroid, &worst, -co.reflect);
        let fr = tracker.eval(&xr);

        if fr < values[0] {
            let xe = affine(&centroid, &xr, co.expand);
            let fe = tracker.eval(&xe);
            if fe < fr {
                pts[dim] = xe;
                values[dim] = fe;
            } else {
                pts[dim] = xr;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            pts[dim] = xr;
            values[dim] = fr;
            continue;
        }
        let (xc, fc, accept) = if fr < values[dim] {
            let xc = affine(&centroid, &xr, co.contract);
            let fc = tracker.eval(&xc);
            let ok = fc <= fr;
            (xc, fc, ok)
        } else {
            let xc = affine(&centroid, &worst, co.contract);
            let fc = tracker.eval(&xc);
            let ok = fc < values[dim];
            (xc, fc, ok)
        };
        if accept {
            pts[dim] = xc;
            values[dim] = fc;
            continue;
        }
        let best = pts[0].clone();
        let shrunk: Vec<Vec<f64>> = pts[1..].iter().map(|p| affine(&best, p, co.shrink)).collect();
        let fs = tracker.eval_many(&shrunk);
        for (k, (p, v)) in shrunk.into_iter().zip(fs).enumerate() {
            pts[k + 1] = p;
            values[k + 1] = v;
        }
    }

    Outcome {
        x: pts.swap_remove(0),
        f: values[0],
        iterations,
        evaluations: tracker.evaluations,
        converged,
        non_finite_at: tracker.non_finite_at,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(max_iterations: usize) -> Options {
        Options {
            coefficients: Coefficients::STANDARD,
            max_iterations,
            x_tol: 1e-10,
            f_tol: 1e-14,
        }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(&f, axis_simplex(&[-1.2, 1.0], 0.05, 1e-3), &opts(10_000));
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quadratic_in_ten_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.5).powi(2)).sum();
        let out = minimize(&f, axis_simplex(&[0.0; 10], 0.05, 0.1), &opts(50_000));
        assert!(out.x.iter().all(|v| (v - 0.5).abs() < 1e-5), "{:?}", out.x);
    }

    #[test]
    fn records_non_finite_points() {
        let f = |x: &[f64]| if x[0] > 0.5 { f64::NAN } else { (x[0] - 0.4).powi(2) };
        let out = minimize(&f, vec![vec![0.0], vec![1.0]], &opts(200));
        assert!(out.non_finite_at.is_some());
        assert!((out.x[0] - 0.4).abs() < 1e-5);
    }

    #[test]
    fn iteration_cap_returns_best_point() {
        let f = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        let out = minimize(&f, axis_simplex(&[3.0, 4.0], 0.05, 1e-3), &opts(3));
        assert!(!out.converged);
        assert!(out.f <= 25.0);
    }
}
