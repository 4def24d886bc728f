// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Plain-text tables, four decimals throughout.

use std::fmt::Write;

use lindfit::liouville::matrix::{max_abs, ComplexMatrix};
use nalgebra::DMatrix;

#[derive(Default)]
pub struct Table {
    out: String,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    pub fn heading(&mut self, title: &str) -> &mut Self {
        if !self.out.is_empty() {
            self.out.push('\n');
        }
        let _ = writeln!(self.out, "{title}");
        self
    }

    pub fn row(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.out, "  {key:<28} {value}");
        self
    }

    pub fn line(&mut self, text: &str) -> &mut Self {
        let _ = writeln!(self.out, "  {text}");
        self
    }

    pub fn real_matrix(&mut self, m: &DMatrix<f64>) -> &mut Self {
        let cells: Vec<String> = m.iter().map(|x| format!("{:.4}", clean(*x))).collect();
        self.grid(m.nrows(), m.ncols(), &cells);
        self
    }

    /// Real part only when the imaginary part is negligible.
    pub fn complex_matrix(&mut self, m: &ComplexMatrix) -> &mut Self {
        if m.iter().all(|z| z.im.abs() <= 1e-9 * max_abs(m).max(1.0)) {
            return self.real_matrix(&m.map(|z| z.re));
        }
        let cells: Vec<String> =
            m.iter().map(|z| format!("{:.4}{:+.4}i", clean(z.re), clean(z.im))).collect();
        self.grid(m.nrows(), m.ncols(), &cells);
        self
    }

    /// `cells` in column-major order, matching nalgebra storage.
    fn grid(&mut self, rows: usize, cols: usize, cells: &[String]) {
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..rows {
            let line: Vec<String> = (0..cols).map(|j| format!("{:>width$}", cells[j * rows + i])).collect();
            let _ = writeln!(self.out, "  {}", line.join(" "));
        }
    }

    pub fn finish(&self) -> String {
        self.out.clone()
    }
}

/// Avoids printing `-0.0000`.
fn clean(x: f64) -> f64 {
    if x.abs() < 5e-5 {
        0.0
    } else {
        x
    }
}

pub fn fixed(x: f64) -> String {
    format!("{:.4}", clean(x))
}

pub fn sci(x: f64) -> String {
    format!("{x:.4e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_decimals_row_major() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -0.00001, 0.25, 10.0]);
        let mut t = Table::new();
        t.real_matrix(&m);
        assert_eq!(t.finish(), "   1.0000  0.0000\n   0.2500 10.0000\n");
    }
}
