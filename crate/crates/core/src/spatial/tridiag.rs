use crate::error::{Error, Result};

use super::grid::SpatialGrid;

/// Tridiagonal matrix stored by diagonals; `lower[i]` multiplies `x[i-1]` and
/// `upper[i]` multiplies `x[i+1]` (`lower[0]` and `upper[n-1]` are unused).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if lower.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: lower.len() });
        }
        if upper.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: upper.len() });
        }
        Ok(Self { lower, diag, upper })
    }

    /// Constant-coefficient (Toeplitz) tridiagonal matrix of size `n`.
    pub fn constant(n: usize, lower: f64, diag: f64, upper: f64) -> Self {
        let mut lo = vec![lower; n];
        let mut up = vec![upper; n];
        if n > 0 {
            lo[0] = 0.0;
            up[n - 1] = 0.0;
        }
        Self { lower: lo, diag: vec![diag; n], upper: up }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Row-wise weak diagonal dominance.
    pub fn is_diagonally_dominant(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let off = if i > 0 { self.lower[i].abs() } else { 0.0 }
                + if i + 1 < n { self.upper[i].abs() } else { 0.0 };
            self.diag[i].abs() >= off
        })
    }
}

/// Thomas elimination for `A x = rhs`, O(n).
pub fn thomas_solve(a: &TridiagonalMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = a.diag[0];
    if pivot.abs() < 1e-300 {
        return Err(Error::SingularPivot { row: 0, pivot });
    }
    c[0] = if n > 1 { a.upper[0] / pivot } else { 0.0 };
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = a.diag[i] - a.lower[i] * c[i - 1];
        if pivot.abs() < 1e-300 {
            return Err(Error::SingularPivot { row: i, pivot });
        }
        if i + 1 < n {
            c[i] = a.upper[i] / pivot;
        }
        d[i] = (rhs[i] - a.lower[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Implicit part of the fully discrete scheme on the `M - 1` interior nodes:
/// `(b0 + c3 + 2c1/h^2)` on the diagonal, `-c1/h^2 + c2/(2h)` above and
/// `-c1/h^2 - c2/(2h)` below.
pub fn assemble_tridiagonal(b0: f64, c1: f64, c2: f64, c3: f64, grid: &SpatialGrid) -> TridiagonalMatrix {
    let h = grid.h();
    let diff = c1 / (h * h);
    let conv = c2 / (2.0 * h);
    TridiagonalMatrix::constant(grid.intervals() - 1, -diff - conv, b0 + c3 + 2.0 * diff, -diff + conv)
}
