use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

use super::ops::{gradient, laplacian};

/// Uniform grid `x_i = x_l + i h`, `i = 0..=M`, with interior nodes `1..M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_l: f64,
    x_r: f64,
    m: usize,
    h: f64,
}

impl SpatialGrid {
    pub fn new(x_l: f64, x_r: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("spatial grid needs M >= 2, got {m}")));
        }
        if !(x_r > x_l) || !x_l.is_finite() || !x_r.is_finite() {
            return Err(Error::invalid(format!("empty spatial domain ({x_l}, {x_r})")));
        }
        Ok(Self { x_l, x_r, m, h: (x_r - x_l) / m as f64 })
    }

    /// Number of subintervals `M`.
    pub fn intervals(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn left(&self) -> f64 {
        self.x_l
    }

    pub fn right(&self) -> f64 {
        self.x_r
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.m {
            self.x_r
        } else {
            self.x_l + i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|i| self.node(i)).collect()
    }

    pub(crate) fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.m + 1 {
            return Err(Error::DimensionMismatch { expected: self.m + 1, got: u.len() });
        }
        Ok(())
    }
}

/// Nodal values on a [`SpatialGrid`], boundary entries included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: &SpatialGrid) -> Self {
        Self { values: vec![0.0; grid.intervals() + 1] }
    }

    pub fn from_fn(grid: &SpatialGrid, f: impl Fn(f64) -> f64) -> Self {
        Self { values: (0..=grid.intervals()).map(|i| f(grid.node(i))).collect() }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Interior values `u_1..u_{M-1}`.
    pub fn interior(&self) -> &[f64] {
        &self.values[1..self.values.len() - 1]
    }

    pub fn interior_mut(&mut self) -> &mut [f64] {
        let n = self.values.len();
        &mut self.values[1..n - 1]
    }

    /// `a * self + b * other`, boundary entries included.
    pub fn axpby(&self, a: f64, other: &GridFunction, b: f64) -> GridFunction {
        debug_assert_eq!(self.len(), other.len());
        Self {
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for GridFunction {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

impl Deref for GridFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for GridFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// Discrete inner product `h sum_{i=1}^{M-1} u_i v_i`.
pub fn inner(grid: &SpatialGrid, u: &[f64], v: &[f64]) -> f64 {
    let m = grid.intervals();
    grid.h() * (1..m).map(|i| u[i] * v[i]).sum::<f64>()
}

pub fn l2_norm(grid: &SpatialGrid, u: &[f64]) -> f64 {
    inner(grid, u, u).sqrt()
}

/// `sqrt(<-Delta_h u, u>)`. A negative form beyond rounding is reported as an
/// error; it cannot occur for grid functions vanishing on the boundary.
pub fn h1_seminorm(grid: &SpatialGrid, u: &[f64]) -> Result<f64> {
    grid.check(u)?;
    let lap = laplacian(grid, u);
    let q = -inner(grid, &lap, u);
    let scale = inner(grid, u, u).max(f64::MIN_POSITIVE) / (grid.h() * grid.h());
    if q < -1e-14 * scale {
        return Err(Error::NegativeSeminorm(q));
    }
    Ok(q.max(0.0).sqrt())
}

/// The three nonnegative pieces of `|u|_1^2` for `u` vanishing on the boundary:
/// `||grad_h u||^2 + (h^2/4) ||Delta_h u||^2 + (u_1^2 + u_{M-1}^2) / (2h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormParts {
    pub gradient: f64,
    pub laplacian: f64,
    pub boundary: f64,
}

impl SeminormParts {
    pub fn total(&self) -> f64 {
        self.gradient + self.laplacian + self.boundary
    }
}

pub fn seminorm_decomposition(grid: &SpatialGrid, u: &[f64]) -> SeminormParts {
    let h = grid.h();
    let m = grid.intervals();
    let g = gradient(grid, u);
    let l = laplacian(grid, u);
    SeminormParts {
        gradient: inner(grid, &g, &g),
        laplacian: 0.25 * h * h * inner(grid, &l, &l),
        boundary: (u[1] * u[1] + u[m - 1] * u[m - 1]) / (2.0 * h),
    }
}
