//! Concrete problem definitions.

mod manufactured;
mod merton;

use std::fmt;
use std::sync::Arc;

pub use manufactured::{manufactured_problem, manufactured_problem_on};
pub use merton::{
    black_scholes_call, interpolate_cubic, merton_problem, merton_reference_price, merton_series_price, price_at,
    MertonParams,
};

use crate::error::{Error, Result};
use crate::spatial::{IntegralKernel, SpatialGrid};

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type BoundaryFn = Arc<dyn Fn(Side, f64) -> f64 + Send + Sync>;

/// Boundary side of the spatial interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `u_t - c1 u_xx + c2 u_x + c3 u + J(u) = f` on `(x_l, x_r) x (0, T]` with
/// `J(u)(x) = int u(z) rho(z - x, t) dz` and Dirichlet data.
#[derive(Clone)]
pub struct PideProblem {
    pub x_l: f64,
    pub x_r: f64,
    pub final_time: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub rho: IntegralKernel,
    /// Source term; `None` means `f = 0`.
    pub source: Option<SpaceTimeFn>,
    pub initial: SpaceFn,
    pub boundary: BoundaryFn,
    pub exact: Option<SpaceTimeFn>,
    /// Regularity exponent of the solution near `t = 0` (metadata).
    pub alpha: f64,
}

impl PideProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0) {
            return Err(Error::invalid(format!("diffusion coefficient c1 must be positive, got {}", self.c1)));
        }
        if !(self.x_r > self.x_l) {
            return Err(Error::invalid("empty spatial domain"));
        }
        if !(self.final_time > 0.0) {
            return Err(Error::invalid("final time must be positive"));
        }
        if ![self.c2, self.c3].iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        Ok(())
    }

    pub fn grid(&self, m: usize) -> Result<SpatialGrid> {
        SpatialGrid::new(self.x_l, self.x_r, m)
    }

    pub fn source_at(&self, x: f64, t: f64) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(x, t))
    }

    pub fn boundary_at(&self, side: Side, t: f64) -> f64 {
        (self.boundary)(side, t)
    }

    pub fn exact_at(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|u| u(x, t))
    }
}

impl fmt::Debug for PideProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PideProblem")
            .field("domain", &(self.x_l, self.x_r))
            .field("final_time", &self.final_time)
            .field("c", &(self.c1, self.c2, self.c3))
            .field("rho", &self.rho)
            .field("has_exact", &self.exact.is_some())
            .field("alpha", &self.alpha)
            .finish()
    }
}
