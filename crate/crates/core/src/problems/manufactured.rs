//! Benchmark with exact solution `u = (1 + t^alpha) sin x` on `(0, pi) x (0, 1]`,
//! `c1 = c2 = c3 = 1`, `rho = 1` and homogeneous Dirichlet data.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{PideProblem, Side};
use crate::error::{Error, Result};
use crate::spatial::IntegralKernel;

pub fn manufactured_problem(alpha: f64) -> Result<PideProblem> {
    manufactured_problem_on(alpha, 1.0)
}

/// Same benchmark on `(0, T]`.
pub fn manufactured_problem_on(alpha: f64, final_time: f64) -> Result<PideProblem> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("regularity exponent must lie in [1/2, 1], got {alpha}")));
    }
    // J(u) = (1 + t^a) int_0^pi sin z dz = 2 (1 + t^a)
    let source = move |x: f64, t: f64| {
        let g = 1.0 + t.powf(alpha);
        alpha * t.powf(alpha - 1.0) * x.sin() + g * (2.0 * x.sin() + x.cos() + 2.0)
    };
    Ok(PideProblem {
        x_l: 0.0,
        x_r: PI,
        final_time,
        c1: 1.0,
        c2: 1.0,
        c3: 1.0,
        rho: IntegralKernel::Constant(1.0),
        source: Some(Arc::new(source)),
        initial: Arc::new(f64::sin),
        boundary: Arc::new(|_: Side, _| 0.0),
        exact: Some(Arc::new(move |x, t| (1.0 + t.powf(alpha)) * x.sin())),
        alpha,
    })
}
