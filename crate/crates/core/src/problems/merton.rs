//! European call under Merton's jump-diffusion model in log-moneyness
//! `x = ln(S/K)` and time-to-maturity `t`.

use std::f64::consts::PI;
use std::sync::Arc;

use libm::erfc;

use super::{PideProblem, Side};
use crate::error::{Error, Result};
use crate::spatial::{IntegralKernel, SpatialGrid};
use crate::stepper::SolveResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertonParams {
    /// Diffusion volatility.
    pub sigma: f64,
    /// Risk-free rate.
    pub rate: f64,
    /// Mean of the log jump size.
    pub jump_mean: f64,
    /// Standard deviation of the log jump size.
    pub jump_std: f64,
    /// Jump intensity.
    pub lambda: f64,
    pub strike: f64,
    pub maturity: f64,
    /// Log-moneyness truncation bounds.
    pub x_l: f64,
    pub x_r: f64,
}

impl Default for MertonParams {
    fn default() -> Self {
        Self {
            sigma: 0.15,
            rate: 0.05,
            jump_mean: -0.9,
            jump_std: 0.45,
            lambda: 0.1,
            strike: 100.0,
            maturity: 0.25,
            x_l: -1.5,
            x_r: 1.5,
        }
    }
}

impl MertonParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sigma", self.sigma),
            ("jump_std", self.jump_std),
            ("lambda", self.lambda),
            ("strike", self.strike),
            ("maturity", self.maturity),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(*v > 0.0)) {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
        if !(self.x_l < 0.0 && 0.0 < self.x_r) {
            return Err(Error::invalid(format!("need x_l < 0 < x_r, got ({}, {})", self.x_l, self.x_r)));
        }
        Ok(())
    }

    /// Jump compensator `E[e^Y - 1] = exp(mu + s^2/2) - 1`.
    pub fn kappa(&self) -> f64 {
        (self.jump_mean + 0.5 * self.jump_std * self.jump_std).exp() - 1.0
    }

    /// Gaussian log-jump density.
    pub fn jump_density(&self, y: f64) -> f64 {
        let z = (y - self.jump_mean) / self.jump_std;
        (-0.5 * z * z).exp() / (self.jump_std * (2.0 * PI).sqrt())
    }
}

/// PIDE for the call value with `c1 = sigma^2/2`, `c2 = -(r - sigma^2/2 - lambda kappa)`,
/// `c3 = r + lambda` and `rho(y) = -lambda phi(y)`, so that the scheme's `+J`
/// term carries the jump gain `-lambda int u(z) phi(z - x) dz`.
pub fn merton_problem(p: &MertonParams) -> Result<PideProblem> {
    p.validate()?;
    let params = *p;
    let k = p.strike;
    let (r, x_r) = (p.rate, p.x_r);
    Ok(PideProblem {
        x_l: p.x_l,
        x_r: p.x_r,
        final_time: p.maturity,
        c1: 0.5 * p.sigma * p.sigma,
        c2: -(p.rate - 0.5 * p.sigma * p.sigma - p.lambda * p.kappa()),
        c3: p.rate + p.lambda,
        rho: IntegralKernel::stationary(move |y| -params.lambda * params.jump_density(y)),
        source: None,
        initial: Arc::new(move |x| (k * (x.exp() - 1.0)).max(0.0)),
        boundary: Arc::new(move |side, t| match side {
            Side::Left => 0.0,
            Side::Right => k * x_r.exp() - k * (-r * t).exp(),
        }),
        exact: None,
        alpha: 0.5,
    })
}

fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Black-Scholes price of a European call.
pub fn black_scholes_call(spot: f64, strike: f64, maturity: f64, sigma: f64, rate: f64) -> f64 {
    let sd = sigma * maturity.sqrt();
    let d1 = ((spot / strike).ln() + (rate + 0.5 * sigma * sigma) * maturity) / sd;
    let d2 = d1 - sd;
    spot * norm_cdf(d1) - strike * (-rate * maturity).exp() * norm_cdf(d2)
}

/// Merton's series: Poisson-weighted Black-Scholes prices conditioned on the
/// number of jumps, truncated after `terms` terms.
pub fn merton_series_price(p: &MertonParams, spot: f64, terms: usize) -> f64 {
    let t = p.maturity;
    let kappa = p.kappa();
    let lam_t = p.lambda * (1.0 + kappa) * t;
    let log_jump = p.jump_mean + 0.5 * p.jump_std * p.jump_std;
    let mut weight = (-lam_t).exp();
    let mut total = 0.0;
    for n in 0..terms {
        if n > 0 {
            weight *= lam_t / n as f64;
        }
        let nf = n as f64;
        let sigma_n = (p.sigma * p.sigma + nf * p.jump_std * p.jump_std / t).sqrt();
        let rate_n = p.rate - p.lambda * kappa + nf * log_jump / t;
        total += weight * black_scholes_call(spot, p.strike, t, sigma_n, rate_n);
    }
    total
}

/// Reference price from the Merton series. At least six terms are summed;
/// the series continues while the Poisson weights are above `1e-17`.
pub fn merton_reference_price(p: &MertonParams, spot: f64) -> f64 {
    let lam_t = p.lambda * (1.0 + p.kappa()) * p.maturity;
    let mut terms = 6;
    let mut w = (-lam_t).exp();
    for n in 1..terms {
        w *= lam_t / n as f64;
    }
    while w > 1e-17 && terms < 400 {
        w *= lam_t / terms as f64;
        terms += 1;
    }
    merton_series_price(p, spot, terms)
}

/// Four-point Lagrange interpolation of nodal values at `x`, using the
/// stencil `i-1..=i+2` around the cell `[x_i, x_{i+1}]` (shifted at the ends).
pub fn interpolate_cubic(grid: &SpatialGrid, values: &[f64], x: f64) -> Result<f64> {
    grid.check(values)?;
    if !(x >= grid.left() && x <= grid.right()) {
        return Err(Error::invalid(format!(
            "point {x} outside ({}, {})",
            grid.left(),
            grid.right()
        )));
    }
    let m = grid.intervals();
    if m < 3 {
        return Err(Error::invalid("cubic interpolation needs M >= 3"));
    }
    let cell = (((x - grid.left()) / grid.h()).floor() as usize).min(m - 1);
    let start = cell.saturating_sub(1).min(m - 3);
    let nodes: Vec<f64> = (start..start + 4).map(|i| grid.node(i)).collect();
    let mut acc = 0.0;
    for a in 0..4 {
        let mut basis = 1.0;
        for b in 0..4 {
            if a != b {
                basis *= (x - nodes[b]) / (nodes[a] - nodes[b]);
            }
        }
        acc += basis * values[start + a];
    }
    Ok(acc)
}

/// Option value at spot `S` read from the final-time solution.
pub fn price_at(result: &SolveResult, p: &MertonParams, spot: f64) -> Result<f64> {
    if !(spot > 0.0) {
        return Err(Error::invalid(format!("spot must be positive, got {spot}")));
    }
    let x = (spot / p.strike).ln();
    if !(x > p.x_l && x < p.x_r) {
        return Err(Error::invalid(format!("spot {spot} maps to x = {x} outside the truncated domain")));
    }
    interpolate_cubic(&result.grid, result.final_solution(), x)
}
