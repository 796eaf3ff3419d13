//! Temporal meshes and the adjacent step-ratio condition.
//!
//! Indices follow the time-level convention used throughout the crate:
//! time points are `t_0 = 0 < t_1 < ... < t_N = T`, steps `tau_k = t_k - t_{k-1}`
//! for `1 <= k <= N`, and ratios `r_k = tau_k / tau_{k-1}` for `k >= 2` with
//! `r_1 = 0`.

use crate::error::{Error, Result};

/// Real root of `x^3 = (2x + 1)^2`, the largest admissible step ratio for
/// `k >= 3` (about 4.8645).
pub fn r_max() -> f64 {
    let s = 12.0 * 177f64.sqrt();
    ((1196.0 - s).cbrt() + (1196.0 + s).cbrt()) / 6.0 + 4.0 / 3.0
}

/// A strictly increasing temporal grid on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    final_time: f64,
    gamma: f64,
    points: Vec<f64>,
    steps: Vec<f64>,
    ratios: Vec<f64>,
}

impl TimeMesh {
    /// Graded mesh `t_k = T (k/N)^gamma`; `gamma = 1` is the uniform mesh.
    pub fn graded(final_time: f64, n: usize, gamma: f64) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::invalid(format!("final time must be positive, got {final_time}")));
        }
        if n < 2 {
            return Err(Error::invalid(format!("graded mesh needs N >= 2, got {n}")));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("grading exponent must be >= 1, got {gamma}")));
        }
        let nf = n as f64;
        let mut points: Vec<f64> = (0..=n)
            .map(|k| final_time * (k as f64 / nf).powf(gamma))
            .collect();
        // (N/N)^gamma is exactly 1 in IEEE arithmetic; pin it anyway.
        points[n] = final_time;
        let mut mesh = Self::from_points(points)?;
        mesh.gamma = gamma;
        Ok(mesh)
    }

    /// Uniform mesh with `n >= 1` steps.
    pub fn uniform(final_time: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("uniform mesh needs N >= 1"));
        }
        if !(final_time > 0.0) {
            return Err(Error::invalid(format!("final time must be positive, got {final_time}")));
        }
        let points = (0..=n).map(|k| final_time * k as f64 / n as f64).collect::<Vec<_>>();
        Self::from_points(points)
    }

    /// Arbitrary mesh from its time points; requires `t_0 = 0` and strictly
    /// increasing entries.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a time mesh needs at least two points"));
        }
        if points[0] != 0.0 {
            return Err(Error::invalid(format!("mesh must start at t = 0, got {}", points[0])));
        }
        let steps: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(k) = steps.iter().position(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::invalid(format!("time points not strictly increasing at step {}", k + 1)));
        }
        let ratios = std::iter::once(0.0)
            .chain(steps.windows(2).map(|w| w[1] / w[0]))
            .collect();
        Ok(Self {
            final_time: *points.last().unwrap(),
            gamma: 1.0,
            points,
            steps,
            ratios,
        })
    }

    /// Number of steps `N`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Grading exponent (1 for meshes not built by [`TimeMesh::graded`]).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `t_k` for `0 <= k <= N`.
    pub fn time(&self, k: usize) -> f64 {
        self.points[k]
    }

    /// `tau_k` for `1 <= k <= N`.
    pub fn step(&self, k: usize) -> f64 {
        self.steps[k - 1]
    }

    /// `r_k` for `1 <= k <= N`, with `r_1 = 0`.
    pub fn ratio(&self, k: usize) -> f64 {
        self.ratios[k - 1]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Steps `tau_1..tau_N` (0-based slice).
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Ratios `r_1..r_N` (0-based slice, first entry 0).
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn max_step(&self) -> f64 {
        self.steps.iter().copied().fold(0.0, f64::max)
    }

    pub fn ratio_report(&self) -> RatioReport {
        check_ratio_condition(self)
    }
}

/// Adjacent-ratio diagnostics against the admissibility condition
/// `r_2 > 0` and `r_k <= r_max - delta` for `k >= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    /// `r_2`, absent for single-step meshes.
    pub r2: Option<f64>,
    /// Largest `r_k` over `k >= 3` (0 when `N < 3`).
    pub r_max_observed: f64,
    /// `r_max - r_max_observed`.
    pub delta_margin: f64,
    pub satisfies_a1: bool,
}

pub fn build_graded_mesh(final_time: f64, n: usize, gamma: f64) -> Result<TimeMesh> {
    TimeMesh::graded(final_time, n, gamma)
}

pub fn check_ratio_condition(mesh: &TimeMesh) -> RatioReport {
    let r2 = (mesh.len() >= 2).then(|| mesh.ratio(2));
    let r_max_observed = mesh.ratios().iter().skip(2).copied().fold(0.0, f64::max);
    let rm = r_max();
    RatioReport {
        r2,
        r_max_observed,
        delta_margin: rm - r_max_observed,
        satisfies_a1: r2.is_none_or(|r| r > 0.0) && r_max_observed < rm,
    }
}
