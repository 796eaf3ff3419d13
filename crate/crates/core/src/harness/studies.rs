use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::TimeMesh;
use crate::problems::{merton_problem, merton_reference_price, price_at, MertonParams, PideProblem};
use crate::stepper::{run, SolveOptions};

/// Default cap on `N`; larger runs need [`StudySettings::allow_large`].
pub const MAX_DEFAULT_N: usize = 1 << 13;
/// Default cap on `M`.
pub const MAX_DEFAULT_M: usize = 8192;

/// Which time levels enter `e(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorMeasure {
    /// `max_n ||u(t_n) - u^n_h||`.
    #[default]
    MaxOverLevels,
    /// `||u(T) - u^N_h||`.
    FinalTime,
}

#[derive(Debug, Clone)]
pub struct StudySettings {
    pub measure: ErrorMeasure,
    pub fast_integral: bool,
    pub allow_large: bool,
    /// Run independent configurations on the rayon pool.
    pub parallel: bool,
}

impl Default for StudySettings {
    fn default() -> Self {
        Self { measure: ErrorMeasure::default(), fast_integral: true, allow_large: false, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub alpha: f64,
    pub gamma: f64,
    pub n: usize,
    pub m: usize,
    pub error: f64,
    /// `log2(e(N/2) / e(N))`, absent on the first row of each sequence.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Rows for one grading exponent, in increasing `N`.
    pub fn series(&self, gamma: f64) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.gamma == gamma)
    }

    pub fn orders(&self, gamma: f64) -> Vec<f64> {
        self.series(gamma).filter_map(|r| r.order).collect()
    }
}

/// `log2(e_k / e_{k+1})` for consecutive entries.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn check_doubling(values: &[usize], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Config(format!("{what} list is empty")));
    }
    if values[0] == 0 {
        return Err(Error::Config(format!("{what} must be positive")));
    }
    if let Some(w) = values.windows(2).find(|w| w[1] != 2 * w[0]) {
        return Err(Error::Config(format!("{what} list must double: {} -> {}", w[0], w[1])));
    }
    Ok(())
}

fn check_caps(n: usize, m: usize, settings: &StudySettings) -> Result<()> {
    if !settings.allow_large && (n > MAX_DEFAULT_N || m > MAX_DEFAULT_M) {
        return Err(Error::Config(format!(
            "N = {n}, M = {m} exceed the default caps N <= {MAX_DEFAULT_N}, M <= {MAX_DEFAULT_M}; pass the override flag"
        )));
    }
    Ok(())
}

/// Temporal convergence of `problem` (which must carry an exact solution) on
/// graded meshes, one run per `(gamma, N)`.
pub fn convergence_study(
    problem: &PideProblem,
    gammas: &[f64],
    ns: &[usize],
    m: usize,
    settings: &StudySettings,
) -> Result<ConvergenceReport> {
    if problem.exact.is_none() {
        return Err(Error::Config("convergence study needs an exact solution".into()));
    }
    check_doubling(ns, "N")?;
    check_caps(*ns.last().unwrap(), m, settings)?;
    if gammas.is_empty() || gammas.iter().any(|g| !(*g >= 1.0)) {
        return Err(Error::Config("grading exponents must be >= 1".into()));
    }
    let grid = problem.grid(m)?;
    let jobs: Vec<(f64, usize)> = gammas.iter().flat_map(|&g| ns.iter().map(move |&n| (g, n))).collect();
    let opts = SolveOptions {
        fast_integral: settings.fast_integral,
        stability_diagnostic: false,
        ..Default::default()
    };
    let solve = |&(gamma, n): &(f64, usize)| -> Result<f64> {
        let mesh = TimeMesh::graded(problem.final_time, n, gamma)?;
        let res = run(problem, &grid, &mesh, &opts)?;
        let e = match settings.measure {
            ErrorMeasure::MaxOverLevels => res.max_level_error(),
            ErrorMeasure::FinalTime => res.final_error(),
        };
        Ok(e.expect("exact solution present"))
    };
    let errors: Vec<f64> = if settings.parallel {
        jobs.par_iter().map(solve).collect::<Result<_>>()?
    } else {
        jobs.iter().map(solve).collect::<Result<_>>()?
    };
    let mut rows = Vec::with_capacity(jobs.len());
    for (gi, &gamma) in gammas.iter().enumerate() {
        let errs = &errors[gi * ns.len()..(gi + 1) * ns.len()];
        let orders = observed_orders(errs);
        for (k, (&n, &error)) in ns.iter().zip(errs).enumerate() {
            rows.push(ConvergenceRow {
                alpha: problem.alpha,
                gamma,
                n,
                m,
                error,
                order: k.checked_sub(1).map(|i| orders[i]),
            });
        }
    }
    Ok(ConvergenceReport { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MertonRow {
    pub m: usize,
    pub n: usize,
    pub spot: f64,
    pub price: f64,
    pub error: f64,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MertonReport {
    pub rows: Vec<MertonRow>,
}

impl MertonReport {
    pub fn series(&self, spot: f64) -> impl Iterator<Item = &MertonRow> {
        self.rows.iter().filter(move |r| r.spot == spot)
    }

    pub fn orders(&self, spot: f64) -> Vec<f64> {
        self.series(spot).filter_map(|r| r.order).collect()
    }
}

/// Absolute price errors against the Merton series at each spot, for each
/// `(M, N)` pair on a graded mesh with exponent `gamma`.
pub fn merton_study(
    params: &MertonParams,
    pairs: &[(usize, usize)],
    spots: &[f64],
    gamma: f64,
    settings: &StudySettings,
) -> Result<MertonReport> {
    let ms: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let ns: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    check_doubling(&ms, "M")?;
    check_doubling(&ns, "N")?;
    if let Some(m) = ms.iter().find(|m| *m % 2 != 0) {
        return Err(Error::Config(format!("M must be even so the strike is a grid node, got {m}")));
    }
    check_caps(*ns.last().unwrap(), *ms.last().unwrap(), settings)?;
    let problem = merton_problem(params)?;
    let refs: Vec<f64> = spots.iter().map(|&s| merton_reference_price(params, s)).collect();
    let opts = SolveOptions {
        fast_integral: settings.fast_integral,
        stability_diagnostic: false,
        track_errors: false,
        ..Default::default()
    };
    let solve = |&(m, n): &(usize, usize)| -> Result<Vec<f64>> {
        let grid = problem.grid(m)?;
        let mesh = TimeMesh::graded(params.maturity, n, gamma)?;
        let res = run(&problem, &grid, &mesh, &opts)?;
        spots.iter().map(|&s| price_at(&res, params, s)).collect()
    };
    let prices: Vec<Vec<f64>> = if settings.parallel {
        pairs.par_iter().map(solve).collect::<Result<_>>()?
    } else {
        pairs.iter().map(solve).collect::<Result<_>>()?
    };
    let mut rows = Vec::new();
    for (si, &spot) in spots.iter().enumerate() {
        let errs: Vec<f64> = prices.iter().map(|p| (p[si] - refs[si]).abs()).collect();
        let orders = observed_orders(&errs);
        for (k, &(m, n)) in pairs.iter().enumerate() {
            rows.push(MertonRow {
                m,
                n,
                spot,
                price: prices[k][si],
                error: errs[k],
                order: k.checked_sub(1).map(|i| orders[i]),
            });
        }
    }
    Ok(MertonReport { rows })
}
