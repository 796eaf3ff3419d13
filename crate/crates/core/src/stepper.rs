//! Fully discrete IMEX BDF2 march with a BDF1 first step.
//!
//! At level `n` the implicit local operator is solved against the explicit,
//! extrapolated nonlocal term:
//!
//! ```text
//! (b0 - c1 D_h + c2 G_h + c3) u^n = f^n + b0 u^{n-1} - b1 (u^{n-1} - u^{n-2}) - J_h(E u^{n-1})
//! E u^{n-1} = (1 + r_n) u^{n-1} - r_n u^{n-2},   E u^0 = u^0
//! ```
//!
//! Dirichlet values at `t_n` are eliminated into the right-hand side.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::kernels::{bdf2_kernels, positivity_constant, Bdf2Kernels};
use crate::mesh::{r_max, TimeMesh};
use crate::problems::{PideProblem, Side};
use crate::spatial::{
    assemble_tridiagonal, estimate_operator_norm, l2_norm, thomas_solve, FastIntegral, GridFunction, IntegralKernel,
    IntegralOperator, SpatialGrid,
};

/// `(1 + r) u_prev - r u_prev2`, boundary entries included.
pub fn extrapolate(u_prev: &GridFunction, u_prev2: &GridFunction, r: f64) -> GridFunction {
    u_prev.axpby(1.0 + r, u_prev2, -r)
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Time levels to keep besides the final one.
    pub snapshot_levels: Vec<usize>,
    /// Keep every level (debugging; O(N M) memory).
    pub full_history: bool,
    /// Use the FFT path for stationary non-constant kernels.
    pub fast_integral: bool,
    /// Record `||u(t_n) - u^n_h||` at every level when an exact solution exists.
    pub track_errors: bool,
    /// Estimate `C_J` and evaluate the step-size stability bound.
    pub stability_diagnostic: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            snapshot_levels: Vec::new(),
            full_history: false,
            fast_integral: true,
            track_errors: true,
            stability_diagnostic: true,
        }
    }
}

/// Report-only stability diagnostic.
#[derive(Debug, Clone, Default)]
pub struct SchemeDiagnostics {
    /// Estimated `||J_h||`.
    pub c_j: f64,
    /// Ratio margin `delta` used in `C_1`.
    pub delta: f64,
    pub c_1: f64,
    /// Sufficient maximum step for the stability estimate; `None` when the
    /// ratio condition fails or the diagnostic was disabled.
    pub stability_bound: Option<f64>,
    pub tau_max: f64,
    pub bound_satisfied: bool,
    /// `||A x - rhs||_inf / ||rhs||_inf` of each linear solve.
    pub per_step_residual: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub level: usize,
    pub time: f64,
    pub values: GridFunction,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub grid: SpatialGrid,
    /// Requested levels in increasing order; always ends with level `N`.
    pub snapshots: Vec<Snapshot>,
    /// `||u(t_n) - u^n_h||` for `n = 1..=N` (entry `n - 1`).
    pub level_errors: Option<Vec<f64>>,
    pub diagnostics: SchemeDiagnostics,
    pub wall_time: Duration,
}

impl SolveResult {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("final level is always stored")
    }

    pub fn final_solution(&self) -> &GridFunction {
        &self.final_snapshot().values
    }

    pub fn snapshot(&self, level: usize) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.level == level)
    }

    pub fn final_error(&self) -> Option<f64> {
        self.level_errors.as_ref().and_then(|e| e.last().copied())
    }

    /// Largest error over all time levels `n >= 1`.
    pub fn max_level_error(&self) -> Option<f64> {
        self.level_errors.as_ref().map(|e| e.iter().copied().fold(0.0, f64::max))
    }
}

enum IntegralPath {
    Constant(IntegralOperator),
    Direct(IntegralOperator),
    Fast(FastIntegral),
    Rebuild,
}

/// One problem discretised on a fixed grid and mesh.
pub struct Stepper<'a> {
    problem: &'a PideProblem,
    grid: SpatialGrid,
    mesh: &'a TimeMesh,
    kernels: Bdf2Kernels,
    integral: IntegralPath,
}

impl<'a> Stepper<'a> {
    pub fn new(problem: &'a PideProblem, grid: &SpatialGrid, mesh: &'a TimeMesh, fast_integral: bool) -> Result<Self> {
        problem.validate()?;
        if (grid.left() - problem.x_l).abs() > 1e-12 * (1.0 + problem.x_l.abs())
            || (grid.right() - problem.x_r).abs() > 1e-12 * (1.0 + problem.x_r.abs())
        {
            return Err(Error::invalid("grid does not cover the problem domain"));
        }
        let integral = match &problem.rho {
            IntegralKernel::Constant(_) => IntegralPath::Constant(IntegralOperator::new(grid, &problem.rho, 0.0)),
            IntegralKernel::Stationary(_) => {
                let op = IntegralOperator::new(grid, &problem.rho, 0.0);
                if fast_integral {
                    IntegralPath::Fast(FastIntegral::new(&op)?)
                } else {
                    IntegralPath::Direct(op)
                }
            }
            IntegralKernel::TimeDependent(_) => IntegralPath::Rebuild,
        };
        Ok(Self { problem, grid: *grid, mesh, kernels: bdf2_kernels(mesh), integral })
    }

    pub fn kernels(&self) -> &Bdf2Kernels {
        &self.kernels
    }

    fn apply_integral(&self, u: &GridFunction, t: f64) -> Result<GridFunction> {
        match &self.integral {
            IntegralPath::Constant(op) => op.apply_constant(u).expect("constant kernel"),
            IntegralPath::Direct(op) => op.apply_direct(u),
            IntegralPath::Fast(f) => f.apply(u),
            IntegralPath::Rebuild => IntegralOperator::new(&self.grid, &self.problem.rho, t).apply_direct(u),
        }
    }

    /// Initial level: `u_0` inside, Dirichlet data at `t = 0` on the boundary.
    pub fn initial_level(&self) -> GridFunction {
        let mut u = GridFunction::from_fn(&self.grid, |x| (self.problem.initial)(x));
        let m = self.grid.intervals();
        u[0] = self.problem.boundary_at(Side::Left, 0.0);
        u[m] = self.problem.boundary_at(Side::Right, 0.0);
        u
    }

    /// Level `n >= 1` from `u^{n-1}` and (for `n >= 2`) `u^{n-2}`. Returns the
    /// solution and the relative residual of the linear solve.
    pub fn step(&self, n: usize, u_prev: &GridFunction, u_prev2: Option<&GridFunction>) -> Result<(GridFunction, f64)> {
        let p = self.problem;
        let grid = &self.grid;
        let m = grid.intervals();
        let h = grid.h();
        let t = self.mesh.time(n);
        let b0 = self.kernels.b0(n);

        let (extrap, history) = match (n, u_prev2) {
            (1, _) => (u_prev.clone(), None),
            (_, Some(u2)) => (extrapolate(u_prev, u2, self.mesh.ratio(n)), Some((self.kernels.b1(n), u2))),
            (_, None) => return Err(Error::invalid(format!("BDF2 level {n} needs two previous levels"))),
        };
        let jn = self.apply_integral(&extrap, t)?;

        let mut rhs: Vec<f64> = (1..m)
            .map(|i| {
                let mut v = p.source_at(grid.node(i), t) + b0 * u_prev[i] - jn[i];
                if let Some((b1, u2)) = history {
                    v -= b1 * (u_prev[i] - u2[i]);
                }
                v
            })
            .collect();

        let ul = p.boundary_at(Side::Left, t);
        let ur = p.boundary_at(Side::Right, t);
        let diff = p.c1 / (h * h);
        let conv = p.c2 / (2.0 * h);
        rhs[0] -= (-diff - conv) * ul;
        rhs[m - 2] -= (-diff + conv) * ur;

        let a = assemble_tridiagonal(b0, p.c1, p.c2, p.c3, grid);
        let x = thomas_solve(&a, &rhs)?;
        let ax = a.mul_vec(&x);
        let rhs_norm = rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let res = ax.iter().zip(&rhs).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max);
        let residual = if rhs_norm > 0.0 { res / rhs_norm } else { res };

        let mut out = Vec::with_capacity(m + 1);
        out.push(ul);
        out.extend_from_slice(&x);
        out.push(ur);
        Ok((out.into(), residual))
    }

    fn diagnostics(&self) -> Result<SchemeDiagnostics> {
        let p = self.problem;
        let c_j = match &p.rho {
            IntegralKernel::Constant(c) => c.abs() * self.grid.h() * (self.grid.intervals() - 1) as f64,
            IntegralKernel::Stationary(_) => {
                estimate_operator_norm(&IntegralOperator::new(&self.grid, &p.rho, 0.0), true)?
            }
            IntegralKernel::TimeDependent(_) => {
                let ends = [0.0, self.mesh.final_time()];
                let mut best = 0.0f64;
                for t in ends {
                    best = best.max(estimate_operator_norm(&IntegralOperator::new(&self.grid, &p.rho, t), false)?);
                }
                best
            }
        };
        let ratios = self.mesh.ratio_report();
        let delta = ratios.delta_margin;
        let c_1 = p.c2 * p.c2 / (p.c1 * positivity_constant() * delta)
            + 2.0 * p.c3.abs()
            + 2.0 * c_j * (1.0 + 2.0 * r_max());
        let stability_bound = (ratios.satisfies_a1 && delta > 0.0).then(|| {
            let a = 1.0 / (2.0 * c_1);
            let b = 1.0 / (2.0 * (p.c2 * p.c2 / p.c1 + 4.0 * p.c3.abs() + 2.0 * c_j));
            let c = 1.0 / (4.0 * (5.0 * c_j + 4.0 * p.c3.abs()));
            a.min(b).min(c)
        });
        let tau_max = self.mesh.max_step();
        Ok(SchemeDiagnostics {
            c_j,
            delta,
            c_1,
            stability_bound,
            tau_max,
            bound_satisfied: stability_bound.is_some_and(|b| tau_max <= b),
            per_step_residual: Vec::new(),
        })
    }

    fn level_error(&self, u: &GridFunction, t: f64) -> Option<f64> {
        let exact = self.problem.exact.as_ref()?;
        let e: Vec<f64> = (0..=self.grid.intervals())
            .map(|i| u[i] - exact(self.grid.node(i), t))
            .collect();
        Some(l2_norm(&self.grid, &e))
    }

    pub fn run(&self, opts: &SolveOptions) -> Result<SolveResult> {
        let start = Instant::now();
        let n_max = self.mesh.len();
        let keep = |n: usize| opts.full_history || n == n_max || opts.snapshot_levels.contains(&n);
        let mut diagnostics = if opts.stability_diagnostic {
            self.diagnostics()?
        } else {
            SchemeDiagnostics { tau_max: self.mesh.max_step(), ..Default::default() }
        };
        diagnostics.per_step_residual.reserve(n_max);

        let track = opts.track_errors && self.problem.exact.is_some();
        let mut errors = track.then(|| Vec::with_capacity(n_max));
        let mut snapshots = Vec::new();

        let u0 = self.initial_level();
        if keep(0) {
            snapshots.push(Snapshot { level: 0, time: 0.0, values: u0.clone() });
        }
        let mut prev2: Option<GridFunction> = None;
        let mut prev = u0;
        for n in 1..=n_max {
            let (next, residual) = self
                .step(n, &prev, prev2.as_ref())
                .map_err(|e| Error::StepFailed { step: n, source: Box::new(e) })?;
            diagnostics.per_step_residual.push(residual);
            let t = self.mesh.time(n);
            if let Some(errs) = errors.as_mut() {
                errs.push(self.level_error(&next, t).unwrap_or(f64::NAN));
            }
            if keep(n) {
                snapshots.push(Snapshot { level: n, time: t, values: next.clone() });
            }
            prev2 = Some(std::mem::replace(&mut prev, next));
        }
        Ok(SolveResult {
            grid: self.grid,
            snapshots,
            level_errors: errors,
            diagnostics,
            wall_time: start.elapsed(),
        })
    }
}

/// First level by BDF1 with the nonlocal term evaluated on `u^0`.
pub fn bdf1_step(problem: &PideProblem, grid: &SpatialGrid, mesh: &TimeMesh, u0: &GridFunction) -> Result<GridFunction> {
    let s = Stepper::new(problem, grid, mesh, true)?;
    s.step(1, u0, None).map(|(u, _)| u)
}

/// Level `n >= 2` by variable-step BDF2.
pub fn bdf2_step(
    problem: &PideProblem,
    grid: &SpatialGrid,
    mesh: &TimeMesh,
    n: usize,
    u_prev: &GridFunction,
    u_prev2: &GridFunction,
) -> Result<GridFunction> {
    if n < 2 || n > mesh.len() {
        return Err(Error::invalid(format!("BDF2 level must be in 2..={}, got {n}", mesh.len())));
    }
    let s = Stepper::new(problem, grid, mesh, true)?;
    s.step(n, u_prev, Some(u_prev2)).map(|(u, _)| u)
}

/// March from `u^0` to `u^N`.
pub fn run(problem: &PideProblem, grid: &SpatialGrid, mesh: &TimeMesh, opts: &SolveOptions) -> Result<SolveResult> {
    Stepper::new(problem, grid, mesh, opts.fast_integral)?.run(opts)
}
