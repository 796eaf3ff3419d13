#![allow(dead_code)]

use std::sync::Arc;

use imex_bdf2::problems::{PideProblem, Side};
use imex_bdf2::spatial::IntegralKernel;
use imex_bdf2::{r_max, SpatialGrid, TimeMesh};
use rand::Rng;

/// Random mesh on (0, T] with arbitrary r_2 and later ratios in
/// [0.2, r_max - 0.3], so the ratio condition holds with margin >= 0.3.
pub fn random_a1_mesh(rng: &mut impl Rng, n: usize, final_time: f64) -> TimeMesh {
    let mut steps = vec![rng.random_range(0.01..1.0)];
    if n >= 2 {
        steps.push(steps[0] * rng.random_range(0.1..40.0));
    }
    while steps.len() < n {
        let r = rng.random_range(0.2..r_max() - 0.3);
        steps.push(steps.last().unwrap() * r);
    }
    let total: f64 = steps.iter().sum();
    let mut points = vec![0.0];
    let mut t = 0.0;
    for s in &steps {
        t += s / total * final_time;
        points.push(t);
    }
    *points.last_mut().unwrap() = final_time;
    TimeMesh::from_points(points).unwrap()
}

/// BDF2 coefficients computed from the step sizes alone: `(b0, b1)` for
/// levels `1..=N` (index 0 unused).
pub fn bdf2_coefficients(mesh: &TimeMesh) -> (Vec<f64>, Vec<f64>) {
    let n = mesh.len();
    let tau: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { mesh.time(k) - mesh.time(k - 1) }).collect();
    let mut b0 = vec![0.0; n + 1];
    let mut b1 = vec![0.0; n + 1];
    b0[1] = 1.0 / tau[1];
    for k in 2..=n {
        let r = tau[k] / tau[k - 1];
        b0[k] = (1.0 + 2.0 * r) / (tau[k] * (1.0 + r));
        b1[k] = -r * r / (tau[k] * (1.0 + r));
    }
    (b0, b1)
}

/// `b^{(j)}_{j-k}` from the two-term structure.
pub fn b_entry(b0: &[f64], b1: &[f64], j: usize, k: usize) -> f64 {
    match j - k {
        0 => b0[j],
        1 => b1[j],
        _ => 0.0,
    }
}

/// Interior values of `-c1 D2 u + c2 D1 u + c3 u + J_h u` for a grid
/// function `u`, using the trapezoid rule with kernel `rho`.
pub fn discrete_operator(grid: &SpatialGrid, c: (f64, f64, f64), rho: &dyn Fn(f64) -> f64, u: &[f64]) -> Vec<f64> {
    let m = grid.intervals();
    let h = grid.h();
    let x = |i: usize| grid.node(i);
    let mut out = vec![0.0; m + 1];
    for i in 1..m {
        let lap = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        let grad = (u[i + 1] - u[i - 1]) / (2.0 * h);
        let mut integral = 0.0;
        for j in 0..=m {
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            integral += w * h * rho(x(j) - x(i)) * u[j];
        }
        out[i] = -c.0 * lap + c.1 * grad + c.2 * u[i] + integral;
    }
    out
}

/// Problem whose discrete steady state is exactly `u0` on the given grid:
/// the source is the discrete operator applied to `u0`, looked up by node.
pub fn stationary_problem(grid: &SpatialGrid, kernel: IntegralKernel, rho: Arc<dyn Fn(f64) -> f64 + Send + Sync>) -> PideProblem {
    let (x_l, x_r) = (grid.left(), grid.right());
    let u0 = move |x: f64| 0.3 + (x - x_l) * (x_r - x).powi(2) + 0.5 * (2.0 * x).cos();
    let values: Vec<f64> = grid.nodes().into_iter().map(u0).collect();
    let c = (0.7, -1.3, 0.4);
    let g = Arc::new(discrete_operator(grid, c, &*rho, &values));
    let h = grid.h();
    let (left, right) = (values[0], *values.last().unwrap());
    PideProblem {
        x_l,
        x_r,
        final_time: 1.0,
        c1: c.0,
        c2: c.1,
        c3: c.2,
        rho: kernel,
        source: Some(Arc::new(move |x: f64, _t: f64| g[((x - x_l) / h).round() as usize])),
        initial: Arc::new(u0),
        boundary: Arc::new(move |s: Side, _| if s == Side::Left { left } else { right }),
        exact: Some(Arc::new(move |x: f64, _t: f64| u0(x))),
        alpha: 1.0,
    }
}

pub fn gaussian(y: f64) -> f64 {
    (-2.0 * y * y).exp() * 0.8
}

/// Largest deviation between the run with summed data and the sum of the two
/// runs, relative to the size of the solutions.
pub fn linearity_defect(grid: &SpatialGrid, mesh: &TimeMesh, kernel: IntegralKernel) -> Result<f64, String> {
    use imex_bdf2::{run, SolveOptions};

    let make = |u0: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
                f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
                ub: Arc<dyn Fn(Side, f64) -> f64 + Send + Sync>| PideProblem {
        x_l: grid.left(),
        x_r: grid.right(),
        final_time: mesh.final_time(),
        c1: 0.9,
        c2: 0.6,
        c3: -0.2,
        rho: kernel.clone(),
        source: Some(f),
        initial: u0,
        boundary: ub,
        exact: None,
        alpha: 0.5,
    };
    let u0a = |x: f64| x.sin();
    let u0b = |x: f64| x * x - 1.0;
    let fa = |x: f64, t: f64| t.sqrt() * x.cos() + x;
    let fb = |x: f64, t: f64| (3.0 * x).cos() * t - 2.0;
    let uba = |s: Side, t: f64| if s == Side::Left { t } else { 1.0 + t * t };
    let ubb = |s: Side, t: f64| if s == Side::Left { -1.0 } else { (2.0 * t).sin() };
    let a = make(Arc::new(u0a), Arc::new(fa), Arc::new(uba));
    let b = make(Arc::new(u0b), Arc::new(fb), Arc::new(ubb));
    let ab = make(
        Arc::new(move |x| u0a(x) + u0b(x)),
        Arc::new(move |x, t| fa(x, t) + fb(x, t)),
        Arc::new(move |s, t| uba(s, t) + ubb(s, t)),
    );
    let opts = SolveOptions { full_history: true, ..Default::default() };
    let ra = run(&a, grid, mesh, &opts).map_err(|e| e.to_string())?;
    let rb = run(&b, grid, mesh, &opts).map_err(|e| e.to_string())?;
    let rab = run(&ab, grid, mesh, &opts).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for ((sa, sb), sab) in ra.snapshots.iter().zip(&rb.snapshots).zip(&rab.snapshots) {
        assert_eq!(sa.level, sab.level);
        let scale = sa.values.iter().chain(sb.values.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..sab.values.len() {
            worst = worst.max((sab.values[i] - sa.values[i] - sb.values[i]).abs() / scale);
        }
    }
    Ok(worst)
}
