use super::grid::{GridFunction, SpatialGrid};

/// `(u_{i+1} - 2u_i + u_{i-1}) / h^2` at interior nodes; boundary entries are 0.
pub fn laplacian(grid: &SpatialGrid, u: &[f64]) -> GridFunction {
    let m = grid.intervals();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut out = GridFunction::zeros(grid);
    for i in 1..m {
        out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
    }
    out
}

/// `(u_{i+1} - u_{i-1}) / (2h)` at interior nodes; boundary entries are 0.
pub fn gradient(grid: &SpatialGrid, u: &[f64]) -> GridFunction {
    let m = grid.intervals();
    let inv_2h = 0.5 / grid.h();
    let mut out = GridFunction::zeros(grid);
    for i in 1..m {
        out[i] = (u[i + 1] - u[i - 1]) * inv_2h;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_interior_err(g: &SpatialGrid, v: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        (1..g.intervals()).map(|i| (v[i] - f(g.node(i))).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn linear_and_quadratic_exactness() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let lin = GridFunction::from_fn(&g, |x| 3.0 * x - 1.0);
        assert!(max_interior_err(&g, &laplacian(&g, &lin), |_| 0.0) < 1e-12);
        assert!(max_interior_err(&g, &gradient(&g, &lin), |_| 3.0) < 1e-12);
        let quad = GridFunction::from_fn(&g, |x| x * x);
        assert!(max_interior_err(&g, &laplacian(&g, &quad), |_| 2.0) < 1e-11);
        let c = GridFunction::from_fn(&g, |_| 4.0);
        assert_eq!(max_interior_err(&g, &gradient(&g, &c), |_| 0.0), 0.0);
    }

    #[test]
    fn second_order_on_sine() {
        let errs: Vec<(f64, f64)> = [64, 128]
            .iter()
            .map(|&m| {
                let g = SpatialGrid::new(0.0, PI, m).unwrap();
                let u = GridFunction::from_fn(&g, f64::sin);
                (
                    max_interior_err(&g, &laplacian(&g, &u), |x| -x.sin()),
                    max_interior_err(&g, &gradient(&g, &u), f64::cos),
                )
            })
            .collect();
        let lap_ratio = errs[0].0 / errs[1].0;
        let grad_ratio = errs[0].1 / errs[1].1;
        assert!((lap_ratio - 4.0).abs() < 0.1, "{lap_ratio}");
        assert!((grad_ratio - 4.0).abs() < 0.1, "{grad_ratio}");
    }
}
