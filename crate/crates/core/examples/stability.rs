//! Growth of a perturbation of the initial data next to the step-size bound
//! from the stability analysis.

use imex_bdf2::{manufactured_problem, run, GridFunction, SolveOptions, TimeMesh};

fn main() -> imex_bdf2::Result<()> {
    let base = manufactured_problem(0.5)?;
    let mut perturbed = manufactured_problem(0.5)?;
    let initial = base.initial.clone();
    perturbed.initial = std::sync::Arc::new(move |x: f64| initial(x) + 1e-3 * (3.0 * x).sin());
    let grid = base.grid(128)?;
    for n in [16, 64, 256] {
        let mesh = TimeMesh::graded(1.0, n, 4.0)?;
        let opts = SolveOptions { full_history: true, ..Default::default() };
        let a = run(&base, &grid, &mesh, &opts)?;
        let b = run(&perturbed, &grid, &mesh, &opts)?;
        let growth = a
            .snapshots
            .iter()
            .zip(&b.snapshots)
            .map(|(x, y)| x.values.max_abs_diff(&y.values))
            .fold(0.0, f64::max);
        let d0 = GridFunction::from_fn(&grid, |x| 1e-3 * (3.0 * x).sin());
        let d0 = d0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let d = &a.diagnostics;
        println!(
            "N = {n:>4}: max |perturbation| {growth:.3e} (initial {d0:.3e}); tau_max {:.3e}, bound {:.3e}",
            d.tau_max,
            d.stability_bound.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
