//! Temporal orders on graded meshes for u = (1 + t^alpha) sin x.
//!
//! `cargo run --release --example manufactured_convergence -- 0.5 2048`

use imex_bdf2::harness::{convergence_study, StudySettings};
use imex_bdf2::manufactured_problem;

fn main() -> imex_bdf2::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(Ok(0.5), |s| s.parse()).expect("alpha");
    let m: usize = args.next().map_or(Ok(1024), |s| s.parse()).expect("M");
    let problem = manufactured_problem(alpha)?;
    let gammas = [1.0, 2.0, 3.0, 4.0];
    let report = convergence_study(&problem, &gammas, &[64, 128, 256, 512], m, &StudySettings::default())?;
    for &g in &gammas {
        println!("gamma = {g} (expected order {:.2})", (alpha * g).min(2.0));
        for row in report.series(g) {
            let order = row.order.map_or(String::from("-"), |o| format!("{o:.3}"));
            println!("  N = {:>5}  e = {:.4e}  order {order}", row.n, row.error);
        }
    }
    Ok(())
}
