//! Graded meshes t_k = T (k/N)^gamma and their step-ratio margins.

use imex_bdf2::{r_max, TimeMesh};

fn main() -> imex_bdf2::Result<()> {
    println!("r_max = {:.15}", r_max());
    println!("{:>6} {:>6} {:>12} {:>12} {:>12} {:>5}", "gamma", "N", "tau_1", "r_2", "max r_k", "ok");
    for gamma in [1.0, 2.0, 3.0, 4.0, 4.2525, 4.2535] {
        for n in [8, 64, 1000] {
            let mesh = TimeMesh::graded(1.0, n, gamma)?;
            let rep = mesh.ratio_report();
            println!(
                "{gamma:>6} {n:>6} {:>12.4e} {:>12.4} {:>12.6} {:>5}",
                mesh.step(1),
                rep.r2.unwrap_or(f64::NAN),
                rep.r_max_observed,
                rep.satisfies_a1
            );
        }
    }
    Ok(())
}
