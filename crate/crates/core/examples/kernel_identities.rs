//! Identity residuals and bound slacks of the BDF2, DOC and DCC kernels.

use imex_bdf2::harness::kernel_report;
use imex_bdf2::TimeMesh;

fn main() -> imex_bdf2::Result<()> {
    for (gamma, n) in [(1.0, 64), (2.0, 64), (4.0, 512)] {
        let mesh = TimeMesh::graded(1.0, n, gamma)?;
        let report = kernel_report(&mesh, 20, 200, 42);
        println!("--- gamma = {gamma}, N = {n}");
        report.write_to(std::io::stdout().lock())?;
    }
    Ok(())
}
