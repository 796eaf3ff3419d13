//! FFT evaluation of the trapezoidal nonlocal operator against the direct sum.

use std::sync::Arc;
use std::time::Instant;

use imex_bdf2::spatial::{FastIntegral, IntegralKernel, IntegralOperator};
use imex_bdf2::{GridFunction, SpatialGrid};

fn main() -> imex_bdf2::Result<()> {
    let kernel = IntegralKernel::Stationary(Arc::new(|y: f64| (-y * y).exp()));
    for m in [256, 1024, 4096] {
        let grid = SpatialGrid::new(-2.0, 2.0, m)?;
        let op = IntegralOperator::new(&grid, &kernel, 0.0);
        let fast = FastIntegral::new(&op)?;
        let u = GridFunction::from_fn(&grid, |x| (3.0 * x).sin() * (1.0 - x * x / 4.0));
        let t0 = Instant::now();
        let direct = op.apply_direct(&u)?;
        let t_direct = t0.elapsed();
        let t0 = Instant::now();
        let via_fft = fast.apply(&u)?;
        let t_fast = t0.elapsed();
        println!(
            "M = {m:>5}: max diff {:.2e}, direct {t_direct:?}, fft {t_fast:?}",
            direct.max_abs_diff(&via_fft)
        );
    }
    Ok(())
}
