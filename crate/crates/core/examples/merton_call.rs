//! European call under Merton's jump diffusion.

use imex_bdf2::harness::{merton_study, StudySettings};
use imex_bdf2::{merton_reference_price, MertonParams};

fn main() -> imex_bdf2::Result<()> {
    let params = MertonParams::default();
    let spots = [90.0, 100.0, 110.0];
    for s in spots {
        println!("reference S = {s}: {:.8}", merton_reference_price(&params, s));
    }
    let pairs = [(128, 128), (256, 256), (512, 512)];
    let report = merton_study(&params, &pairs, &spots, 4.0, &StudySettings::default())?;
    for s in spots {
        for row in report.series(s) {
            let order = row.order.map_or(String::from("-"), |o| format!("{o:.3}"));
            println!("S = {s} M = N = {:>4}: price {:.8} error {:.4e} order {order}", row.m, row.price, row.error);
        }
    }
    Ok(())
}
