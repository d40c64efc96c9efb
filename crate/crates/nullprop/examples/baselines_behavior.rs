//! Behavior of the p-value baselines on synthetic mixtures: the MR
//! estimator's clamped scan and the fixed-λ Storey profile.
//!
//! Run with: `cargo run --release --example baselines_behavior`

use nullprop::baselines::{mr_estimate, storey_default_grid, storey_estimate, PValueVector};
use nullprop::rng::SeededStream;

fn main() -> nullprop::Result<()> {
    let mut rng = SeededStream::new(12);
    let m = 10_000;

    // pure uniform null
    let null_only: Vec<f64> = (0..m).map(|_| rng.uniform()).collect();
    // 30% strong signals at tiny p, 70% uniform
    let mut mixture: Vec<f64> = (0..(3 * m / 10)).map(|_| 1e-5 * rng.uniform()).collect();
    mixture.extend((0..(7 * m / 10)).map(|_| rng.uniform()));

    for (label, pvals, truth) in [
        ("uniform null", null_only, 0.0),
        ("30% signal mixture", mixture, 0.3),
    ] {
        let p = PValueVector::new(pvals)?;
        let mr = mr_estimate(&p)?;
        let storey = storey_estimate(&p, &storey_default_grid())?;
        println!("{label} (true alternative proportion {truth}):");
        println!("  MR estimate      {:.4}  (b*_m = {:.4})", mr.estimate, mr.b_star);
        println!("  Storey estimate  {:.4}  at the last grid point", storey.estimate);
        print!("  Storey profile   ");
        for (lambda, est) in storey.profile.iter().step_by(4) {
            print!("pi1({lambda:.2}) = {est:.3}  ");
        }
        println!();
    }
    Ok(())
}
