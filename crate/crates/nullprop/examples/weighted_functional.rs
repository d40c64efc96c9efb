//! Estimate an induced proportion: the average truncated squared norm
//! m⁻¹ Σ_{μᵢ ∈ (−2,2)} μᵢ² of the means inside a bounded interval,
//! without knowing the means.
//!
//! Uses the φ-weighted window kernel (uncorrected path); the corrected
//! variant subtracts point terms referenced at φ(±2).
//!
//! Run with: `cargo run --release --example weighted_functional`

use nullprop::estimators::{estimate_functional, oracle_functional_at, EstimatorConfig, ScheduleFormula, SpeedSchedule};
use nullprop::families::{FamilyModel, ParameterVector};
use nullprop::kernels::{FunctionalSpec, SeriesConfig};
use nullprop::numerics::{QuadratureConfig, WeightFunction};
use nullprop::rng::SeededStream;

fn main() -> nullprop::Result<()> {
    let family = FamilyModel::gaussian(1.0)?;
    let spec = FunctionalSpec::truncated_square(2.0)?;
    let m = 10_000;

    let mut rng = SeededStream::new(31);
    let mut means = Vec::with_capacity(m);
    for i in 0..m {
        means.push(if i % 5 == 0 {
            rng.uniform_in(2.5, 6.0) // outside the support of φ
        } else {
            rng.uniform_in(-2.0, 2.0)
        });
    }
    // the target: half-weighted boundary sum (no boundary atoms here)
    let truth: f64 = means
        .iter()
        .filter(|&&mu| -2.0 < mu && mu < 2.0)
        .map(|&mu| mu * mu)
        .sum::<f64>()
        / m as f64;
    let params = ParameterVector::new(means, family)?;
    let data = params.sample_data(&mut rng)?;

    let cfg = EstimatorConfig {
        omega: WeightFunction::Uniform,
        quadrature: QuadratureConfig::default(),
        series: SeriesConfig::default(),
        schedule: SpeedSchedule::new(ScheduleFormula::WeightedGauss, 0.495)?,
    };
    let report = estimate_functional(&data, &family, &spec, &cfg, false)?;
    let oracle = oracle_functional_at(&params, &spec, &cfg, false, report.t_used)?;

    println!("m = {m}, speed t_m = {:.4}", report.t_used);
    println!("target (truncated 2-norm)   {truth:.4}");
    println!("oracle                      {oracle:.4}");
    println!("estimate from data          {:.4}", report.estimate);
    Ok(())
}
