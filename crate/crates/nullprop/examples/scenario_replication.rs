//! Run one simulation scenario at desk scale, write the results CSV, and
//! print the per-estimator aggregates.
//!
//! Run with: `cargo run --release --example scenario_replication`

use nullprop::simlab::{run_experiment, write_results, ScenarioId, ScenarioSpec, Sparsity};

fn main() -> nullprop::Result<()> {
    let spec = ScenarioSpec::new(ScenarioId::S2, 1000, Sparsity::Dense, 7, 50)?;
    println!(
        "scenario {} m={} sparsity={} seed={} reps={} omega={}",
        spec.id.name(),
        spec.m,
        spec.sparsity.name(),
        spec.seed,
        spec.reps,
        spec.omega.name(),
    );
    let result = run_experiment(&spec)?;
    for agg in &result.aggregates {
        println!(
            "  {:<9} reps {:>3}  mean excess {:+.4}  sd {:.4}",
            agg.estimator.name(),
            agg.reps,
            agg.mean_excess,
            agg.sd_excess
        );
    }
    let out = std::env::temp_dir().join(spec.default_csv_name());
    write_results(&result, &out)?;
    println!("wrote {} ({} data rows)", out.display(), result.rows.len());
    println!("runtime {:.2}s", result.runtime_secs);
    Ok(())
}
