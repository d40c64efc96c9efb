//! Speed schedules across m and the closed-form diagnostics: variance
//! bounds, concentration half widths, and a uniform-consistency-class
//! report at finite m.
//!
//! Run with: `cargo run --release --example speed_and_diagnostics`

use nullprop::estimators::{
    class_membership, concentration_halfwidth, variance_bound, BoundValue, ClassExtras,
    ConcentrationBound, ScheduleFormula, SpeedSchedule, VarianceExtras,
};
use nullprop::families::FamilyModel;
use nullprop::kernels::NullSpec;
use nullprop::numerics::{QuadratureConfig, WeightFunction};

fn main() -> nullprop::Result<()> {
    let gauss = FamilyModel::gaussian(1.0)?;
    let gamma = FamilyModel::gamma_nef(4.0)?;
    let quad = QuadratureConfig::default();
    let omega = WeightFunction::Triangular;

    println!("speed schedules t_m:");
    println!("{:>8}  {:>10} {:>10} {:>12} {:>12}", "m", "LS", "LS 1-sided", "Gamma bound", "Gamma 1-side");
    let ls = SpeedSchedule::new(ScheduleFormula::LsBounded, 0.495)?;
    let ls1 = SpeedSchedule::new(ScheduleFormula::LsOnesidedGauss, 0.495)?;
    let gb = SpeedSchedule::new(ScheduleFormula::GammaBoundedSim, 1.0)?;
    let go = SpeedSchedule::new(ScheduleFormula::GammaOnesided, 1.0)?;
    for m in [1_000usize, 5_000, 10_000, 50_000] {
        println!(
            "{m:>8}  {:>10.4} {:>10.4} {:>12.4} {:>12.4}",
            ls.speed_t(m, &gauss)?,
            ls1.speed_t(m, &gauss)?,
            gb.speed_t(m, &gamma)?,
            go.speed_t(m, &gamma)?,
        );
    }

    let m = 10_000;
    let null = NullSpec::bounded(-1.0, 2.0)?;
    let t = ls.speed_t(m, &gauss)?;
    println!("\nGaussian bounded null (-1, 2) at m = {m}, t = {t:.4}:");
    if let BoundValue::Explicit(v) =
        variance_bound(&gauss, &null, omega, &quad, t, m, &VarianceExtras::default())?
    {
        println!("  variance bound on e_m        {v:.6}");
    }
    if let ConcentrationBound::Explicit { halfwidth, prob_floor } =
        concentration_halfwidth(&gauss, &null, omega, &quad, t, m, 3.0, &VarianceExtras::default())?
    {
        println!("  |e_m| <= {halfwidth:.4} with probability >= {prob_floor:.4}");
    }

    let extras = ClassExtras {
        u_m: Some(1.0 / (m as f64).ln().ln()),
        ..Default::default()
    };
    let report = class_membership(&ls, &gauss, &null, m, 0.2, &quad, &extras)?;
    println!("\nuniform consistency class '{}' at pi1 = 0.2:", report.class_name);
    println!("  (asymptotic o(.) conditions rendered with proxy threshold {})", report.heuristic_epsilon);
    for p in &report.predicates {
        println!(
            "  [{}] {}  (lhs {:.4}, rhs {:.4})",
            if p.satisfied { "ok " } else { "VIOLATED" },
            p.name,
            p.lhs,
            p.rhs
        );
    }
    if let Some(u) = report.upsilon {
        println!("  Upsilon = {u:.6}");
    }
    Ok(())
}
