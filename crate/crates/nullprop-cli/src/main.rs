//! Command-line front end: estimate proportions from a data file, run
//! simulation scenarios, print oracle tables, and evaluate diagnostics.
//!
//! Exit codes: 0 success, 2 input error, 3 unsupported configuration,
//! 4 numeric range error.

use clap::{Args, Parser, Subcommand};
use nullprop::estimators::{
    class_membership, concentration_halfwidth, estimate_pi1_at, variance_bound, BoundValue,
    ClassExtras, ConcentrationBound, EstimatorConfig, ScheduleFormula, SpeedSchedule,
    VarianceExtras,
};
use nullprop::families::{FamilyModel, LsKind};
use nullprop::fmt_sig12;
use nullprop::kernels::{ComposedKernel, NullSpec, SeriesConfig};
use nullprop::numerics::{QuadratureConfig, WeightFunction};
use nullprop::simlab::{run_experiment, write_results, ScenarioId, ScenarioSpec, Sparsity};
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_RANGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "nullprop",
    about = "Estimators of the proportion of false null hypotheses for composite nulls",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate the alternative proportion from a data file (one decimal
    /// per line).
    Estimate(CommonArgs),
    /// Run a simulation scenario and write a results CSV.
    Simulate(CommonArgs),
    /// Print (param, psi, 1-psi) rows for a parameter grid at the
    /// scheduled speed.
    Oracle(CommonArgs),
    /// Print the closed-form diagnostics for a configuration.
    Diagnose(CommonArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Flat key = value configuration file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// gaussian | laplace | logistic | cauchy | hsecant | gamma
    #[arg(long)]
    family: Option<String>,
    /// Scale (location-shift) or shape (gamma).
    #[arg(long)]
    sigma: Option<f64>,
    /// point:mu0 | bounded:a,b | onesided:b
    #[arg(long)]
    null: Option<String>,
    /// triangular | uniform
    #[arg(long)]
    omega: Option<String>,
    /// Speed-schedule tuning parameter.
    #[arg(long)]
    gamma: Option<f64>,
    /// Quadrature partition norm.
    #[arg(long)]
    h: Option<f64>,
    /// Series truncation for the Gamma kernels.
    #[arg(long)]
    series_n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// S1 | S2 | S3 | S4 | S5
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    /// dense | moderate
    #[arg(long)]
    sparsity: Option<String>,
    /// Input data (estimate) or parameter-grid (oracle) file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output CSV path (simulate).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Inline parameter grid for `oracle`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Override the scheduled t (estimate, oracle, diagnose).
    #[arg(long)]
    t: Option<f64>,
    /// Concentration parameter for `diagnose`.
    #[arg(long)]
    lambda: Option<f64>,
    /// Hypothesized alternative proportion for the class report.
    #[arg(long)]
    pi1: Option<f64>,
    /// Minimal boundary distance u_m for the class report.
    #[arg(long)]
    u_m: Option<f64>,
    /// Minimal distance to b (xi-scale for Gamma) for the class report.
    #[arg(long)]
    u_tilde: Option<f64>,
    /// Mean of the squared means, for the one-sided Gaussian class.
    #[arg(long)]
    mean_sq: Option<f64>,
    /// sup of 1 - theta, for the Gamma classes.
    #[arg(long)]
    one_minus_theta_sup: Option<f64>,
    /// D_m for the one-sided Gaussian bounds.
    #[arg(long)]
    d_m: Option<f64>,
    /// Echo the fully resolved configuration before running.
    #[arg(long, default_value_t = false)]
    print_config: bool,
}

/// The resolved configuration after merging file values and defaults.
struct Resolved {
    family: FamilyModel,
    null: NullSpec,
    omega: WeightFunction,
    omega_explicit: bool,
    gamma: f64,
    h: f64,
    series_n: usize,
    seed: u64,
    reps: usize,
    scenario: ScenarioId,
    m: usize,
    sparsity: Sparsity,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Lib(nullprop::Error),
}

impl From<nullprop::Error> for CliError {
    fn from(e: nullprop::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Lib(e) => match e {
                nullprop::Error::Io { .. } => EXIT_INPUT,
                nullprop::Error::Range(_) | nullprop::Error::PanelBudget { .. } => EXIT_RANGE,
                _ => EXIT_UNSUPPORTED,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Estimate(a) => cmd_estimate(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Diagnose(a) => cmd_diagnose(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Merges `--config` file values under the explicit flags.
fn merge_config_file(args: &CommonArgs) -> Result<CommonArgs, CliError> {
    let mut merged = args.clone();
    let Some(path) = &args.config else {
        return Ok(merged);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let mut kv = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Input(format!(
                "config line {} is not `key = value`: {raw}",
                lineno + 1
            )));
        };
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    fn parse_into<T: std::str::FromStr>(
        slot: &mut Option<T>,
        kv: &HashMap<String, String>,
        key: &str,
    ) -> Result<(), CliError> {
        if slot.is_none() {
            if let Some(v) = kv.get(key) {
                *slot = Some(v.parse().map_err(|_| {
                    CliError::Input(format!("config key '{key}' has a bad value '{v}'"))
                })?);
            }
        }
        Ok(())
    }
    parse_into(&mut merged.family, &kv, "family")?;
    parse_into(&mut merged.sigma, &kv, "sigma")?;
    parse_into(&mut merged.null, &kv, "null")?;
    parse_into(&mut merged.omega, &kv, "omega")?;
    parse_into(&mut merged.gamma, &kv, "gamma")?;
    parse_into(&mut merged.h, &kv, "h")?;
    parse_into(&mut merged.series_n, &kv, "series_n")?;
    parse_into(&mut merged.seed, &kv, "seed")?;
    parse_into(&mut merged.reps, &kv, "reps")?;
    parse_into(&mut merged.scenario, &kv, "scenario")?;
    parse_into(&mut merged.m, &kv, "m")?;
    parse_into(&mut merged.sparsity, &kv, "sparsity")?;
    if merged.input.is_none() {
        if let Some(v) = kv.get("in") {
            merged.input = Some(PathBuf::from(v));
        }
    }
    if merged.out.is_none() {
        if let Some(v) = kv.get("out") {
            merged.out = Some(PathBuf::from(v));
        }
    }
    Ok(merged)
}

fn parse_family(args: &CommonArgs) -> Result<FamilyModel, CliError> {
    let name = args.family.as_deref().unwrap_or("gaussian");
    let sigma = args.sigma.unwrap_or(match name {
        "gamma" => 4.0,
        _ => 1.0,
    });
    let fam = match name {
        "gaussian" => FamilyModel::location_shift(LsKind::Gaussian, sigma),
        "laplace" => FamilyModel::location_shift(LsKind::Laplace, sigma),
        "logistic" => FamilyModel::location_shift(LsKind::Logistic, sigma),
        "cauchy" => FamilyModel::location_shift(LsKind::Cauchy, sigma),
        "hsecant" => FamilyModel::location_shift(LsKind::HyperbolicSecant, sigma),
        "gamma" => FamilyModel::gamma_nef(sigma),
        other => {
            return Err(CliError::Input(format!("unknown family '{other}'")));
        }
    };
    Ok(fam?)
}

fn parse_null(spec: &str) -> Result<NullSpec, CliError> {
    let bad = || {
        CliError::Input(format!(
            "bad null spec '{spec}' (expected point:mu0 | bounded:a,b | onesided:b)"
        ))
    };
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match (kind, nums.as_slice()) {
        ("point", [mu0]) => Ok(NullSpec::point(*mu0)),
        ("bounded", [a, b]) => Ok(NullSpec::bounded(*a, *b)?),
        ("onesided", [b]) => Ok(NullSpec::one_sided(*b)),
        _ => Err(bad()),
    }
}

fn resolve(args: &CommonArgs) -> Result<Resolved, CliError> {
    let args = merge_config_file(args)?;
    let family = parse_family(&args)?;
    let null = match &args.null {
        Some(s) => parse_null(s)?,
        None => match family {
            FamilyModel::LocationShift { .. } => NullSpec::one_sided(0.0),
            // default Gamma null: the S4 bounded interval on the mean scale
            FamilyModel::GammaNef { .. } => {
                let a = family.gamma_mean(0.0)?;
                let b = family.gamma_mean(0.35)?;
                NullSpec::bounded(a, b)?
            }
        },
    };
    let omega_explicit = args.omega.is_some();
    let omega = match &args.omega {
        Some(s) => WeightFunction::by_name(s)?,
        None => WeightFunction::Triangular,
    };
    let gamma = args.gamma.unwrap_or(match family {
        FamilyModel::LocationShift { .. } => 0.495,
        FamilyModel::GammaNef { .. } => 1.0,
    });
    Ok(Resolved {
        family,
        null,
        omega,
        omega_explicit,
        gamma,
        h: args.h.unwrap_or(0.01),
        series_n: args.series_n.unwrap_or(25),
        seed: args.seed.unwrap_or(42),
        reps: args.reps.unwrap_or(50),
        scenario: ScenarioId::by_name(args.scenario.as_deref().unwrap_or("S2"))?,
        m: args.m.unwrap_or(1000),
        sparsity: Sparsity::by_name(args.sparsity.as_deref().unwrap_or("dense"))?,
        input: args.input.clone(),
        out: args.out.clone(),
    })
}

impl Resolved {
    fn schedule(&self) -> Result<SpeedSchedule, CliError> {
        let formula = match (&self.family, &self.null) {
            (
                FamilyModel::LocationShift {
                    kind: LsKind::Gaussian,
                    ..
                },
                NullSpec::OneSided { .. },
            ) => ScheduleFormula::LsOnesidedGauss,
            (FamilyModel::LocationShift { .. }, _) => ScheduleFormula::LsBounded,
            (FamilyModel::GammaNef { .. }, NullSpec::OneSided { .. }) => {
                ScheduleFormula::GammaOnesided
            }
            (FamilyModel::GammaNef { .. }, _) => ScheduleFormula::GammaBoundedSim,
        };
        Ok(SpeedSchedule::new(formula, self.gamma)?)
    }

    fn estimator_config(&self) -> Result<EstimatorConfig, CliError> {
        Ok(EstimatorConfig {
            omega: self.omega,
            quadrature: QuadratureConfig::new(self.h, QuadratureConfig::default().max_panels)?,
            series: SeriesConfig::new(self.series_n)?,
            schedule: self.schedule()?,
        })
    }

    fn print_config(&self) {
        println!("family = {}", self.family.name());
        println!("sigma = {}", self.family.sigma());
        let null = match self.null {
            NullSpec::Point { mu0 } => format!("point:{mu0}"),
            NullSpec::Bounded { a, b } => format!("bounded:{a},{b}"),
            NullSpec::OneSided { b } => format!("onesided:{b}"),
        };
        println!("null = {null}");
        println!("omega = {}", self.omega.name());
        println!("gamma = {}", self.gamma);
        println!("h = {}", self.h);
        println!("series_n = {}", self.series_n);
        println!("seed = {}", self.seed);
        println!("reps = {}", self.reps);
        println!("scenario = {}", self.scenario.name());
        println!("m = {}", self.m);
        println!("sparsity = {}", self.sparsity.name());
    }
}

fn read_data_file(path: &PathBuf) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut data = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::Input(format!(
                "{} line {}: '{line}' is not a decimal",
                path.display(),
                lineno + 1
            ))
        })?;
        data.push(v);
    }
    Ok(data)
}

fn cmd_estimate(args: &CommonArgs) -> Result<(), CliError> {
    let r = resolve(args)?;
    if args.print_config {
        r.print_config();
    }
    let path = r
        .input
        .as_ref()
        .ok_or_else(|| CliError::Input("estimate needs --in <data file>".into()))?;
    let data = read_data_file(path)?;
    if data.is_empty() {
        return Err(CliError::Input(format!("{} holds no data", path.display())));
    }
    let cfg = r.estimator_config()?;
    let t = match args.t {
        Some(t) => t,
        None => cfg.schedule.speed_t(data.len(), &r.family)?,
    };
    let report = estimate_pi1_at(&data, &r.family, &r.null, &cfg, t)?;
    println!("estimate = {}", fmt_sig12(report.estimate));
    println!("pi0_hat = {}", fmt_sig12(report.pi0_hat));
    println!("t_used = {}", fmt_sig12(report.t_used));
    println!("m = {}", report.m);
    match report.diagnostics.variance_bound {
        Some(v) => println!("variance_bound = {}", fmt_sig12(v)),
        None => println!(
            "variance_bound = {}",
            if report.diagnostics.variance_trend_only {
                "trend-only"
            } else {
                "unavailable"
            }
        ),
    }
    if let Some((hw, floor)) = report.diagnostics.concentration {
        println!("concentration_halfwidth = {}", fmt_sig12(hw));
        println!("concentration_floor = {}", fmt_sig12(floor));
    }
    if let Some(d) = report.diagnostics.d_m_estimated {
        println!("d_m_estimated = {}", fmt_sig12(d));
    }
    Ok(())
}

fn cmd_simulate(args: &CommonArgs) -> Result<(), CliError> {
    let mut r = resolve(args)?;
    let mut spec = ScenarioSpec::new(r.scenario, r.m, r.sparsity, r.seed, r.reps)?;
    if r.omega_explicit {
        spec.omega = r.omega;
    }
    // echo the omega the scenario actually runs with
    r.omega = spec.omega;
    if args.print_config {
        r.print_config();
    }
    spec.quadrature = QuadratureConfig::new(r.h, QuadratureConfig::default().max_panels)?;
    spec.series = SeriesConfig::new(r.series_n)?;
    if args.gamma.is_some() {
        // re-derive the scenario schedule under the requested tuning
        let formula = match r.scenario {
            ScenarioId::S1 => ScheduleFormula::LsBounded,
            ScenarioId::S2 => ScheduleFormula::LsOnesidedGauss,
            ScenarioId::S3 => ScheduleFormula::WeightedGauss,
            ScenarioId::S4 => ScheduleFormula::GammaBoundedSim,
            ScenarioId::S5 => ScheduleFormula::GammaOnesided,
        };
        spec.schedule_override = Some(SpeedSchedule::new(formula, r.gamma)?);
    }
    let result = run_experiment(&spec)?;
    let out = r
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(spec.default_csv_name()));
    write_results(&result, &out)?;
    for agg in &result.aggregates {
        println!(
            "estimator={} reps={} mean_excess={} sd_excess={}",
            agg.estimator.name(),
            agg.reps,
            fmt_sig12(agg.mean_excess),
            fmt_sig12(agg.sd_excess),
        );
    }
    println!("csv = {}", out.display());
    Ok(())
}

fn cmd_oracle(args: &CommonArgs) -> Result<(), CliError> {
    let r = resolve(args)?;
    if args.print_config {
        r.print_config();
    }
    let mut params: Vec<f64> = Vec::new();
    if let Some(grid) = &args.grid {
        for part in grid.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            params.push(
                part.parse()
                    .map_err(|_| CliError::Input(format!("bad grid value '{part}'")))?,
            );
        }
    }
    if let Some(path) = &r.input {
        params.extend(read_data_file(path)?);
    }
    let cfg = r.estimator_config()?;
    let t = match args.t {
        Some(t) => t,
        None => cfg.schedule.speed_t(r.m, &r.family)?,
    };
    println!("param,psi,one_minus_psi");
    if params.is_empty() {
        return Ok(());
    }
    let pair = ComposedKernel::new(r.null, &r.family, r.omega, cfg.series, cfg.quadrature)?;
    for &p in &params {
        let psi = pair.psi(t, p)?;
        println!(
            "{},{},{}",
            fmt_sig12(p),
            fmt_sig12(psi),
            fmt_sig12(1.0 - psi)
        );
    }
    Ok(())
}

fn cmd_diagnose(args: &CommonArgs) -> Result<(), CliError> {
    let r = resolve(args)?;
    if args.print_config {
        r.print_config();
    }
    let cfg = r.estimator_config()?;
    let t = match args.t {
        Some(t) => t,
        None => cfg.schedule.speed_t(r.m, &r.family)?,
    };
    println!("t = {}", fmt_sig12(t));
    let extras = VarianceExtras {
        d_m: args.d_m,
        functional: None,
    };
    match variance_bound(&r.family, &r.null, r.omega, &cfg.quadrature, t, r.m, &extras) {
        Ok(BoundValue::Explicit(v)) => println!("variance_bound = {}", fmt_sig12(v)),
        Ok(BoundValue::TrendOnly) => println!("variance_bound = trend-only"),
        Err(e) => println!("variance_bound = unavailable ({e})"),
    }
    let lambda = args.lambda.unwrap_or(3.0);
    match concentration_halfwidth(
        &r.family,
        &r.null,
        r.omega,
        &cfg.quadrature,
        t,
        r.m,
        lambda,
        &extras,
    ) {
        Ok(ConcentrationBound::Explicit {
            halfwidth,
            prob_floor,
        }) => {
            println!("concentration_lambda = {}", fmt_sig12(lambda));
            println!("concentration_halfwidth = {}", fmt_sig12(halfwidth));
            println!("concentration_floor = {}", fmt_sig12(prob_floor));
        }
        Ok(ConcentrationBound::TrendOnly) => println!("concentration = trend-only"),
        Err(e) => println!("concentration = unavailable ({e})"),
    }
    if let Some(pi1) = args.pi1 {
        let extras = ClassExtras {
            u_m: args.u_m,
            u_tilde: args.u_tilde,
            mean_sq: args.mean_sq,
            one_minus_theta_sup: args.one_minus_theta_sup,
            ..Default::default()
        };
        match class_membership(
            &cfg.schedule,
            &r.family,
            &r.null,
            r.m,
            pi1,
            &cfg.quadrature,
            &extras,
        ) {
            Ok(report) => {
                println!("class = {}", report.class_name);
                println!("class_satisfied = {}", report.all_satisfied);
                for p in &report.predicates {
                    println!(
                        "predicate[{}] = {} (lhs {}, rhs {})",
                        p.name,
                        if p.satisfied { "ok" } else { "violated" },
                        fmt_sig12(p.lhs),
                        fmt_sig12(p.rhs),
                    );
                }
                if let Some(u) = report.upsilon {
                    println!("upsilon = {}", fmt_sig12(u));
                }
                if let Some(rr) = report.r_rho {
                    println!("r_rho = {}", fmt_sig12(rr));
                }
                if let Some(ps) = report.p_star {
                    println!("p_star = {}", fmt_sig12(ps));
                }
            }
            Err(e) => println!("class = unavailable ({e})"),
        }
    }
    Ok(())
}
