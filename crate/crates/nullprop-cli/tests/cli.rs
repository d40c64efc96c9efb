//! End-to-end CLI behavior: exit codes, output contracts, config-file
//! merging, and the resolved-config echo.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nullprop"))
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("nullprop_cli_tests").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

/// 1000 Gaussian draws centered at −1 (mostly null for the one-sided
/// null at 0), one per line.
fn write_normal_data(path: &PathBuf) {
    let mut rng = nullprop::rng::SeededStream::new(99);
    let lines: Vec<String> = (0..1000)
        .map(|_| format!("{}", rng.standard_normal() - 1.0))
        .collect();
    std::fs::write(path, lines.join("\n")).unwrap();
}

#[test]
fn estimate_smoke_run() {
    let dir = tmp_dir("estimate_smoke");
    let data = dir.join("normals.txt");
    write_normal_data(&data);
    let out = bin()
        .args(["estimate", "--family", "gaussian", "--null", "onesided:0", "--in"])
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let est_line = text
        .lines()
        .find(|l| l.starts_with("estimate = "))
        .expect("estimate line");
    let est: f64 = est_line.trim_start_matches("estimate = ").parse().unwrap();
    assert!((0.0..=1.0).contains(&est), "estimate {est}");
    assert!(text.contains("t_used = "));
    assert!(text.contains("m = 1000"));
}

#[test]
fn cauchy_one_sided_exits_3_with_reason() {
    let dir = tmp_dir("cauchy");
    let data = dir.join("data.txt");
    write_normal_data(&data);
    let out = bin()
        .args(["estimate", "--family", "cauchy", "--null", "onesided:0", "--in"])
        .arg(&data)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).contains("Construction V cannot be applied"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn missing_input_file_exits_2() {
    let out = bin()
        .args(["estimate", "--in", "/nonexistent/nowhere.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_data_exits_2() {
    let dir = tmp_dir("malformed");
    let data = dir.join("bad.txt");
    std::fs::write(&data, "1.0\nnot-a-number\n").unwrap();
    let out = bin().args(["estimate", "--in"]).arg(&data).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_row_count_and_aggregates() {
    let dir = tmp_dir("simulate_rows");
    let csv = dir.join("out.csv");
    let out = bin()
        .args([
            "simulate", "--scenario", "S2", "--m", "1000", "--sparsity", "dense", "--reps", "5",
            "--seed", "7", "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    for name in ["proposed", "mr", "storey"] {
        assert!(text.contains(&format!("estimator={name}")), "{text}");
    }
    let contents = std::fs::read_to_string(&csv).unwrap();
    let data_rows = contents
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("scenario,"))
        .count();
    // 3 estimators × 5 reps
    assert_eq!(data_rows, 15);
}

#[test]
fn scenario_s4_defaults_to_sigma_4() {
    let out = bin()
        .args([
            "simulate", "--scenario", "S4", "--family", "gamma", "--m", "100", "--reps", "1",
            "--seed", "3", "--print-config", "--out",
        ])
        .arg(tmp_dir("s4_sigma").join("s4.csv"))
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("sigma = 4"), "{}", stdout(&out));
}

#[test]
fn oracle_limits_at_large_t() {
    // composed ψ ≈ {0, 0, 1, 0, 0} over {a−1, a, (a+b)/2, b, b+1}
    let out = bin()
        .args([
            "oracle",
            "--null",
            "bounded:-1,2",
            "--grid",
            "-2,-1,0.5,2,3",
            "--t",
            "300",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let psi: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(psi.len(), 5);
    for (i, expected) in [0.0, 0.0, 1.0, 0.0, 0.0].iter().enumerate() {
        assert!(
            (psi[i] - expected).abs() < 0.1,
            "psi[{i}] = {} vs {expected}",
            psi[i]
        );
    }
}

#[test]
fn oracle_empty_grid_prints_header_only() {
    let out = bin().args(["oracle"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "param,psi,one_minus_psi");
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tmp_dir("config_merge");
    let cfg = dir.join("run.conf");
    std::fs::write(
        &cfg,
        "# comment line\nfamily = gamma\nsigma = 4\nnull = bounded:4,8\nm = 500\n",
    )
    .unwrap();
    let out = bin()
        .args(["diagnose", "--config"])
        .arg(&cfg)
        .args(["--m", "800", "--print-config"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    // flag overrides file, file fills the rest
    assert!(text.contains("m = 800"), "{text}");
    assert!(text.contains("family = gamma"), "{text}");
    assert!(text.contains("null = bounded:4,8"), "{text}");
}

#[test]
fn diagnose_reports_bounds_and_class() {
    let out = bin()
        .args([
            "diagnose",
            "--null",
            "bounded:-1,2",
            "--m",
            "1000",
            "--lambda",
            "3",
            "--pi1",
            "0.2",
            "--u-m",
            "0.5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("variance_bound = "), "{text}");
    assert!(text.contains("concentration_halfwidth = "), "{text}");
    assert!(text.contains("class = location-shift bounded"), "{text}");
    assert!(text.contains("predicate["), "{text}");
}

#[test]
fn overflowing_speed_exits_4() {
    // t far beyond the Gaussian overflow guard is a numeric range error
    let dir = tmp_dir("range");
    let data = dir.join("data.txt");
    write_normal_data(&data);
    let out = bin()
        .args(["estimate", "--null", "bounded:-1,2", "--t", "60", "--in"])
        .arg(&data)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("t = 60"), "stderr: {}", stderr(&out));
}

#[test]
fn gamma_bad_theta_data_is_a_domain_error() {
    // a Gamma estimate run with a point null at a nonpositive mean is an
    // unsupported configuration → exit 3
    let dir = tmp_dir("gamma_bad");
    let data = dir.join("data.txt");
    std::fs::write(&data, "1.0\n2.0\n3.0\n").unwrap();
    let out = bin()
        .args([
            "estimate", "--family", "gamma", "--null", "point:-2", "--in",
        ])
        .arg(&data)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}
