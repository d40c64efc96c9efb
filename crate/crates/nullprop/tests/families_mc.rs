//! Sampling-level checks for the families: law-of-large-numbers moments
//! against the closed-form means/variances, and the CDF against an
//! independent bisection quantile oracle.

mod common;

use common::{assert_within_se, mean_se};
use nullprop::families::{FamilyModel, LsKind};
use nullprop::rng::SeededStream;

const N: usize = 100_000;

fn sample_n(family: &FamilyModel, param: f64, seed: u64) -> Vec<f64> {
    let mut rng = SeededStream::new(seed);
    (0..N)
        .map(|_| family.sample(param, &mut rng).unwrap())
        .collect()
}

#[test]
fn gaussian_sample_mean() {
    let fam = FamilyModel::gaussian(1.0).unwrap();
    let xs = sample_n(&fam, 0.0, 41);
    let (mean, se) = mean_se(&xs);
    assert_within_se(mean, se, 0.0, 4.0, "gaussian mean");
}

#[test]
fn gamma_mean_identity() {
    // empirical mean at θ matches σ/(1−θ) within 5 standard errors
    let fam = FamilyModel::gamma_nef(4.0).unwrap();
    for (i, &theta) in [-0.2, 0.0, 0.35].iter().enumerate() {
        let xs = sample_n(&fam, theta, 43 + i as u64);
        let (mean, se) = mean_se(&xs);
        let target = fam.gamma_mean(theta).unwrap();
        assert_within_se(mean, se, target, 5.0, &format!("gamma mean at theta={theta}"));
    }
}

#[test]
fn laplace_sample_variance() {
    // Laplace(μ, 2σ²) with σ = 2 has variance 2σ² = 8
    let fam = FamilyModel::location_shift(LsKind::Laplace, 2.0).unwrap();
    let xs = sample_n(&fam, 1.0, 47);
    let (mean, _) = mean_se(&xs);
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
    // var of the variance estimator for Laplace: (κ−1)σ⁴/n with κ = 6
    let se_var = ((6.0 - 1.0) * 64.0 / N as f64).sqrt();
    assert!(
        (var - 8.0).abs() < 5.0 * se_var,
        "variance {var} (se {se_var})"
    );
}

#[test]
fn cdf_matches_bisection_quantile_oracle() {
    // invert the cdf by bisection and check known quantiles
    let fam = FamilyModel::gaussian(1.0).unwrap();
    let quantile = |p: f64| {
        let (mut lo, mut hi) = (-20.0, 20.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if fam.cdf(0.0, mid).unwrap() < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    assert!((quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-6);
    assert!((fam.cdf(0.0, 1.959_964).unwrap() - 0.975).abs() < 1e-5);
    assert!((quantile(0.5)).abs() < 1e-9);
}

#[test]
fn sampling_agrees_with_cdf_at_grid() {
    // empirical CDF vs the analytic CDF at a few probe points, all families
    let fams = [
        FamilyModel::gaussian(1.0).unwrap(),
        FamilyModel::location_shift(LsKind::Laplace, 1.0).unwrap(),
        FamilyModel::location_shift(LsKind::Logistic, 1.0).unwrap(),
        FamilyModel::location_shift(LsKind::Cauchy, 1.0).unwrap(),
        FamilyModel::location_shift(LsKind::HyperbolicSecant, 1.0).unwrap(),
        FamilyModel::gamma_nef(4.0).unwrap(),
    ];
    for (i, fam) in fams.iter().enumerate() {
        let param = if fam.is_location_shift() { 0.5 } else { 0.2 };
        let xs = sample_n(fam, param, 53 + i as u64);
        for &q in &[-1.0, 0.8, 3.0, 6.0] {
            let p_true = fam.cdf(param, q).unwrap();
            let p_emp = xs.iter().filter(|&&x| x <= q).count() as f64 / N as f64;
            let se = (p_true * (1.0 - p_true) / N as f64).sqrt();
            assert!(
                (p_emp - p_true).abs() <= 5.0 * se + 1e-9,
                "{} at {q}: {p_emp} vs {p_true}",
                fam.name()
            );
        }
    }
}
