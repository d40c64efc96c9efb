//! Shared test-only oracles, kept independent of the production
//! quadrature path: adaptive refinement halves the step until two
//! successive passes agree, rather than using one fixed partition.

#![allow(dead_code)]

/// Midpoint quadrature with a fixed number of panels.
pub fn midpoint_fixed(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let w = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * w)).sum::<f64>() * w
}

/// Adaptive-refinement oracle: halve the step until two successive values
/// agree to `tol`.
pub fn adaptive_integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut n = 64.max(((b - a).abs() * 8.0) as usize);
    let mut prev = midpoint_fixed(f, a, b, n);
    for _ in 0..24 {
        n *= 2;
        let next = midpoint_fixed(f, a, b, n);
        if (next - prev).abs() <= tol {
            return next;
        }
        prev = next;
    }
    prev
}

/// Sample mean and standard error.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Asserts that a Monte Carlo mean is within `k` standard errors of the
/// target, with a small absolute floor so exact-zero-variance cases pass.
pub fn assert_within_se(mean: f64, se: f64, target: f64, k: f64, label: &str) {
    let tol = k * se + 1e-9;
    assert!(
        (mean - target).abs() <= tol,
        "{label}: mean {mean} vs target {target} (tolerance {tol}, se {se})"
    );
}
