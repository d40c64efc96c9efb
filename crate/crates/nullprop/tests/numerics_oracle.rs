//! Oracle checks for the oscillatory-integral primitives: production
//! values against adaptive-refinement quadrature, closed forms, and the
//! printed decay bounds.

mod common;

use common::adaptive_integrate;
use nullprop::numerics::{
    dirichlet_halfline, dirichlet_window, fourier_decay_bound, integrate_1d, sinc, sine_integral,
    weighted_dirichlet, QuadratureConfig, WeightFunction,
};
use std::f64::consts::PI;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn quadratic_integral_against_closed_form() {
    let v = integrate_1d(|x| x * x, 0.0, 1.0, &cfg()).unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-4);
}

#[test]
fn sine_integral_against_adaptive_oracle() {
    // Si(2) frozen from the halving oracle (agreement 1e-8): 1.60541298
    let oracle = adaptive_integrate(&sinc, 0.0, 2.0, 1e-8);
    assert!((oracle - 1.605_412_976_8).abs() < 1e-7);
    let production = sine_integral(2.0, &cfg()).unwrap();
    assert!((production - oracle).abs() < 2e-5);
    assert!((production - 1.605_413).abs() < 2e-5);
}

#[test]
fn sine_integral_tail_bound() {
    // |Si(t) − π/2| ≤ 2π/t for t ≥ 2
    for &t in &[2.0, 5.0, 10.0, 50.0, 100.0, 1000.0] {
        let si = sine_integral(t, &cfg()).unwrap();
        assert!(
            (si - PI / 2.0).abs() <= 2.0 * PI / t,
            "t = {t}: Si = {si}"
        );
    }
}

#[test]
fn window_limits_at_large_t() {
    let c = cfg();
    // interior point
    let v = dirichlet_window(200.0, 0.5, -1.0, 2.0, &c).unwrap();
    assert!((v - 1.0).abs() < 0.05);
    // boundary point → 1/2
    let v = dirichlet_window(200.0, -1.0, -1.0, 2.0, &c).unwrap();
    assert!((v - 0.5).abs() < 0.05);
    // exterior point → 0
    let v = dirichlet_window(200.0, 3.0, -1.0, 2.0, &c).unwrap();
    assert!(v.abs() < 0.05);
}

#[test]
fn halfline_limits_at_large_t() {
    let c = cfg();
    let v = dirichlet_halfline(200.0, 1.0, 0.0, &c).unwrap();
    assert!((v - 0.5).abs() < 0.02);
    let v = dirichlet_halfline(200.0, -1.0, 0.0, &c).unwrap();
    assert!((v + 0.5).abs() < 0.02);
}

#[test]
fn window_matches_double_quadrature_identity() {
    // (1/π)∫_{(μ−b)t}^{(μ−a)t} sinc = (1/2π)∫ₐᵇ dy ∫ t cos(ts(μ−y)) ds,
    // with the right side on an independent fine double grid
    let c = cfg();
    let (a, b) = (-1.0, 2.0);
    for &t in &[0.5, 1.5, 3.0, 6.0] {
        for &mu in &[-2.0, -1.0, 0.3, 1.9, 2.0, 4.5] {
            let lhs = dirichlet_window(t, mu, a, b, &c).unwrap();
            let inner =
                |y: f64| common::midpoint_fixed(&|s: f64| t * (t * s * (mu - y)).cos(), -1.0, 1.0, 3000);
            let rhs = common::midpoint_fixed(&inner, a, b, 3000) / (2.0 * PI);
            assert!(
                (lhs - rhs).abs() < 1e-4,
                "t={t} mu={mu}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn weighted_dirichlet_reduces_to_window_for_unit_phi() {
    let c = cfg();
    for i in 0..5 {
        for j in 0..5 {
            let t = 1.0 + 2.0 * i as f64;
            let mu = -1.5 + 1.0 * j as f64;
            let lhs = weighted_dirichlet(t, mu, -1.0, 2.0, |_| 1.0, &c).unwrap();
            let rhs = dirichlet_window(t, mu, -1.0, 2.0, &c).unwrap();
            assert!((lhs - rhs).abs() < 1e-4, "t={t} mu={mu}");
        }
    }
}

#[test]
fn weighted_dirichlet_rate_bound() {
    // |D_φ − limit| ≤ 20‖φ‖∞/t for φ(y) = y² on [−2, 2]
    let c = cfg();
    let phi = |y: f64| y * y;
    let sup = 4.0;
    for &t in &[2.0, 5.0, 20.0, 100.0] {
        for &mu in &[-1.0, 0.5, 1.5] {
            let v = weighted_dirichlet(t, mu, -2.0, 2.0, phi, &c).unwrap();
            assert!(
                (v - phi(mu)).abs() <= 20.0 * sup / t,
                "interior t={t} mu={mu}: {v}"
            );
        }
        for &mu in &[3.0, -2.5] {
            let v = weighted_dirichlet(t, mu, -2.0, 2.0, phi, &c).unwrap();
            assert!(v.abs() <= 20.0 * sup / t, "exterior t={t} mu={mu}: {v}");
        }
    }
}

#[test]
fn weighted_dirichlet_exterior_point() {
    let v = weighted_dirichlet(100.0, 3.0, -2.0, 2.0, |y| y * y, &cfg()).unwrap();
    assert!(v.abs() < 0.8);
}

#[test]
fn fourier_bound_certifies_actual_decay() {
    // |∫ ω(s) cos(ts) ds| against 2·2·(‖ω‖TV + ‖ω‖∞)/t
    for w in [WeightFunction::Triangular, WeightFunction::Uniform] {
        for &t in &[4.0, 10.0, 40.0] {
            let actual =
                adaptive_integrate(&|s: f64| w.eval(s) * (t * s).cos(), -1.0, 1.0, 1e-8).abs();
            let bound =
                fourier_decay_bound(w.total_variation(), w.sup_norm(), -1.0, 1.0, t).unwrap();
            assert!(actual <= bound, "{} t={t}: {actual} > {bound}", w.name());
        }
    }
}
