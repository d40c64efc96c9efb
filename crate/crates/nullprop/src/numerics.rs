//! Oscillatory-integral primitives.
//!
//! The production quadrature rule throughout the crate is the composite
//! midpoint rule on an equally spaced partition with norm 0.01. Iterated
//! double integrals reuse the same rule on each axis. Removable
//! singularities (`sin x / x` at 0, `sin((μ−y)t)/(μ−y)` at `y = μ`) are
//! evaluated by their analytic limits instead of excluding panels.

use crate::{Error, Result};
use std::f64::consts::PI;

/// Equally spaced midpoint quadrature configuration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Partition norm: the width of each panel on the integration variable.
    pub partition_norm: f64,
    /// Safety cap on the number of panels for a single 1-D pass.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            partition_norm: 0.01,
            max_panels: 20_000_000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(partition_norm: f64, max_panels: usize) -> Result<Self> {
        if !(partition_norm > 0.0) {
            return Err(Error::Domain(format!(
                "partition norm must be positive, got {partition_norm}"
            )));
        }
        if max_panels == 0 {
            return Err(Error::Domain("max_panels must be at least 1".into()));
        }
        Ok(Self {
            partition_norm,
            max_panels,
        })
    }

    /// Number of equal panels covering [a, b] at this norm.
    pub(crate) fn panels(&self, a: f64, b: f64) -> Result<usize> {
        debug_assert!(b >= a);
        if b == a {
            return Ok(0);
        }
        let raw = ((b - a) / self.partition_norm).ceil();
        if !raw.is_finite() || raw > self.max_panels as f64 {
            return Err(Error::PanelBudget {
                needed: if raw.is_finite() { raw as usize } else { usize::MAX },
                cap: self.max_panels,
            });
        }
        Ok((raw as usize).max(1))
    }
}

/// Midpoint nodes and the common panel width for [a, b].
pub(crate) fn midpoint_grid(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(Vec<f64>, f64)> {
    let n = cfg.panels(a, b)?;
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let w = (b - a) / n as f64;
    let nodes = (0..n).map(|i| a + (i as f64 + 0.5) * w).collect();
    Ok((nodes, w))
}

/// Composite midpoint approximation of ∫ₐᵇ f(x) dx.
///
/// Deterministic for a fixed configuration: nodes are visited in
/// ascending order and accumulated left to right.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if a > b {
        return Err(Error::InvalidInterval { a, b });
    }
    let (nodes, w) = midpoint_grid(a, b, cfg)?;
    let mut acc = 0.0;
    for x in nodes {
        acc += f(x);
    }
    Ok(acc * w)
}

/// sin(x)/x with the removable singularity filled in.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Sine integral Si(t) = ∫₀ᵗ sin(x)/x dx for t ≥ 0, by midpoint quadrature
/// at the configured partition norm.
pub fn sine_integral(t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("sine_integral needs t >= 0, got {t}")));
    }
    integrate_1d(sinc, 0.0, t, cfg)
}

/// Si extended to the whole line by oddness. Internal convenience.
fn sine_integral_signed(u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let v = sine_integral(u.abs(), cfg)?;
    Ok(if u < 0.0 { -v } else { v })
}

/// Windowed Dirichlet integral
/// (1/π) ∫_{(μ−b)t}^{(μ−a)t} sin(y)/y dy = (1/π)[Si((μ−a)t) − Si((μ−b)t)].
///
/// As t → ∞ this tends to 1 inside (a, b), 1/2 at the endpoints, and 0
/// outside, which is what makes it usable as an indicator surrogate for a
/// bounded null.
pub fn dirichlet_window(t: f64, mu: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if a >= b {
        return Err(Error::InvalidInterval { a, b });
    }
    if t < 0.0 {
        return Err(Error::Domain(format!("dirichlet_window needs t >= 0, got {t}")));
    }
    let hi = sine_integral_signed((mu - a) * t, cfg)?;
    let lo = sine_integral_signed((mu - b) * t, cfg)?;
    Ok((hi - lo) / PI)
}

/// Half-line Dirichlet integral
/// (1/π) ∫₀ᵗ sin((μ−b)y)/y dy = sign(μ−b) · Si(|μ−b| t) / π.
///
/// Tends to ±1/2 according to the sign of μ−b, and is identically 0 at
/// μ = b.
pub fn dirichlet_halfline(t: f64, mu: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!(
            "dirichlet_halfline needs t >= 0, got {t}"
        )));
    }
    let d = mu - b;
    if d == 0.0 {
        return Ok(0.0);
    }
    let si = sine_integral(d.abs() * t, cfg)?;
    Ok(d.signum() * si / PI)
}

/// Weighted Dirichlet transform
/// D_φ(t, μ; a, b) = (1/π) ∫ₐᵇ sin((μ−y)t)/(μ−y) · φ(y) dy,
/// by midpoint quadrature, with the integrand at y = μ evaluated as
/// t·φ(μ)/π.
pub fn weighted_dirichlet(
    t: f64,
    mu: f64,
    a: f64,
    b: f64,
    phi: impl Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a >= b {
        return Err(Error::InvalidInterval { a, b });
    }
    if t < 0.0 {
        return Err(Error::Domain(format!(
            "weighted_dirichlet needs t >= 0, got {t}"
        )));
    }
    integrate_1d(
        |y| {
            let d = mu - y;
            t * sinc(d * t) * phi(y) / PI
        },
        a,
        b,
        cfg,
    )
}

/// Certified decay bound 2(b₁−a₁)(‖f‖_TV + ‖f‖_∞)/|t| on
/// |∫_{a₁}^{b₁} f(s) cos(ts) ds| for f of bounded variation.
pub fn fourier_decay_bound(tv: f64, sup: f64, a1: f64, b1: f64, t: f64) -> Result<f64> {
    if a1 >= b1 {
        return Err(Error::InvalidInterval { a: a1, b: b1 });
    }
    if t == 0.0 {
        return Err(Error::Domain("fourier decay bound is undefined at t = 0".into()));
    }
    if tv < 0.0 || sup < 0.0 {
        return Err(Error::Domain("norms must be nonnegative".into()));
    }
    Ok(2.0 * (b1 - a1) * (tv + sup) / t.abs())
}

/// The averaging density ω on [−1, 1]: even, bounded, of bounded
/// variation, integrating to one.
///
/// The triangular density is the default; the uniform density is
/// available by name. Experiment records carry the name so runs are
/// self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightFunction {
    /// ω(s) = 1 − |s|; ‖ω‖∞ = 1, ‖ω‖_TV = 2.
    #[default]
    Triangular,
    /// ω(s) = 1/2; ‖ω‖∞ = 1/2, ‖ω‖_TV = 0.
    Uniform,
}

impl WeightFunction {
    pub fn eval(&self, s: f64) -> f64 {
        debug_assert!((-1.0..=1.0).contains(&s));
        match self {
            WeightFunction::Triangular => 1.0 - s.abs(),
            WeightFunction::Uniform => 0.5,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            WeightFunction::Triangular => 1.0,
            WeightFunction::Uniform => 0.5,
        }
    }

    pub fn total_variation(&self) -> f64 {
        match self {
            WeightFunction::Triangular => 2.0,
            WeightFunction::Uniform => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightFunction::Triangular => "triangular",
            WeightFunction::Uniform => "uniform",
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "triangular" => Ok(WeightFunction::Triangular),
            "uniform" => Ok(WeightFunction::Uniform),
            other => Err(Error::Config(format!("unknown weight function '{other}'"))),
        }
    }

    /// ∫_{−1}^{1} ω(s) cos(c·s) ds in closed form.
    ///
    /// For the triangular density this is the Fejér-type average
    /// 2(1 − cos c)/c², for the uniform density it is sinc(c); both are 1
    /// at c = 0. Discriminant-side point terms use this directly so that
    /// oracle evaluations carry no quadrature error.
    pub fn cosine_average(&self, c: f64) -> f64 {
        let c = c.abs();
        match self {
            WeightFunction::Triangular => {
                if c < 1e-4 {
                    // 1 − c²/12 + c⁴/360
                    1.0 - c * c / 12.0 + c.powi(4) / 360.0
                } else {
                    2.0 * (1.0 - c.cos()) / (c * c)
                }
            }
            WeightFunction::Uniform => sinc(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_integrand_is_exact() {
        let v = integrate_1d(|_| 1.0, 0.0, 1.0, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn odd_integrand_cancels() {
        let v = integrate_1d(|x| x, -1.0, 1.0, &cfg()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn quadratic_matches_closed_form() {
        let v = integrate_1d(|x| x * x, 0.0, 1.0, &cfg()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn panel_budget_is_enforced() {
        let tight = QuadratureConfig::new(0.01, 10).unwrap();
        let err = integrate_1d(|_| 1.0, 0.0, 1.0, &tight).unwrap_err();
        assert!(matches!(err, Error::PanelBudget { .. }));
    }

    #[test]
    fn inverted_interval_is_rejected() {
        assert!(matches!(
            integrate_1d(|_| 1.0, 1.0, 0.0, &cfg()),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(matches!(
            dirichlet_window(1.0, 0.0, 2.0, 1.0, &cfg()),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn linearity_and_additivity() {
        let c = cfg();
        let f = |x: f64| (3.0 * x).sin();
        let g = |x: f64| x * x - 1.0;
        let lhs = integrate_1d(|x| 2.0 * f(x) - 0.5 * g(x), 0.0, 1.0, &c).unwrap();
        let rhs = 2.0 * integrate_1d(f, 0.0, 1.0, &c).unwrap()
            - 0.5 * integrate_1d(g, 0.0, 1.0, &c).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);

        let whole = integrate_1d(f, 0.0, 2.0, &c).unwrap();
        let split =
            integrate_1d(f, 0.0, 1.0, &c).unwrap() + integrate_1d(f, 1.0, 2.0, &c).unwrap();
        assert!((whole - split).abs() < 1e-12);
    }

    #[test]
    fn sine_integral_at_zero_is_zero() {
        assert_eq!(sine_integral(0.0, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn halfline_vanishes_on_the_boundary() {
        assert_eq!(dirichlet_halfline(7.0, 2.0, 2.0, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn window_is_zero_at_t_zero() {
        let v = dirichlet_window(0.0, 0.3, -1.0, 2.0, &cfg()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn fourier_bound_values() {
        // tv = 0, sup = 1 on [−1, 1] at t = 4: 2·2·1/4 = 1
        assert!((fourier_decay_bound(0.0, 1.0, -1.0, 1.0, 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fourier_decay_bound(0.0, 0.0, -1.0, 1.0, 3.0).unwrap(), 0.0);
        // triangular ω constants at t = 10
        let b = fourier_decay_bound(2.0, 1.0, -1.0, 1.0, 10.0).unwrap();
        assert!((b - 1.2).abs() < 1e-15);
        assert!(matches!(
            fourier_decay_bound(1.0, 1.0, -1.0, 1.0, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weights_are_even_normalized_and_bounded() {
        let c = cfg();
        for w in [WeightFunction::Triangular, WeightFunction::Uniform] {
            for i in 0..=20 {
                let s = -1.0 + 0.1 * i as f64;
                assert_eq!(w.eval(s), w.eval(-s), "{} not even", w.name());
                assert!(w.eval(s) <= w.sup_norm() + 1e-15);
                assert!(w.eval(s) >= 0.0);
            }
            let mass = integrate_1d(|s| w.eval(s), -1.0, 1.0, &c).unwrap();
            assert!((mass - 1.0).abs() < 1e-4, "{} mass {mass}", w.name());
        }
    }

    #[test]
    fn cosine_average_matches_quadrature() {
        let fine = QuadratureConfig::new(1e-4, 100_000).unwrap();
        for w in [WeightFunction::Triangular, WeightFunction::Uniform] {
            for &c in &[0.0, 1e-6, 0.5, 3.0, 20.0] {
                let by_quad =
                    integrate_1d(|s| w.eval(s) * (c * s).cos(), -1.0, 1.0, &fine).unwrap();
                assert!(
                    (w.cosine_average(c) - by_quad).abs() < 1e-7,
                    "{} at c={c}",
                    w.name()
                );
            }
        }
    }
}
