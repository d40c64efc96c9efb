//! Matching/discriminant pairs (K, ψ) for point, bounded, one-sided, and
//! functional-weighted null hypotheses.
//!
//! For each supported (family, null) combination, [`ComposedKernel`] owns
//! the fully corrected pair: `K` is evaluated on observations, `ψ` on
//! parameters, and `E[K(t, z)] = ψ(t, param)` holds for every `t`. The
//! individual building blocks of the constructions are also exposed as
//! free functions (`k_point_ls`, `k_bounded_ls`, …) for direct inspection.
//!
//! Correction structure of the composed pairs:
//!
//! * bounded null: `K = K₁ − ½{K₀(·;a) + K₀(·;b)}`, so boundary parameters
//!   count as alternatives in the t → ∞ limits;
//! * one-sided null: `K = ½ − K₁ − ½K₀(·;b)`;
//! * point null: `K = K₀(·;μ₀)` alone;
//! * weighted: the window kernel carries φ, and the corrected variant
//!   subtracts point kernels referenced at the values φ(a), φ(b).

mod ls;
mod nef;

use crate::families::FamilyModel;
use crate::numerics::{
    dirichlet_halfline, dirichlet_window, weighted_dirichlet, QuadratureConfig, WeightFunction,
};
use crate::{Error, Result};
use ls::{CosSinKernel, OneSidedLsKernel};
use nef::PolyKernel;
use rayon::prelude::*;
use std::sync::Arc;

/// Which hypothesis geometry is tested.
///
/// For the Gamma family the bounds live on the mean scale; the derived
/// natural parameters are θ(μ) = 1 − σ/μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NullSpec {
    /// Θ₀ = {μ₀}.
    Point { mu0: f64 },
    /// Θ₀ = (a, b), a bounded open interval.
    Bounded { a: f64, b: f64 },
    /// Θ₀ = (−∞, b), an open half line.
    OneSided { b: f64 },
}

impl NullSpec {
    pub fn point(mu0: f64) -> Self {
        NullSpec::Point { mu0 }
    }

    pub fn bounded(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(NullSpec::Bounded { a, b })
    }

    pub fn one_sided(b: f64) -> Self {
        NullSpec::OneSided { b }
    }

    /// True if the parameter lies in the (open) null set.
    pub fn contains(&self, param: f64) -> bool {
        match *self {
            NullSpec::Point { mu0 } => param == mu0,
            NullSpec::Bounded { a, b } => a < param && param < b,
            NullSpec::OneSided { b } => param < b,
        }
    }
}

/// Truncation order of the NEF power series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesConfig {
    pub truncation: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { truncation: 25 }
    }
}

impl SeriesConfig {
    pub fn new(truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::Config("series truncation must be >= 1".into()));
        }
        Ok(Self { truncation })
    }
}

/// A weight φ of bounded variation on [a, b], for the induced-proportion
/// estimators.
#[derive(Clone)]
pub struct FunctionalSpec {
    phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub a: f64,
    pub b: f64,
    pub sup_norm: f64,
    pub total_variation: f64,
}

impl std::fmt::Debug for FunctionalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionalSpec")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("sup_norm", &self.sup_norm)
            .field("total_variation", &self.total_variation)
            .finish()
    }
}

impl FunctionalSpec {
    pub fn new(
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        a: f64,
        b: f64,
        sup_norm: f64,
        total_variation: f64,
    ) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        if !(sup_norm >= 0.0) || !total_variation.is_finite() {
            return Err(Error::Domain(
                "functional norms must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            phi: Arc::new(phi),
            a,
            b,
            sup_norm,
            total_variation,
        })
    }

    /// φ(y) = y² · 1{|y| ≤ b} on [−b, b], the truncated squared norm.
    pub fn truncated_square(b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::Domain(format!(
                "truncation bound must be positive, got {b}"
            )));
        }
        Self::new(move |y: f64| y * y, -b, b, b * b, 2.0 * b * b)
    }

    pub fn eval(&self, y: f64) -> f64 {
        (self.phi)(y)
    }
}

/// Deterministic pairwise reduction; the result depends only on the order
/// of the values, not on thread count or chunking.
pub(crate) fn pairwise_sum(values: &mut [f64]) -> f64 {
    let mut n = values.len();
    while n > 1 {
        let half = n / 2;
        for i in 0..half {
            values[i] = values[2 * i] + values[2 * i + 1];
        }
        if n % 2 == 1 {
            values[half] = values[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    if n == 1 {
        values[0]
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------
// Free-standing kernel constructions
// ---------------------------------------------------------------------

/// Point-null kernel K₁,₀(t, x; μ′) for a location-shift family.
pub fn k_point_ls(
    t: f64,
    x: f64,
    mu_ref: f64,
    family: &FamilyModel,
    omega: WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (kind, sigma) = ls::require_ls(family, "k_point_ls")?;
    Ok(CosSinKernel::point(t, mu_ref, kind, sigma, omega, cfg, 1.0)?.eval(x))
}

/// Point-null discriminant ψ₁,₀(t, μ; μ′) = ∫ ω(s) cos(ts(μ−μ′)) ds.
///
/// Evaluated through the closed form of the cosine average for the shipped
/// densities, so discriminant values carry no quadrature error.
pub fn psi_point_ls(t: f64, mu: f64, mu_ref: f64, omega: WeightFunction) -> f64 {
    omega.cosine_average(t * (mu - mu_ref))
}

/// Bounded-null window kernel K₁(t, x) for a location-shift family.
pub fn k_bounded_ls(
    t: f64,
    x: f64,
    a: f64,
    b: f64,
    family: &FamilyModel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (kind, sigma) = ls::require_ls(family, "k_bounded_ls")?;
    Ok(CosSinKernel::window(t, a, b, None, kind, sigma, cfg)?.eval(x))
}

/// One-sided kernel ℜ K₁†(t, x−b) for a location-shift family with odd
/// ∂ₜ(1/r₀); the observation is shifted so the boundary sits at zero.
pub fn k_onesided_ls(
    t: f64,
    x: f64,
    b: f64,
    family: &FamilyModel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (kind, sigma) = ls::require_ls(family, "k_onesided_ls")?;
    Ok(OneSidedLsKernel::new(t, kind, sigma, cfg)?.eval(x - b))
}

/// φ-weighted window kernel (location-shift or Gamma path).
pub fn k_weighted(
    t: f64,
    x: f64,
    spec: &FunctionalSpec,
    family: &FamilyModel,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match family {
        FamilyModel::LocationShift { kind, scale } => {
            let phi = |y: f64| spec.eval(y);
            Ok(CosSinKernel::window(t, spec.a, spec.b, Some(&phi), *kind, *scale, cfg)?.eval(x))
        }
        FamilyModel::GammaNef { shape } => {
            let phi = |y: f64| spec.eval(y);
            PolyKernel::gamma_window(t, spec.a, spec.b, Some(&phi), *shape, series.truncation, cfg)?
                .eval(x)
        }
    }
}

/// Bounded-null window kernel for the Gamma NEF; a, b are mean-scale.
pub fn k_bounded_gamma(
    t: f64,
    x: f64,
    a: f64,
    b: f64,
    family: &FamilyModel,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sigma = require_gamma(family, "k_bounded_gamma")?;
    PolyKernel::gamma_window(t, a, b, None, sigma, series.truncation, cfg)?.eval(x)
}

/// One-sided kernel for the Gamma NEF; b is mean-scale.
pub fn k_onesided_gamma(
    t: f64,
    x: f64,
    b: f64,
    family: &FamilyModel,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sigma = require_gamma(family, "k_onesided_gamma")?;
    PolyKernel::gamma_one_sided(t, b, sigma, series.truncation, cfg)?.eval(x)
}

/// Point-null kernel K₃,₀(t, x; θ′) for the Gamma NEF.
pub fn k_point_gamma(
    t: f64,
    x: f64,
    theta_ref: f64,
    family: &FamilyModel,
    omega: WeightFunction,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sigma = require_gamma(family, "k_point_gamma")?;
    let (xi_ref, _) = family.gamma_moment_data(0, theta_ref)?;
    PolyKernel::gamma_point(t, xi_ref, sigma, omega, series.truncation, cfg)?.eval(x)
}

/// Point-null discriminant
/// ψ₃,₀(t, θ; θ′) = [ζ(θ)/ζ(θ′)] ∫ cos(ts{ξ(θ′)−ξ(θ)}) ω(s) ds,
/// with ζ ≡ 1 for the Gamma family.
pub fn psi_point_gamma(
    t: f64,
    theta: f64,
    theta_ref: f64,
    family: &FamilyModel,
    omega: WeightFunction,
) -> Result<f64> {
    let (xi, _) = family.gamma_moment_data(0, theta)?;
    let (xi_ref, _) = family.gamma_moment_data(0, theta_ref)?;
    Ok(omega.cosine_average(t * (xi_ref - xi)))
}

fn require_gamma(family: &FamilyModel, op: &str) -> Result<f64> {
    match family {
        FamilyModel::GammaNef { shape } => Ok(*shape),
        _ => Err(Error::Unsupported(format!("{op} needs the Gamma NEF"))),
    }
}

// Batch variants: one table build, then a parallel map over the
// observations. Values equal the one-shot forms exactly.

pub fn k_point_ls_batch(
    t: f64,
    xs: &[f64],
    mu_ref: f64,
    family: &FamilyModel,
    omega: WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let (kind, sigma) = ls::require_ls(family, "k_point_ls")?;
    let k = CosSinKernel::point(t, mu_ref, kind, sigma, omega, cfg, 1.0)?;
    Ok(xs.par_iter().map(|&x| k.eval(x)).collect())
}

pub fn k_bounded_ls_batch(
    t: f64,
    xs: &[f64],
    a: f64,
    b: f64,
    family: &FamilyModel,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let (kind, sigma) = ls::require_ls(family, "k_bounded_ls")?;
    let k = CosSinKernel::window(t, a, b, None, kind, sigma, cfg)?;
    Ok(xs.par_iter().map(|&x| k.eval(x)).collect())
}

pub fn k_onesided_ls_batch(
    t: f64,
    xs: &[f64],
    b: f64,
    family: &FamilyModel,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let (kind, sigma) = ls::require_ls(family, "k_onesided_ls")?;
    let k = OneSidedLsKernel::new(t, kind, sigma, cfg)?;
    Ok(xs.par_iter().map(|&x| k.eval(x - b)).collect())
}

pub fn k_bounded_gamma_batch(
    t: f64,
    xs: &[f64],
    a: f64,
    b: f64,
    family: &FamilyModel,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let sigma = require_gamma(family, "k_bounded_gamma")?;
    let k = PolyKernel::gamma_window(t, a, b, None, sigma, series.truncation, cfg)?;
    xs.par_iter().map(|&x| k.eval(x)).collect()
}

pub fn k_onesided_gamma_batch(
    t: f64,
    xs: &[f64],
    b: f64,
    family: &FamilyModel,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let sigma = require_gamma(family, "k_onesided_gamma")?;
    let k = PolyKernel::gamma_one_sided(t, b, sigma, series.truncation, cfg)?;
    xs.par_iter().map(|&x| k.eval(x)).collect()
}

pub fn k_point_gamma_batch(
    t: f64,
    xs: &[f64],
    theta_ref: f64,
    family: &FamilyModel,
    omega: WeightFunction,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let sigma = require_gamma(family, "k_point_gamma")?;
    let (xi_ref, _) = family.gamma_moment_data(0, theta_ref)?;
    let k = PolyKernel::gamma_point(t, xi_ref, sigma, omega, series.truncation, cfg)?;
    xs.par_iter().map(|&x| k.eval(x)).collect()
}

pub fn k_weighted_batch(
    t: f64,
    xs: &[f64],
    spec: &FunctionalSpec,
    family: &FamilyModel,
    series: SeriesConfig,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    match family {
        FamilyModel::LocationShift { kind, scale } => {
            let phi = |y: f64| spec.eval(y);
            let k = CosSinKernel::window(t, spec.a, spec.b, Some(&phi), *kind, *scale, cfg)?;
            Ok(xs.par_iter().map(|&x| k.eval(x)).collect())
        }
        FamilyModel::GammaNef { shape } => {
            let phi = |y: f64| spec.eval(y);
            let k = PolyKernel::gamma_window(
                t,
                spec.a,
                spec.b,
                Some(&phi),
                *shape,
                series.truncation,
                cfg,
            )?;
            xs.par_iter().map(|&x| k.eval(x)).collect()
        }
    }
}

// ---------------------------------------------------------------------
// Composed pairs
// ---------------------------------------------------------------------

/// A fully corrected matching/discriminant pair for one (family, null)
/// combination.
#[derive(Debug, Clone)]
pub struct ComposedKernel {
    family: FamilyModel,
    target: Target,
    omega: WeightFunction,
    series: SeriesConfig,
    quad: QuadratureConfig,
}

#[derive(Debug, Clone)]
enum Target {
    Null(NullSpec),
    Weighted { spec: FunctionalSpec, corrected: bool },
}

/// Builds the composed pair for a plain null hypothesis.
pub fn compose_full_kernel(
    null: NullSpec,
    family: &FamilyModel,
    omega: WeightFunction,
    series: SeriesConfig,
    quad: QuadratureConfig,
) -> Result<ComposedKernel> {
    ComposedKernel::new(null, family, omega, series, quad)
}

impl ComposedKernel {
    pub fn new(
        null: NullSpec,
        family: &FamilyModel,
        omega: WeightFunction,
        series: SeriesConfig,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        match (family, &null) {
            (FamilyModel::LocationShift { kind, .. }, NullSpec::OneSided { .. }) => {
                if matches!(kind, crate::families::LsKind::Cauchy) {
                    return Err(Error::UnsupportedConstruction(
                        "the Cauchy family has no finite first absolute moment (one-sided null)"
                            .into(),
                    ));
                }
            }
            (FamilyModel::GammaNef { .. }, NullSpec::Point { mu0 }) => {
                if !(*mu0 > 0.0) {
                    return Err(Error::Config(format!(
                        "Gamma point null needs a positive mean, got {mu0}"
                    )));
                }
            }
            (FamilyModel::GammaNef { .. }, NullSpec::Bounded { a, .. }) => {
                if !(*a > 0.0) {
                    return Err(Error::Config(format!(
                        "Gamma bounded null needs positive mean-scale bounds, got a = {a}"
                    )));
                }
            }
            (FamilyModel::GammaNef { .. }, NullSpec::OneSided { b }) if !(*b > 0.0) => {
                return Err(Error::Config(format!(
                    "Gamma one-sided null needs a positive mean-scale boundary, got {b}"
                )));
            }
            _ => {}
        }
        Ok(Self {
            family: *family,
            target: Target::Null(null),
            omega,
            series,
            quad,
        })
    }

    /// Builds the φ-weighted pair. With `corrected = false` this is the
    /// plain window estimator targeting the half-weighted boundary sum;
    /// with `corrected = true` the point terms referenced at φ(a), φ(b)
    /// are subtracted.
    pub fn new_weighted(
        spec: FunctionalSpec,
        family: &FamilyModel,
        omega: WeightFunction,
        series: SeriesConfig,
        quad: QuadratureConfig,
        corrected: bool,
    ) -> Result<Self> {
        if corrected {
            if let FamilyModel::GammaNef { .. } = family {
                for v in [spec.eval(spec.a), spec.eval(spec.b)] {
                    if !(v > 0.0) {
                        return Err(Error::Config(format!(
                            "corrected Gamma weighted pair needs positive boundary values of phi, got {v}"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            family: *family,
            target: Target::Weighted { spec, corrected },
            omega,
            series,
            quad,
        })
    }

    pub fn family(&self) -> &FamilyModel {
        &self.family
    }

    /// Precomputes the evaluation tables for a fixed t.
    pub fn prepare(&self, t: f64) -> Result<PreparedKernel> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "kernel preparation needs t >= 0, got {t}"
            )));
        }
        let inner = match (&self.family, &self.target) {
            (FamilyModel::LocationShift { kind, scale }, Target::Null(null)) => match *null {
                NullSpec::Point { mu0 } => Prepared::CosSin {
                    base: 0.0,
                    kernel: CosSinKernel::point(t, mu0, *kind, *scale, self.omega, &self.quad, 1.0)?,
                },
                NullSpec::Bounded { a, b } => {
                    let mut k = CosSinKernel::window(t, a, b, None, *kind, *scale, &self.quad)?;
                    let pa = CosSinKernel::point(t, a, *kind, *scale, self.omega, &self.quad, 1.0)?;
                    let pb = CosSinKernel::point(t, b, *kind, *scale, self.omega, &self.quad, 1.0)?;
                    k.axpy(-0.5, &pa);
                    k.axpy(-0.5, &pb);
                    Prepared::CosSin { base: 0.0, kernel: k }
                }
                NullSpec::OneSided { b } => Prepared::LsOneSided {
                    dag: OneSidedLsKernel::new(t, *kind, *scale, &self.quad)?,
                    point: CosSinKernel::point(t, b, *kind, *scale, self.omega, &self.quad, 1.0)?,
                    b,
                },
            },
            (FamilyModel::LocationShift { kind, scale }, Target::Weighted { spec, corrected }) => {
                let phi = |y: f64| spec.eval(y);
                let mut k =
                    CosSinKernel::window(t, spec.a, spec.b, Some(&phi), *kind, *scale, &self.quad)?;
                if *corrected {
                    for boundary in [spec.a, spec.b] {
                        let p = CosSinKernel::point(
                            t,
                            spec.eval(boundary),
                            *kind,
                            *scale,
                            self.omega,
                            &self.quad,
                            1.0,
                        )?;
                        k.axpy(-0.5, &p);
                    }
                }
                Prepared::CosSin { base: 0.0, kernel: k }
            }
            (FamilyModel::GammaNef { shape }, Target::Null(null)) => {
                let n = self.series.truncation;
                match *null {
                    NullSpec::Point { mu0 } => Prepared::Poly(PolyKernel::gamma_point(
                        t,
                        mu0 / shape,
                        *shape,
                        self.omega,
                        n,
                        &self.quad,
                    )?),
                    NullSpec::Bounded { a, b } => {
                        let mut k = PolyKernel::gamma_window(t, a, b, None, *shape, n, &self.quad)?;
                        for boundary in [a, b] {
                            let p = PolyKernel::gamma_point(
                                t,
                                boundary / shape,
                                *shape,
                                self.omega,
                                n,
                                &self.quad,
                            )?;
                            k.axpy(-0.5, &p);
                        }
                        Prepared::Poly(k)
                    }
                    NullSpec::OneSided { b } => {
                        let dag = PolyKernel::gamma_one_sided(t, b, *shape, n, &self.quad)?;
                        let pb = PolyKernel::gamma_point(
                            t,
                            b / shape,
                            *shape,
                            self.omega,
                            n,
                            &self.quad,
                        )?;
                        // K = ½ − K₁ − ½K₃,₀(·;θ_b)
                        let mut k = PolyKernel::zero(0);
                        k.axpy(-1.0, &dag);
                        k.axpy(-0.5, &pb);
                        k.add_const(0.5);
                        Prepared::Poly(k)
                    }
                }
            }
            (FamilyModel::GammaNef { shape }, Target::Weighted { spec, corrected }) => {
                let n = self.series.truncation;
                let phi = |y: f64| spec.eval(y);
                let mut k = PolyKernel::gamma_window(
                    t,
                    spec.a,
                    spec.b,
                    Some(&phi),
                    *shape,
                    n,
                    &self.quad,
                )?;
                if *corrected {
                    for boundary in [spec.a, spec.b] {
                        let p = PolyKernel::gamma_point(
                            t,
                            spec.eval(boundary) / shape,
                            *shape,
                            self.omega,
                            n,
                            &self.quad,
                        )?;
                        k.axpy(-0.5, &p);
                    }
                }
                Prepared::Poly(k)
            }
        };
        Ok(PreparedKernel { inner, t })
    }

    /// One-shot evaluation of K(t, x).
    pub fn k(&self, t: f64, x: f64) -> Result<f64> {
        self.prepare(t)?.eval(x)
    }

    /// The discriminant ψ(t, param).
    pub fn psi(&self, t: f64, param: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("psi needs t >= 0, got {t}")));
        }
        match (&self.family, &self.target) {
            (FamilyModel::LocationShift { .. }, Target::Null(null)) => match *null {
                NullSpec::Point { mu0 } => Ok(psi_point_ls(t, param, mu0, self.omega)),
                NullSpec::Bounded { a, b } => {
                    let win = dirichlet_window(t, param, a, b, &self.quad)?;
                    Ok(win
                        - 0.5
                            * (psi_point_ls(t, param, a, self.omega)
                                + psi_point_ls(t, param, b, self.omega)))
                }
                NullSpec::OneSided { b } => {
                    let half = dirichlet_halfline(t, param, b, &self.quad)?;
                    Ok(0.5 - half - 0.5 * psi_point_ls(t, param, b, self.omega))
                }
            },
            (FamilyModel::LocationShift { .. }, Target::Weighted { spec, corrected }) => {
                let phi = |y: f64| spec.eval(y);
                let win = weighted_dirichlet(t, param, spec.a, spec.b, phi, &self.quad)?;
                if *corrected {
                    Ok(win
                        - 0.5
                            * (psi_point_ls(t, param, spec.eval(spec.a), self.omega)
                                + psi_point_ls(t, param, spec.eval(spec.b), self.omega)))
                } else {
                    Ok(win)
                }
            }
            (FamilyModel::GammaNef { shape }, Target::Null(null)) => {
                let mu = self.family.gamma_mean(param)?;
                let xi = mu / shape;
                match *null {
                    NullSpec::Point { mu0 } => Ok(self.omega.cosine_average(t * (mu0 / shape - xi))),
                    NullSpec::Bounded { a, b } => {
                        let win = dirichlet_window(t, mu, a, b, &self.quad)?;
                        Ok(win
                            - 0.5
                                * (self.omega.cosine_average(t * (a / shape - xi))
                                    + self.omega.cosine_average(t * (b / shape - xi))))
                    }
                    NullSpec::OneSided { b } => {
                        let half = dirichlet_halfline(t, mu, b, &self.quad)?;
                        Ok(0.5 - half - 0.5 * self.omega.cosine_average(t * (b / shape - xi)))
                    }
                }
            }
            (FamilyModel::GammaNef { shape }, Target::Weighted { spec, corrected }) => {
                let mu = self.family.gamma_mean(param)?;
                let xi = mu / shape;
                let phi = |y: f64| spec.eval(y);
                let win = weighted_dirichlet(t, mu, spec.a, spec.b, phi, &self.quad)?;
                if *corrected {
                    Ok(win
                        - 0.5
                            * (self.omega.cosine_average(t * (spec.eval(spec.a) / shape - xi))
                                + self
                                    .omega
                                    .cosine_average(t * (spec.eval(spec.b) / shape - xi))))
                } else {
                    Ok(win)
                }
            }
        }
    }

    /// Mean of K(t, zᵢ) over the data, evaluated in parallel with a
    /// deterministic pairwise reduction.
    pub fn k_mean(&self, t: f64, data: &[f64]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::Domain("k_mean needs nonempty data".into()));
        }
        let prepared = self.prepare(t)?;
        let mut values: Vec<f64> = data
            .par_iter()
            .map(|&x| prepared.eval(x))
            .collect::<Result<Vec<f64>>>()?;
        Ok(pairwise_sum(&mut values) / data.len() as f64)
    }

    /// The empirical matching function φ̂_m(t, z) = m⁻¹ Σ {1 − K(t, zᵢ)}.
    pub fn empirical_matching(&self, t: f64, data: &[f64]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::Domain(
                "empirical_matching needs nonempty data".into(),
            ));
        }
        let prepared = self.prepare(t)?;
        let mut values: Vec<f64> = data
            .par_iter()
            .map(|&x| prepared.eval(x).map(|k| 1.0 - k))
            .collect::<Result<Vec<f64>>>()?;
        Ok(pairwise_sum(&mut values) / data.len() as f64)
    }
}

/// Evaluation tables for one (pair, t).
#[derive(Debug)]
pub struct PreparedKernel {
    inner: Prepared,
    t: f64,
}

#[derive(Debug)]
enum Prepared {
    CosSin {
        base: f64,
        kernel: CosSinKernel,
    },
    LsOneSided {
        dag: OneSidedLsKernel,
        point: CosSinKernel,
        b: f64,
    },
    Poly(PolyKernel),
}

impl PreparedKernel {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.inner {
            Prepared::CosSin { base, kernel } => Ok(base + kernel.eval(x)),
            Prepared::LsOneSided { dag, point, b } => {
                Ok(0.5 - dag.eval(x - b) - 0.5 * point.eval(x))
            }
            Prepared::Poly(p) => p.eval(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::LsKind;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn gauss() -> FamilyModel {
        FamilyModel::gaussian(1.0).unwrap()
    }

    #[test]
    fn pairwise_sum_is_plain_sum() {
        let mut v: Vec<f64> = (1..=101).map(|i| i as f64 * 0.1).collect();
        let naive: f64 = v.iter().sum();
        let pw = pairwise_sum(&mut v);
        assert!((pw - naive).abs() < 1e-9);
        assert_eq!(pairwise_sum(&mut []), 0.0);
        assert_eq!(pairwise_sum(&mut [3.5]), 3.5);
    }

    #[test]
    fn psi_point_self_identity() {
        for &t in &[0.0, 1.0, 5.0, 20.0] {
            assert!((psi_point_ls(t, 0.7, 0.7, WeightFunction::Triangular) - 1.0).abs() < 1e-12);
            assert!((psi_point_ls(t, 0.7, 0.7, WeightFunction::Uniform) - 1.0).abs() < 1e-12);
        }
        let g = FamilyModel::gamma_nef(4.0).unwrap();
        for &t in &[0.0, 1.0, 5.0, 20.0] {
            let v = psi_point_gamma(t, 0.3, 0.3, &g, WeightFunction::Triangular).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_point_fejer_closed_form() {
        // triangular ω with μ−μ′ = 1: ψ = 2(1−cos t)/t²
        for &t in &[4.0_f64, 10.0, 40.0] {
            let psi = psi_point_ls(t, 1.0, 0.0, WeightFunction::Triangular);
            let closed = 2.0 * (1.0 - t.cos()) / (t * t);
            assert!((psi - closed).abs() < 1e-12);
        }
        let psi20 = psi_point_ls(20.0, 1.0, 0.0, WeightFunction::Triangular);
        assert!((psi20 - 0.002_959_589_690_933).abs() < 1e-10);
    }

    #[test]
    fn point_kernel_at_t_zero_is_one() {
        let v = k_point_ls(0.0, 5.0, 1.0, &gauss(), WeightFunction::Triangular, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn bounded_kernel_symmetry_for_symmetric_null() {
        // a = −b, symmetric family: K is even in x
        let fam = gauss();
        for &x in &[0.3, 1.1, 2.7] {
            let plus = k_bounded_ls(2.0, x, -1.5, 1.5, &fam, &cfg()).unwrap();
            let minus = k_bounded_ls(2.0, -x, -1.5, 1.5, &fam, &cfg()).unwrap();
            assert!((plus - minus).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn weighted_with_unit_phi_reduces_to_bounded() {
        let unit = FunctionalSpec::new(|_| 1.0, -1.0, 2.0, 1.0, 0.0).unwrap();
        let fam = gauss();
        let series = SeriesConfig::default();
        for i in 0..4 {
            for j in 0..4 {
                let t = 0.5 + i as f64;
                let x = -1.0 + j as f64;
                let kw = k_weighted(t, x, &unit, &fam, series, &cfg()).unwrap();
                let kb = k_bounded_ls(t, x, -1.0, 2.0, &fam, &cfg()).unwrap();
                assert!((kw - kb).abs() < 1e-10, "t={t} x={x}");
            }
        }
        let g = FamilyModel::gamma_nef(4.0).unwrap();
        let unit_g = FunctionalSpec::new(|_| 1.0, 4.0, 8.0, 1.0, 0.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let t = 0.4 * (i + 1) as f64;
                let x = 2.0 * j as f64;
                let kw = k_weighted(t, x, &unit_g, &g, series, &cfg()).unwrap();
                let kb = k_bounded_gamma(t, x, 4.0, 8.0, &g, series, &cfg()).unwrap();
                assert!((kw - kb).abs() < 1e-10, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn zero_phi_gives_zero_kernel() {
        let zero = FunctionalSpec::new(|_| 0.0, -2.0, 2.0, 0.0, 0.0).unwrap();
        let v = k_weighted(2.0, 0.7, &zero, &gauss(), SeriesConfig::default(), &cfg()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn compose_rejects_unsupported_combinations() {
        let cauchy = FamilyModel::location_shift(LsKind::Cauchy, 1.0).unwrap();
        let err = ComposedKernel::new(
            NullSpec::one_sided(0.0),
            &cauchy,
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("Construction V cannot be applied"));

        let g = FamilyModel::gamma_nef(4.0).unwrap();
        assert!(matches!(
            ComposedKernel::new(
                NullSpec::point(-1.0),
                &g,
                WeightFunction::Triangular,
                SeriesConfig::default(),
                cfg(),
            ),
            Err(Error::Config(_))
        ));
        assert!(NullSpec::bounded(2.0, 1.0).is_err());
    }

    #[test]
    fn composed_psi_limits_bounded_ls() {
        let pair = ComposedKernel::new(
            NullSpec::bounded(-1.0, 2.0).unwrap(),
            &gauss(),
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        let t = 300.0;
        // interior → 1, boundary → 0, exterior → 0
        assert!((pair.psi(t, 0.5).unwrap() - 1.0).abs() < 0.1);
        assert!(pair.psi(t, -1.0).unwrap().abs() < 0.1);
        assert!(pair.psi(t, 2.0).unwrap().abs() < 0.1);
        assert!(pair.psi(t, 3.5).unwrap().abs() < 0.1);
        assert!(pair.psi(t, -2.5).unwrap().abs() < 0.1);
    }

    #[test]
    fn composed_psi_limits_one_sided_ls() {
        let pair = ComposedKernel::new(
            NullSpec::one_sided(0.5),
            &gauss(),
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        let t = 300.0;
        assert!((pair.psi(t, -0.5).unwrap() - 1.0).abs() < 0.1); // null
        assert!(pair.psi(t, 1.5).unwrap().abs() < 0.1); // alternative
        assert!(pair.psi(t, 0.5).unwrap().abs() < 0.1); // boundary counts as alternative
    }

    #[test]
    fn one_sided_window_is_odd_around_boundary() {
        let c = cfg();
        let up = dirichlet_halfline(7.0, 1.0, 0.0, &c).unwrap();
        let down = dirichlet_halfline(7.0, -1.0, 0.0, &c).unwrap();
        assert!((up + down).abs() < 1e-12);
    }

    #[test]
    fn composed_psi_limits_gamma() {
        let g = FamilyModel::gamma_nef(4.0).unwrap();
        let pair = ComposedKernel::new(
            NullSpec::bounded(4.0, 8.0).unwrap(),
            &g,
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        let t = 300.0;
        let th_interior = g.gamma_theta_of_mean(6.0).unwrap();
        let th_boundary = g.gamma_theta_of_mean(4.0).unwrap();
        let th_out = g.gamma_theta_of_mean(10.0).unwrap();
        assert!((pair.psi(t, th_interior).unwrap() - 1.0).abs() < 0.1);
        assert!(pair.psi(t, th_boundary).unwrap().abs() < 0.1);
        assert!(pair.psi(t, th_out).unwrap().abs() < 0.1);

        let one = ComposedKernel::new(
            NullSpec::one_sided(6.0),
            &g,
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        let th_null = g.gamma_theta_of_mean(5.0).unwrap();
        let th_alt = g.gamma_theta_of_mean(7.0).unwrap();
        let th_b = g.gamma_theta_of_mean(6.0).unwrap();
        assert!((one.psi(t, th_null).unwrap() - 1.0).abs() < 0.1);
        assert!(one.psi(t, th_alt).unwrap().abs() < 0.1);
        assert!(one.psi(t, th_b).unwrap().abs() < 0.1);
    }

    #[test]
    fn gamma_one_sided_psi_vanishes_at_mean_boundary() {
        // μ(θ) = b ⇒ the half-line window is identically zero, and the
        // composed ψ is exactly 0 for every t
        let g = FamilyModel::gamma_nef(4.0).unwrap();
        let th = g.gamma_theta_of_mean(6.0).unwrap();
        let pair = ComposedKernel::new(
            NullSpec::one_sided(6.0),
            &g,
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        for &t in &[0.5, 1.5, 3.0] {
            assert!(pair.psi(t, th).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn composed_k_at_t_zero() {
        // bounded: K = 0 − ½(1 + 1) = −1 and ψ agrees
        let pair = ComposedKernel::new(
            NullSpec::bounded(-1.0, 2.0).unwrap(),
            &gauss(),
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        assert!((pair.k(0.0, 0.3).unwrap() + 1.0).abs() < 1e-4);
        assert!((pair.psi(0.0, 0.3).unwrap() + 1.0).abs() < 1e-12);

        // one-sided: K = ½ − 0 − ½ = 0
        let one = ComposedKernel::new(
            NullSpec::one_sided(0.0),
            &gauss(),
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        assert!(one.k(0.0, 0.7).unwrap().abs() < 1e-4);
        assert!(one.psi(0.0, 0.7).unwrap().abs() < 1e-12);
    }

    #[test]
    fn k_mean_matches_sequential_loop() {
        let pair = ComposedKernel::new(
            NullSpec::bounded(-1.0, 2.0).unwrap(),
            &gauss(),
            WeightFunction::Triangular,
            SeriesConfig::default(),
            cfg(),
        )
        .unwrap();
        let data: Vec<f64> = (0..500).map(|i| -3.0 + 0.012 * i as f64).collect();
        let fast = pair.k_mean(2.0, &data).unwrap();
        let prepared = pair.prepare(2.0).unwrap();
        let slow: f64 =
            data.iter().map(|&x| prepared.eval(x).unwrap()).sum::<f64>() / data.len() as f64;
        assert!((fast - slow).abs() < 1e-12);
        let em = pair.empirical_matching(2.0, &data).unwrap();
        assert!((em - (1.0 - fast)).abs() < 1e-12);
    }
}
