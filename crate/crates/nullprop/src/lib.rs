//! Estimators of the proportion of false null hypotheses for composite
//! null hypotheses.
//!
//! In a multiple-testing problem with `m` hypotheses, observation `zᵢ` has
//! mean (or median) `μᵢ`, and the null set `Θ₀` is either a bounded open
//! interval `(a, b)`, an open half line `(−∞, b)`, or a single point. The
//! alternative proportion `π₁,m` is the fraction of the `μᵢ` that fall
//! outside `Θ₀`. This crate builds matching/discriminant pairs `(K, ψ)`
//! solving the Lebesgue-Stieltjes integral equation
//!
//! ```text
//! ψ(t, μ) = ∫ K(t, x) dF_μ(x)
//! ```
//!
//! with `ψ(t, μ) → 1` on `Θ₀` and `→ 0` on the alternative as `t → ∞`, so
//! that the empirical matching function `φ̂_m(t, z) = m⁻¹ Σ {1 − K(t, zᵢ)}`
//! is an unbiased estimate of the average discriminant and a consistent
//! estimate of `π₁,m` along a speed schedule `t_m → ∞`.
//!
//! Supported families are the Type I location-shift families (Gaussian,
//! Laplace, Logistic, Cauchy, Hyperbolic Secant) and the Gamma natural
//! exponential family, whose moment sequence separates as
//! `c̃ₙ(θ) = ξⁿ(θ) ζ₀ ãₙ`. Functional-weighted variants estimate the
//! induced quantity `m⁻¹ Σ_{μᵢ∈Θ₀} φ(μᵢ)` for a weight `φ` of bounded
//! variation.
//!
//! Module map:
//!
//! * [`numerics`] — oscillatory-integral primitives (midpoint quadrature,
//!   sine integral, Dirichlet windows, Fourier decay bound) and the
//!   averaging density `ω`.
//! * [`families`] — distribution families: sampling, CDFs, characteristic
//!   function modulus reciprocals, Gamma moment data.
//! * [`kernels`] — the matching/discriminant pairs for point, bounded,
//!   one-sided, and functional-weighted nulls.
//! * [`estimators`] — the proportion estimator, its oracle, speed
//!   schedules, and diagnostic bounds.
//! * [`baselines`] — the MR estimator and a fixed-λ Storey variant.
//! * [`simlab`] — scenario generation and replicated experiments with CSV
//!   persistence.

#![forbid(unsafe_code)]
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::too_many_arguments)]

pub mod baselines;
pub mod estimators;
pub mod families;
pub mod kernels;
pub mod numerics;
pub mod rng;
pub mod simlab;
pub(crate) mod special;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An interval `(a, b)` was requested with `a ≥ b`.
    #[error("invalid interval: a = {a} must be strictly less than b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    /// An argument left the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for the given family.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The one-sided construction is not applicable to this family.
    #[error("Construction V cannot be applied: {0}")]
    UnsupportedConstruction(String),

    /// An intermediate quantity would overflow the floating-point range.
    #[error("numeric range error: {0}")]
    Range(String),

    /// A quadrature request exceeded the configured panel budget.
    #[error("quadrature panel budget exceeded: need {needed} panels, cap is {cap}")]
    PanelBudget { needed: usize, cap: usize },

    /// Inconsistent or incomplete configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// I/O failure, annotated with the path involved.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats a float as decimal text with 12 significant digits.
///
/// This is the serialization used for CSV cells and CLI report lines, so
/// that repeated runs are byte-comparable.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.11e}")
}
