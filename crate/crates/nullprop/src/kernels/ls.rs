//! Matching-function machinery for Type I location-shift families.
//!
//! Every location-shift kernel here is an iterated midpoint Riemann sum
//! (outer y, inner s, shared partition norm). For evaluation over many
//! observations the double sums are regrouped around the identity
//! `cos(ts(x−y)) = cos(tsx)cos(tsy) + sin(tsx)sin(tsy)`, which moves all
//! x-independent work into tables built once per `t`; the regrouped sum is
//! the same Riemann sum, associated differently.

use crate::families::{modulus_recip_raw, modulus_recip_s_deriv_raw, FamilyModel, LsKind};
use crate::numerics::{midpoint_grid, QuadratureConfig, WeightFunction};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Largest exponent fed to `exp` before we abort with a range error.
const EXP_GUARD: f64 = 700.0;

/// Rejects (kind, σ, t) combinations whose reciprocal modulus overflows
/// inside the s ∈ [−1, 1] quadrature.
pub(crate) fn check_ls_range(kind: LsKind, sigma: f64, t: f64) -> Result<()> {
    let arg = match kind {
        LsKind::Gaussian => 0.5 * t * t * sigma * sigma,
        LsKind::Logistic => PI * sigma * t.abs(),
        LsKind::HyperbolicSecant => t.abs() / sigma,
        LsKind::Cauchy => sigma * t.abs(),
        LsKind::Laplace => 0.0,
    };
    if arg > EXP_GUARD {
        return Err(Error::Range(format!(
            "reciprocal CF modulus overflows at t = {t} for the {} family",
            kind.name()
        )));
    }
    Ok(())
}

pub(crate) fn require_ls(family: &FamilyModel, op: &str) -> Result<(LsKind, f64)> {
    match family {
        FamilyModel::LocationShift { kind, scale } => Ok((*kind, *scale)),
        FamilyModel::GammaNef { .. } => Err(Error::Unsupported(format!(
            "{op} needs a location-shift family"
        ))),
    }
}

/// A kernel of the form x ↦ Σᵢ [ac_i · cos(a_i x) + bs_i · sin(a_i x)].
///
/// Covers the point-null kernel K₁,₀, the bounded-null window kernel K₁,
/// the φ-weighted window kernel, and any linear combination of them on a
/// shared s-grid.
#[derive(Debug, Clone)]
pub(crate) struct CosSinKernel {
    angle: Vec<f64>,
    ac: Vec<f64>,
    bs: Vec<f64>,
}

impl CosSinKernel {
    fn zero_like(angle: Vec<f64>) -> Self {
        let n = angle.len();
        Self {
            angle,
            ac: vec![0.0; n],
            bs: vec![0.0; n],
        }
    }

    /// Point-null kernel K₁,₀(t, x; μ′) = ∫ ω(s) cos(ts(x−μ′))/r₀(ts) ds,
    /// scaled by `scale`.
    pub(crate) fn point(
        t: f64,
        mu_ref: f64,
        kind: LsKind,
        sigma: f64,
        omega: WeightFunction,
        cfg: &QuadratureConfig,
        scale: f64,
    ) -> Result<Self> {
        check_ls_range(kind, sigma, t)?;
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, cfg)?;
        let mut k = Self::zero_like(s_nodes.iter().map(|&s| t * s).collect());
        for (i, &s) in s_nodes.iter().enumerate() {
            // cos{ts(x−μ′)} / r_{μ′}(ts), and 1/r₀ is the stored form
            let c = scale * ws * omega.eval(s) * modulus_recip_raw(kind, sigma, t * s);
            let a = t * s;
            // cos(a(x−μ′)) = cos(ax)cos(aμ′) + sin(ax)sin(aμ′)
            k.ac[i] = c * (a * mu_ref).cos();
            k.bs[i] = c * (a * mu_ref).sin();
        }
        Ok(k)
    }

    /// Window kernel K₁(t, x) = (t/2π) ∫ₐᵇ φ(y) dy ∫ cos(ts(x−y))/r₀(ts) ds,
    /// with φ ≡ 1 giving the plain bounded-null kernel.
    pub(crate) fn window(
        t: f64,
        a: f64,
        b: f64,
        phi: Option<&dyn Fn(f64) -> f64>,
        kind: LsKind,
        sigma: f64,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        check_ls_range(kind, sigma, t)?;
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, cfg)?;
        let (y_nodes, wy) = midpoint_grid(a, b, cfg)?;
        let weight: Vec<f64> = y_nodes
            .iter()
            .map(|&y| match phi {
                Some(f) => f(y) * wy,
                None => wy,
            })
            .collect();
        let mut k = Self::zero_like(s_nodes.iter().map(|&s| t * s).collect());
        let pref = t / (2.0 * PI);
        for (i, &s) in s_nodes.iter().enumerate() {
            let ts = t * s;
            let q = pref * ws * modulus_recip_raw(kind, sigma, ts);
            let mut yc = 0.0;
            let mut ysn = 0.0;
            for (j, &y) in y_nodes.iter().enumerate() {
                yc += weight[j] * (ts * y).cos();
                ysn += weight[j] * (ts * y).sin();
            }
            k.ac[i] = q * yc;
            k.bs[i] = q * ysn;
        }
        Ok(k)
    }

    /// Adds `c · other` into `self`; both must share the same s-grid.
    pub(crate) fn axpy(&mut self, c: f64, other: &CosSinKernel) {
        debug_assert_eq!(self.angle.len(), other.angle.len());
        for i in 0..self.ac.len() {
            self.ac[i] += c * other.ac[i];
            self.bs[i] += c * other.bs[i];
        }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.angle.len() {
            let (sin, cos) = (self.angle[i] * x).sin_cos();
            acc += self.ac[i] * cos + self.bs[i] * sin;
        }
        acc
    }
}

/// The one-sided kernel ℜ K₁†(t, x) for families with odd ∂ₜ(1/r₀):
///
/// ```text
/// (1/2π) ∫₀¹ dy ∫_{−1}^{1} [ sin(ytsx)/y · d/ds{1/r₀(tys)}
///                           + t x cos(tysx)/r₀(tys) ] ds
/// ```
///
/// The integrand is even in s, so the s-grid is folded onto (0, 1] with a
/// factor of two. Evaluation uses a rotation recurrence along each y-row:
/// the arguments t·y·sⱼ·x form an arithmetic progression in j.
#[derive(Debug)]
pub(crate) struct OneSidedLsKernel {
    rows: Vec<DagRow>,
    s0: f64,
    ws: f64,
    t: f64,
}

#[derive(Debug)]
struct DagRow {
    y: f64,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl OneSidedLsKernel {
    pub(crate) fn new(
        t: f64,
        kind: LsKind,
        sigma: f64,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if matches!(kind, LsKind::Cauchy) {
            return Err(Error::UnsupportedConstruction(
                "the Cauchy family has no finite first absolute moment (one-sided null)".into(),
            ));
        }
        check_ls_range(kind, sigma, t)?;
        let (y_nodes, wy) = midpoint_grid(0.0, 1.0, cfg)?;
        // folded half of the s ∈ [−1, 1] grid
        let (s_nodes, ws) = midpoint_grid(0.0, 1.0, cfg)?;
        let rows = y_nodes
            .iter()
            .map(|&y| {
                let mut d1 = Vec::with_capacity(s_nodes.len());
                let mut d2 = Vec::with_capacity(s_nodes.len());
                for &s in &s_nodes {
                    let w = 2.0 * wy * ws;
                    d1.push(w * modulus_recip_s_deriv_raw(kind, sigma, t, y, s));
                    d2.push(w * t * modulus_recip_raw(kind, sigma, t * y * s));
                }
                DagRow { y, d1, d2 }
            })
            .collect();
        Ok(Self {
            rows,
            s0: if s_nodes.is_empty() { 0.0 } else { s_nodes[0] },
            ws,
            t,
        })
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for row in &self.rows {
            let c = self.t * row.y * x;
            let (mut sin, mut cos) = (c * self.s0).sin_cos();
            let (dsin, dcos) = (c * self.ws).sin_cos();
            let mut odd = 0.0; // Σ sin(tysx) d1
            let mut even = 0.0; // Σ cos(tysx) d2
            for j in 0..row.d1.len() {
                odd += sin * row.d1[j];
                even += cos * row.d2[j];
                let ns = sin * dcos + cos * dsin;
                cos = cos * dcos - sin * dsin;
                sin = ns;
            }
            acc += odd + x * even;
        }
        acc / (2.0 * PI)
    }
}
