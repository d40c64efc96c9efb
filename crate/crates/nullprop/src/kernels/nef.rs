//! Matching-function machinery for the Gamma natural exponential family.
//!
//! With the power series truncated at n = N, every Gamma kernel is a
//! polynomial in the observation x of degree at most N + 1. Preparation
//! therefore runs the iterated midpoint sums once to compile the
//! polynomial coefficients (in log space with sign tracking, so that
//! Γ(n+σ)·n! never overflows), and evaluation is a Horner pass.

use crate::families::ln_a_tilde;
use crate::numerics::{midpoint_grid, QuadratureConfig, WeightFunction};
use crate::{Error, Result};
use std::f64::consts::PI;

/// A kernel that is a polynomial in the observation.
#[derive(Debug, Clone)]
pub(crate) struct PolyKernel {
    coeffs: Vec<f64>,
    /// Evaluation guard: |x| beyond this would push the absolute-value
    /// polynomial past ~1e290.
    max_abs_x: f64,
}

/// cos(nπ/2) and sin(nπ/2) as exact small integers.
#[inline]
fn quarter_phase(n: usize) -> (f64, f64) {
    match n % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// exp(k·ln c − ln ãₙ − ln n!) with the 0⁰ = 1 convention at k = 0.
fn log_space_mag(c: f64, k: u32, sigma: f64, n_for_atilde: u32, ln_fact_n: f64) -> f64 {
    debug_assert!(c >= 0.0);
    if k == 0 {
        (-ln_a_tilde(sigma, n_for_atilde) - ln_fact_n).exp()
    } else {
        (k as f64 * c.ln() - ln_a_tilde(sigma, n_for_atilde) - ln_fact_n).exp()
    }
}

impl PolyKernel {
    fn from_coeffs(coeffs: Vec<f64>) -> Self {
        let mut k = Self {
            coeffs,
            max_abs_x: f64::INFINITY,
        };
        k.max_abs_x = k.find_safe_range();
        k
    }

    pub(crate) fn zero(deg: usize) -> Self {
        Self {
            coeffs: vec![0.0; deg + 1],
            max_abs_x: f64::INFINITY,
        }
    }

    fn abs_poly(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c.abs();
        }
        acc
    }

    fn find_safe_range(&self) -> f64 {
        const CAP: f64 = 1e290;
        if self.coeffs.iter().all(|&c| c == 0.0) {
            return f64::INFINITY;
        }
        let mut hi = 1.0_f64;
        while hi < 1e280 && self.abs_poly(hi) < CAP {
            hi *= 2.0;
        }
        if hi >= 1e280 {
            return f64::INFINITY;
        }
        let mut lo = hi / 2.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.abs_poly(mid) < CAP {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub(crate) fn axpy(&mut self, c: f64, other: &PolyKernel) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (i, &oc) in other.coeffs.iter().enumerate() {
            self.coeffs[i] += c * oc;
        }
        self.max_abs_x = self.find_safe_range();
    }

    pub(crate) fn add_const(&mut self, c: f64) {
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
        self.coeffs[0] += c;
    }

    pub(crate) fn eval(&self, x: f64) -> Result<f64> {
        if x.abs() > self.max_abs_x {
            return Err(Error::Range(format!(
                "series evaluation would overflow at x = {x} (safe |x| <= {})",
                self.max_abs_x
            )));
        }
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        Ok(acc)
    }

    /// Bounded-null / φ-weighted window kernel for the Gamma NEF:
    ///
    /// ```text
    /// K₁(t,x) = (1/2πζ₀) ∫ₐᵇ t φ(y) dy ∫ Σₙ (tsxζ₀ã₁)ⁿ cos(nπ/2 − tsy)/(ãₙ n!) ds
    /// ```
    ///
    /// with ζ₀ = 1, ã₁ = σ, and φ ≡ 1 when `phi` is absent. The (y, s)
    /// sums collapse per power of x into the coefficient table.
    pub(crate) fn gamma_window(
        t: f64,
        a: f64,
        b: f64,
        phi: Option<&dyn Fn(f64) -> f64>,
        sigma: f64,
        n_trunc: usize,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        if t < 0.0 {
            return Err(Error::Domain(format!("kernel needs t >= 0, got {t}")));
        }
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, cfg)?;
        let (y_nodes, wy) = midpoint_grid(a, b, cfg)?;
        let weight: Vec<f64> = y_nodes
            .iter()
            .map(|&y| match phi {
                Some(f) => f(y) * wy,
                None => wy,
            })
            .collect();

        // Vc[n] = Σ_s w_s sⁿ Yc(s), Vs[n] = Σ_s w_s sⁿ Ys(s), where
        // Yc(s) = Σ_y φ(y) w_y cos(tsy) and Ys(s) likewise with sin.
        let mut vc = vec![0.0; n_trunc + 1];
        let mut vs = vec![0.0; n_trunc + 1];
        for &s in &s_nodes {
            let ts = t * s;
            let mut yc = 0.0;
            let mut ysn = 0.0;
            for (j, &y) in y_nodes.iter().enumerate() {
                yc += weight[j] * (ts * y).cos();
                ysn += weight[j] * (ts * y).sin();
            }
            let mut pow = ws;
            for n in 0..=n_trunc {
                vc[n] += pow * yc;
                vs[n] += pow * ysn;
                pow *= s;
            }
        }

        let pref = t / (2.0 * PI);
        let mut coeffs = vec![0.0; n_trunc + 1];
        let mut ln_fact = 0.0;
        for n in 0..=n_trunc {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let (pc, ps) = quarter_phase(n);
            let mag = log_space_mag(t * sigma, n as u32, sigma, n as u32, ln_fact);
            coeffs[n] = pref * mag * (pc * vc[n] + ps * vs[n]);
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// Point-null kernel for an NEF with separable moments:
    ///
    /// ```text
    /// K₃,₀(t,x;θ′) = (1/ζ(θ′)) ∫ Σₙ (ãₙ n!)⁻¹ (−tsx)ⁿ cos(nπ/2 + tsξ(θ′)) ω(s) ds
    /// ```
    pub(crate) fn gamma_point(
        t: f64,
        xi_ref: f64,
        sigma: f64,
        omega: WeightFunction,
        n_trunc: usize,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if t < 0.0 {
            return Err(Error::Domain(format!("kernel needs t >= 0, got {t}")));
        }
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, cfg)?;
        // Uc[n] = Σ_s ω(s) w_s sⁿ cos(tsξ′), Us[n] likewise with sin.
        let mut uc = vec![0.0; n_trunc + 1];
        let mut us = vec![0.0; n_trunc + 1];
        for &s in &s_nodes {
            let w = ws * omega.eval(s);
            let (sn, cn) = (t * s * xi_ref).sin_cos();
            let mut pow = w;
            for n in 0..=n_trunc {
                uc[n] += pow * cn;
                us[n] += pow * sn;
                pow *= s;
            }
        }
        let mut coeffs = vec![0.0; n_trunc + 1];
        let mut ln_fact = 0.0;
        for n in 0..=n_trunc {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            // cos(nπ/2 + tsξ′) = cos(nπ/2)cos(tsξ′) − sin(nπ/2)sin(tsξ′)
            let (pc, ps) = quarter_phase(n);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 }; // (−tsx)ⁿ
            let mag = log_space_mag(t, n as u32, sigma, n as u32, ln_fact);
            coeffs[n] = sign * mag * (pc * uc[n] - ps * us[n]);
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// One-sided kernel for the Gamma NEF (mean-scale boundary b):
    ///
    /// ```text
    /// K₁(t,x) = (1/2πζ₀) ∫₀¹ t dy ∫ Σₙ cos(nπ/2 − tysb) (tys)ⁿ(ζ₀ã₁x)ⁿ/n!
    ///                                 · (ζ₀ã₁x/ãₙ₊₁ − b/ãₙ) ds
    /// ```
    pub(crate) fn gamma_one_sided(
        t: f64,
        b: f64,
        sigma: f64,
        n_trunc: usize,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        if t < 0.0 {
            return Err(Error::Domain(format!("kernel needs t >= 0, got {t}")));
        }
        let (y_nodes, wy) = midpoint_grid(0.0, 1.0, cfg)?;
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, cfg)?;

        // Wc[n] = Σ_{y,s} w (tys)ⁿ cos(tysb), Ws[n] likewise with sin.
        let mut wc = vec![0.0; n_trunc + 1];
        let mut wsn = vec![0.0; n_trunc + 1];
        for &y in &y_nodes {
            for &s in &s_nodes {
                let u = t * y * s;
                let (sn, cn) = (u * b).sin_cos();
                let mut pow = wy * ws;
                for n in 0..=n_trunc {
                    wc[n] += pow * cn;
                    wsn[n] += pow * sn;
                    pow *= u;
                }
            }
        }

        let pref = t / (2.0 * PI);
        let mut poly = Self::zero(n_trunc + 1);
        let mut ln_fact = 0.0;
        for n in 0..=n_trunc {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let (pc, ps) = quarter_phase(n);
            let g = pref * (pc * wc[n] + ps * wsn[n]);
            // (σx)ⁿ(σx/ãₙ₊₁ − b/ãₙ): split into the x^{n+1} and xⁿ parts.
            let mag_hi = log_space_mag(sigma, n as u32 + 1, sigma, n as u32 + 1, ln_fact);
            let mag_lo = log_space_mag(sigma, n as u32, sigma, n as u32, ln_fact);
            poly.coeffs[n + 1] += g * mag_hi;
            poly.coeffs[n] -= g * b * mag_lo;
        }
        poly.max_abs_x = poly.find_safe_range();
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn window_collapses_at_x_zero() {
        // only n = 0 survives: (t/2π) ∫ₐᵇ dy ∫ cos(tsy) ds
        let (t, a, b, sigma) = (1.3, 4.0, 8.0, 4.0);
        let k = PolyKernel::gamma_window(t, a, b, None, sigma, 25, &cfg()).unwrap();
        let direct = integrate_1d(
            |y| {
                integrate_1d(|s| (t * s * y).cos(), -1.0, 1.0, &cfg()).unwrap()
            },
            a,
            b,
            &cfg(),
        )
        .unwrap()
            * t
            / (2.0 * PI);
        assert!((k.eval(0.0).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn point_collapses_at_x_zero() {
        // K₃,₀(t, 0; θ′) = ∫ cos(tsξ′) ω(s) ds
        let (t, xi) = (2.0, 1.25);
        let k =
            PolyKernel::gamma_point(t, xi, 4.0, WeightFunction::Triangular, 25, &cfg()).unwrap();
        let direct = integrate_1d(
            |s| (t * s * xi).cos() * WeightFunction::Triangular.eval(s),
            -1.0,
            1.0,
            &cfg(),
        )
        .unwrap();
        assert!((k.eval(0.0).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn one_sided_collapses_at_x_zero() {
        // n = 0 term only: −(b/2π) ∫₀¹ t dy ∫ cos(tysb) ds
        let (t, b, sigma) = (1.5, 6.0, 4.0);
        let k = PolyKernel::gamma_one_sided(t, b, sigma, 25, &cfg()).unwrap();
        let direct = -b * t / (2.0 * PI)
            * integrate_1d(
                |y| integrate_1d(|s| (t * y * s * b).cos(), -1.0, 1.0, &cfg()).unwrap(),
                0.0,
                1.0,
                &cfg(),
            )
            .unwrap();
        assert!((k.eval(0.0).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn window_matches_naive_triple_loop() {
        // the compiled polynomial is the same iterated Riemann sum
        let (t, a, b, sigma, n_trunc) = (0.8, 4.0, 6.0, 4.0, 12_usize);
        let coarse = QuadratureConfig::new(0.1, 1000).unwrap();
        let k = PolyKernel::gamma_window(t, a, b, None, sigma, n_trunc, &coarse).unwrap();
        let (y_nodes, wy) = midpoint_grid(a, b, &coarse).unwrap();
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, &coarse).unwrap();
        for &x in &[0.0, 1.0, 3.5, 7.0] {
            let mut naive = 0.0;
            for &y in &y_nodes {
                for &s in &s_nodes {
                    let mut term_sum = 0.0;
                    let mut num = 1.0; // (tsxσ)ⁿ
                    let mut denom = 1.0; // ãₙ n!
                    for n in 0..=n_trunc {
                        if n > 0 {
                            num *= t * s * x * sigma;
                            denom *= (sigma + (n - 1) as f64) * n as f64;
                        }
                        term_sum +=
                            num / denom * (0.5 * n as f64 * PI - t * s * y).cos();
                    }
                    naive += wy * ws * term_sum;
                }
            }
            naive *= t / (2.0 * PI);
            let fast = k.eval(x).unwrap();
            assert!(
                (fast - naive).abs() < 1e-9 * (1.0 + naive.abs()),
                "x = {x}: {fast} vs {naive}"
            );
        }
    }

    #[test]
    fn one_sided_matches_naive_triple_loop() {
        let (t, b, sigma, n_trunc) = (0.7, 5.0, 4.0, 10_usize);
        let coarse = QuadratureConfig::new(0.1, 1000).unwrap();
        let k = PolyKernel::gamma_one_sided(t, b, sigma, n_trunc, &coarse).unwrap();
        let (y_nodes, wy) = midpoint_grid(0.0, 1.0, &coarse).unwrap();
        let (s_nodes, ws) = midpoint_grid(-1.0, 1.0, &coarse).unwrap();
        for &x in &[0.0, 2.0, 6.5] {
            let mut naive = 0.0;
            for &y in &y_nodes {
                for &s in &s_nodes {
                    let mut term_sum = 0.0;
                    let mut pow = 1.0; // (tys)ⁿ(σx)ⁿ/n!
                    let mut atilde = 1.0; // ãₙ
                    for n in 0..=n_trunc {
                        if n > 0 {
                            pow *= t * y * s * sigma * x / n as f64;
                            atilde *= sigma + (n - 1) as f64;
                        }
                        let atilde_next = atilde * (sigma + n as f64);
                        term_sum += (0.5 * n as f64 * PI - t * y * s * b).cos()
                            * pow
                            * (sigma * x / atilde_next - b / atilde);
                    }
                    naive += wy * ws * term_sum;
                }
            }
            naive *= t / (2.0 * PI);
            let fast = k.eval(x).unwrap();
            assert!(
                (fast - naive).abs() < 1e-9 * (1.0 + naive.abs()),
                "x = {x}: {fast} vs {naive}"
            );
        }
    }

    #[test]
    fn range_guard_trips_eventually() {
        let k = PolyKernel::gamma_window(2.0, 4.0, 8.0, None, 4.0, 25, &cfg()).unwrap();
        assert!(k.eval(1e300).is_err());
        assert!(k.eval(30.0).is_ok());
    }
}
