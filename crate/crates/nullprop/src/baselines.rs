//! Comparison estimators: the MR estimator and a fixed-λ Storey variant,
//! plus the one-sided p-value transform that feeds them.
//!
//! Both baselines assume p-values that are uniform under the null, which
//! fails for composite nulls; they are comparative context for the
//! matching-function estimators, not fidelity targets.

use crate::families::FamilyModel;
use crate::{Error, Result};

/// A vector of p-values in [0, 1].
#[derive(Debug, Clone)]
pub struct PValueVector {
    values: Vec<f64>,
}

impl PValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("p-value vector must be nonempty".into()));
        }
        for &p in &values {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("p-value {p} outside [0, 1]")));
            }
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// One-sided p-value 1 − F_b(x) for the null boundary b, clamped to [0, 1]
/// against rounding.
pub fn one_sided_pvalue(x: f64, family: &FamilyModel, b: f64) -> Result<f64> {
    let p = 1.0 - family.cdf(b, x)?;
    Ok(p.clamp(0.0, 1.0))
}

/// The MR alternative-proportion estimator.
///
/// With ascendingly ordered p-values p₍₁₎ ≤ … ≤ p₍ₘ₎ and the scan window
/// i ∈ {2, …, m−2},
///
/// ```text
/// qᵢ* = (1 − p₍ᵢ₎)⁻¹ { i/m − p₍ᵢ₎ − b*_m √(p₍ᵢ₎(1 − p₍ᵢ₎)) },
/// b*_m = m^{−1/2} √(2 ln ln m),
/// π̂₁ = min{1, max{0, max qᵢ*}}.
/// ```
///
/// Indices with p₍ᵢ₎ = 1 inside the scan window are skipped (the qᵢ*
/// formula divides by 1 − p₍ᵢ₎); the count of skipped indices is returned
/// alongside the estimate.
pub fn mr_estimate(p: &PValueVector) -> Result<MrReport> {
    let m = p.len();
    if m <= 4 {
        return Err(Error::Domain(format!(
            "the MR estimator needs m > 4 p-values, got {m}"
        )));
    }
    let mut sorted = p.values().to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("p-values are finite"));
    let mf = m as f64;
    let b_star = (2.0 * mf.ln().ln()).sqrt() / mf.sqrt();
    let mut best = f64::NEG_INFINITY;
    let mut skipped = 0usize;
    for i in 2..=(m - 2) {
        let pi = sorted[i - 1];
        if pi >= 1.0 {
            skipped += 1;
            continue;
        }
        let q = (i as f64 / mf - pi - b_star * (pi * (1.0 - pi)).sqrt()) / (1.0 - pi);
        if q > best {
            best = q;
        }
    }
    let estimate = if best.is_finite() {
        best.clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(MrReport {
        estimate,
        b_star,
        skipped,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct MrReport {
    pub estimate: f64,
    pub b_star: f64,
    /// Scan indices dropped because p₍ᵢ₎ = 1.
    pub skipped: usize,
}

/// Default λ grid for the Storey estimator: 0.05, 0.10, …, 0.95.
pub fn storey_default_grid() -> Vec<f64> {
    (1..=19).map(|i| 0.05 * i as f64).collect()
}

/// Fixed-λ Storey estimator of the alternative proportion.
///
/// For each λ in the grid, π̂₀(λ) = #{pᵢ > λ} / (m(1−λ)) and
/// π̂₁(λ) = 1 − min{1, π̂₀(λ)}. The headline estimate is taken at the last
/// grid point; the full profile is returned for inspection. This is a
/// deliberate, documented replacement for the smoother-based variant.
pub fn storey_estimate(p: &PValueVector, lambdas: &[f64]) -> Result<StoreyReport> {
    if lambdas.is_empty() {
        return Err(Error::Config("Storey estimator needs a nonempty lambda grid".into()));
    }
    let mut grid = lambdas.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("lambdas are finite"));
    for &l in &grid {
        if !(0.0 < l && l < 1.0) {
            return Err(Error::Config(format!("lambda {l} outside (0, 1)")));
        }
    }
    let m = p.len() as f64;
    let profile: Vec<(f64, f64)> = grid
        .iter()
        .map(|&l| {
            let tail = p.values().iter().filter(|&&pi| pi > l).count() as f64;
            let pi0 = (tail / (m * (1.0 - l))).min(1.0);
            (l, 1.0 - pi0)
        })
        .collect();
    let estimate = profile.last().expect("nonempty grid").1;
    Ok(StoreyReport { estimate, profile })
}

#[derive(Debug, Clone)]
pub struct StoreyReport {
    /// π̂₁ at the final λ of the grid.
    pub estimate: f64,
    /// (λ, π̂₁(λ)) over the whole grid.
    pub profile: Vec<(f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededStream;

    #[test]
    fn one_sided_pvalue_reference_points() {
        let gauss = FamilyModel::gaussian(1.0).unwrap();
        // x at the null median
        assert!((one_sided_pvalue(0.0, &gauss, 0.0).unwrap() - 0.5).abs() < 1e-12);
        // normal tail
        assert!((one_sided_pvalue(1.6449, &gauss, 0.0).unwrap() - 0.05).abs() < 1e-4);
        // far left tail
        assert!((one_sided_pvalue(-1e6, &gauss, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    fn hand_example() -> PValueVector {
        PValueVector::new(vec![0.01, 0.02, 0.03, 0.5, 0.7, 0.9]).unwrap()
    }

    /// Oracle for the 6-element example: the three qᵢ* values worked out
    /// term by term.
    fn hand_example_expected() -> f64 {
        let m = 6.0_f64;
        let b = (2.0 * m.ln().ln()).sqrt() / m.sqrt();
        let q = |i: f64, p: f64| (i / m - p - b * (p * (1.0 - p)).sqrt()) / (1.0 - p);
        let q2 = q(2.0, 0.02);
        let q3 = q(3.0, 0.03);
        let q4 = q(4.0, 0.5);
        q2.max(q3).max(q4).clamp(0.0, 1.0)
    }

    #[test]
    fn mr_matches_hand_computation() {
        let report = mr_estimate(&hand_example()).unwrap();
        let expected = hand_example_expected();
        assert!((report.estimate - expected).abs() < 1e-14);
        // frozen value of the same arithmetic
        assert!((report.estimate - 0.406_997_4).abs() < 1e-6);
        assert_eq!(report.skipped, 0);
    }

    #[test]
    fn mr_is_permutation_invariant() {
        let base = vec![0.01, 0.02, 0.03, 0.5, 0.7, 0.9];
        let reference = mr_estimate(&PValueVector::new(base.clone()).unwrap())
            .unwrap()
            .estimate;
        let mut rng = SeededStream::new(17);
        let mut perm = base;
        for _ in 0..100 {
            // fisher-yates
            for i in (1..perm.len()).rev() {
                let j = (rng.uniform() * (i + 1) as f64) as usize;
                perm.swap(i, j.min(i));
            }
            let est = mr_estimate(&PValueVector::new(perm.clone()).unwrap())
                .unwrap()
                .estimate;
            assert_eq!(est, reference);
        }
    }

    #[test]
    fn mr_halved_pvalues_do_not_decrease_on_this_instance() {
        let halved: Vec<f64> = hand_example().values().iter().map(|p| p / 2.0).collect();
        let est_halved = mr_estimate(&PValueVector::new(halved).unwrap()).unwrap().estimate;
        let est_base = mr_estimate(&hand_example()).unwrap().estimate;
        assert!(est_halved >= est_base);
    }

    #[test]
    fn mr_clamps_both_sides() {
        // all q* negative → lower clamp at 0
        let low = PValueVector::new(vec![0.9, 0.91, 0.92, 0.93, 0.94, 0.95]).unwrap();
        assert_eq!(mr_estimate(&low).unwrap().estimate, 0.0);
        // the strongest possible signal drives the max q* toward
        // (m−2)/m < 1; the upper clamp can never engage for p-values in
        // [0, 1), so ≤ 1 is all that is observable
        let hi = PValueVector::new(vec![1e-12; 40]).unwrap();
        let est = mr_estimate(&hi).unwrap().estimate;
        assert!(est > 0.94 && est <= 1.0, "estimate {est}");
    }

    #[test]
    fn mr_skips_unit_pvalues() {
        let p = PValueVector::new(vec![0.1, 0.2, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let report = mr_estimate(&p).unwrap();
        assert!(report.skipped > 0);
        assert!((0.0..=1.0).contains(&report.estimate));
    }

    #[test]
    fn mr_needs_more_than_four() {
        let p = PValueVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(matches!(mr_estimate(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn storey_all_below_lambda_gives_one() {
        let p = PValueVector::new(vec![0.01, 0.02, 0.03]).unwrap();
        let r = storey_estimate(&p, &[0.5]).unwrap();
        assert_eq!(r.estimate, 1.0);
    }

    #[test]
    fn storey_uniform_null_near_zero() {
        let mut rng = SeededStream::new(23);
        let p: Vec<f64> = (0..10_000).map(|_| rng.uniform()).collect();
        let p = PValueVector::new(p).unwrap();
        let r = storey_estimate(&p, &[0.5]).unwrap();
        assert!(r.estimate.abs() < 0.05, "estimate {}", r.estimate);
    }

    #[test]
    fn storey_half_mixture() {
        let mut rng = SeededStream::new(29);
        let mut p = vec![0.001; 5_000];
        p.extend((0..5_000).map(|_| rng.uniform()));
        let p = PValueVector::new(p).unwrap();
        let r = storey_estimate(&p, &[0.5]).unwrap();
        assert!((r.estimate - 0.5).abs() < 0.05, "estimate {}", r.estimate);
    }

    #[test]
    fn storey_rejects_bad_grids() {
        let p = PValueVector::new(vec![0.5]).unwrap();
        assert!(matches!(storey_estimate(&p, &[]), Err(Error::Config(_))));
        assert!(matches!(storey_estimate(&p, &[1.0]), Err(Error::Config(_))));
    }

    #[test]
    fn estimates_stay_in_unit_interval() {
        let mut rng = SeededStream::new(31);
        for _ in 0..20 {
            let p: Vec<f64> = (0..50).map(|_| rng.uniform()).collect();
            let p = PValueVector::new(p).unwrap();
            let mr = mr_estimate(&p).unwrap().estimate;
            assert!((0.0..=1.0).contains(&mr));
            let st = storey_estimate(&p, &storey_default_grid()).unwrap().estimate;
            assert!((0.0..=1.0).contains(&st));
        }
    }
}
