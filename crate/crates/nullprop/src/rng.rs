//! Seedable pseudo-random streams for data generation.
//!
//! The simulation contract requires bit-identical output for a fixed seed,
//! independent of thread schedule and platform. A SplitMix64 generator is
//! small enough to pin down completely, and each (seed, scenario, rep)
//! triple is hashed to its own stream so replications can run in any order.

use crate::special::normal_quantile;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A SplitMix64 stream. Cheap to create, `Copy`-free on purpose: each
/// logical task owns exactly one stream.
#[derive(Debug, Clone)]
pub struct SeededStream {
    state: u64,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self { state: mix64(seed) }
    }

    /// Stream for one replication of one scenario. The id is a hash of the
    /// triple, so streams are order-independent across replications.
    pub fn for_rep(seed: u64, scenario_tag: u64, rep: u64) -> Self {
        let id = mix64(seed ^ mix64(scenario_tag.wrapping_add(GOLDEN_GAMMA)) ^ mix64(rep));
        Self::new(id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw on [lo, hi].
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw via the inverse CDF.
    pub fn standard_normal(&mut self) -> f64 {
        normal_quantile(self.uniform())
    }

    /// Standard Gamma(shape, rate 1) draw, Marsaglia-Tsang.
    pub fn standard_gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            // Boost: draw at shape+1, then scale by U^{1/shape}.
            let g = self.standard_gamma(shape + 1.0);
            return g * self.uniform().powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (3.0 * d.sqrt());
        loop {
            let x = self.standard_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }
}
