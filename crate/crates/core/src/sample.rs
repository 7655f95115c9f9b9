//! Inverse-CDF sampling on ordered supports.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::dist::DiscreteDistribution;

/// Uniform draw on `[0, 1)` with 53 random bits.
pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Cumulative masses for repeated inverse-CDF draws.
#[derive(Debug, Clone)]
pub struct Cdf {
    cumulative: Vec<f64>,
    last_positive: usize,
}

impl Cdf {
    pub fn new(masses: &[f64]) -> Self {
        let mut running = 0.0;
        let cumulative = masses
            .iter()
            .map(|&m| {
                running += m;
                running
            })
            .collect();
        let last_positive = masses.iter().rposition(|&m| m > 0.0).unwrap_or(0);
        Self {
            cumulative,
            last_positive,
        }
    }

    /// First index whose cumulative mass exceeds `u`. Zero-mass entries are
    /// never returned.
    pub fn index(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.last_positive)
    }

    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        self.index(uniform01(rng))
    }
}

/// One draw from `d`, as a support label.
pub fn sample<R: RngCore + ?Sized>(d: &DiscreteDistribution, rng: &mut R) -> i64 {
    let cdf = Cdf::new(d.masses());
    d.support()[cdf.draw(rng)]
}
