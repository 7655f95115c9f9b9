//! Entropy, KL divergence and mutual information, all in bits.
//!
//! Zero-mass terms contribute nothing (`0·log 0 = 0`). A positive mass
//! against a zero reference mass makes a divergence `+∞`; it is never
//! floored to a small epsilon.

use crate::dist::{DiscreteDistribution, JointDistribution};
use crate::error::{Error, Result};
use crate::sum::{csum, Compensated};

/// Logarithm used for every information quantity in the crate.
#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// `Σ p log2(p / q)` over aligned slices.
pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = Compensated::new();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        acc.add(pi * (log2(pi) - log2(qi)));
    }
    acc.total()
}

/// `D_KL(p ‖ q)` in bits. Returns `+∞` when `p` puts mass where `q` has
/// none; check with `is_infinite()`.
pub fn kl_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if !p.same_support(q) {
        return Err(Error::SupportMismatch);
    }
    Ok(kl_slices(p.masses(), q.masses()))
}

pub(crate) fn entropy_slice(p: &[f64]) -> f64 {
    -csum(p.iter().filter(|&&m| m > 0.0).map(|&m| m * log2(m)))
}

pub fn shannon_entropy(p: &DiscreteDistribution) -> f64 {
    entropy_slice(p.masses())
}

/// `I(Θ; X) = Σ p(x,θ) log2(p(x,θ) / (p(x) p(θ)))`.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    let p_theta = joint.marginal_theta();
    let p_x = joint.marginal_x();
    let mut acc = Compensated::new();
    for (row, &pt) in joint.rows().zip(p_theta.masses()) {
        for (&pxt, &px) in row.iter().zip(p_x.masses()) {
            if pxt > 0.0 {
                acc.add(pxt * (log2(pxt) - log2(px) - log2(pt)));
            }
        }
    }
    acc.total()
}
