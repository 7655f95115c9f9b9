//! Sequential Bayesian updating on the Θ grid.

use alloc::vec::Vec;

use crate::dist::{DiscreteDistribution, LikelihoodModel};
use crate::error::{Error, Result};
use crate::sum::{csum, Compensated};

/// Mass fraction used for the `span30` uncertainty proxy.
pub const DEFAULT_SPAN_FRACTION: f64 = 0.3;

/// Slack when comparing a window's mass against the requested fraction, so
/// that e.g. three masses of 0.1 count as 0.3 regardless of rounding.
const SPAN_SLACK: f64 = 1e-12;

/// Predictive `p(x) = Σ_θ belief(θ) like(x|θ)` over the x grid.
pub fn predictive(
    belief: &DiscreteDistribution,
    like: &LikelihoodModel,
) -> Result<DiscreteDistribution> {
    if belief.support() != like.theta_support() {
        return Err(Error::SupportMismatch);
    }
    let mut acc = alloc::vec![Compensated::new(); like.x_support().len()];
    for (&b, row) in belief.masses().iter().zip(like.rows()) {
        if b == 0.0 {
            continue;
        }
        for (slot, &l) in acc.iter_mut().zip(row) {
            slot.add(b * l);
        }
    }
    let masses = acc.iter().map(Compensated::total).collect();
    Ok(DiscreteDistribution::from_parts_unchecked(
        like.x_support().to_vec(),
        masses,
    ))
}

/// One Bayes step: `posterior(θ) ∝ like(x|θ) · belief(θ)`.
pub fn posterior_update(
    belief: &DiscreteDistribution,
    like: &LikelihoodModel,
    x: i64,
) -> Result<DiscreteDistribution> {
    if belief.support() != like.theta_support() {
        return Err(Error::SupportMismatch);
    }
    let xi = like
        .x_index(x)
        .ok_or(Error::LabelNotInSupport { label: x })?;
    let weights: Vec<f64> = belief
        .masses()
        .iter()
        .enumerate()
        .map(|(i, &b)| b * like.get(i, xi))
        .collect();
    let evidence = csum(weights.iter().copied());
    if evidence == 0.0 {
        return Err(Error::ZeroPredictive { x, step: None });
    }
    let masses = weights.into_iter().map(|w| w / evidence).collect();
    Ok(DiscreteDistribution::from_parts_unchecked(
        belief.support().to_vec(),
        masses,
    ))
}

/// A prior and the beliefs after each observation.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefTrajectory {
    prior: DiscreteDistribution,
    posteriors: Vec<DiscreteDistribution>,
    observations: Vec<i64>,
}

impl BeliefTrajectory {
    pub fn prior(&self) -> &DiscreteDistribution {
        &self.prior
    }

    /// `posteriors()[k]` conditions on `observations()[..=k]`.
    pub fn posteriors(&self) -> &[DiscreteDistribution] {
        &self.posteriors
    }

    pub fn observations(&self) -> &[i64] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.posteriors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posteriors.is_empty()
    }

    /// Belief after `k` observations (`k = 0` is the prior).
    pub fn belief(&self, k: usize) -> Option<&DiscreteDistribution> {
        match k {
            0 => Some(&self.prior),
            k => self.posteriors.get(k - 1),
        }
    }

    pub fn final_belief(&self) -> &DiscreteDistribution {
        self.posteriors.last().unwrap_or(&self.prior)
    }
}

/// Folds `xs` into the prior one observation at a time. A zero-evidence
/// observation reports its 1-based step.
pub fn run_sequence(
    prior: &DiscreteDistribution,
    like: &LikelihoodModel,
    xs: &[i64],
) -> Result<BeliefTrajectory> {
    let mut posteriors: Vec<DiscreteDistribution> = Vec::with_capacity(xs.len());
    for (k, &x) in xs.iter().enumerate() {
        let current = posteriors.last().unwrap_or(prior);
        let next = posterior_update(current, like, x).map_err(|e| match e {
            Error::ZeroPredictive { x, .. } => Error::ZeroPredictive {
                x,
                step: Some(k + 1),
            },
            other => other,
        })?;
        posteriors.push(next);
    }
    Ok(BeliefTrajectory {
        prior: prior.clone(),
        posteriors,
        observations: xs.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapEstimate {
    pub theta_hat: i64,
    /// `|theta_hat - theta_star|` in grid units.
    pub error: u64,
    /// Width of the smallest window around `theta_hat` holding 30% of the mass.
    pub span30: i64,
}

/// Index of the largest weight; ties go to the smallest index. Works on
/// unnormalized weights and log weights alike.
pub fn argmax_first(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate().skip(1) {
        if w > weights[best] {
            best = i;
        }
    }
    best
}

pub fn map_estimate(posterior: &DiscreteDistribution, theta_star: i64) -> MapEstimate {
    let idx = argmax_first(posterior.masses());
    let theta_hat = posterior.support()[idx];
    MapEstimate {
        theta_hat,
        error: theta_hat.abs_diff(theta_star),
        span30: span_around(
            posterior.support(),
            posterior.masses(),
            idx,
            DEFAULT_SPAN_FRACTION,
        ),
    }
}

/// Width (`hi - lo` in label units) of the smallest contiguous window that
/// contains `theta_hat` and holds at least `mass_fraction` of the posterior.
///
/// Every window containing `theta_hat` is considered; ties go to the
/// smaller width, then the smaller `lo`.
pub fn credible_span(
    posterior: &DiscreteDistribution,
    theta_hat: i64,
    mass_fraction: f64,
) -> Result<i64> {
    if !(mass_fraction > 0.0 && mass_fraction < 1.0) {
        return Err(Error::InvalidFraction(mass_fraction));
    }
    let idx = posterior
        .index_of(theta_hat)
        .ok_or(Error::LabelNotInSupport { label: theta_hat })?;
    Ok(span_around(
        posterior.support(),
        posterior.masses(),
        idx,
        mass_fraction,
    ))
}

/// Two-pointer scan over prefix sums. For each `lo <= idx` the smallest
/// admissible `hi` is nondecreasing in `lo`, so every window is covered in
/// linear time.
pub(crate) fn span_around(support: &[i64], masses: &[f64], idx: usize, fraction: f64) -> i64 {
    let n = masses.len();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = Compensated::new();
    prefix.push(0.0);
    for &m in masses {
        acc.add(m);
        prefix.push(acc.total());
    }
    let target = fraction - SPAN_SLACK;
    let mut best: Option<i64> = None;
    let mut hi = idx;
    for lo in 0..=idx {
        while hi < n && prefix[hi + 1] - prefix[lo] < target {
            hi += 1;
        }
        if hi == n {
            break;
        }
        let width = support[hi] - support[lo];
        if best.is_none_or(|b| width < b) {
            best = Some(width);
        }
    }
    best.unwrap_or(support[n - 1] - support[0])
}
