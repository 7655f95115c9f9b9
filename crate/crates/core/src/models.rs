//! Discretized Normal priors and truncated Poisson likelihoods.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dist::{integer_grid, DiscreteDistribution, LikelihoodModel};
use crate::error::{Error, Result};
use crate::sum::{csum, Compensated};

/// Largest tolerated Poisson mass beyond `x_max`.
pub const MAX_TAIL_MASS: f64 = 1e-12;

/// Masses proportional to the Normal(mean, sd) density at each grid point,
/// renormalized over the grid.
///
/// Computed relative to the grid point nearest the mean so that very small
/// `sd` collapses to a point mass instead of underflowing to all zeros.
pub fn discretize_normal(mean: f64, sd: f64, support: &[i64]) -> Result<DiscreteDistribution> {
    if support.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(sd > 0.0 && sd.is_finite()) || !mean.is_finite() {
        return Err(Error::InvalidSpread(sd));
    }
    let z2 = |t: i64| {
        let z = (t as f64 - mean) / sd;
        z * z
    };
    let nearest = support.iter().map(|&t| z2(t)).fold(f64::INFINITY, f64::min);
    let masses = support
        .iter()
        .map(|&t| libm::exp(-0.5 * (z2(t) - nearest)))
        .collect();
    DiscreteDistribution::new(support.to_vec(), masses)
}

/// Poisson pmf `λ^x e^{-λ} / x!`, untruncated.
pub fn poisson_pmf(x: u64, rate: f64) -> f64 {
    if x == 0 {
        return libm::exp(-rate);
    }
    let xf = x as f64;
    libm::exp(xf * libm::log(rate) - rate - libm::lgamma(xf + 1.0))
}

/// Poisson mass strictly above `x_max`, summed directly (not `1 - cdf`).
pub fn poisson_tail(x_max: u64, rate: f64) -> f64 {
    let mut x = x_max + 1;
    let mut term = poisson_pmf(x, rate);
    let mut terms = Vec::new();
    loop {
        terms.push(term);
        x += 1;
        // pmf ratio is rate / x; once below one the tail decays geometrically
        term *= rate / x as f64;
        if x as f64 > rate && term < 1e-30 * terms[0].max(f64::MIN_POSITIVE) {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    csum(terms)
}

fn truncated_row(rate: f64, x_max: u64) -> Result<Vec<f64>> {
    if rate <= 0.0 || !rate.is_finite() {
        return Err(Error::NonPositiveRate { rate });
    }
    let tail = poisson_tail(x_max, rate);
    if tail >= MAX_TAIL_MASS {
        return Err(Error::TailMassTooLarge { rate, tail });
    }
    let mut row: Vec<f64> = (0..=x_max).map(|x| poisson_pmf(x, rate)).collect();
    let total = csum(row.iter().copied());
    for m in &mut row {
        *m /= total;
    }
    Ok(row)
}

/// Rows `Poisson(λ = θ)` on `x ∈ 0..=x_max`, each renormalized after
/// truncation.
pub fn poisson_likelihood(theta_support: &[i64], x_max: u64) -> Result<LikelihoodModel> {
    if theta_support.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_theta_order(theta_support)?;
    let mut rows = Vec::with_capacity(theta_support.len() * (x_max as usize + 1));
    for &theta in theta_support {
        rows.extend(truncated_row(theta as f64, x_max)?);
    }
    Ok(LikelihoodModel::from_flat_unchecked(
        theta_support.to_vec(),
        integer_grid(0, x_max as i64),
        rows,
    ))
}

/// Key-marginalized rows `Σ_y p(y) Poisson(x; θ + y)`.
///
/// Every `θ + y` with positive key mass must be a positive rate.
pub fn keyed_poisson_likelihood(
    theta_support: &[i64],
    key: &DiscreteDistribution,
    x_max: u64,
) -> Result<LikelihoodModel> {
    if theta_support.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_theta_order(theta_support)?;
    let width = x_max as usize + 1;
    let mut cache: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    let mut rows = Vec::with_capacity(theta_support.len() * width);
    for &theta in theta_support {
        let mut acc = alloc::vec![Compensated::new(); width];
        for (y, w) in key.iter().filter(|&(_, w)| w > 0.0) {
            let rate = theta + y;
            if let Entry::Vacant(slot) = cache.entry(rate) {
                slot.insert(truncated_row(rate as f64, x_max)?);
            }
            for (slot, &m) in acc.iter_mut().zip(&cache[&rate]) {
                slot.add(w * m);
            }
        }
        let mixed: Vec<f64> = acc.iter().map(Compensated::total).collect();
        let total = csum(mixed.iter().copied());
        rows.extend(mixed.into_iter().map(|m| m / total));
    }
    Ok(LikelihoodModel::from_flat_unchecked(
        theta_support.to_vec(),
        integer_grid(0, x_max as i64),
        rows,
    ))
}

fn check_theta_order(theta_support: &[i64]) -> Result<()> {
    for (i, w) in theta_support.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::UnsortedSupport { index: i + 1 });
        }
    }
    Ok(())
}
