//! Distributions over ordered integer supports.
//!
//! `Θ` and `X` both live on integer label grids. A [`DiscreteDistribution`]
//! pairs a strictly increasing label list with masses that sum to one;
//! [`JointDistribution`] and [`LikelihoodModel`] are theta-major matrices over
//! a `Θ × X` grid.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sum::csum;

/// Absolute tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Consecutive integer labels `lo..=hi`.
pub fn integer_grid(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).collect()
}

fn check_support(support: &[i64]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for (i, w) in support.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::UnsortedSupport { index: i + 1 });
        }
    }
    Ok(())
}

fn check_masses(masses: &[f64]) -> Result<()> {
    for (index, &m) in masses.iter().enumerate() {
        if !m.is_finite() {
            return Err(Error::NonFiniteMass { index });
        }
        if m < 0.0 {
            return Err(Error::NegativeMass { index, value: m });
        }
    }
    Ok(())
}

/// Rescale nonnegative masses in place so they sum to one.
fn rescale(masses: &mut [f64]) -> Result<()> {
    check_masses(masses)?;
    let total = csum(masses.iter().copied());
    if total == 0.0 {
        return Err(Error::AllZero);
    }
    for m in masses.iter_mut() {
        *m /= total;
    }
    Ok(())
}

fn check_total(masses: &[f64]) -> Result<()> {
    check_masses(masses)?;
    let sum = csum(masses.iter().copied());
    if (sum - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// Probability masses on an ordered finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<i64>,
    masses: Vec<f64>,
}

impl DiscreteDistribution {
    /// Builds a distribution from nonnegative weights, rescaling them to sum
    /// to one.
    pub fn new(support: Vec<i64>, mut masses: Vec<f64>) -> Result<Self> {
        check_support(&support)?;
        if support.len() != masses.len() {
            return Err(Error::ShapeMismatch {
                labels: support.len(),
                masses: masses.len(),
            });
        }
        rescale(&mut masses)?;
        Ok(Self { support, masses })
    }

    /// Builds a distribution from masses that already sum to one within
    /// [`MASS_TOLERANCE`]. The masses are kept bit-for-bit.
    pub fn from_probabilities(support: Vec<i64>, masses: Vec<f64>) -> Result<Self> {
        check_support(&support)?;
        if support.len() != masses.len() {
            return Err(Error::ShapeMismatch {
                labels: support.len(),
                masses: masses.len(),
            });
        }
        check_total(&masses)?;
        Ok(Self { support, masses })
    }

    pub(crate) fn from_parts_unchecked(support: Vec<i64>, masses: Vec<f64>) -> Self {
        debug_assert_eq!(support.len(), masses.len());
        Self { support, masses }
    }

    pub fn uniform(support: Vec<i64>) -> Result<Self> {
        check_support(&support)?;
        let m = 1.0 / support.len() as f64;
        let masses = alloc::vec![m; support.len()];
        Ok(Self { support, masses })
    }

    pub fn point_mass(support: Vec<i64>, label: i64) -> Result<Self> {
        check_support(&support)?;
        let idx = support
            .binary_search(&label)
            .map_err(|_| Error::LabelNotInSupport { label })?;
        let mut masses = alloc::vec![0.0; support.len()];
        masses[idx] = 1.0;
        Ok(Self { support, masses })
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn index_of(&self, label: i64) -> Option<usize> {
        self.support.binary_search(&label).ok()
    }

    /// Mass at `label`, zero when the label is off the support.
    pub fn mass_of(&self, label: i64) -> f64 {
        self.index_of(label).map_or(0.0, |i| self.masses[i])
    }

    pub fn same_support(&self, other: &Self) -> bool {
        self.support == other.support
    }

    pub fn min_label(&self) -> i64 {
        self.support[0]
    }

    pub fn max_label(&self) -> i64 {
        self.support[self.support.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.support
            .iter()
            .copied()
            .zip(self.masses.iter().copied())
    }
}

/// Normalizes a list of nonnegative weights into a distribution on the
/// labels `0..n`.
pub fn normalize(masses: &[f64]) -> Result<DiscreteDistribution> {
    let support = (0..masses.len() as i64).collect();
    DiscreteDistribution::new(support, masses.to_vec())
}

/// Joint masses `p(x, θ)`, stored theta-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    theta_support: Vec<i64>,
    x_support: Vec<i64>,
    masses: Vec<f64>,
}

impl JointDistribution {
    /// `rows[i][j]` is the weight of `(θ_i, x_j)`; weights are rescaled to
    /// sum to one.
    pub fn new(theta_support: Vec<i64>, x_support: Vec<i64>, rows: &[Vec<f64>]) -> Result<Self> {
        check_support(&theta_support)?;
        check_support(&x_support)?;
        if rows.len() != theta_support.len() {
            return Err(Error::ShapeMismatch {
                labels: theta_support.len(),
                masses: rows.len(),
            });
        }
        let mut masses = Vec::with_capacity(theta_support.len() * x_support.len());
        for row in rows {
            if row.len() != x_support.len() {
                return Err(Error::ShapeMismatch {
                    labels: x_support.len(),
                    masses: row.len(),
                });
            }
            masses.extend_from_slice(row);
        }
        rescale(&mut masses)?;
        Ok(Self {
            theta_support,
            x_support,
            masses,
        })
    }

    pub fn theta_support(&self) -> &[i64] {
        &self.theta_support
    }

    pub fn x_support(&self) -> &[i64] {
        &self.x_support
    }

    /// Row of `p(x, θ_i)` over the x grid.
    pub fn row(&self, theta_index: usize) -> &[f64] {
        let n = self.x_support.len();
        &self.masses[theta_index * n..(theta_index + 1) * n]
    }

    pub fn get(&self, theta_index: usize, x_index: usize) -> f64 {
        self.masses[theta_index * self.x_support.len() + x_index]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.masses.chunks_exact(self.x_support.len())
    }

    pub fn marginal_theta(&self) -> DiscreteDistribution {
        let masses = self.rows().map(|r| csum(r.iter().copied())).collect();
        DiscreteDistribution::from_parts_unchecked(self.theta_support.clone(), masses)
    }

    pub fn marginal_x(&self) -> DiscreteDistribution {
        let masses = (0..self.x_support.len())
            .map(|j| csum(self.rows().map(|r| r[j])))
            .collect();
        DiscreteDistribution::from_parts_unchecked(self.x_support.clone(), masses)
    }
}

/// Conditional `p(x | θ)`, one normalized row per θ over a shared x grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodModel {
    theta_support: Vec<i64>,
    x_support: Vec<i64>,
    rows: Vec<f64>,
}

impl LikelihoodModel {
    /// Rows are rescaled individually to sum to one.
    pub fn new(theta_support: Vec<i64>, x_support: Vec<i64>, rows: &[Vec<f64>]) -> Result<Self> {
        check_support(&theta_support)?;
        check_support(&x_support)?;
        if rows.len() != theta_support.len() {
            return Err(Error::ShapeMismatch {
                labels: theta_support.len(),
                masses: rows.len(),
            });
        }
        let mut flat = Vec::with_capacity(theta_support.len() * x_support.len());
        for row in rows {
            if row.len() != x_support.len() {
                return Err(Error::ShapeMismatch {
                    labels: x_support.len(),
                    masses: row.len(),
                });
            }
            let start = flat.len();
            flat.extend_from_slice(row);
            rescale(&mut flat[start..])?;
        }
        Ok(Self {
            theta_support,
            x_support,
            rows: flat,
        })
    }

    pub(crate) fn from_flat_unchecked(
        theta_support: Vec<i64>,
        x_support: Vec<i64>,
        rows: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(rows.len(), theta_support.len() * x_support.len());
        Self {
            theta_support,
            x_support,
            rows,
        }
    }

    pub fn theta_support(&self) -> &[i64] {
        &self.theta_support
    }

    pub fn x_support(&self) -> &[i64] {
        &self.x_support
    }

    pub fn theta_index(&self, theta: i64) -> Option<usize> {
        self.theta_support.binary_search(&theta).ok()
    }

    pub fn x_index(&self, x: i64) -> Option<usize> {
        self.x_support.binary_search(&x).ok()
    }

    pub fn row(&self, theta_index: usize) -> &[f64] {
        let n = self.x_support.len();
        &self.rows[theta_index * n..(theta_index + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.rows.chunks_exact(self.x_support.len())
    }

    /// `p(x_j | θ_i)`.
    pub fn get(&self, theta_index: usize, x_index: usize) -> f64 {
        self.rows[theta_index * self.x_support.len() + x_index]
    }

    /// Row `i` as a distribution over the x grid.
    pub fn row_distribution(&self, theta_index: usize) -> DiscreteDistribution {
        DiscreteDistribution::from_parts_unchecked(
            self.x_support.clone(),
            self.row(theta_index).to_vec(),
        )
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.theta_support == other.theta_support && self.x_support == other.x_support
    }
}

/// `p(x, θ) = prior(θ) · like(x | θ)`.
pub fn joint_from(
    prior: &DiscreteDistribution,
    like: &LikelihoodModel,
) -> Result<JointDistribution> {
    if prior.support() != like.theta_support() {
        return Err(Error::SupportMismatch);
    }
    let mut masses = Vec::with_capacity(like.rows.len());
    for (&p, row) in prior.masses().iter().zip(like.rows()) {
        masses.extend(row.iter().map(|&l| p * l));
    }
    Ok(JointDistribution {
        theta_support: like.theta_support.clone(),
        x_support: like.x_support.clone(),
        masses,
    })
}
