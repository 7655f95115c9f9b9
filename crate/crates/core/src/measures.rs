//! Learning and privacy measures.
//!
//! The inspector's learning from data is how much it reduces
//! `D_KL(p_true(Θ) ‖ belief)`. Averaged over a class of objects it splits
//! into natural learning (mutual information under the true model),
//! corrective learning (how far the inspector's prior predictive is from the
//! true data distribution) and, when the inspector uses the wrong likelihood,
//! a mismatch penalty. All values are in bits; `±∞` marks support
//! deficiencies and is never clamped.

#![allow(clippy::needless_range_loop)]

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bayes::{predictive, BeliefTrajectory};
use crate::dist::{joint_from, DiscreteDistribution, LikelihoodModel};
use crate::error::{Error, Result};
use crate::info::{entropy_slice, kl_divergence, kl_slices, log2, mutual_information};
use crate::sum::Compensated;

/// Class-level expected learning split into its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningDecomposition {
    /// `I(p_true(Θ); p_true(X))`.
    pub natural: f64,
    /// `D_KL(p_true(X) ‖ p_0(X))`.
    pub corrective: f64,
    /// `E_θ D_KL(p_true(X|θ) ‖ p_0(X|θ))`; zero for matched likelihoods.
    pub mismatch_penalty: f64,
    /// `natural + corrective - mismatch_penalty`.
    pub total: f64,
}

impl LearningDecomposition {
    fn from_terms(natural: f64, corrective: f64, mismatch_penalty: f64) -> Self {
        Self {
            natural,
            corrective,
            mismatch_penalty,
            total: natural + corrective - mismatch_penalty,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.natural.is_finite()
            && self.corrective.is_finite()
            && self.mismatch_penalty.is_finite()
            && self.total.is_finite()
    }
}

fn same_theta(a: &DiscreteDistribution, b: &DiscreteDistribution) -> Result<()> {
    if a.same_support(b) {
        Ok(())
    } else {
        Err(Error::SupportMismatch)
    }
}

/// Realized learning `Σ_θ truth(θ) log2(posterior(θ) / prior(θ))`.
///
/// Equals `D_KL(truth ‖ prior) − D_KL(truth ‖ posterior)` and may be
/// negative when the data were misleading. A true label excluded by the
/// posterior only gives `−∞`; excluded by the prior only gives `+∞`;
/// excluded by both is [`Error::IndeterminateLearning`].
pub fn realized_learning(
    truth: &DiscreteDistribution,
    prior: &DiscreteDistribution,
    posterior: &DiscreteDistribution,
) -> Result<f64> {
    same_theta(truth, prior)?;
    same_theta(truth, posterior)?;
    let mut acc = Compensated::new();
    for ((&t, &p0), &p1) in truth
        .masses()
        .iter()
        .zip(prior.masses())
        .zip(posterior.masses())
    {
        if t == 0.0 {
            continue;
        }
        if p0 == 0.0 && p1 == 0.0 {
            return Err(Error::IndeterminateLearning);
        }
        acc.add(t * (log2(p1) - log2(p0)));
    }
    let v = acc.total();
    if v.is_nan() {
        // +∞ and −∞ terms from different labels
        return Err(Error::IndeterminateLearning);
    }
    Ok(v)
}

/// Initial inaccuracy `D_KL(p_true(Θ) ‖ p_0(Θ))`.
pub fn initial_fault(truth: &DiscreteDistribution, prior: &DiscreteDistribution) -> Result<f64> {
    kl_divergence(truth, prior)
}

/// Expected learning from one measurement of an object with `Θ = θ*`:
/// `D_KL(p(X|θ*) ‖ p_0(X))`.
pub fn expected_learning_single(
    theta_star: i64,
    like: &LikelihoodModel,
    inspector_prior: &DiscreteDistribution,
) -> Result<f64> {
    let i = like
        .theta_index(theta_star)
        .ok_or(Error::LabelNotInSupport { label: theta_star })?;
    let p0_x = predictive(inspector_prior, like)?;
    Ok(kl_slices(like.row(i), p0_x.masses()))
}

fn check_models(
    p_true: &DiscreteDistribution,
    like_true: &LikelihoodModel,
    prior: &DiscreteDistribution,
    like_inspector: &LikelihoodModel,
) -> Result<()> {
    same_theta(p_true, prior)?;
    if p_true.support() != like_true.theta_support() || !like_true.same_shape(like_inspector) {
        return Err(Error::SupportMismatch);
    }
    Ok(())
}

/// Natural, corrective and mismatch terms of the class-level expected
/// learning.
pub fn class_decomposition(
    p_true: &DiscreteDistribution,
    like_true: &LikelihoodModel,
    inspector_prior: &DiscreteDistribution,
    like_inspector: &LikelihoodModel,
) -> Result<LearningDecomposition> {
    check_models(p_true, like_true, inspector_prior, like_inspector)?;
    let natural = natural_learning(p_true, like_true)?;
    let true_x = predictive(p_true, like_true)?;
    let p0_x = predictive(inspector_prior, like_inspector)?;
    let corrective = kl_slices(true_x.masses(), p0_x.masses());
    let mismatch = mismatch_penalty(p_true, like_true, like_inspector);
    Ok(LearningDecomposition::from_terms(
        natural, corrective, mismatch,
    ))
}

/// Mutual information of the true model. A likelihood whose rows (over the
/// θ with positive mass) are all equal carries no information about θ, so
/// the result is exactly zero rather than a rounding residue.
fn natural_learning(p_true: &DiscreteDistribution, like_true: &LikelihoodModel) -> Result<f64> {
    let mut rows = p_true
        .masses()
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0.0)
        .map(|(i, _)| like_true.row(i));
    let first = rows.next();
    if rows.all(|r| Some(r) == first) {
        return Ok(0.0);
    }
    Ok(mutual_information(&joint_from(p_true, like_true)?))
}

fn mismatch_penalty(
    p_true: &DiscreteDistribution,
    like_true: &LikelihoodModel,
    like_inspector: &LikelihoodModel,
) -> f64 {
    let mut acc = Compensated::new();
    for (i, &w) in p_true.masses().iter().enumerate() {
        if w > 0.0 {
            acc.add(w * kl_slices(like_true.row(i), like_inspector.row(i)));
        }
    }
    acc.total()
}

/// Expected final fault `Σ_{x,θ} p_true(x,θ) log2(p_true(θ) / p_0(θ|x))`,
/// enumerated over every x.
///
/// Satisfies `fault = D_KL(p_true(Θ) ‖ p_0(Θ)) − total learning`. Because
/// the weights are the joint `p_true(x,θ)` it is not a mixture of KL
/// divergences and can be negative (with `p_0 = p_true` it equals `−I`).
pub fn expected_posterior_fault(
    p_true: &DiscreteDistribution,
    like_true: &LikelihoodModel,
    inspector_prior: &DiscreteDistribution,
    like_inspector: &LikelihoodModel,
) -> Result<f64> {
    check_models(p_true, like_true, inspector_prior, like_inspector)?;
    let n_theta = p_true.len();
    let mut acc = Compensated::new();
    let mut weights = alloc::vec![0.0; n_theta];
    for j in 0..like_true.x_support().len() {
        let mut evidence = Compensated::new();
        for (i, w) in weights.iter_mut().enumerate() {
            *w = inspector_prior.masses()[i] * like_inspector.get(i, j);
            evidence.add(*w);
        }
        let evidence = evidence.total();
        for i in 0..n_theta {
            let joint = p_true.masses()[i] * like_true.get(i, j);
            if joint == 0.0 {
                continue;
            }
            if evidence == 0.0 || weights[i] == 0.0 {
                return Ok(f64::INFINITY);
            }
            let post = weights[i] / evidence;
            acc.add(joint * (log2(p_true.masses()[i]) - log2(post)));
        }
    }
    Ok(acc.total())
}

/// Learning from step `k` (1-based) of a trajectory: realized learning from
/// belief `k − 1` to belief `k`, measured against `truth`.
///
/// Summed over all steps it telescopes to the learning from the prior to the
/// final posterior.
pub fn sequential_step_learning(
    truth: &DiscreteDistribution,
    trajectory: &BeliefTrajectory,
    k: usize,
) -> Result<f64> {
    if k == 0 || k > trajectory.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: trajectory.len(),
        });
    }
    let before = trajectory.belief(k - 1).ok_or(Error::IndexOutOfRange {
        index: k,
        len: trajectory.len(),
    })?;
    let after = trajectory.belief(k).ok_or(Error::IndexOutOfRange {
        index: k,
        len: trajectory.len(),
    })?;
    realized_learning(truth, before, after)
}

/// Expected learning from the first and the second of two conditionally
/// independent measurements, by enumeration over `(θ, x1, x2)`.
///
/// Step 1 is the class total; step 2 is
/// `Σ p_true(θ,x1,x2) log2(p_0(x2|θ) / p_0(x2|x1))`. Cost is
/// `O(|Θ|·|X|²)`, so this is meant for small enumerable models.
pub fn expected_step_learnings(
    p_true: &DiscreteDistribution,
    like_true: &LikelihoodModel,
    inspector_prior: &DiscreteDistribution,
    like_inspector: &LikelihoodModel,
) -> Result<[f64; 2]> {
    check_models(p_true, like_true, inspector_prior, like_inspector)?;
    let n_theta = p_true.len();
    let n_x = like_true.x_support().len();
    let p0_x1 = predictive(inspector_prior, like_inspector)?;

    let mut first = Compensated::new();
    let mut second = Compensated::new();
    let mut post = alloc::vec![0.0; n_theta];
    let mut pred2 = alloc::vec![0.0; n_x];
    for x1 in 0..n_x {
        let evidence = p0_x1.masses()[x1];
        let reachable = (0..n_theta).any(|i| p_true.masses()[i] * like_true.get(i, x1) > 0.0);
        if !reachable {
            continue;
        }
        if evidence == 0.0 {
            return Ok([f64::INFINITY, f64::NAN]);
        }
        for (i, p) in post.iter_mut().enumerate() {
            *p = inspector_prior.masses()[i] * like_inspector.get(i, x1) / evidence;
        }
        for (x2, slot) in pred2.iter_mut().enumerate() {
            let mut acc = Compensated::new();
            for (i, &p) in post.iter().enumerate() {
                acc.add(p * like_inspector.get(i, x2));
            }
            *slot = acc.total();
        }
        for i in 0..n_theta {
            let w1 = p_true.masses()[i] * like_true.get(i, x1);
            if w1 == 0.0 {
                continue;
            }
            first.add(w1 * (log2(like_inspector.get(i, x1)) - log2(evidence)));
            for x2 in 0..n_x {
                let w = w1 * like_true.get(i, x2);
                if w == 0.0 {
                    continue;
                }
                second.add(w * (log2(like_inspector.get(i, x2)) - log2(pred2[x2])));
            }
        }
    }
    Ok([first.total(), second.total()])
}

/// Entropy-reduction baseline `H(prior) − H(posterior)`; may be negative.
pub fn entropy_learning(prior: &DiscreteDistribution, posterior: &DiscreteDistribution) -> f64 {
    entropy_slice(prior.masses()) - entropy_slice(posterior.masses())
}

/// Fixed weights over a list of named properties.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilitySpec {
    properties: Vec<(String, f64)>,
}

impl UtilitySpec {
    pub fn new(properties: Vec<(String, f64)>) -> Result<Self> {
        for (index, &(_, weight)) in properties.iter().enumerate() {
            if !(weight >= 0.0 && weight.is_finite()) {
                return Err(Error::InvalidWeight { index, weight });
            }
        }
        Ok(Self { properties })
    }

    pub fn properties(&self) -> &[(String, f64)] {
        &self.properties
    }

    pub fn len(&self) -> usize {
        self.properties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.properties.is_empty()
    }
}

/// Weighted sum `Σ w_i · total_i`. Zero-weight properties are skipped, so
/// an infinite total with weight 0 does not turn the sum into NaN.
pub fn utility(spec: &UtilitySpec, decomps: &[LearningDecomposition]) -> Result<f64> {
    if spec.len() != decomps.len() {
        return Err(Error::LengthMismatch {
            left: spec.len(),
            right: decomps.len(),
        });
    }
    let mut acc = Compensated::new();
    for ((_, w), d) in spec.properties.iter().zip(decomps) {
        if *w != 0.0 {
            acc.add(w * d.total);
        }
    }
    Ok(acc.total())
}

/// Learning about hyperparameters (e.g. the `(M, S)` of the class
/// distribution) from data.
///
/// `per_hyper_predictives[h]` is `p_true(X | h)`. Natural learning is
/// `Σ_h p(h) D_KL(p(X|h) ‖ p_true(X))`, which is exactly zero for a point
/// mass on one hyperparameter value.
pub fn hyperparameter_learning(
    p_true_hyper: &DiscreteDistribution,
    per_hyper_predictives: &BTreeMap<i64, DiscreteDistribution>,
    inspector_predictive: &DiscreteDistribution,
) -> Result<LearningDecomposition> {
    let x_support = inspector_predictive.support();
    let mut active: Vec<(f64, &DiscreteDistribution)> = Vec::new();
    for (h, w) in p_true_hyper.iter() {
        let pred = per_hyper_predictives
            .get(&h)
            .ok_or(Error::LabelNotInSupport { label: h })?;
        if pred.support() != x_support {
            return Err(Error::SupportMismatch);
        }
        if w > 0.0 {
            active.push((w, pred));
        }
    }
    let mut acc = alloc::vec![Compensated::new(); x_support.len()];
    for &(w, pred) in &active {
        for (slot, &m) in acc.iter_mut().zip(pred.masses()) {
            slot.add(w * m);
        }
    }
    let true_x: Vec<f64> = acc.iter().map(Compensated::total).collect();

    let mut natural = Compensated::new();
    for &(w, pred) in &active {
        natural.add(w * kl_slices(pred.masses(), &true_x));
    }
    let corrective = kl_slices(&true_x, inspector_predictive.masses());
    Ok(LearningDecomposition::from_terms(
        natural.total(),
        corrective,
        0.0,
    ))
}
