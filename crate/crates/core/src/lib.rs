//! KL-divergence learning measures for verification-protocol privacy.
//!
//! The crate models what an inspector learns about a secret property `Θ`
//! from measured data `X`. Learning is the drop in the KL divergence between
//! the true distribution of `Θ` and the inspector's belief, and its class
//! average splits into
//!
//! | Term | Quantity |
//! |------|----------|
//! | natural learning | `I(p_true(Θ); p_true(X))` |
//! | corrective learning | `D_KL(p_true(X) ‖ p_0(X))` |
//! | mismatch penalty | `E_θ D_KL(p_true(X|θ) ‖ p_0(X|θ))` (wrong likelihood only) |
//!
//! Everything is discrete: `Θ` lives on an integer grid, `X` on a truncated
//! count grid, and all divergences are reported in bits.
//!
//! Modules:
//!
//! - [`dist`], [`info`], [`models`], [`sample`]: probability primitives
//! - [`bayes`]: sequential belief updates, MAP estimates, credible spans
//! - [`measures`]: realized/expected learning and its decompositions
//! - [`stats`], [`scenario`]: Monte Carlo replication of the Poisson
//!   examples with per-step aggregates and correlations
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the worker
//! pool and the command line live in the `leakmeter` crate.

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications, missing_copy_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bayes;
pub mod dist;
mod error;
pub mod info;
pub mod measures;
pub mod models;
pub mod sample;
pub mod scenario;
pub mod stats;
mod sum;

pub use bayes::{
    argmax_first, credible_span, map_estimate, posterior_update, predictive, run_sequence,
    BeliefTrajectory, MapEstimate,
};
pub use dist::{joint_from, normalize, DiscreteDistribution, JointDistribution, LikelihoodModel};
pub use error::{Error, Result};
pub use info::{kl_divergence, mutual_information, shannon_entropy};
pub use measures::{
    class_decomposition, entropy_learning, expected_learning_single, expected_posterior_fault,
    expected_step_learnings, hyperparameter_learning, initial_fault, realized_learning,
    sequential_step_learning, utility, LearningDecomposition, UtilitySpec,
};
pub use models::{discretize_normal, keyed_poisson_likelihood, poisson_likelihood, poisson_pmf};
pub use sample::{sample, uniform01};
pub use scenario::{
    case_stream, run_baseline, run_secret_key, CaseMeasures, KeyConfig, KeyMode, Scenario,
    ScenarioConfig, SimulationResult,
};
pub use stats::{aggregate, lower_median, pearson, Aggregates, Correlations};
pub use sum::Compensated;
