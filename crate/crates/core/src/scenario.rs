//! Monte Carlo replication of the Poisson counting examples.
//!
//! Each case draws a true `θ*` from the discretized Normal(M, S) class
//! distribution, then takes `n_measurements` Poisson counts with rate `θ*`
//! (baseline) or `θ* + y` for a secret key offset `y` (secret-key run). The
//! inspector starts from a uniform prior and updates with either the true
//! Poisson likelihood or the key-marginalized one.
//!
//! Cases are independent: case `i` draws only from
//! [`case_stream`]`(master_seed, i)`, so results do not depend on execution
//! order or worker count.

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::bayes::{argmax_first, span_around};
use crate::dist::{integer_grid, DiscreteDistribution, LikelihoodModel};
use crate::error::{Error, Result};
use crate::info::{entropy_slice, kl_divergence};
use crate::models::{discretize_normal, keyed_poisson_likelihood, poisson_likelihood};
use crate::sample::Cdf;
use crate::stats::{aggregate, Aggregates, Correlations};
use crate::sum::{csum, Compensated};

const LN_2: f64 = core::f64::consts::LN_2;

/// When the secret key offset is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyMode {
    /// One offset per case, shared by all of its measurements.
    #[default]
    PerWarhead,
    /// A fresh offset for every measurement.
    PerMeasurement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyConfig {
    pub mean: f64,
    pub sd: f64,
    /// Lowest key offset; `None` means `-(theta_lo - 1)` so every rate is
    /// at least 1.
    pub y_lo: Option<i64>,
    pub y_hi: i64,
    pub mode: KeyMode,
}

impl Default for KeyConfig {
    fn default() -> Self {
        Self {
            mean: 20.0,
            sd: 15.0,
            y_lo: None,
            y_hi: 80,
            mode: KeyMode::PerWarhead,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    /// Class mean `M`.
    pub mean: f64,
    /// Class standard deviation `S`.
    pub sd: f64,
    pub theta_lo: i64,
    pub theta_hi: i64,
    /// Inspector's uniform prior limits; `None` covers the whole grid.
    pub prior_limits: Option<(i64, i64)>,
    pub x_max: u64,
    pub n_cases: usize,
    pub n_measurements: usize,
    pub key: Option<KeyConfig>,
    pub master_seed: u64,
    pub span_fraction: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            mean: 40.0,
            sd: 7.0,
            theta_lo: 1,
            theta_hi: 120,
            prior_limits: None,
            x_max: 400,
            n_cases: 10_000,
            n_measurements: 100,
            key: None,
            master_seed: 1,
            span_fraction: 0.3,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_lo >= self.theta_hi {
            return Err(Error::InvalidConfig("theta_lo must be below theta_hi"));
        }
        if self.theta_lo < 1 {
            return Err(Error::InvalidConfig(
                "theta_lo must be at least 1 (Poisson rates are positive)",
            ));
        }
        if !(self.sd > 0.0 && self.sd.is_finite()) || !self.mean.is_finite() {
            return Err(Error::InvalidConfig("mean must be finite and sd positive"));
        }
        if let Some((lo, hi)) = self.prior_limits {
            if lo > hi {
                return Err(Error::InvalidConfig("prior_lo must not exceed prior_hi"));
            }
            if lo < self.theta_lo || hi > self.theta_hi {
                return Err(Error::InvalidConfig(
                    "prior limits must lie inside the theta grid",
                ));
            }
        }
        if self.n_cases == 0 {
            return Err(Error::InvalidConfig("cases must be at least 1"));
        }
        if !(self.span_fraction > 0.0 && self.span_fraction < 1.0) {
            return Err(Error::InvalidConfig("span_fraction must lie in (0, 1)"));
        }
        if let Some(key) = &self.key {
            if !(key.sd > 0.0 && key.sd.is_finite()) || !key.mean.is_finite() {
                return Err(Error::InvalidConfig(
                    "key mean must be finite and key sd positive",
                ));
            }
            if self.key_lo() > key.y_hi {
                return Err(Error::InvalidConfig("key y_lo must not exceed y_hi"));
            }
        }
        Ok(())
    }

    fn key_lo(&self) -> i64 {
        self.key
            .as_ref()
            .and_then(|k| k.y_lo)
            .unwrap_or(-(self.theta_lo - 1))
    }

    pub fn prior_range(&self) -> (i64, i64) {
        self.prior_limits.unwrap_or((self.theta_lo, self.theta_hi))
    }
}

/// Per-step series for one simulated case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseMeasures {
    pub case_id: usize,
    pub theta_star: i64,
    pub observations: Vec<i64>,
    /// Cumulative `log2(p_n(θ*) / p_0(θ*))`.
    pub kl_learning: Vec<f64>,
    /// Cumulative `H(p_0) − H(p_n)`.
    pub entropy_learning: Vec<f64>,
    pub map_error: Vec<u64>,
    pub span30: Vec<i64>,
    /// Set where `kl_learning` is not finite (prior or posterior excludes
    /// `θ*`).
    pub infinite: Vec<bool>,
}

impl CaseMeasures {
    pub fn steps(&self) -> usize {
        self.kl_learning.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub per_case: Vec<CaseMeasures>,
    pub aggregates: Aggregates,
    pub correlations: Correlations,
    /// Cases with at least one infinite-flagged step.
    pub infinite_cases: usize,
    /// `H(p_0)` of the inspector prior.
    pub prior_entropy: f64,
    /// `D_KL(p_true(Θ) ‖ p_0(Θ))` for the class.
    pub class_initial_fault: f64,
}

/// Independent random stream for one case.
pub fn case_stream(master_seed: u64, case_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(case_index);
    rng
}

#[derive(Debug, Clone)]
struct Key {
    dist: DiscreteDistribution,
    cdf: Cdf,
    mode: KeyMode,
}

/// A validated configuration with every model matrix built once and shared
/// read-only by all cases.
#[derive(Debug, Clone)]
pub struct Scenario {
    config: ScenarioConfig,
    theta: Vec<i64>,
    truth: DiscreteDistribution,
    truth_cdf: Cdf,
    prior: DiscreteDistribution,
    log_prior: Vec<f64>,
    prior_entropy: f64,
    inspector: LikelihoodModel,
    /// `ln p_0(x|θ)` stored x-major so one observation is one contiguous slice.
    log_like_by_x: Vec<f64>,
    rate_lo: i64,
    rate_cdfs: Vec<Cdf>,
    key: Option<Key>,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let theta = integer_grid(config.theta_lo, config.theta_hi);
        let truth = discretize_normal(config.mean, config.sd, &theta)?;
        let truth_cdf = Cdf::new(truth.masses());

        let (plo, phi) = config.prior_range();
        let prior_weights = theta
            .iter()
            .map(|&t| if (plo..=phi).contains(&t) { 1.0 } else { 0.0 })
            .collect();
        let prior = DiscreteDistribution::new(theta.clone(), prior_weights)?;
        let log_prior = prior.masses().iter().map(|&m| libm::log(m)).collect();
        let prior_entropy = entropy_slice(prior.masses());

        let (inspector, key, rate_lo, rate_hi) = match &config.key {
            None => {
                let like = poisson_likelihood(&theta, config.x_max)?;
                (like, None, config.theta_lo, config.theta_hi)
            }
            Some(k) => {
                let y_lo = config.key_lo();
                if config.theta_lo + y_lo < 1 {
                    return Err(Error::NonPositiveRate {
                        rate: (config.theta_lo + y_lo) as f64,
                    });
                }
                let dist = discretize_normal(k.mean, k.sd, &integer_grid(y_lo, k.y_hi))?;
                let like = keyed_poisson_likelihood(&theta, &dist, config.x_max)?;
                let cdf = Cdf::new(dist.masses());
                let key = Key {
                    dist,
                    cdf,
                    mode: k.mode,
                };
                (
                    like,
                    Some(key),
                    config.theta_lo + y_lo,
                    config.theta_hi + k.y_hi,
                )
            }
        };
        let rates = integer_grid(rate_lo, rate_hi);
        let generator = poisson_likelihood(&rates, config.x_max)?;
        let rate_cdfs = generator.rows().map(Cdf::new).collect();

        let n_theta = theta.len();
        let n_x = inspector.x_support().len();
        let mut log_like_by_x = alloc::vec![0.0; n_theta * n_x];
        for (i, row) in inspector.rows().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                log_like_by_x[j * n_theta + i] = libm::log(l);
            }
        }

        Ok(Self {
            config,
            theta,
            truth,
            truth_cdf,
            prior,
            log_prior,
            prior_entropy,
            inspector,
            log_like_by_x,
            rate_lo,
            rate_cdfs,
            key,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    /// Class distribution `p_true(Θ)`.
    pub fn truth(&self) -> &DiscreteDistribution {
        &self.truth
    }

    pub fn prior(&self) -> &DiscreteDistribution {
        &self.prior
    }

    /// Likelihood the inspector updates with.
    pub fn inspector_likelihood(&self) -> &LikelihoodModel {
        &self.inspector
    }

    pub fn key_distribution(&self) -> Option<&DiscreteDistribution> {
        self.key.as_ref().map(|k| &k.dist)
    }

    /// Simulates case `case_index` from its own stream.
    pub fn simulate_case(&self, case_index: usize) -> Result<CaseMeasures> {
        let n = self.config.n_measurements;
        let n_theta = self.theta.len();
        let mut rng = case_stream(self.config.master_seed, case_index as u64);

        let star = self.truth_cdf.draw(&mut rng);
        let theta_star = self.theta[star];
        let fixed_y = match &self.key {
            Some(k) if k.mode == KeyMode::PerWarhead => {
                Some(k.dist.support()[k.cdf.draw(&mut rng)])
            }
            _ => None,
        };

        let mut out = CaseMeasures {
            case_id: case_index,
            theta_star,
            observations: Vec::with_capacity(n),
            kl_learning: Vec::with_capacity(n),
            entropy_learning: Vec::with_capacity(n),
            map_error: Vec::with_capacity(n),
            span30: Vec::with_capacity(n),
            infinite: Vec::with_capacity(n),
        };

        let prior_star = self.log_prior[star];
        let mut log_post = self.log_prior.clone();
        let mut masses = alloc::vec![0.0; n_theta];
        for step in 1..=n {
            let y = match &self.key {
                None => 0,
                Some(k) => match fixed_y {
                    Some(y) => y,
                    None => k.dist.support()[k.cdf.draw(&mut rng)],
                },
            };
            let rate = theta_star + y;
            let x = self.rate_cdfs[(rate - self.rate_lo) as usize].draw(&mut rng);
            out.observations.push(x as i64);

            let column = &self.log_like_by_x[x * n_theta..(x + 1) * n_theta];
            for (lp, &ll) in log_post.iter_mut().zip(column) {
                *lp += ll;
            }
            let peak = log_post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if peak == f64::NEG_INFINITY {
                return Err(Error::ZeroPredictive {
                    x: x as i64,
                    step: Some(step),
                });
            }
            for (m, &lp) in masses.iter_mut().zip(&log_post) {
                *m = libm::exp(lp - peak);
            }
            let z = csum(masses.iter().copied());
            let shift = peak + libm::log(z);
            for (m, lp) in masses.iter_mut().zip(log_post.iter_mut()) {
                *m /= z;
                *lp -= shift;
            }

            let kl = if prior_star == f64::NEG_INFINITY {
                f64::NAN
            } else {
                (log_post[star] - prior_star) / LN_2
            };
            let mut h = Compensated::new();
            for (&m, &lp) in masses.iter().zip(&log_post) {
                if m > 0.0 {
                    h.add(m * lp);
                }
            }
            let entropy = -h.total() / LN_2;
            let hat = argmax_first(&log_post);

            out.infinite.push(!kl.is_finite());
            out.kl_learning.push(kl);
            out.entropy_learning.push(self.prior_entropy - entropy);
            out.map_error.push(self.theta[hat].abs_diff(theta_star));
            out.span30.push(span_around(
                &self.theta,
                &masses,
                hat,
                self.config.span_fraction,
            ));
        }
        Ok(out)
    }

    /// Aggregates cases that were simulated in any order; they are sorted
    /// into case-index order first.
    pub fn summarize(&self, mut per_case: Vec<CaseMeasures>) -> Result<SimulationResult> {
        per_case.sort_by_key(|c| c.case_id);
        let (aggregates, correlations, infinite_cases) = aggregate(&per_case)?;
        Ok(SimulationResult {
            per_case,
            aggregates,
            correlations,
            infinite_cases,
            prior_entropy: self.prior_entropy,
            class_initial_fault: kl_divergence(&self.truth, &self.prior)?,
        })
    }

    /// Runs every case on the current thread.
    pub fn run(&self) -> Result<SimulationResult> {
        let cases = (0..self.config.n_cases)
            .map(|i| self.simulate_case(i))
            .collect::<Result<Vec<_>>>()?;
        self.summarize(cases)
    }
}

/// Baseline run: the inspector knows the true Poisson likelihood.
pub fn run_baseline(config: ScenarioConfig) -> Result<SimulationResult> {
    if config.key.is_some() {
        return Err(Error::InvalidConfig(
            "baseline run must not configure a key",
        ));
    }
    Scenario::new(config)?.run()
}

/// Secret-key run: counts carry a key offset the inspector only knows in
/// distribution.
pub fn run_secret_key(config: ScenarioConfig) -> Result<SimulationResult> {
    if config.key.is_none() {
        return Err(Error::InvalidConfig(
            "secret-key run needs a key configuration",
        ));
    }
    Scenario::new(config)?.run()
}
