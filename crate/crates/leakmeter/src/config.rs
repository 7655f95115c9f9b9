//! Scenario config files: flat `key = value` lines under `[scenario]`,
//! `[key]` and `[output]`. Every key is optional. Values follow TOML
//! syntax, so strings are quoted.
//!
//! ```text
//! [scenario]
//! cases = 2000
//! measurements = 100
//! seed = 7
//!
//! [key]
//! mean = 20
//! sd = 15
//! resample = "warhead"
//!
//! [output]
//! dir = "runs/baseline"
//! ```

use std::path::{Path, PathBuf};

use leakmeter_core::{KeyConfig, KeyMode, ScenarioConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: ScenarioSection,
    pub key: KeySection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub mean: f64,
    pub sd: f64,
    pub theta_lo: i64,
    pub theta_hi: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_lo: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_hi: Option<i64>,
    pub x_max: u64,
    pub cases: usize,
    pub measurements: usize,
    pub seed: u64,
    pub span_fraction: f64,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        let d = ScenarioConfig::default();
        Self {
            mean: d.mean,
            sd: d.sd,
            theta_lo: d.theta_lo,
            theta_hi: d.theta_hi,
            prior_lo: None,
            prior_hi: None,
            x_max: d.x_max,
            cases: d.n_cases,
            measurements: d.n_measurements,
            seed: d.master_seed,
            span_fraction: d.span_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resample {
    #[default]
    Warhead,
    Measurement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KeySection {
    pub mean: f64,
    pub sd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_lo: Option<i64>,
    pub y_hi: i64,
    pub resample: Resample,
}

impl Default for KeySection {
    fn default() -> Self {
        let d = KeyConfig::default();
        Self {
            mean: d.mean,
            sd: d.sd,
            y_lo: d.y_lo,
            y_hi: d.y_hi,
            resample: Resample::Warhead,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Which experiment to run; decides whether `[key]` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Baseline,
    SecretKey,
}

impl RunKind {
    pub fn name(self) -> &'static str {
        match self {
            RunKind::Baseline => "baseline",
            RunKind::SecretKey => "secret-key",
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| CliError::config(path, e.to_string()))
    }

    /// Core configuration for a run. Baseline runs ignore `[key]`.
    pub fn scenario_config(&self, kind: RunKind) -> ScenarioConfig {
        let s = &self.scenario;
        let prior_limits = match (s.prior_lo, s.prior_hi) {
            (None, None) => None,
            (lo, hi) => Some((lo.unwrap_or(s.theta_lo), hi.unwrap_or(s.theta_hi))),
        };
        let key = match kind {
            RunKind::Baseline => None,
            RunKind::SecretKey => Some(KeyConfig {
                mean: self.key.mean,
                sd: self.key.sd,
                y_lo: self.key.y_lo,
                y_hi: self.key.y_hi,
                mode: match self.key.resample {
                    Resample::Warhead => KeyMode::PerWarhead,
                    Resample::Measurement => KeyMode::PerMeasurement,
                },
            }),
        };
        ScenarioConfig {
            mean: s.mean,
            sd: s.sd,
            theta_lo: s.theta_lo,
            theta_hi: s.theta_hi,
            prior_limits,
            x_max: s.x_max,
            n_cases: s.cases,
            n_measurements: s.measurements,
            key,
            master_seed: s.seed,
            span_fraction: s.span_fraction,
        }
    }
}
