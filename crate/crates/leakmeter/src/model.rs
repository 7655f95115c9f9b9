//! JSON model files for `decompose` and utility specs for `utility`.
//!
//! A model file holds the class distribution, the inspector's prior and the
//! likelihood rows (one row per θ, one column per x):
//!
//! ```json
//! {
//!   "theta": [0, 1, 2],
//!   "x": [0, 1],
//!   "p_true": [0.2, 0.5, 0.3],
//!   "inspector_prior": [0.4, 0.4, 0.2],
//!   "like_true": [[0.9, 0.1], [0.5, 0.5], [0.2, 0.8]],
//!   "like_inspector": [[0.8, 0.2], [0.5, 0.5], [0.3, 0.7]]
//! }
//! ```
//!
//! `like_inspector` defaults to `like_true`. An optional `expected` object
//! holds reference values to check against.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use leakmeter_core::{
    class_decomposition, expected_posterior_fault, initial_fault, utility, DiscreteDistribution,
    LearningDecomposition, LikelihoodModel, UtilitySpec,
};
use serde::Deserialize;

use crate::error::CliError;

/// Agreement required between the fault identity's two sides, and between
/// computed and reference values.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub theta: Vec<i64>,
    pub x: Vec<i64>,
    pub p_true: Vec<f64>,
    pub inspector_prior: Vec<f64>,
    pub like_true: Vec<Vec<f64>>,
    #[serde(default)]
    pub like_inspector: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub natural: f64,
    pub corrective: f64,
    pub mismatch_penalty: f64,
    pub total: f64,
    pub initial_fault: f64,
    pub expected_posterior_fault: f64,
}

/// Validated models ready for the measures.
#[derive(Debug, Clone)]
pub struct Model {
    pub p_true: DiscreteDistribution,
    pub prior: DiscreteDistribution,
    pub like_true: LikelihoodModel,
    pub like_inspector: LikelihoodModel,
    pub expected: Option<Expected>,
}

impl ModelFile {
    pub fn build(self, path: &Path) -> Result<Model, CliError> {
        let bad =
            |field: &str, e: leakmeter_core::Error| CliError::config(path, format!("{field}: {e}"));
        let p_true = DiscreteDistribution::new(self.theta.clone(), self.p_true)
            .map_err(|e| bad("p_true", e))?;
        let prior = DiscreteDistribution::new(self.theta.clone(), self.inspector_prior)
            .map_err(|e| bad("inspector_prior", e))?;
        let like_true = LikelihoodModel::new(self.theta.clone(), self.x.clone(), &self.like_true)
            .map_err(|e| bad("like_true", e))?;
        let like_inspector = match self.like_inspector {
            Some(rows) => LikelihoodModel::new(self.theta, self.x, &rows)
                .map_err(|e| bad("like_inspector", e))?,
            None => like_true.clone(),
        };
        Ok(Model {
            p_true,
            prior,
            like_true,
            like_inspector,
            expected: self.expected,
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let file: ModelFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::config(path, e.to_string()))?;
    file.build(path)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeReport {
    pub terms: LearningDecomposition,
    pub initial_fault: f64,
    pub expected_posterior_fault: f64,
}

impl DecomposeReport {
    pub fn compute(model: &Model) -> Result<Self, CliError> {
        let terms = class_decomposition(
            &model.p_true,
            &model.like_true,
            &model.prior,
            &model.like_inspector,
        )?;
        Ok(Self {
            terms,
            initial_fault: initial_fault(&model.p_true, &model.prior)?,
            expected_posterior_fault: expected_posterior_fault(
                &model.p_true,
                &model.like_true,
                &model.prior,
                &model.like_inspector,
            )?,
        })
    }

    /// `fault + total = initial fault`. Infinite faults on both sides count
    /// as agreeing.
    pub fn fault_identity_holds(&self) -> bool {
        close(
            self.expected_posterior_fault + self.terms.total,
            self.initial_fault,
        )
    }

    /// Names of reference values that disagree with the computed ones.
    pub fn mismatches(&self, expected: &Expected) -> Vec<&'static str> {
        let pairs = [
            ("natural", self.terms.natural, expected.natural),
            ("corrective", self.terms.corrective, expected.corrective),
            (
                "mismatch_penalty",
                self.terms.mismatch_penalty,
                expected.mismatch_penalty,
            ),
            ("total", self.terms.total, expected.total),
            ("initial_fault", self.initial_fault, expected.initial_fault),
            (
                "expected_posterior_fault",
                self.expected_posterior_fault,
                expected.expected_posterior_fault,
            ),
        ];
        pairs
            .iter()
            .filter(|(_, a, b)| !close(*a, *b))
            .map(|(n, _, _)| *n)
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let rows = [
            ("natural", self.terms.natural),
            ("corrective", self.terms.corrective),
            ("mismatch_penalty", self.terms.mismatch_penalty),
            ("total", self.terms.total),
            ("initial_fault", self.initial_fault),
            ("expected_posterior_fault", self.expected_posterior_fault),
        ];
        for (name, v) in rows {
            let _ = writeln!(out, "{name:<26}{} bits", fmt_sig(v, 12));
        }
        out
    }
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= IDENTITY_TOLERANCE
}

/// `%g`-style formatting with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = format!("{v:.prec$e}", prec = digits - 1);
    let (mantissa, e) = exp.split_once('e').expect("exponent form");
    let e: i32 = e.parse().expect("integer exponent");
    if e < -5 || e >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{e}");
    }
    let decimals = (digits as i32 - 1 - e).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct UtilityFile {
    properties: Vec<PropertyEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropertyEntry {
    name: String,
    weight: f64,
    model: ModelRef,
}

/// A property's model, inline or as a path relative to the spec file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ModelRef {
    Path(PathBuf),
    Inline(Box<ModelFile>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityReport {
    /// `(name, weight, total learning)` per property.
    pub properties: Vec<(String, f64, f64)>,
    pub weighted_sum: f64,
}

impl UtilityReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, w, total) in &self.properties {
            let _ = writeln!(
                out,
                "{name:<24}weight {:<14}total {} bits",
                fmt_sig(*w, 12),
                fmt_sig(*total, 12)
            );
        }
        let _ = writeln!(
            out,
            "weighted_sum            {} bits",
            fmt_sig(self.weighted_sum, 12)
        );
        out
    }
}

pub fn compute_utility(path: &Path) -> Result<UtilityReport, CliError> {
    let file: UtilityFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::config(path, e.to_string()))?;
    let names: Vec<(String, f64)> = file
        .properties
        .iter()
        .map(|p| (p.name.clone(), p.weight))
        .collect();
    let spec =
        UtilitySpec::new(names.clone()).map_err(|e| CliError::config(path, e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut decomps = Vec::with_capacity(names.len());
    for entry in file.properties {
        let model = match entry.model {
            ModelRef::Path(p) => load_model(&base.join(p))?,
            ModelRef::Inline(m) => m.build(path)?,
        };
        decomps.push(class_decomposition(
            &model.p_true,
            &model.like_true,
            &model.prior,
            &model.like_inspector,
        )?);
    }
    let weighted_sum = utility(&spec, &decomps)?;
    let properties = names
        .into_iter()
        .zip(&decomps)
        .map(|((n, w), d)| (n, w, d.total))
        .collect();
    Ok(UtilityReport {
        properties,
        weighted_sum,
    })
}
