use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("all masses are zero")]
    AllZero,

    #[error("negative mass {value} at index {index}")]
    NegativeMass { index: usize, value: f64 },

    #[error("non-finite mass at index {index}")]
    NonFiniteMass { index: usize },

    #[error("support labels must be strictly increasing (index {index})")]
    UnsortedSupport { index: usize },

    #[error("support has {labels} labels but {masses} masses")]
    ShapeMismatch { labels: usize, masses: usize },

    #[error("supports do not match")]
    SupportMismatch,

    #[error("grid is empty")]
    EmptyGrid,

    #[error("standard deviation must be positive and finite, got {0}")]
    InvalidSpread(f64),

    #[error("Poisson rate must be positive, got {rate}")]
    NonPositiveRate { rate: f64 },

    #[error("truncated Poisson tail mass {tail:e} at rate {rate} exceeds 1e-12; raise x_max")]
    TailMassTooLarge { rate: f64, tail: f64 },

    #[error("masses sum to {sum}, not 1 within 1e-12")]
    NotNormalized { sum: f64 },

    #[error("label {label} is not in the support")]
    LabelNotInSupport { label: i64 },

    #[error("learning is indeterminate: prior and posterior both exclude a true label")]
    IndeterminateLearning,

    #[error("observation {x} has zero predictive mass{}", step_suffix(*.step))]
    ZeroPredictive { x: i64, step: Option<usize> },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("mass fraction must lie in (0, 1), got {0}")]
    InvalidFraction(f64),

    #[error("weight {weight} at index {index} is negative or non-finite")]
    InvalidWeight { index: usize, weight: f64 },

    #[error("correlation undefined: zero variance or too few points")]
    UndefinedCorrelation,

    #[error("input is empty")]
    EmptyInput,

    #[error("invalid scenario configuration: {0}")]
    InvalidConfig(&'static str),
}

fn step_suffix(step: Option<usize>) -> alloc::string::String {
    match step {
        Some(s) => alloc::format!(" at step {s}"),
        None => alloc::string::String::new(),
    }
}

pub type Result<T> = core::result::Result<T, Error>;
