use thiserror::Error;

use crate::exact::linalg::SolveError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stratum signature: {0}")]
    InvalidSignature(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("series known to {available} terms, {requested} requested")]
    Precision { requested: usize, available: usize },

    #[error("series with zero constant term is not invertible")]
    NotInvertible,

    #[error("size mismatch: partition of {partition}, class of {class}")]
    SizeMismatch { partition: u32, class: u32 },

    #[error("cannot pad class of size {core} to {target} with {pad}-cycles")]
    Padding { core: u32, target: u32, pad: u32 },

    #[error("odd partition size {0} has no bracket weight")]
    OddSize(u32),

    #[error("unsupported Eisenstein weight {0}")]
    UnsupportedWeight(u32),

    #[error("linear solve failed: {0}")]
    Solve(#[from] SolveError),

    #[error("fit needs {needed} coefficients, series has {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("fit inconsistent at coefficient {row} (weight cap {cap})")]
    InconsistentFit { row: usize, cap: u32 },

    #[error("weight {weight} exceeds configured cap {cap}")]
    WeightAboveCap { weight: u32, cap: u32 },

    #[error("no closed form applies to {0}")]
    ClosedFormInapplicable(String),

    #[error("pole of order {order} survives (expected at most {dim})")]
    ExcessPole { order: i32, dim: u32 },

    #[error("volume is not a single power of π: {0}")]
    NotMonomial(String),

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("table error at line {line}: {msg}")]
    Table { line: usize, msg: String },

    #[error("{0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
