use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by loaders, model fitting, and pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: parse error: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: duplicate observation for ({coin}, {timestamp})")]
    DuplicateObservation {
        path: PathBuf,
        line: usize,
        coin: String,
        timestamp: i64,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("degenerate corpus: no terms survive document-frequency filtering")]
    DegenerateCorpus,

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("unpriced attempt: no target price for {coin} at {anchor}")]
    UnpricedAttempt { coin: String, anchor: i64 },

    #[error("market gap: {0}")]
    MarketGap(String),

    #[error("segment gap: coin {coin} not covered on [{from}, {to}]")]
    SegmentGap { coin: String, from: i64, to: i64 },

    #[error("offset mismatch between segments")]
    OffsetMismatch,

    #[error("extent too small: need span > {need} seconds, have {have}")]
    ExtentTooSmall { need: i64, have: i64 },

    #[error("power iteration did not converge after {iters} iterations (residual {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("non-finite objective at iteration {0}")]
    NonFiniteObjective(usize),

    #[error("infeasible schedule: {0}")]
    InfeasibleSchedule(String),

    #[error("invalid model file {path}: {msg}")]
    InvalidModel { path: PathBuf, msg: String },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code classification: validation errors exit 1, data errors exit 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) => 1,
            _ => 2,
        }
    }
}
