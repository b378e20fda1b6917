use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("non-positive price {value} at index {index}; log returns are undefined")]
    NonPositivePrice { index: usize, value: f64 },

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("lag {tau} is not smaller than series length {len}")]
    TauTooLarge { tau: usize, len: usize },

    #[error("structure function K_q(tau) is not positive at tau = {tau} (q = {q})")]
    NonPositiveStructureFunction { q: f64, tau: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("circulant embedding is not non-negative definite (min eigenvalue {min_eigenvalue:e})")]
    EmbeddingFailure { min_eigenvalue: f64 },

    #[error("AR polynomial is not stationary: {0}")]
    NonStationaryAr(String),

    #[error("identity test undefined: both standard deviations are zero")]
    DegenerateVariance,

    #[error("ensemble report has no shuffled block")]
    MissingShuffledBlock,

    #[error("empirical data missing: {0}")]
    MissingEmpiricalData(String),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("input contains no data rows")]
    EmptySeries,

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("config key `{key}`: cannot interpret `{value}` ({expected})")]
    Type {
        key: String,
        value: String,
        expected: &'static str,
    },

    #[error("missing required config key `{0}`")]
    MissingKey(String),

    #[error("path {index}: {source}")]
    Path {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_path(self, index: usize) -> Self {
        Error::Path {
            index,
            source: Box::new(self),
        }
    }
}
