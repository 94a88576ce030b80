use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Variants fall in two families that the CLI maps to distinct exit codes:
/// invalid input (`Invalid*`, `DimensionMismatch`, `Parse`) and computational
/// limits (`Capacity`, `Numerical`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("particle count must be at least {min}, got {n}")]
    InvalidParticleCount { n: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid settings: {0}")]
    InvalidSettings(String),

    #[error("invalid sign tensor: {0}")]
    InvalidTensor(String),

    #[error("invalid correlation data: {0}")]
    InvalidCorrelation(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("invalid response assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("capacity exceeded: {what} requires {required}, limit is {limit}")]
    Capacity {
        what: &'static str,
        required: String,
        limit: String,
    },

    #[error("numerical fault: {0}")]
    Numerical(String),

    #[error("malformed document: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a
    /// computational limit.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Capacity { .. } | Error::Numerical(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
