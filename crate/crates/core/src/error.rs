use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fitness evaluation budget exhausted ({limit} evaluations)")]
    BudgetExhausted { limit: u64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("gene {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("unknown benchmark function `{0}`")]
    UnknownFunction(String),

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("hybrid operator needs at least {required} participants, got {actual}")]
    TooFewParticipants { required: usize, actual: usize },

    #[error("energy redistribution needs at least one participant")]
    EmptyParticipants,

    #[error("non-finite fitness {0} in energy redistribution")]
    NonFiniteFitness(f64),

    #[error("{0} is not implemented")]
    NotImplemented(&'static str),

    #[error("invalid rule `{rule}`: {reason}")]
    InvalidRule { rule: String, reason: String },

    #[error("statistic requires a non-empty input")]
    EmptyInput,

    #[error("{0}")]
    InvalidInput(String),

    #[error("unknown preset `{0}` (expected emas, hemas1, hemas2 or hemas3)")]
    UnknownPreset(String),

    #[error("invalid config at `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("campaigns cover different instances: {0}")]
    MixedInstances(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors caused by a bad configuration rather than by running it.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig { .. }
                | Error::UnknownPreset(_)
                | Error::UnknownFunction(_)
                | Error::InvalidDimension(_)
                | Error::InvalidRule { .. }
        )
    }

    /// Process exit status: 2 for configuration errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        if self.is_config_error() {
            2
        } else {
            1
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
