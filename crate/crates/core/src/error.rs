use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weight of player {player} must be positive and finite, got {value}")]
    InvalidWeight { player: usize, value: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("hypothesis class is empty")]
    EmptyClass,

    #[error("cannot form a plurality of zero hypotheses")]
    EmptyPlurality,

    #[error("sample ledger records no draws")]
    EmptyLedger,

    #[error("exact errors need point-mass distributions for every player")]
    ExactErrorUnavailable,

    #[error("partition produced an empty part (part {part})")]
    EmptyPart { part: usize },

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("row {row}, column `{column}`: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Accuracy parameters live in `(0, 1]`; `1` is the vacuous threshold.
pub(crate) fn check_epsilon(value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "epsilon",
            value,
            reason: "must lie in (0, 1]",
        })
    }
}

/// Checks `value` lies in the open unit interval.
pub(crate) fn check_unit_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            reason: "must lie in (0, 1)",
        })
    }
}
