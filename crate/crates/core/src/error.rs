use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the graph substrate, the tiling engine and the oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown pattern `{0}` (expected k<t>, p<t>, c<t>, matching-<t> or a file)")]
    UnknownPattern(String),

    #[error("work estimate {estimate} exceeds budget {budget} for {what}")]
    BudgetExceeded {
        what: &'static str,
        estimate: u128,
        budget: u128,
    },

    #[error("{0} vertices exceeds the brute-force ceiling of {1}")]
    TooLarge(usize, usize),

    #[error("fixture mismatch: {}", .0.join(", "))]
    FixtureMismatch(Vec<String>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
