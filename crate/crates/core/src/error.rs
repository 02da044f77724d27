//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input line; carries the 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A node id was not found in the graph or id map.
    #[error("unknown node: {0}")]
    UnknownNode(String),

    /// An argument violated an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A statistical routine could not produce a meaningful result.
    #[error("statistics error: {0}")]
    Statistics(String),

    /// A cumulative curve has no usable awakening/peak pair. Callers that
    /// aggregate over many curves treat this as "omit the curve", not as a
    /// failure.
    #[error("no burst detected: {0}")]
    NoBurst(&'static str),

    /// The requested tie-strength metric cannot be used for this operation.
    #[error("unsupported metric: {0}")]
    UnsupportedMetric(String),

    /// A cached/serialized artifact had an unexpected layout or version.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn is_no_burst(&self) -> bool {
        matches!(self, Error::NoBurst(_))
    }
}
