use thiserror::Error;

use crate::setcore::KSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// `line` is 1-based; `None` when the source has no line structure (JSON validation).
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    /// A hypothesis the caller asked to be verified does not hold.
    #[error("hypothesis violated: {what}")]
    Hypothesis { what: String, witness: Vec<KSet> },

    #[error("search budget exhausted")]
    BudgetExceeded,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn parse_err<T>(line: Option<usize>, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: msg.into(),
    })
}
