use thiserror::Error;

/// Errors raised by the library. Every variant names the precondition that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("not reflectable: {0}")]
    NotReflectable(String),

    #[error("not semistable: {0}")]
    NotSemistable(String),

    #[error("pencil not in chart: support curve vanishes identically")]
    NotInChart,

    #[error("depth exhausted after {0} levels")]
    DepthExhausted(usize),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("twist {0} outside supported range")]
    TwistOutOfRange(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}
