use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A documented precondition of the operation does not hold for the input.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input is legal but larger than an exhaustive method is allowed to handle.
    #[error("size guard exceeded: {0}")]
    Guard(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
