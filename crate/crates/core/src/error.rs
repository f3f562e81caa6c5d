use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HappyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An exhaustive method would exceed its configured work budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The caller handed over data that breaks an operation's precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A solver or reduction produced something it should never produce.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(String),
}

impl HappyError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        HappyError::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        HappyError::InvalidArgument(message.into())
    }
}

impl From<std::io::Error> for HappyError {
    fn from(e: std::io::Error) -> Self {
        HappyError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HappyError>;
