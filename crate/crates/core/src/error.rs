use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),
    /// A cochain complex whose differential does not square to zero.
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    /// The filtration declared for a perturbation does not certify termination.
    #[error("certification error: {0}")]
    Certification(String),
    /// Malformed algebra file.
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// An identity that holds by theorem failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Machine readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::InvalidComplex(_) => "invalid-complex",
            Error::Certification(_) => "certification",
            Error::Syntax { .. } => "syntax",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
