use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("circulant element is not invertible")]
    SingularElement,

    #[error("block-circulant matrix is singular")]
    SingularMatrix,

    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    #[error("generation failed: {0}")]
    GenerationFailure(String),

    #[error("decoding failed after {iterations} iterations")]
    DecodeFailure { iterations: usize },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
