use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring context mismatch: {0} vs {1}")]
    CtxMismatch(String, String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("matrix is not invertible over the truncated ring")]
    NotInvertible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point does not belong to this standard group: {0}")]
    GroupMismatch(String),
    #[error("fixed-point inversion did not converge after {0} passes")]
    NonConvergence(usize),
    #[error("value {value} outside range {range}")]
    OutOfRange { value: String, range: String },
    #[error("family {0} has no defining bilinear form")]
    NoForm(String),
    #[error("matrix is not in the tangent space of {0}")]
    NotTangent(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("specs are not nested: {0}")]
    NotNested(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
