use thiserror::Error;

use crate::monoid::Flavor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("{flavor} monoid with n = {n} strands is outside the supported range 2..={max}")]
    UnsupportedSize { flavor: Flavor, n: usize, max: usize },

    #[error("unknown token {token:?} at position {position}")]
    UnknownToken { position: usize, token: String },

    #[error("generator index out of range at position {position}: {detail}")]
    IndexOutOfRange { position: usize, detail: String },

    #[error("malformed generator pair at position {position}: {detail}")]
    MalformedPair { position: usize, detail: String },

    #[error("generator {generator} does not left-divide the simple braid")]
    NotLeftDivisor { generator: String },

    #[error("operands belong to different monoids ({left} vs {right})")]
    SpecMismatch { left: String, right: String },

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("computation guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, BraidError>;
