use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid base p = {0}: p must be odd with 3 <= p < 2^62")]
    InvalidBase(u64),

    #[error("n must be a positive integer")]
    NonPositive,

    #[error("anchor set does not cover {target}: no sub-multiset sums to it")]
    Coverage { target: u64 },

    #[error("invalid anchor set: {0}")]
    InvalidAnchor(String),

    #[error("inadmissible chain: {0}")]
    Inadmissible(#[from] crate::chain::ChainViolation),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("window of {size} elements exceeds the enumeration budget of 2^{limit}")]
    Budget { size: usize, limit: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
