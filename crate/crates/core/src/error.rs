use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by the IVT library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radix {0} is outside the supported range 2..=16")]
    InvalidRadix(u32),

    #[error("digit {digit} at position {position} is not valid in base {radix}")]
    DigitRange {
        digit: u32,
        position: usize,
        radix: u8,
    },

    #[error("zero has no most significant digit")]
    NoMsd,

    #[error("cannot parse {input:?} as a base-{radix} digit string: {reason}")]
    Parse {
        input: String,
        radix: u8,
        reason: String,
    },

    #[error("rule index {index} is out of range for base {radix} (must be < {radix}^{radix})")]
    RuleRange { index: BigUint, radix: u8 },

    #[error("rule map has {len} entries, base {radix} needs exactly {radix}")]
    RuleLength { len: usize, radix: u8 },

    #[error("exhaustive rule enumeration is limited to bases 2..=6, got {0}")]
    CensusRange(u8),

    #[error("rule {index} (base {radix}) is not a bijective Collatz-like rule")]
    NotCollatzBijective { index: BigUint, radix: u8 },

    #[error("trajectory from {start} did not reach 0 within {cap} steps")]
    NonConvergent { start: BigUint, cap: usize },

    #[error("0 has no p-th pre-image under this construction")]
    NoPreimageOfZero,

    #[error("address {0} is produced twice while building the network")]
    DesignCollision(BigUint),

    #[error("design failed validation: {0}")]
    ValidationFailed(String),

    #[error("source address {0} is not a node of the design")]
    UnknownSource(BigUint),

    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
