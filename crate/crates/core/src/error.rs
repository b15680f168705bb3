use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus 0x{modulus:x} is not irreducible of degree {degree}")]
    NotIrreducible { modulus: u64, degree: u32 },
    #[error("extension degree {0} outside supported range 1..=24")]
    DegreeOutOfRange(u32),
    #[error("element {element} out of range for a field of order {order}")]
    ElementOutOfRange { element: u64, order: u64 },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("operation requires 0 not to be in the set")]
    ZeroInSet,
    #[error("set is not sum-free")]
    NotSumFree,
    #[error("set is not inverse-closed")]
    NotInverseClosed,
    #[error("operation requires a prime-order field")]
    PrimeFieldRequired,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed set file: {0}")]
    SetFormat(String),
    #[error("interval domain violation: {0}")]
    IntervalDomain(String),
    #[error("malformed claim: {0}")]
    BadClaim(String),
}

pub type Result<T> = std::result::Result<T, Error>;
