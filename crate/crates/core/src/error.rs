use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mismatched primes: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("window error: |j| = {j} exceeds truncation radius {radius}")]
    Window { j: i64, radius: u32 },

    #[error("insufficient precision: need at least {required}, got {given}")]
    Precision { required: u32, given: u32 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
