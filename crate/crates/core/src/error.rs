use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("period {period} exceeds the configured cap of {cap}")]
    PeriodLimitExceeded { period: usize, cap: usize },

    #[error("polynomial degree {degree} exceeds the configured cap of {cap}")]
    DegreeLimitExceeded { degree: usize, cap: usize },

    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("division by a value whose branch {branch} is identically zero (zero or zero divisor)")]
    ZeroBranchDivisor { branch: usize },

    #[error("eventual membership is not decidable: {0}")]
    UndecidableMembership(String),

    #[error("relation cannot decide a non-constant branch eventually: {0}")]
    UndecidableBranch(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("quantifier domain is not enumerable: {0}")]
    NonEnumerableDomain(String),

    #[error("argument leaves the domain: {0}")]
    DomainViolation(String),

    #[error("functions do not form a chain: {0}")]
    NotAChain(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("carrier is not enumerable: {0}")]
    NonEnumerableCarrier(String),

    #[error("enumeration of {requested} items exceeds the limit of {limit}")]
    SizeLimit { requested: u128, limit: u128 },

    #[error("not a virtual real: {0}")]
    NotAVirtualReal(String),

    #[error("malformed value: {0}")]
    Malformed(String),

    #[error("unknown name: {0}")]
    UnknownName(String),
}
