use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed tables: {0}")]
    MalformedTables(String),
    #[error("carrier of size {0} is not supported (allowed: 2..=64)")]
    CarrierSize(usize),
    #[error("operation is undefined on the empty set")]
    EmptyArgument,
    #[error("the join-closed set already meets the filter")]
    Overlap,
    #[error("filter is not part of this filter lattice")]
    UnknownFilter,
    #[error("filter is not a member of this family")]
    UnknownMember,
    #[error("the filter must be proper")]
    ImproperFilter,
    #[error("n = {0} is outside the admissible range")]
    BadN(usize),
    #[error("filter is not a minimal prime over the base filter")]
    NotMinimalPrime,
    #[error("minimal primes must be pairwise distinct")]
    DuplicatePrime,
    #[error("exhaustive search found no witness")]
    SearchExhausted,
    #[error("size {0} is outside the supported search range 2..=6")]
    SizeOutOfRange(usize),
    #[error("invalid base lattice: {0}")]
    InvalidBaseLattice(String),
}

pub type Result<T> = std::result::Result<T, Error>;
