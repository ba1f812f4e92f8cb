use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity {arity} exceeds the cap {cap}")]
    ArityCap { arity: usize, cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("evaluation does not converge: {0}")]
    NonConvergent(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("relations are not stable under the symmetric group")]
    RelationsNotStable,
    #[error("law check failed: {0}")]
    LawFailure(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("operad is not primitively generated (witness arity {arity}, degree {degree})")]
    NotPrimitivelyGenerated { arity: usize, degree: i32 },
    #[error("algebra is not connected: {0}")]
    NotConnected(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
