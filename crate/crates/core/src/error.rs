use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 2^31]")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands live over different algebras")]
    AlgebraMismatch,
    #[error("algebra is not finite dimensional: {0}")]
    InfiniteDimensional(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),
    #[error("invalid homotopy: {0}")]
    InvalidHomotopy(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("completion system inconsistent: {0}")]
    InconsistentSystem(String),
    #[error("not found within budget ({0} attempts)")]
    BudgetExhausted(usize),
    #[error("nonzero class for generator {0}")]
    NonzeroClass(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
