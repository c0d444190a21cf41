use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("prime {p} exceeds the configured maximum {max}")]
    PrimeTooLarge { p: u32, max: u32 },
    #[error("dimension {e} outside the supported range 1..={max}")]
    BadDimension { e: usize, max: usize },
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("variable {0} has no image")]
    MissingImage(String),
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("not a p-th power in exponents: {0}")]
    NotPthPower(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("the multiplicative law is one-dimensional, got e = {0}")]
    MultiplicativeDimension(usize),
    #[error("truncation bound {bound} is below the required order {needed}")]
    InsufficientBound { bound: u32, needed: u32 },
    #[error("n = {n} is below max(j) = {needed}")]
    DecompositionOrder { n: u32, needed: u32 },
    #[error("candidate is not a polynomial: {0}")]
    NonPolynomialCandidate(String),
    #[error("not a Hasse-Schmidt derivation: image of X{0} does not reduce to X{0} at Y = 0")]
    NotHasseSchmidt(usize),
    #[error("coefficient is not a p-adic unit: {0}")]
    NonUnit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
}
