use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand mismatch: {0} vs {1}")]
    MixedRadicand(BigInt, BigInt),
    #[error("radicand must be a positive non-square, got {0}")]
    BadRadicand(BigInt),
    #[error("d must be >= 2, got {0}")]
    NonPositiveD(BigInt),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(BigInt),
    #[error("discriminant {0} is not a perfect square")]
    NonSquareDiscriminant(BigInt),
    #[error("form {0} is not primitive")]
    ImprimitiveForm(String),
    #[error("form {0} is definite or degenerate (needs positive discriminant)")]
    NotIndefinite(String),
    #[error("matrix is not an even symmetric Gram matrix")]
    NotEvenGram,
    #[error("zero or degenerate Gram matrix")]
    DegenerateLattice,
    #[error("lattice has signature {0}, expected (1,1)")]
    WrongSignature(String),
    #[error("matrix does not preserve the bilinear form")]
    NotIsometry,
    #[error("matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("lattice is not in a recognized normal form")]
    NotNormalForm,
    #[error("power exponent must be >= 1")]
    BadExponent,
    #[error("expected a nontrivial minimal Pell solution")]
    TrivialPellBase,
    #[error("base solution is not the minimal positive solution")]
    NonMinimalPellBase,
    #[error("Pell solution exceeds {limit} bits for d = {d} (reached {bits} bits)")]
    PellBitsExceeded { d: BigInt, bits: u64, limit: u64 },
    #[error("unsupported representation target {0} (only 0 and -1)")]
    UnsupportedTarget(BigInt),
}

pub type Result<T> = std::result::Result<T, Error>;
