use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator {denominator} is not invertible modulo {modulus}")]
    NonInvertibleDenominator { denominator: String, modulus: u64 },

    #[error("coefficient domains differ: {left} vs {right}")]
    DomainMismatch { left: String, right: String },

    #[error("insufficient precision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },

    #[error("(p - 1) = {p_minus_one} divides the weight {weight}")]
    DivisibilityViolation { weight: i64, p_minus_one: u64 },

    #[error("series is not a modular form of weight {weight} (first mismatch at q^{index})")]
    NotModularOfThisWeight { weight: i64, index: usize },

    #[error("precision {precision} too low for weight {weight} (dimension {dimension})")]
    PrecisionTooLow {
        weight: i64,
        dimension: usize,
        precision: usize,
    },

    #[error("series vanishes modulo {p}; filtration is undefined")]
    NotNormalized { p: u64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
