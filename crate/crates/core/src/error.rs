use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("invalid field modulus: {0}")]
    BadModulus(String),
    #[error("field of order {0} is too large for table arithmetic")]
    FieldTooLarge(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("digit {digit} out of range for a field of order {q}")]
    DigitOutOfRange { digit: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid polynomial: {0}")]
    BadPolynomial(String),
    #[error("polynomial parse error: {0}")]
    Parse(String),
    #[error("inputs are not coprime")]
    NotCoprime,
    #[error("search bound {0} exceeded")]
    BoundExceeded(u64),
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("row length is inconclusive: nonzero entries reach the slice boundary at column {0}")]
    Inconclusive(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("budget exceeded: N = {n} > {budget}")]
    BudgetExceeded { n: u128, budget: u128 },
    #[error("infeasible witness: {0}")]
    Infeasible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
