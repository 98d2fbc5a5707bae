use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{value} is not invertible modulo {modulus} (gcd = {gcd})")]
    NotInvertible { value: i128, modulus: u64, gcd: u64 },

    #[error("binomial index {k} out of range for p = {p}")]
    OutOfRange { k: u64, p: u64 },

    #[error("Fermat quotient undefined: {p} divides {a}")]
    DivisibleBase { a: i64, p: u64 },

    #[error("Jacobi symbol needs an odd modulus, got {0}")]
    EvenModulus(i64),

    #[error("iteration index {n} exceeds cap {cap}")]
    IterCapExceeded { n: u64, cap: u64 },

    #[error("denominator {d} is divisible by p = {p}")]
    BadDenominator { d: u64, p: u64 },

    #[error("modulus {m} is divisible by p = {p}")]
    BadModulus { m: u64, p: u64 },

    #[error("exact Bernoulli index {0} exceeds the cap of 30")]
    IndexCap(u32),

    #[error("{0} is not a fundamental discriminant of a real quadratic field")]
    NotFundamental(i64),

    #[error("continued fraction for d = {d} did not close within {cap} steps")]
    PeriodCapExceeded { d: i64, cap: usize },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache record: {0}")]
    Json(#[from] serde_json::Error),
}
