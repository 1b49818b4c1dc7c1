use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field order q = {0}")]
    UnsupportedField(u32),
    #[error("modulus for GF({q}) is not {what}")]
    BadModulus { q: u32, what: &'static str },
    #[error("operands belong to different fields (GF({left}) vs GF({right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("ordinal {ordinal} out of range for a set of size {size}")]
    OrdinalOutOfRange { ordinal: u64, size: u64 },
    #[error("coefficient modulus r = {r} is not a power of p = {p} with r <= q = {q}")]
    BadCoefficientModulus { r: u32, p: u32, q: u32 },
    #[error("support contains a {dim}-dimensional subspace, below strength {t}")]
    SupportBelowStrength { dim: usize, t: usize },
    #[error("vector length {found} does not match {expected} columns")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid chain u < v < w: {0}")]
    InvalidChain(String),
    #[error("kernel enumeration needs {needed} vectors, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
