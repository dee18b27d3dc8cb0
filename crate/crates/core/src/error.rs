use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("coefficient is not a polynomial: {0}")]
    NotPolynomial(String),

    #[error("no slice: {0}")]
    NoSlice(String),

    #[error("derivation is not nilpotent on {witness} within {cap} steps")]
    NotLocallyNilpotent { witness: String, cap: usize },

    #[error("bracket closure exceeds {max_dim} dimensions")]
    NotFiniteDimensional { max_dim: usize },

    #[error("operator is not nilpotent on the subspace")]
    NotNilpotent,

    #[error("operator kernel has dimension {0}; a single Jordan chain needs dimension 1")]
    KernelNotSimple(usize),

    #[error("subspace is not invariant under the operator")]
    NotInvariant,

    #[error("element is not in the span of the algebra")]
    NotInSpan,

    #[error("hypothesis `{check}` failed: {detail}")]
    Hypothesis { check: String, detail: String },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn hypothesis(check: &str, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
