use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no exact formula for {0}; use the variational estimator instead")]
    NoExactFormula(String),
    #[error("jacobian vanishes at a pole preimage: {0}")]
    JacobianVanishes(String),
    #[error("tail bound cannot certify tolerance {tol:e} after {terms} terms")]
    TailBound { tol: f64, terms: usize },
    #[error("no admissible candidate found: {0}")]
    NoCandidate(String),
    #[error("interval inversion: lower {lower} exceeds upper {upper}")]
    IntervalInversion { lower: f64, upper: f64 },
}

impl Error {
    /// Whether the error comes from malformed input rather than the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::DimensionMismatch { .. } | Error::InvalidWeight(_) | Error::InvalidInput(_))
    }
}
