use thiserror::Error;

/// Errors raised across the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma pole near {re}{im:+}i")]
    PoleError { re: f64, im: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("path passes within {distance:e} of the singular locus (clearance {clearance:e})")]
    SingularProximity { distance: f64, clearance: f64 },
    #[error("step size underflow at s = {at}")]
    StepUnderflow { at: f64 },
    #[error("outside the admissible domain: {0}")]
    DomainError(String),
    #[error("point on the singular locus: {0}")]
    SingularLocus(String),
    #[error("denominator vanishes identically")]
    DivisionByZeroPoly,
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("signature constraint violated: {which}")]
    ConstraintViolation { which: String },
    #[error("verification of {id} failed, residual leading term {leading_term}")]
    VerificationFailed { id: String, leading_term: String },
    #[error("polynomial exceeds the term guard ({terms} terms)")]
    ComplexityLimit { terms: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors that come from an input outside an operation's domain, as
    /// opposed to a failed check.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::PoleError { .. }
                | Error::DomainError(_)
                | Error::SingularLocus(_)
                | Error::SingularProximity { .. }
                | Error::DivisionByZero(_)
                | Error::ConstraintViolation { .. }
        )
    }
}
