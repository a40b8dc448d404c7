//! Error type shared by every model in the crate.

use alloc::string::String;

/// Result alias used across the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes of the models.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violates the operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coordinate lies outside the tabulated domain.
    #[error("{quantity} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        /// Name of the out-of-range quantity.
        quantity: &'static str,
        /// Offending value.
        value: f64,
        /// Lower end of the admissible range.
        min: f64,
        /// Upper end of the admissible range.
        max: f64,
    },

    /// A data invariant does not hold.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// A quantity would require dividing by zero.
    #[error("division by zero: {0}")]
    DivideByZero(String),

    /// Root finding failed.
    #[error("solver failed: {0}")]
    Solver(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}")]
    Quadrature {
        /// Error estimate at the point the integrator gave up.
        achieved: f64,
        /// Requested absolute tolerance.
        requested: f64,
    },

    /// Nonlinear least squares did not converge.
    #[error("fit did not converge after {iterations} iterations (rms residual {residual_rms:e})")]
    Fit {
        /// Iterations performed.
        iterations: usize,
        /// Root-mean-square residual of the last accepted parameters.
        residual_rms: f64,
    },

    /// Electrode geometry is inconsistent.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Mode classification could not be performed.
    #[error("classification failed: {0}")]
    Classification(String),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Solver(_) | Error::Quadrature { .. } | Error::Fit { .. } | Error::Classification(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
