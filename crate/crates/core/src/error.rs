use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into input problems ([`Error::is_validation`]) and
/// failures that happen while computing on valid input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("root finding for {what} did not converge")]
    NoConvergence { what: String },

    #[error("{what} overflows f64")]
    Overflow { what: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("quadrature grid too coarse at E = {energy}: relative change {change:e} after refinement")]
    GridTooCoarse { energy: f64, change: f64 },

    #[error("cutoff {requested} exceeds the single-particle completeness limit {limit}")]
    IncompleteBase { requested: f64, limit: f64 },

    #[error("configuration count exceeds limit {limit}")]
    TooManyConfigurations { limit: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True when the error stems from bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument { .. } | Error::IncompleteBase { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
