use crate::ComplexPoint;

/// Crate-wide error type.
///
/// Variants follow the failure taxonomy of the numeric layers: domain errors
/// for invalid inputs, pole errors when an elliptic-function argument lands on
/// (or within guard distance of) a lattice pole, numeric errors for solver
/// non-convergence, consistency errors when a constructed object fails its own
/// validation, range errors for unreachable solve targets, and degenerate
/// errors for instances outside the numerically reachable parameter range.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of sn at lattice point {nearest} (distance {distance:.3e})")]
    Pole {
        nearest: ComplexPoint,
        distance: f64,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("degenerate instance: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
