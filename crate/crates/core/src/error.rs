use crate::manifold::BetaPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{function} is undefined at {value:e}: argument must be positive and at least 1e-300")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid beta point ({x}, {y}): both shape parameters must be finite and strictly positive")]
    InvalidPoint { x: f64, y: f64 },

    #[error("tangent vectors are attached to different base points")]
    BaseMismatch,

    #[error(
        "geodesic left the parameter domain after t = {t}; last valid state ({}, {}) with velocity ({}, {})",
        last.x(), last.y(), velocity.0, velocity.1
    )]
    BoundaryEscape {
        t: f64,
        last: BetaPoint,
        velocity: (f64, f64),
    },

    #[error("shooting did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("metric determinant is not positive at ({x}, {y})")]
    DegenerateMetric { x: f64, y: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BoundaryEscape { .. } | Error::NoConvergence { .. } | Error::DegenerateMetric { .. }
        )
    }
}
