use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The variants map onto the failure kinds the CLI distinguishes by exit
/// code: validation problems, degenerate geometry, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input points are not in general position (flat simplex or sidedness tie).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A pivot or gift-wrapping tie fell within tolerance.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A section plane is parallel to a facet hyperplane.
    #[error("degenerate section: {0}")]
    DegenerateSection(String),

    /// The requested cap fraction exceeds one half, so no cap height attains it.
    #[error("threshold unattainable: target cap fraction {0} exceeds 1/2")]
    ThresholdUnattainable(f64),

    /// Some facet offset is not strictly positive.
    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,

    /// A linear system is (numerically) singular.
    #[error("singular system: condition estimate {0:e}")]
    SingularSystem(f64),

    /// Scaling fit needs at least three distinct grid values.
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),

    /// A report was requested for an empty record list.
    #[error("nonempty record list required")]
    NonemptyRequired,

    /// Too many trials of an experiment failed.
    #[error("experiment aborted: {failed} of {total} trials failed (first error: {first})")]
    TooManyFailures {
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for the degenerate-geometry family of failures.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateInput(_) | Error::DegenerateGeometry(_) | Error::DegenerateSection(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
