use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the observable algebra, the model evaluators and the
/// geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("density matrix is not physical: {0}")]
    NonPhysicalDensity(String),

    #[error("observables correspond to no quantum state (minimum eigenvalue {min_eigenvalue:.3e})")]
    NonPhysicalObservables { min_eigenvalue: f64 },

    #[error("matrix is not symmetric (max |C - C^T| = {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("no level set at {level} along direction (profile maximum {peak:.6e})")]
    NoLevelSet { peak: f64, level: f64 },

    #[error("propagator truncation lost {deficit:.3e} of the norm")]
    TruncationError { deficit: f64 },

    #[error("quadrature not converged (doubling changed the result by {change:.3e})")]
    QuadratureNotConverged { change: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPhysicalDensity(_) => "NonPhysicalDensity",
            Error::NonPhysicalObservables { .. } => "NonPhysicalObservables",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotUnit { .. } => "NotUnit",
            Error::NoLevelSet { .. } => "NoLevelSet",
            Error::TruncationError { .. } => "TruncationError",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
