use thiserror::Error;

/// Errors produced by the geometry routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("function undefined on the spectrum: {0}")]
    Domain(String),

    #[error("matrix is singular (or numerically singular)")]
    Singular,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("plane is degenerate: tangent vectors are (nearly) linearly dependent")]
    DegeneratePlane,

    #[error("spanning set has no nonzero component")]
    EmptySubspace,

    #[error("element is not in the required subspace (residual {residual:.3e})")]
    NotInSubspace { residual: f64 },

    #[error("no convergence after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl GeoError {
    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            GeoError::Shape { .. } => "shape",
            GeoError::Validation(_) => "validation",
            GeoError::Domain(_) => "domain",
            GeoError::Singular => "singular",
            GeoError::NumericalFailure(_) => "numerical_failure",
            GeoError::DegeneratePlane => "degenerate_plane",
            GeoError::EmptySubspace => "empty_subspace",
            GeoError::NotInSubspace { .. } => "not_in_subspace",
            GeoError::NonConvergence { .. } => "non_convergence",
            GeoError::Io(_) => "io",
            GeoError::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeoError>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(GeoError::Shape { expected, got })
    }
}
