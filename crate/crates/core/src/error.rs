use serde::Serialize;
use thiserror::Error;

use crate::state::Side;

/// Why a reduction was refused by the diagonalizability gate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum DiagFailure {
    /// An eigenvalue is numerically zero.
    SmallEigenvalue { magnitude: f64, threshold: f64 },
    /// Two eigenvalues are closer than the relative gap threshold.
    Degenerate { gap: f64, threshold: f64 },
    /// The eigenvector matrix is too ill-conditioned to invert reliably.
    IllConditioned { condition: f64, threshold: f64 },
    /// The Schur iteration did not converge.
    NoConvergence,
}

impl std::fmt::Display for DiagFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SmallEigenvalue { magnitude, threshold } => {
                write!(f, "eigenvalue of magnitude {magnitude:e} below {threshold:e}")
            }
            Self::Degenerate { gap, threshold } => {
                write!(f, "eigenvalue gap {gap:e} below {threshold:e}")
            }
            Self::IllConditioned { condition, threshold } => {
                write!(f, "eigenvector condition {condition:e} above {threshold:e}")
            }
            Self::NoConvergence => write!(f, "Schur iteration did not converge"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero vector (norm {0:e})")]
    ZeroVector(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("reduction over {0} vanishes")]
    ZeroReduction(Side),

    #[error("reduction is not reliably diagonalizable: {0}")]
    NotDiagonalizable(DiagFailure),

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("sum mismatch: {0} vs {1}")]
    SumMismatch(f64, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dims(what: impl Into<String>) -> Self {
        Self::DimensionMismatch(what.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
