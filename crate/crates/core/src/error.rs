use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the spinor algebra, kinematics, quadrature and experiment layers.
#[derive(Debug, Error)]
pub enum RelspinError {
    #[error("Pauli index {0} out of range (expected 1, 2 or 3)")]
    PauliIndex(usize),

    #[error("mass must be positive and finite, got {0}")]
    NonPositiveMass(f64),

    #[error("momentum off the mass shell: p^2 - m^2 = {residual:e} (m = {mass})")]
    OffShell { residual: f64, mass: f64 },

    #[error("boost axis must be a unit vector, |n| = {0}")]
    NonUnitAxis(f64),

    #[error("rapidity must be finite and non-negative, got {0}")]
    InvalidRapidity(f64),

    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    NotUnimodular(f64),

    #[error("matrix is not unitary: |M^dag M - 1| = {0:e}")]
    NotUnitary(f64),

    #[error("invalid packet parameter `{name}`: {reason}")]
    InvalidPacket { name: &'static str, reason: String },

    #[error("packet normalization failed: {0}")]
    Normalization(String),

    #[error("operation requires {0}")]
    MissingSymmetry(&'static str),

    #[error("outside validity domain: {0}")]
    OutsideValidity(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNorm(f64),

    #[error("invalid config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RelspinError>;
