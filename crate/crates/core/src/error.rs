use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 1..=8)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("blade mask {bits:#b} out of range for dimension {dim}")]
    InvalidBlade { bits: u32, dim: usize },
    #[error("index {index} out of range for dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },
    #[error("grade {grade} out of range for dimension {dim}")]
    InvalidGrade { grade: usize, dim: usize },
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("multivector is not a real vector (residual {0:e})")]
    NotAVector(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("negative squared norm {0:e}")]
    NegativeNorm(f64),
    #[error("invalid rotor: {0}")]
    InvalidRotor(String),
    #[error("spin sampling unsupported for dimension {0}")]
    UnsupportedSpinDimension(usize),
    #[error("wavelet {name:?} is not admissible: {reason}")]
    Inadmissible { name: String, reason: String },
    #[error("unknown wavelet {0:?}")]
    UnknownWavelet(String),
    #[error("wavelet constant not calibrated")]
    NotCalibrated,
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("quadrature mismatch: {0}")]
    QuadratureMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
