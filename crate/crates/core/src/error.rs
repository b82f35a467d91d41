use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pole of {0}")]
    Pole(&'static str),
    #[error("target lies outside the image (best source margin {margin:.3e})")]
    OutsideImage { margin: f64 },
    #[error("point lies outside the domain (margin {margin:.3e})")]
    OutsideDomain { margin: f64 },
    #[error("matrix is not a reflection")]
    NotAReflection,
    #[error("frame conditions violated (residual {residual:.3e})")]
    FrameViolation { residual: f64 },
    #[error("map does not preserve fibers (branch residual {residual:.3e})")]
    NotFiberPreserving { residual: f64 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
