use thiserror::Error;

use crate::algebra::AlgebraKind;

/// Contract violations and numerical failures raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("algebra kind mismatch: {left:?} vs {right:?}")]
    KindMismatch { left: AlgebraKind, right: AlgebraKind },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix does not belong to {kind:?} (residual {residual:e})")]
    NotInAlgebra { kind: AlgebraKind, residual: f64 },
    #[error("point is not on the model space (residual {residual:e})")]
    NotOnSpace { residual: f64 },
    #[error("vector is not tangent at the base point (residual {residual:e})")]
    NotTangent { residual: f64 },
    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("frame is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("group element does not preserve the model's quadratic form (residual {residual:e})")]
    FormNotPreserved { residual: f64 },
    #[error("degenerate immersion at ({u}, {v}): Gram determinant {det:e}")]
    DegenerateImmersion { u: f64, v: f64, det: f64 },
    #[error("stencil unavailable: {0}")]
    StencilUnavailable(String),
    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("surface '{0}' has no level-set function")]
    MissingLevelSet(String),
    #[error("surface '{0}' is not conformally parametrized")]
    NotConformal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
