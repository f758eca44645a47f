//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

use crate::feasibility::FeasibilityReport;

pub type Result<T> = std::result::Result<T, TargetError>;

#[derive(Debug, Clone, Error)]
pub enum TargetError {
    #[error("{what} is numerically zero (Frobenius norm {norm:e})")]
    ZeroMatrix { what: &'static str, norm: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("columns are not orthonormal: deviation {deviation:e} exceeds {threshold:e}")]
    NotOrthonormal { deviation: f64, threshold: f64 },

    #[error("Schur congruence precondition violated: {0}")]
    BadVariantPrecondition(String),

    #[error("targeting problem is infeasible for {}", .0.property)]
    Infeasible(Box<FeasibilityReport>),

    #[error("no eigenvalue parameter gives an invertible completion: best smallest singular value {best:e}, floor {floor:e}")]
    LambdaSearchFailed { best: f64, floor: f64 },

    #[error("target matrix is zero")]
    ZeroTarget,

    #[error("source or target vector is zero")]
    ZeroVector,

    #[error("bad free parameter: {0}")]
    BadFreeParameter(String),

    #[error("square source of full rank with Y = {unique}·X: the only solution is {unique}·I")]
    RankProviso { unique: Complex64 },

    #[error("source construction condition violated: {0}")]
    ConditionViolated(String),

    #[error("invalid property: {0}")]
    InvalidProperty(String),

    #[error("invalid instance spec: {0}")]
    BadSpec(String),

    #[error("oracle problem too large: m = {m} exceeds bound {bound}")]
    TooLarge { m: usize, bound: usize },

    #[error("invalid tolerance policy: {0}")]
    BadTolerance(String),

    #[error("numerical failure: {0}")]
    NumericFailure(String),
}
