use nalgebra::DMatrix;

use super::{hermitian_part, scale_columns, svd_partitioned};
use crate::error::{Result, TargetError};
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// `X = U1 Q` with `U1` having orthonormal columns and `Q = (X*X)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarFactors<T: Scalar> {
    pub u1: DMatrix<T>,
    pub q: DMatrix<T>,
}

/// Polar factors of an `m × n` matrix with `m ≥ n`, from the full SVD
/// `X = V Σ W*`: `U1 = V[:, ..n] W*` and `Q = W1 Σr W1*`. When `rank X < n`
/// the null-space directions of `U1` come from the SVD completion.
pub fn polar_orthonormal_factor<T: Scalar>(
    x: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<PolarFactors<T>> {
    let (m, n) = x.shape();
    if m < n {
        return Err(TargetError::ShapeMismatch(format!(
            "polar factor needs rows ≥ cols, got {m}×{n}"
        )));
    }
    let f = svd_partitioned(x, tol)?;
    let u1 = f.v.columns(0, n) * f.w.adjoint();
    let w1 = f.w1();
    let q = hermitian_part(&(scale_columns(&w1, &f.sigma) * w1.adjoint()));
    Ok(PolarFactors { u1, q })
}
