use nalgebra::DMatrix;

use super::{scale_columns_inv, svd_partitioned, svd_partitioned_with_scale};
use crate::error::{Result, TargetError};
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Moore–Penrose pseudoinverse `X† = W1 Σr⁻¹ V1*` from the truncated SVD.
/// The zero `m × n` matrix maps to the zero `n × m` matrix.
pub fn pseudoinverse<T: Scalar>(x: &DMatrix<T>, tol: &TolerancePolicy) -> Result<DMatrix<T>> {
    let (m, n) = x.shape();
    match svd_partitioned(x, tol) {
        Ok(f) => Ok(scale_columns_inv(&f.w1(), &f.sigma) * f.v1().adjoint()),
        Err(TargetError::ZeroMatrix { .. }) => Ok(DMatrix::zeros(n, m)),
        Err(e) => Err(e),
    }
}

/// Orthogonal projector `F (F*F)† F*` onto `col F`, computed as `V1 V1*`.
pub fn orthogonal_projector<T: Scalar>(
    f: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<T>> {
    orthogonal_projector_with_scale(f, tol, 0.0)
}

/// Projector onto the numerical column space of `f`, with the rank judged
/// against `max(σmax(f), reference_scale)`.
pub fn orthogonal_projector_with_scale<T: Scalar>(
    f: &DMatrix<T>,
    tol: &TolerancePolicy,
    reference_scale: f64,
) -> Result<DMatrix<T>> {
    let m = f.nrows();
    match svd_partitioned_with_scale(f, tol, reference_scale) {
        Ok(svd) => {
            let v1 = svd.v1();
            let p = &v1 * v1.adjoint();
            Ok(super::hermitian_part(&p))
        }
        Err(TargetError::ZeroMatrix { .. }) => Ok(DMatrix::zeros(m, m)),
        Err(e) => Err(e),
    }
}
