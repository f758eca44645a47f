use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{all_real, finish, require, source_is_zero, zero_source_solution, CompletionBlocks, FreeParams, TargetingSolution};
use crate::error::{Result, TargetError};
use crate::feasibility::PropertyClass;
use crate::linalg::{complete_orthonormal, hermitian_part, orthogonal_projector, orthogonal_projector_with_scale, polar_orthonormal_factor};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Unitary `A = V [B1 B2] V*` where `B1 = Z Σr⁻¹` has orthonormal columns.
///
/// `B1` is replaced by its polar orthonormal factor before completion, which
/// leaves it unchanged up to rounding and keeps the completed matrix unitary
/// to working precision.
pub fn solve_unitary(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<TargetingSolution> {
    let property = PropertyClass::Unitary;
    require(property, x, y, tol)?;
    if source_is_zero(x, tol) {
        return zero_source_solution(property, x, y, Complex64::new(1.0, 0.0), tol);
    }
    let (a, b2, r) = if all_real(&[x, y]) {
        let (a, b2, r) = unitary_in::<f64>(&x.cast(), &y.cast(), tol)?;
        (ComplexMatrix::from_real(a), ComplexMatrix::from_real(b2), r)
    } else {
        let (a, b2, r) = unitary_in(x.as_complex(), y.as_complex(), tol)?;
        (ComplexMatrix::from_complex(a), ComplexMatrix::from_complex(b2), r)
    };
    let free = FreeParams {
        rank: Some(r),
        completion: Some(b2),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

fn unitary_in<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<(DMatrix<T>, DMatrix<T>, usize)> {
    let blocks = CompletionBlocks::new(x, y, tol)?;
    let (m, r) = (x.nrows(), blocks.rank());
    let b1 = polar_orthonormal_factor(&blocks.b1, tol)?.u1;
    let b = complete_orthonormal(&b1, tol)?;
    let b2 = b.columns(r, m - r).into_owned();
    Ok((blocks.assemble(&b), b2, r))
}

/// Unitary `A = V U*` from the polar factors `X = U1 Q`, `Y = V1 Q` and the
/// orthonormal completions `U = [U1 U2]`, `V = [V1 V2]`. Needs `m ≥ n`.
pub fn solve_unitary_polar(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let property = PropertyClass::Unitary;
    require(property, x, y, tol)?;
    if source_is_zero(x, tol) {
        return zero_source_solution(property, x, y, Complex64::new(1.0, 0.0), tol);
    }
    if x.rows() < x.cols() {
        return Err(TargetError::ShapeMismatch(format!(
            "polar construction needs rows ≥ cols, got {}×{}",
            x.rows(),
            x.cols()
        )));
    }
    let a = if all_real(&[x, y]) {
        ComplexMatrix::from_real(unitary_polar_in::<f64>(&x.cast(), &y.cast(), tol)?)
    } else {
        ComplexMatrix::from_complex(unitary_polar_in(x.as_complex(), y.as_complex(), tol)?)
    };
    finish(property, a, x, y, FreeParams::default(), tol)
}

fn unitary_polar_in<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>, tol: &TolerancePolicy) -> Result<DMatrix<T>> {
    let px = polar_orthonormal_factor(x, tol)?;
    let py = polar_orthonormal_factor(y, tol)?;
    let u = complete_orthonormal(&px.u1, tol)?;
    let v = complete_orthonormal(&py.u1, tol)?;
    Ok(v * u.adjoint())
}

/// Reflection `A = I - 2P` with `P` the orthogonal projector onto
/// `col(X - Y)`.
pub fn solve_reflection(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<TargetingSolution> {
    let property = PropertyClass::Reflection;
    require(property, x, y, tol)?;
    let (a, rank) = if all_real(&[x, y]) {
        let (a, rank) = reflection_in::<f64>(&x.cast(), &y.cast(), tol)?;
        (ComplexMatrix::from_real(a), rank)
    } else {
        let (a, rank) = reflection_in(x.as_complex(), y.as_complex(), tol)?;
        (ComplexMatrix::from_complex(a), rank)
    };
    let free = FreeParams {
        rank: Some(rank),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

fn reflection_in<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>, tol: &TolerancePolicy) -> Result<(DMatrix<T>, usize)> {
    let m = x.nrows();
    let f = x - y;
    let e = x + y;
    let scale = x.norm() + y.norm();
    // col(X + Y) ⟂ col(X - Y) follows from the feasibility conditions.
    let overlap = (f.adjoint() * &e).norm() / (scale * scale).max(f64::MIN_POSITIVE);
    if !(overlap <= tol.residual_tol) {
        return Err(TargetError::NumericFailure(format!(
            "col(X + Y) and col(X - Y) overlap by {overlap:e}"
        )));
    }
    let p = orthogonal_projector_with_scale(&f, tol, scale)?;
    let rank = p.trace().real().round() as usize;
    let a = DMatrix::<T>::identity(m, m) - p * T::from_re(2.0);
    Ok((hermitian_part(&a), rank))
}

/// Orthogonal projection `A = Y (Y*Y)† Y*`, computed as the projector onto
/// `col Y`.
pub fn solve_projection(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<TargetingSolution> {
    let property = PropertyClass::OrthogonalProjection;
    if y.frobenius_norm() <= tol.zero_matrix_tol {
        return Err(TargetError::ZeroTarget);
    }
    require(property, x, y, tol)?;
    let a = if all_real(&[x, y]) {
        ComplexMatrix::from_real(orthogonal_projector(&y.cast::<f64>(), tol)?)
    } else {
        ComplexMatrix::from_complex(orthogonal_projector(y.as_complex(), tol)?)
    };
    finish(property, a, x, y, FreeParams::default(), tol)
}
