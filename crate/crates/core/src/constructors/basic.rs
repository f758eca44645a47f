use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{all_real, finish, require, source_is_zero, zero_source_solution, CompletionBlocks, FreeParams, TargetingSolution};
use crate::error::{Result, TargetError};
use crate::feasibility::PropertyClass;
use crate::linalg::{hstack, normalize_column_phases, orthogonal_projector, pseudoinverse, svd_partitioned};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// `A = Y X† + Z (I - X X†)` with `Z` defaulting to zero.
pub fn solve_unconstrained(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    z_free: Option<&ComplexMatrix>,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let property = PropertyClass::Unconstrained;
    require(property, x, y, tol)?;
    let m = x.rows();
    let z = match z_free {
        Some(z) if z.shape() != (m, m) => {
            return Err(TargetError::ShapeMismatch(format!(
                "free block Z must be {m}×{m}, got {}×{}",
                z.rows(),
                z.cols()
            )))
        }
        Some(z) if !z.is_finite() => return Err(TargetError::NonFinite),
        Some(z) => z.clone(),
        None => ComplexMatrix::zeros(m, m),
    };
    let a = if all_real(&[x, y, &z]) {
        ComplexMatrix::from_real(unconstrained_in(&x.cast(), &y.cast(), &z.cast(), tol)?)
    } else {
        ComplexMatrix::from_complex(unconstrained_in(x.as_complex(), y.as_complex(), z.as_complex(), tol)?)
    };
    let free = FreeParams {
        z: Some(z),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

fn unconstrained_in<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    z: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<T>> {
    let m = x.nrows();
    let pinv = pseudoinverse(x, tol)?;
    let range = orthogonal_projector(x, tol)?;
    Ok(y * pinv + z * (DMatrix::identity(m, m) - range))
}

/// The affine solution set `{A0 + Z N}` with `A0 = Y X†` and
/// `N = I - X X†`, the orthogonal projector onto `(col X)⊥`.
pub fn solution_family(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    require(PropertyClass::Unconstrained, x, y, tol)?;
    let m = x.rows();
    if all_real(&[x, y]) {
        let (xr, yr) = (x.cast::<f64>(), y.cast::<f64>());
        let a0 = &yr * pseudoinverse(&xr, tol)?;
        let n = DMatrix::identity(m, m) - orthogonal_projector(&xr, tol)?;
        Ok((ComplexMatrix::from_real(a0), ComplexMatrix::from_real(n)))
    } else {
        let a0 = y.as_complex() * pseudoinverse(x.as_complex(), tol)?;
        let n = DMatrix::<Complex64>::identity(m, m) - orthogonal_projector(x.as_complex(), tol)?;
        Ok((ComplexMatrix::from_complex(a0), ComplexMatrix::from_complex(n)))
    }
}

/// `A = V [B1 B2] V*` with `B2` an orthonormal basis of `(col B1)⊥`.
pub fn solve_invertible(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let property = PropertyClass::Invertible;
    require(property, x, y, tol)?;
    if source_is_zero(x, tol) {
        return zero_source_solution(property, x, y, Complex64::new(1.0, 0.0), tol);
    }
    let (a, free) = if all_real(&[x, y]) {
        let (a, b2, r) = invertible_in::<f64>(&x.cast(), &y.cast(), tol)?;
        (ComplexMatrix::from_real(a), (ComplexMatrix::from_real(b2), r))
    } else {
        let (a, b2, r) = invertible_in(x.as_complex(), y.as_complex(), tol)?;
        (ComplexMatrix::from_complex(a), (ComplexMatrix::from_complex(b2), r))
    };
    let free = FreeParams {
        rank: Some(free.1),
        completion: Some(free.0),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

fn invertible_in<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<(DMatrix<T>, DMatrix<T>, usize)> {
    let blocks = CompletionBlocks::new(x, y, tol)?;
    let (m, r) = (x.nrows(), blocks.rank());
    let b2 = complement_columns(&blocks.b1, m - r, tol)?;
    let b = hstack(&blocks.b1, &b2);
    Ok((blocks.assemble(&b), b2, r))
}

/// The `count` left singular vectors of `M` belonging to its smallest
/// singular values, phase-normalized. With `count = m - rank M` this is an
/// orthonormal basis of `(col M)⊥`.
pub(crate) fn complement_columns<T: Scalar>(
    m: &DMatrix<T>,
    count: usize,
    tol: &TolerancePolicy,
) -> Result<DMatrix<T>> {
    let rows = m.nrows();
    if count == 0 {
        return Ok(DMatrix::zeros(rows, 0));
    }
    match svd_partitioned(m, tol) {
        Ok(f) => {
            let mut c = f.v.columns(rows - count, count).into_owned();
            normalize_column_phases(&mut c);
            Ok(c)
        }
        Err(TargetError::ZeroMatrix { .. }) => Ok(DMatrix::identity(rows, count)),
        Err(e) => Err(e),
    }
}
