use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{all_real, finish, require, source_is_zero, zero_source_solution, FreeParams, TargetingSolution};
use crate::error::{Result, TargetError};
use crate::feasibility::PropertyClass;
use crate::linalg::{block2x2, conj, scale_columns_inv, svd_partitioned, symmetric_part};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Complex symmetric `A = conj(V) F V*` with
/// `F = [[V1ᵀ Y W1 Σr⁻¹, (V2ᵀ Y W1 Σr⁻¹)ᵀ], [V2ᵀ Y W1 Σr⁻¹, G]]`.
///
/// `G` is an `(m - r) × (m - r)` symmetric block, zero by default.
pub fn solve_complex_symmetric(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    g_free: Option<&ComplexMatrix>,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let property = PropertyClass::ComplexSymmetric;
    require(property, x, y, tol)?;
    if let Some(g) = g_free {
        if !g.is_finite() {
            return Err(TargetError::BadFreeParameter("G has non-finite entries".into()));
        }
        let dev = g.distance(&g.transpose()) / g.frobenius_norm().max(1.0);
        if !(dev <= tol.sym_tol) {
            return Err(TargetError::BadFreeParameter(format!(
                "G is not symmetric (deviation {dev:e})"
            )));
        }
    }
    if source_is_zero(x, tol) {
        return zero_source_solution(property, x, y, Complex64::new(1.0, 0.0), tol);
    }
    let real = all_real(&[x, y]) && g_free.map_or(true, |g| g.is_real());
    let (a, g, r) = if real {
        let g = g_free.map(|g| g.cast::<f64>());
        let (a, g, r) = symmetric_in::<f64>(&x.cast(), &y.cast(), g.as_ref(), tol)?;
        (ComplexMatrix::from_real(a), ComplexMatrix::from_real(g), r)
    } else {
        let g = g_free.map(|g| g.cast::<Complex64>());
        let (a, g, r) = symmetric_in(x.as_complex(), y.as_complex(), g.as_ref(), tol)?;
        (ComplexMatrix::from_complex(a), ComplexMatrix::from_complex(g), r)
    };
    let free = FreeParams {
        rank: Some(r),
        g: Some(g),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

fn symmetric_in<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    g: Option<&DMatrix<T>>,
    tol: &TolerancePolicy,
) -> Result<(DMatrix<T>, DMatrix<T>, usize)> {
    let svd = svd_partitioned(x, tol)?;
    let (m, r) = (x.nrows(), svd.rank);
    let k = m - r;
    let g = match g {
        Some(g) if g.shape() != (k, k) => {
            return Err(TargetError::BadFreeParameter(format!(
                "G must be {k}×{k} (m - rank X), got {}×{}",
                g.nrows(),
                g.ncols()
            )))
        }
        Some(g) => symmetric_part(g),
        None => DMatrix::zeros(k, k),
    };
    let f1 = scale_columns_inv(&(svd.v.transpose() * y * svd.w1()), &svd.sigma);
    let top = symmetric_part(&f1.rows(0, r).into_owned());
    let bottom = f1.rows(r, k).into_owned();
    let f = block2x2(&top, &bottom.transpose(), &bottom, &g);
    let a = conj(&svd.v) * f * svd.v.adjoint();
    Ok((symmetric_part(&a), g, r))
}
