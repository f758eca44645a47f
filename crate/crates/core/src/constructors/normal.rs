use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::basic::complement_columns;
use super::unitary::solve_unitary;
use super::{all_real, finish, source_is_zero, zero_source_solution, FreeParams, TargetingSolution};
use crate::error::{Result, TargetError};
use crate::feasibility::{check, PropertyClass};
use crate::linalg::{hermitian_eigenvalues, hermitian_part, hstack, spectral_norm, svd_partitioned_with_scale};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Normal `A = λ(P + R) + μQ` with spectrum in `{λ, μ}`, where `P` and `Q`
/// project onto `col(Y - μX)` and `col(Y - λX)` and `R` onto the orthogonal
/// complement of both.
pub fn solve_normal_two_point(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    lambda: Complex64,
    mu: Complex64,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let property = PropertyClass::two_point(lambda, mu)?;
    let report = check(property, x, y, tol)?;
    if !report.is_feasible() {
        let only_proviso = report
            .conditions
            .iter()
            .all(|c| c.satisfied || c.name == "two-point-rank-proviso");
        if only_proviso {
            let from_lambda = y.distance(&x.scale(lambda));
            let from_mu = y.distance(&x.scale(mu));
            let unique = if from_lambda <= from_mu { lambda } else { mu };
            return Err(TargetError::RankProviso { unique });
        }
        return Err(TargetError::Infeasible(Box::new(report)));
    }
    if source_is_zero(x, tol) {
        return zero_source_solution(property, x, y, lambda, tol);
    }
    let (a, ranks) = if all_real(&[x, y]) && property.is_real() {
        let (a, ranks) = two_point_in::<f64>(&x.cast(), &y.cast(), lambda, mu, tol)?;
        (ComplexMatrix::from_real(a), ranks)
    } else {
        let (a, ranks) = two_point_in(x.as_complex(), y.as_complex(), lambda, mu, tol)?;
        (ComplexMatrix::from_complex(a), ranks)
    };
    let free = FreeParams {
        two_point_ranks: Some(ranks),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

/// Orthonormal basis of `col M`, with the rank cutoff taken against
/// `reference_scale` so that pure rounding noise counts as zero.
fn range_basis<T: Scalar>(m: &DMatrix<T>, reference_scale: f64, tol: &TolerancePolicy) -> Result<DMatrix<T>> {
    match svd_partitioned_with_scale(m, tol, reference_scale) {
        Ok(f) => Ok(f.v1()),
        Err(TargetError::ZeroMatrix { .. }) => Ok(DMatrix::zeros(m.nrows(), 0)),
        Err(e) => Err(e),
    }
}

fn two_point_in<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    lambda: Complex64,
    mu: Complex64,
    tol: &TolerancePolicy,
) -> Result<(DMatrix<T>, (usize, usize))> {
    let m = x.nrows();
    let (l, u) = (T::from_c64(lambda), T::from_c64(mu));
    let e = y - x * u;
    let f = y - x * l;
    let (nx, ny) = (x.norm(), y.norm());
    let be = range_basis(&e, ny + mu.norm() * nx, tol)?;
    let bf = range_basis(&f, ny + lambda.norm() * nx, tol)?;
    let (re, rf) = (be.ncols(), bf.ncols());
    if re + rf > m {
        return Err(TargetError::NumericFailure(format!(
            "rank(Y - μX) + rank(Y - λX) = {} exceeds {m}",
            re + rf
        )));
    }
    let p = &be * be.adjoint();
    let q = &bf * bf.adjoint();
    let mut a = p * l + q * u;
    if re + rf < m {
        let c = complement_columns(&hstack(&be, &bf), m - re - rf, tol)?;
        a += &c * c.adjoint() * l;
    }
    Ok((a, (re, rf)))
}

/// Normal `A = (‖y‖/‖x‖) U` with `U` unitary taking `x/‖x‖` to `y/‖y‖`.
pub fn solve_normal_vector(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<TargetingSolution> {
    let property = PropertyClass::NormalVector;
    check(property, x, y, tol)?;
    let (nx, ny) = (x.frobenius_norm(), y.frobenius_norm());
    let xu = x.scale(Complex64::new(1.0 / nx, 0.0));
    let yu = y.scale(Complex64::new(1.0 / ny, 0.0));
    let u = solve_unitary(&xu, &yu, tol)?;
    let ratio = ny / nx;
    let a = u.a.scale(Complex64::new(ratio, 0.0));
    let free = FreeParams {
        completion: u.free_params.completion,
        scale: Some(ratio),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

/// `H(B, C) = B*B - BB* + C*C` and whether it is positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionGap {
    pub h: ComplexMatrix,
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// `psd` holds iff `min_eigenvalue ≥ -threshold`.
    pub threshold: f64,
}

/// Necessary condition for `[[A, B], [C, D]]` to be normal for some choice
/// of the missing blocks: with `k × k` blocks `B` and `C`, `H(B, C)` must be
/// positive semidefinite. Not sufficient once `k ≥ 3`.
pub fn completion_gap(b: &ComplexMatrix, c: &ComplexMatrix, tol: &TolerancePolicy) -> Result<CompletionGap> {
    tol.validate()?;
    if b.rows() != b.cols() || b.shape() != c.shape() {
        return Err(TargetError::ShapeMismatch(format!(
            "B and C must be square of equal size, got {}×{} and {}×{}",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if !b.is_finite() || !c.is_finite() {
        return Err(TargetError::NonFinite);
    }
    let real = all_real(&[b, c]);
    let (h, min_eigenvalue, scale) = if real {
        gap_in::<f64>(&b.cast(), &c.cast()).map(|(h, e, s)| (ComplexMatrix::from_real(h), e, s))?
    } else {
        gap_in(b.as_complex(), c.as_complex()).map(|(h, e, s)| (ComplexMatrix::from_complex(h), e, s))?
    };
    let threshold = tol.psd_tol * scale;
    Ok(CompletionGap {
        h,
        psd: min_eigenvalue >= -threshold,
        min_eigenvalue,
        threshold,
    })
}

fn gap_in<T: Scalar>(b: &DMatrix<T>, c: &DMatrix<T>) -> Result<(DMatrix<T>, f64, f64)> {
    let h = hermitian_part(&(b.adjoint() * b - b * b.adjoint() + c.adjoint() * c));
    let min = hermitian_eigenvalues(&h)?.first().copied().unwrap_or(0.0);
    let bn = spectral_norm(b)?;
    let cn = spectral_norm(c)?;
    Ok((h, min, (bn * bn + cn * cn).max(f64::MIN_POSITIVE)))
}
