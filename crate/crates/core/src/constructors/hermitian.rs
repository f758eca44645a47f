use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{all_real, finish, require, source_is_zero, zero_source_solution, CompletionBlocks, FreeParams, TargetingSolution};
use crate::error::{Result, TargetError};
use crate::feasibility::PropertyClass;
use crate::linalg::{bordered_matrix, hermitian_eigenvalues, hermitian_part, pseudoinverse, smallest_singular_value, spectral_norm};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// How the corner scalar `λ` of `[[H, L*], [L, λI]]` is chosen.
#[derive(Debug, Clone, Copy)]
enum Corner {
    Fixed(f64),
    Invertible,
    Semidefinite,
    Definite,
}

/// Runs one of the bordered-matrix constructions in the field of the data.
fn bordered_solution(
    property: PropertyClass,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    corner: Corner,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    require(property, x, y, tol)?;
    if source_is_zero(x, tol) {
        return zero_source_solution(property, x, y, Complex64::new(1.0, 0.0), tol);
    }
    let (a, lambda, rank) = if all_real(&[x, y]) {
        let (a, lambda, rank) = bordered_in::<f64>(&x.cast(), &y.cast(), corner, tol)?;
        (ComplexMatrix::from_real(a), lambda, rank)
    } else {
        let (a, lambda, rank) = bordered_in(x.as_complex(), y.as_complex(), corner, tol)?;
        (ComplexMatrix::from_complex(a), lambda, rank)
    };
    let free = FreeParams {
        rank: Some(rank),
        lambda,
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

fn bordered_in<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    corner: Corner,
    tol: &TolerancePolicy,
) -> Result<(DMatrix<T>, Option<f64>, usize)> {
    let blocks = CompletionBlocks::new(x, y, tol)?;
    let h = hermitian_part(&blocks.h);
    let l = &blocks.l;
    let r = blocks.rank();
    let lambda = if l.nrows() == 0 {
        if let Corner::Invertible = corner {
            let floor = tol.residual_tol * spectral_norm(&h)?;
            let best = smallest_singular_value(&h)?;
            if !(best > floor) {
                return Err(TargetError::LambdaSearchFailed { best, floor });
            }
        }
        None
    } else {
        Some(match corner {
            Corner::Fixed(lambda) => lambda,
            Corner::Invertible => invertible_corner(&h, l, &blocks.b1, tol)?,
            Corner::Semidefinite => {
                let s = l * pseudoinverse(&h, tol)? * l.adjoint();
                let top = hermitian_eigenvalues(&s)?.last().copied().unwrap_or(0.0);
                top.max(0.0)
            }
            Corner::Definite => {
                let s = l * pseudoinverse(&h, tol)? * l.adjoint();
                let top = hermitian_eigenvalues(&s)?.last().copied().unwrap_or(0.0);
                top.max(0.0) * 2.0 + 1.0
            }
        })
    };
    let b = bordered_matrix(&h, l, lambda.unwrap_or(0.0));
    Ok((hermitian_part(&blocks.assemble(&b)), lambda, r))
}

/// Picks a real nonzero `λ` making `[[H, L*], [L, λI]]` invertible.
///
/// `det(H - s L*L)` is a nonzero polynomial of degree at most `r` in
/// `s = 1/λ`, so among `r + 1` distinct magnitudes of each sign at least one
/// avoids its roots. Candidates are `s = ±k ‖H‖₂ / ‖L*L‖₂` and, to cover
/// `H = 0` or `L = 0`, `λ = ±k ‖B1‖₂`, for `k = 1..=r+1`. The candidate with
/// the largest `σ_min(B)` wins; it must clear `residual_tol · ‖B‖₂`.
fn invertible_corner<T: Scalar>(
    h: &DMatrix<T>,
    l: &DMatrix<T>,
    b1: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<f64> {
    let r = h.nrows();
    let hn = spectral_norm(h)?;
    let lln = spectral_norm(&(l.adjoint() * l))?;
    let b1n = spectral_norm(b1)?;
    let base = hn / lln.max(f64::MIN_POSITIVE);

    let mut candidates = Vec::new();
    for k in 1..=r + 1 {
        for sign in [1.0, -1.0] {
            let s = sign * k as f64 * base;
            if s != 0.0 && s.is_finite() && (1.0 / s).is_finite() {
                candidates.push(1.0 / s);
            }
        }
    }
    for k in 1..=r + 1 {
        for sign in [1.0, -1.0] {
            let lambda = sign * k as f64 * b1n;
            if lambda != 0.0 {
                candidates.push(lambda);
            }
        }
    }

    let mut best: Option<(f64, f64, f64)> = None;
    for lambda in candidates {
        let b = bordered_matrix(h, l, lambda);
        let smin = smallest_singular_value(&b)?;
        if best.map_or(true, |(_, s, _)| smin > s) {
            best = Some((lambda, smin, spectral_norm(&b)?));
        }
    }
    let (lambda, smin, bnorm) = best.expect("at least the ±‖B1‖₂ candidates exist");
    let floor = tol.residual_tol * bnorm;
    if smin > floor {
        Ok(lambda)
    } else {
        Err(TargetError::LambdaSearchFailed { best: smin, floor })
    }
}

/// Hermitian `A = V [[H, L*], [L, λI]] V*`, with `λ` defaulting to zero.
pub fn solve_hermitian(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    lambda_free: Option<f64>,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let lambda = lambda_free.unwrap_or(0.0);
    if !lambda.is_finite() {
        return Err(TargetError::BadFreeParameter(format!("corner scalar {lambda} is not finite")));
    }
    bordered_solution(PropertyClass::Hermitian, x, y, Corner::Fixed(lambda), tol)
}

/// Invertible Hermitian `A`; the corner scalar comes from a finite search.
pub fn solve_invertible_hermitian(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    bordered_solution(PropertyClass::InvertibleHermitian, x, y, Corner::Invertible, tol)
}

/// Positive semidefinite `A` with corner `λ = λmax(L H† L*)`.
pub fn solve_psd(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<TargetingSolution> {
    bordered_solution(PropertyClass::PositiveSemidefinite, x, y, Corner::Semidefinite, tol)
}

/// Positive definite `A` with corner `λ = 2 λmax(L H⁻¹ L*) + 1`.
pub fn solve_pd(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<TargetingSolution> {
    bordered_solution(PropertyClass::PositiveDefinite, x, y, Corner::Definite, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_property;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn col(v: &[f64]) -> ComplexMatrix {
        let rows: Vec<&[f64]> = v.chunks(1).collect();
        ComplexMatrix::real(&rows)
    }

    #[test]
    fn hermitian_swap() {
        let s = solve_hermitian(&col(&[1.0, 0.0]), &col(&[0.0, 1.0]), None, &tol()).unwrap();
        assert!(s.a.distance(&ComplexMatrix::real(&[&[0.0, 1.0], &[1.0, 0.0]])) < 1e-14);
        assert_eq!(s.free_params.lambda, Some(0.0));
        let i2 = ComplexMatrix::identity(2);
        let s = solve_hermitian(&i2, &i2, None, &tol()).unwrap();
        assert!(s.a.distance(&i2) < 1e-14);
        let iy = ComplexMatrix::complex(&[&[(0.0, 1.0)], &[(0.0, 0.0)]]);
        assert!(matches!(
            solve_hermitian(&col(&[1.0, 0.0]), &iy, None, &tol()),
            Err(TargetError::Infeasible(_))
        ));
    }

    #[test]
    fn hermitian_free_corner() {
        let s = solve_hermitian(&col(&[1.0, 0.0]), &col(&[0.0, 1.0]), Some(-3.0), &tol()).unwrap();
        assert!(s.a.distance(&ComplexMatrix::real(&[&[0.0, 1.0], &[1.0, -3.0]])) < 1e-14);
        assert!(matches!(
            solve_hermitian(&col(&[1.0, 0.0]), &col(&[0.0, 1.0]), Some(f64::NAN), &tol()),
            Err(TargetError::BadFreeParameter(_))
        ));
    }

    #[test]
    fn invertible_hermitian_examples() {
        let s = solve_invertible_hermitian(&col(&[1.0, 0.0]), &col(&[0.0, 1.0]), &tol()).unwrap();
        // B = [[0, 1], [1, λ]] has determinant −1 for every λ.
        let a = s.a.as_complex();
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        assert!((det.re + 1.0).abs() < 1e-12);
        assert!(s.free_params.lambda.unwrap() != 0.0);

        let i2 = ComplexMatrix::identity(2);
        let s = solve_invertible_hermitian(&i2, &i2, &tol()).unwrap();
        assert!(s.a.distance(&i2) < 1e-14);

        let d = ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            solve_invertible_hermitian(&i2, &d, &tol()),
            Err(TargetError::Infeasible(_))
        ));
    }

    #[test]
    fn invertible_hermitian_with_zero_head() {
        // H = 0 and L ≠ 0: only the ±k‖B1‖ fallback candidates apply.
        let x = ComplexMatrix::real(&[&[1.0], &[0.0], &[0.0]]);
        let y = ComplexMatrix::real(&[&[0.0], &[3.0], &[4.0]]);
        let s = solve_invertible_hermitian(&x, &y, &tol()).unwrap();
        assert!(verify_property(&s.a, PropertyClass::InvertibleHermitian, &tol()).passed);
    }

    #[test]
    fn psd_examples() {
        let s = solve_psd(&col(&[1.0, 0.0]), &col(&[1.0, 1.0]), &tol()).unwrap();
        assert!(s.a.distance(&ComplexMatrix::real(&[&[1.0, 1.0], &[1.0, 1.0]])) < 1e-14);
        assert_eq!(s.free_params.lambda, Some(1.0));
        let x = ComplexMatrix::real(&[&[1.0, 2.0], &[0.0, 1.0], &[3.0, 1.0]]);
        let s = solve_psd(&x, &x, &tol()).unwrap();
        assert!(s.residual < 1e-14);
        assert!(matches!(
            solve_psd(&col(&[1.0, 0.0]), &col(&[-1.0, 0.0]), &tol()),
            Err(TargetError::Infeasible(_))
        ));
    }

    #[test]
    fn pd_examples() {
        let i2 = ComplexMatrix::identity(2);
        let y = ComplexMatrix::real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s = solve_pd(&i2, &y, &tol()).unwrap();
        assert!(s.a.distance(&y) < 1e-14);
        let s = solve_pd(&i2, &i2, &tol()).unwrap();
        assert!(s.a.distance(&i2) < 1e-14);
        // λ = 2·λmax(L H⁻¹ L*) + 1 = 3, so A = [[1, 1], [1, 3]].
        let s = solve_pd(&col(&[1.0, 0.0]), &col(&[1.0, 1.0]), &tol()).unwrap();
        assert!(s.a.distance(&ComplexMatrix::real(&[&[1.0, 1.0], &[1.0, 3.0]])) < 1e-14);
    }
}
