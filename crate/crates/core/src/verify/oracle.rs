//! Brute-force feasibility over a linear subspace of `m × m` matrices:
//! minimize `‖A X - Y‖_F` over the subspace by dense least squares on the
//! vectorized system (column-pivoted QR), with complex unknowns split into
//! real and imaginary parts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TargetError};
use crate::matrix::ComplexMatrix;
use crate::tolerance::TolerancePolicy;

/// Largest `m` the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subspace {
    AnyMatrix,
    Hermitian,
    Symmetric,
}

/// Real basis of the subspace, as complex `m × m` matrices.
fn basis(subspace: Subspace, m: usize) -> Vec<DMatrix<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let unit = |r: usize, c: usize, z: Complex64| {
        let mut e = DMatrix::<Complex64>::zeros(m, m);
        e[(r, c)] = z;
        e
    };
    let mut out = Vec::new();
    match subspace {
        Subspace::AnyMatrix => {
            for r in 0..m {
                for c in 0..m {
                    out.push(unit(r, c, one));
                    out.push(unit(r, c, i));
                }
            }
        }
        Subspace::Hermitian => {
            for r in 0..m {
                out.push(unit(r, r, one));
                for c in r + 1..m {
                    out.push(unit(r, c, one) + unit(c, r, one));
                    out.push(unit(r, c, i) + unit(c, r, -i));
                }
            }
        }
        Subspace::Symmetric => {
            for r in 0..m {
                for c in r..m {
                    for z in [one, i] {
                        let mut e = unit(r, c, z);
                        if c != r {
                            e += unit(c, r, z);
                        }
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

fn split(m: &DMatrix<Complex64>) -> DVector<f64> {
    let n = m.len();
    DVector::from_fn(2 * n, |k, _| if k < n { m[k].re } else { m[k - n].im })
}

/// Smallest `‖A X - Y‖_F` over `A` in the subspace.
pub fn oracle_min_residual(x: &ComplexMatrix, y: &ComplexMatrix, subspace: Subspace, tol: &TolerancePolicy) -> Result<f64> {
    tol.validate()?;
    let m = x.rows();
    if m > ORACLE_MAX_DIM {
        return Err(TargetError::TooLarge { m, bound: ORACLE_MAX_DIM });
    }
    if x.shape() != y.shape() {
        return Err(TargetError::ShapeMismatch(format!(
            "X is {}×{} but Y is {}×{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(TargetError::NonFinite);
    }
    let (xc, yc) = (x.as_complex(), y.as_complex());
    let target = split(yc);
    if xc.is_empty() {
        return Ok(target.norm());
    }
    let columns: Vec<DVector<f64>> = basis(subspace, m).iter().map(|e| split(&(e * xc))).collect();
    let op = DMatrix::from_columns(&columns);
    let qr = op.col_piv_qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|k| r[(k, k)].abs()).collect();
    let lead = diag.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rel_cutoff * lead * r.nrows().max(columns.len()) as f64;
    let rank = diag.iter().take_while(|&&d| d > cutoff).count();
    let q = qr.q().columns(0, rank).into_owned();
    let fitted = &q * (q.transpose() * &target);
    Ok((target - fitted).norm())
}

/// True iff some `A` in the subspace has `‖A X - Y‖_F ≤ residual_tol · max(1, ‖Y‖_F)`.
pub fn oracle_feasible_subspace(x: &ComplexMatrix, y: &ComplexMatrix, subspace: Subspace, tol: &TolerancePolicy) -> Result<bool> {
    let residual = oracle_min_residual(x, y, subspace, tol)?;
    Ok(residual <= tol.residual_tol * y.frobenius_norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn examples() {
        let e1 = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        let e2 = ComplexMatrix::real(&[&[0.0], &[1.0]]);
        assert!(oracle_feasible_subspace(&e1, &e2, Subspace::Hermitian, &tol()).unwrap());
        let ie1 = ComplexMatrix::complex(&[&[(0.0, 1.0)], &[(0.0, 0.0)]]);
        assert!(!oracle_feasible_subspace(&e1, &ie1, Subspace::Hermitian, &tol()).unwrap());
        assert!(oracle_feasible_subspace(&e1, &ie1, Subspace::Symmetric, &tol()).unwrap());
        let x = ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let y = ComplexMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(!oracle_feasible_subspace(&x, &y, Subspace::AnyMatrix, &tol()).unwrap());
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(basis(Subspace::AnyMatrix, 3).len(), 18);
        assert_eq!(basis(Subspace::Hermitian, 3).len(), 9);
        assert_eq!(basis(Subspace::Symmetric, 3).len(), 12);
    }

    #[test]
    fn symmetric_rejects_skew_product() {
        // XᵀY must be symmetric: X = I, Y skew.
        let x = ComplexMatrix::identity(2);
        let y = ComplexMatrix::real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(!oracle_feasible_subspace(&x, &y, Subspace::Symmetric, &tol()).unwrap());
        assert!(oracle_feasible_subspace(&x, &y, Subspace::AnyMatrix, &tol()).unwrap());
    }

    #[test]
    fn too_large() {
        let x = ComplexMatrix::zeros(9, 1);
        assert!(matches!(
            oracle_feasible_subspace(&x, &x, Subspace::AnyMatrix, &tol()),
            Err(TargetError::TooLarge { m: 9, bound: 8 })
        ));
    }
}
