//! Dense primitives consumed by every construction: partitioned SVD,
//! pseudoinverse and projectors, polar factor, orthonormal completion and
//! Schur-complement congruences. All routines are generic over [`Scalar`] so
//! real inputs stay in real arithmetic.

mod complete;
mod polar;
mod projector;
mod schur;
mod svd;

pub use complete::{complete_orthonormal, orthonormal_complement};
pub(crate) use complete::normalize_column_phases;
pub use polar::{polar_orthonormal_factor, PolarFactors};
pub use projector::{orthogonal_projector, orthogonal_projector_with_scale, pseudoinverse};
pub use schur::{bordered_matrix, schur_congruence, SchurCongruence, SchurVariant};
pub use svd::{
    null_space_basis, numerical_rank, svd_partitioned, svd_partitioned_with_scale, SvdFactors,
};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Result, TargetError};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100_000;

/// Convergence threshold for the iterative solvers; nalgebra's own default.
/// Tighter values can stall the complex SVD on rank-deficient input.
const SOLVER_EPS: f64 = 5.0 * f64::EPSILON;

pub(crate) fn check_finite<T: Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.iter()
        .all(|z| z.to_c64().re.is_finite() && z.to_c64().im.is_finite())
    {
        Ok(())
    } else {
        Err(TargetError::NonFinite)
    }
}

/// `(M + M*) / 2`.
pub fn hermitian_part<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.adjoint()) * T::from_re(0.5)
}

/// `(M + Mᵀ) / 2`.
pub fn symmetric_part<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * T::from_re(0.5)
}

/// `‖M - M*‖_F / max(1, ‖M‖_F)`.
pub fn hermitian_deviation<T: Scalar>(m: &DMatrix<T>) -> f64 {
    (m - m.adjoint()).norm() / m.norm().max(1.0)
}

/// `‖M - Mᵀ‖_F / max(1, ‖M‖_F)`.
pub fn symmetric_deviation<T: Scalar>(m: &DMatrix<T>) -> f64 {
    (m - m.transpose()).norm() / m.norm().max(1.0)
}

/// Singular values in descending order (empty for an empty matrix).
pub fn singular_values<T: Scalar>(m: &DMatrix<T>) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    check_finite(m)?;
    let svd = m
        .clone()
        .try_svd(false, false, SOLVER_EPS, MAX_SWEEPS)
        .ok_or_else(|| TargetError::NumericFailure("SVD did not converge".into()))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value; zero for an empty matrix.
pub fn spectral_norm<T: Scalar>(m: &DMatrix<T>) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Smallest singular value of a square matrix.
pub fn smallest_singular_value<T: Scalar>(m: &DMatrix<T>) -> Result<f64> {
    Ok(singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen<T: Scalar>(m: &DMatrix<T>) -> Result<(Vec<f64>, DMatrix<T>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    if !m.is_square() {
        return Err(TargetError::ShapeMismatch(format!(
            "eigen-decomposition needs a square matrix, got {}×{}",
            n,
            m.ncols()
        )));
    }
    check_finite(m)?;
    let eig =
        SymmetricEigen::try_new(hermitian_part(m), SOLVER_EPS, MAX_SWEEPS).ok_or_else(|| {
            TargetError::NumericFailure("eigen-decomposition did not converge".into())
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues<T: Scalar>(m: &DMatrix<T>) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

/// `M · diag(1 / d)`, scaling column `j` by `1 / d[j]`.
pub(crate) fn scale_columns_inv<T: Scalar>(m: &DMatrix<T>, d: &[f64]) -> DMatrix<T> {
    let mut out = m.clone();
    for (j, &s) in d.iter().enumerate() {
        out.column_mut(j).scale_mut(1.0 / s);
    }
    out
}

/// `M · diag(d)`.
pub(crate) fn scale_columns<T: Scalar>(m: &DMatrix<T>, d: &[f64]) -> DMatrix<T> {
    let mut out = m.clone();
    for (j, &s) in d.iter().enumerate() {
        out.column_mut(j).scale_mut(s);
    }
    out
}

/// `diag(d) · M`.
pub(crate) fn scale_rows<T: Scalar>(m: &DMatrix<T>, d: &[f64]) -> DMatrix<T> {
    let mut out = m.clone();
    for (i, &s) in d.iter().enumerate() {
        out.row_mut(i).scale_mut(s);
    }
    out
}

/// Entry-wise complex conjugate.
pub(crate) fn conj<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    m.map(|z| z.conjugate())
}

/// Horizontal concatenation `[a b]`.
pub(crate) fn hstack<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// 2×2 block matrix `[[a, b], [c, d]]`.
pub(crate) fn block2x2<T: Scalar>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    c: &DMatrix<T>,
    d: &DMatrix<T>,
) -> DMatrix<T> {
    let (r, k) = (a.nrows(), a.ncols());
    assert_eq!(b.nrows(), r);
    assert_eq!(c.ncols(), k);
    assert_eq!(d.nrows(), c.nrows());
    assert_eq!(d.ncols(), b.ncols());
    let mut out = DMatrix::zeros(r + c.nrows(), k + b.ncols());
    out.view_mut((0, 0), (r, k)).copy_from(a);
    out.view_mut((0, k), (r, b.ncols())).copy_from(b);
    out.view_mut((r, 0), (c.nrows(), k)).copy_from(c);
    out.view_mut((r, k), (d.nrows(), d.ncols())).copy_from(d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn eigenvalues_sorted_ascending() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 5.0]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(ev.len(), 3);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let i = Complex64::new(0.0, 1.0);
        let two = Complex64::new(2.0, 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[two, i, -i, two]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_empty() {
        let m = DMatrix::<f64>::zeros(3, 0);
        assert!(singular_values(&m).unwrap().is_empty());
        assert_eq!(spectral_norm(&m).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        let m = DMatrix::from_row_slice(1, 2, &[1.0, f64::NAN]);
        assert!(matches!(singular_values(&m), Err(TargetError::NonFinite)));
    }
}
