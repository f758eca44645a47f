use nalgebra::DMatrix;

use super::{hstack, svd_partitioned};
use crate::error::{Result, TargetError};
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Entries at or below this modulus are skipped when fixing column phases.
const PHASE_PIVOT_FLOOR: f64 = 1e-12;

/// Extends an `m × r` matrix with orthonormal columns to an `m × m` unitary
/// `[B1 B2]`.
///
/// `B2` is taken from the trailing columns of the Householder QR factor of
/// `B1`, then each new column is rotated so that its first entry of modulus
/// above `1e-12` is real and positive.
pub fn complete_orthonormal<T: Scalar>(
    b1: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<T>> {
    let (m, r) = b1.shape();
    if r > m {
        return Err(TargetError::ShapeMismatch(format!(
            "cannot complete {r} columns in dimension {m}"
        )));
    }
    let deviation = (b1.adjoint() * b1 - DMatrix::<T>::identity(r, r)).norm();
    if !(deviation <= tol.sym_tol) {
        return Err(TargetError::NotOrthonormal {
            deviation,
            threshold: tol.sym_tol,
        });
    }
    if r == m {
        return Ok(b1.clone());
    }

    let mut work = b1.clone();
    let mut q = DMatrix::<T>::identity(m, m);
    for k in 0..r {
        let x = work.view((k, k), (m - k, 1)).into_owned();
        let norm_x = x.norm();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = x[0];
        let phase = if alpha.modulus() == 0.0 {
            T::one()
        } else {
            alpha * T::from_re(1.0 / alpha.modulus())
        };
        let beta = -(phase * T::from_re(norm_x));
        let mut v = x;
        v[0] -= beta;
        let vnorm2 = v.norm_squared();
        if vnorm2 == 0.0 {
            continue;
        }
        let coeff = T::from_re(2.0 / vnorm2);

        // work[k.., k..] ← (I - 2vv*/v*v) work[k.., k..]
        let sub = work.view((k, k), (m - k, r - k)).into_owned();
        let updated = &sub - &v * ((v.adjoint() * &sub) * coeff);
        work.view_mut((k, k), (m - k, r - k)).copy_from(&updated);

        // q[.., k..] ← q[.., k..] (I - 2vv*/v*v)
        let qsub = q.view((0, k), (m, m - k)).into_owned();
        let updated = &qsub - (&qsub * &v) * coeff * v.adjoint();
        q.view_mut((0, k), (m, m - k)).copy_from(&updated);
    }

    let mut b2 = q.columns(r, m - r).into_owned();
    normalize_column_phases(&mut b2);
    Ok(hstack(b1, &b2))
}

/// Orthonormal basis of `(col M)⊥` (`m × (m - rank M)`); the identity when
/// `M` is zero.
pub fn orthonormal_complement<T: Scalar>(
    m: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<T>> {
    match svd_partitioned(m, tol) {
        Ok(f) => {
            let mut v2 = f.v2();
            normalize_column_phases(&mut v2);
            Ok(v2)
        }
        Err(TargetError::ZeroMatrix { .. }) => Ok(DMatrix::identity(m.nrows(), m.nrows())),
        Err(e) => Err(e),
    }
}

pub(crate) fn normalize_column_phases<T: Scalar>(m: &mut DMatrix<T>) {
    for mut col in m.column_iter_mut() {
        if let Some(pivot) = col
            .iter()
            .copied()
            .find(|z| z.modulus() > PHASE_PIVOT_FLOOR)
        {
            let rot = pivot.conjugate() * T::from_re(1.0 / pivot.modulus());
            for z in col.iter_mut() {
                *z *= rot;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn assert_unitary<T: Scalar>(b: &DMatrix<T>) {
        let n = b.ncols();
        assert!((b.adjoint() * b - DMatrix::<T>::identity(n, n)).norm() < 1e-13);
    }

    #[test]
    fn completes_e1_to_identity() {
        let b1 = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let b = complete_orthonormal(&b1, &tol()).unwrap();
        assert_unitary(&b);
        // Sign convention makes the new column +e2.
        assert!((b[(1, 1)] - 1.0).abs() < 1e-15);
        assert!(b[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn completes_diagonal_direction() {
        // Gram-Schmidt of e1 against (1,1)/√2 gives (1,-1)/√2 up to sign.
        let s = 0.5f64.sqrt();
        let b1 = DMatrix::from_row_slice(2, 1, &[s, s]);
        let b = complete_orthonormal(&b1, &tol()).unwrap();
        assert_unitary(&b);
        let c = b.column(1);
        // First nonzero entry made positive.
        assert!((c[0] - s).abs() < 1e-15 && (c[1] + s).abs() < 1e-15);
    }

    #[test]
    fn full_set_is_returned_unchanged() {
        let b1 = DMatrix::<f64>::identity(3, 3);
        assert_eq!(complete_orthonormal(&b1, &tol()).unwrap(), b1);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let b1 = DMatrix::from_row_slice(2, 1, &[2.0, 0.0]);
        assert!(matches!(
            complete_orthonormal(&b1, &tol()),
            Err(TargetError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn complex_completion_phase_convention() {
        let h = 0.5;
        let b1 = DMatrix::from_row_slice(
            3,
            1,
            &[
                Complex64::new(h, h),
                Complex64::new(0.0, h),
                Complex64::new(h, 0.0),
            ],
        );
        let b = complete_orthonormal(&b1, &tol()).unwrap();
        assert_unitary(&b);
        for j in 1..3 {
            let pivot = b
                .column(j)
                .iter()
                .copied()
                .find(|z| z.norm() > PHASE_PIVOT_FLOOR)
                .unwrap();
            assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
        }
        assert_eq!(b.columns(0, 1), b1.columns(0, 1));
    }

    #[test]
    fn complement_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(3, 2);
        assert_eq!(
            orthonormal_complement(&z, &tol()).unwrap(),
            DMatrix::identity(3, 3)
        );
    }
}
