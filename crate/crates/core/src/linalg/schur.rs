use nalgebra::DMatrix;

use super::{block2x2, hermitian_deviation, pseudoinverse, svd_partitioned};
use crate::error::{Result, TargetError};
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Which block of `[[H, L*], [L, λI]]` the congruence eliminates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurVariant {
    /// Pivot on `λI`; needs `λ ≠ 0`. Result `(H - λ⁻¹L*L) ⊕ λI`.
    EliminateCorner,
    /// Pivot on an invertible `H`. Result `H ⊕ (λI - L H⁻¹ L*)`.
    EliminateHead,
    /// Pivot on `H` through `H†`; needs `null H ⊆ null L`.
    /// Result `H ⊕ (λI - L H† L*)`.
    EliminateHeadPseudo,
}

/// `S* B S = D` with `S` block unit-triangular.
#[derive(Debug, Clone)]
pub struct SchurCongruence<T: Scalar> {
    pub factor: DMatrix<T>,
    pub reduced: DMatrix<T>,
    /// `‖S* B S - D‖_F / max(1, ‖B‖_F)`.
    pub residual: f64,
}

/// `[[H, L*], [L, λI]]`.
pub fn bordered_matrix<T: Scalar>(h: &DMatrix<T>, l: &DMatrix<T>, lambda: f64) -> DMatrix<T> {
    let k = l.nrows();
    let corner = DMatrix::<T>::identity(k, k) * T::from_re(lambda);
    block2x2(h, &l.adjoint(), l, &corner)
}

/// Block-diagonalizes `B = [[H, L*], [L, λI]]` by a `*`-congruence.
pub fn schur_congruence<T: Scalar>(
    h: &DMatrix<T>,
    l: &DMatrix<T>,
    lambda: f64,
    variant: SchurVariant,
    tol: &TolerancePolicy,
) -> Result<SchurCongruence<T>> {
    let r = h.nrows();
    let k = l.nrows();
    if !h.is_square() || l.ncols() != r {
        return Err(TargetError::ShapeMismatch(format!(
            "H must be r×r and L k×r, got H {}×{} and L {}×{}",
            h.nrows(),
            h.ncols(),
            l.nrows(),
            l.ncols()
        )));
    }
    if !lambda.is_finite() {
        return Err(TargetError::NonFinite);
    }
    let herm = hermitian_deviation(h);
    if herm > tol.sym_tol {
        return Err(TargetError::BadVariantPrecondition(format!(
            "H is not Hermitian (deviation {herm:e})"
        )));
    }
    let ir = DMatrix::<T>::identity(r, r);
    let ik = DMatrix::<T>::identity(k, k);
    let zero_rk = DMatrix::<T>::zeros(r, k);
    let zero_kr = DMatrix::<T>::zeros(k, r);

    let (factor, reduced) = match variant {
        SchurVariant::EliminateCorner => {
            if lambda == 0.0 {
                return Err(TargetError::BadVariantPrecondition(
                    "corner elimination needs λ ≠ 0".into(),
                ));
            }
            let inv = T::from_re(1.0 / lambda);
            let s = block2x2(&ir, &zero_rk, &(-(l * inv)), &ik);
            let head = h - l.adjoint() * l * inv;
            let d = block2x2(&head, &zero_rk, &zero_kr, &(&ik * T::from_re(lambda)));
            (s, d)
        }
        SchurVariant::EliminateHead => {
            let rank = match svd_partitioned(h, tol) {
                Ok(f) => f.rank,
                Err(TargetError::ZeroMatrix { .. }) => 0,
                Err(e) => return Err(e),
            };
            if rank < r {
                return Err(TargetError::BadVariantPrecondition(format!(
                    "head elimination needs H invertible (numerical rank {rank} < {r})"
                )));
            }
            let h_inv = pseudoinverse(h, tol)?;
            let s = block2x2(&ir, &(-(&h_inv * l.adjoint())), &zero_kr, &ik);
            let tail = &ik * T::from_re(lambda) - l * &h_inv * l.adjoint();
            (s, block2x2(h, &zero_rk, &zero_kr, &tail))
        }
        SchurVariant::EliminateHeadPseudo => {
            let h_pinv = pseudoinverse(h, tol)?;
            let leak = (l - l * &h_pinv * h).norm() / l.norm().max(1.0);
            if leak > tol.residual_tol {
                return Err(TargetError::BadVariantPrecondition(format!(
                    "null H ⊄ null L (leakage {leak:e})"
                )));
            }
            let s = block2x2(&ir, &(-(&h_pinv * l.adjoint())), &zero_kr, &ik);
            let tail = &ik * T::from_re(lambda) - l * &h_pinv * l.adjoint();
            (s, block2x2(h, &zero_rk, &zero_kr, &tail))
        }
    };
    let b = bordered_matrix(h, l, lambda);
    let residual = (factor.adjoint() * &b * &factor - &reduced).norm() / b.norm().max(1.0);
    if !(residual <= tol.residual_tol) {
        return Err(TargetError::NumericFailure(format!(
            "congruence residual {residual:e} exceeds {:e}",
            tol.residual_tol
        )));
    }
    Ok(SchurCongruence {
        factor,
        reduced,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn m(rows: usize, cols: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, v)
    }

    #[test]
    fn corner_elimination_two_by_two() {
        // B = [[0,1],[1,1]]; S = [[1,0],[-1,1]] gives S*BS = diag(-1, 1).
        let c = schur_congruence(
            &m(1, 1, &[0.0]),
            &m(1, 1, &[1.0]),
            1.0,
            SchurVariant::EliminateCorner,
            &tol(),
        )
        .unwrap();
        assert!((c.reduced - m(2, 2, &[-1.0, 0.0, 0.0, 1.0])).norm() < 1e-15);
        assert!(c.residual < 1e-15);
    }

    #[test]
    fn head_elimination_with_zero_coupling() {
        let c = schur_congruence(
            &DMatrix::<f64>::identity(2, 2),
            &DMatrix::zeros(3, 2),
            -2.5,
            SchurVariant::EliminateHead,
            &tol(),
        )
        .unwrap();
        let mut expected = DMatrix::<f64>::identity(5, 5);
        for i in 2..5 {
            expected[(i, i)] = -2.5;
        }
        assert!((c.reduced - expected).norm() < 1e-15);
    }

    #[test]
    fn pseudo_head_elimination() {
        // λ - L H† L* = 2 - 1 = 1.
        let c = schur_congruence(
            &m(1, 1, &[1.0]),
            &m(1, 1, &[1.0]),
            2.0,
            SchurVariant::EliminateHeadPseudo,
            &tol(),
        )
        .unwrap();
        assert!((c.reduced - DMatrix::<f64>::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn preconditions_are_named() {
        let h = m(1, 1, &[0.0]);
        let l = m(1, 1, &[1.0]);
        let err = schur_congruence(&h, &l, 0.0, SchurVariant::EliminateCorner, &tol()).unwrap_err();
        assert!(matches!(err, TargetError::BadVariantPrecondition(ref s) if s.contains("λ ≠ 0")));
        let err = schur_congruence(&h, &l, 1.0, SchurVariant::EliminateHead, &tol()).unwrap_err();
        assert!(
            matches!(err, TargetError::BadVariantPrecondition(ref s) if s.contains("invertible"))
        );
        let err =
            schur_congruence(&h, &l, 1.0, SchurVariant::EliminateHeadPseudo, &tol()).unwrap_err();
        assert!(matches!(err, TargetError::BadVariantPrecondition(ref s) if s.contains("null")));
        let skew = m(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let err = schur_congruence(
            &skew,
            &DMatrix::zeros(1, 2),
            1.0,
            SchurVariant::EliminateCorner,
            &tol(),
        )
        .unwrap_err();
        assert!(
            matches!(err, TargetError::BadVariantPrecondition(ref s) if s.contains("Hermitian"))
        );
    }

    #[test]
    fn factor_is_unit_block_triangular() {
        let h = m(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let l = m(1, 2, &[0.3, -0.7]);
        for variant in [
            SchurVariant::EliminateCorner,
            SchurVariant::EliminateHead,
            SchurVariant::EliminateHeadPseudo,
        ] {
            let c = schur_congruence(&h, &l, 1.5, variant, &tol()).unwrap();
            for i in 0..3 {
                assert_eq!(c.factor[(i, i)], 1.0);
            }
            assert!((c.factor.determinant() - 1.0).abs() < 1e-14);
        }
    }
}
