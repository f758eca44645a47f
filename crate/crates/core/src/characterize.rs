//! The inverse question: for a fixed nonzero target `Y` with SVD
//! `Y = V Σ W*`, which sources `X` admit a targeting matrix of a given
//! class? Sources are described by the blocks of `V* X W`, partitioned
//! conformally to `Σ`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TargetError};
use crate::feasibility::PropertyClass;
use crate::linalg::{block2x2, hstack, null_space_basis, numerical_rank, scale_columns, scale_rows, svd_partitioned, SvdFactors};
use crate::matrix::ComplexMatrix;
use crate::sampling::{gaussian_matrix, random_orthonormal, seeded, SeededRng};
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Free blocks describing a source, per class.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SourceBlocks {
    /// `V* X W = [[Z11, 0], [Z21, Z22]]` with `Σr Z11` Hermitian.
    Hermitian {
        z11: ComplexMatrix,
        z21: ComplexMatrix,
        z22: ComplexMatrix,
    },
    /// `V* X W = [[U11 Σr, 0], [U21 Σr, 0]]` with `[U11; U21]` orthonormal
    /// and `U11` Hermitian.
    Reflection { u11: ComplexMatrix, u21: ComplexMatrix },
    /// `V* X W = [[Σr, 0], [Z21, Z22]]`.
    Projection { z21: ComplexMatrix, z22: ComplexMatrix },
}

/// A target, its SVD, and the blocks that pin down one source.
#[derive(Debug, Clone)]
pub struct SourceRecipe {
    pub property: PropertyClass,
    pub y: ComplexMatrix,
    pub y_svd: SvdFactors<Complex64>,
    pub blocks: SourceBlocks,
}

impl SourceRecipe {
    pub fn new(y: &ComplexMatrix, blocks: SourceBlocks, tol: &TolerancePolicy) -> Result<Self> {
        let property = match blocks {
            SourceBlocks::Hermitian { .. } => PropertyClass::Hermitian,
            SourceBlocks::Reflection { .. } => PropertyClass::Reflection,
            SourceBlocks::Projection { .. } => PropertyClass::OrthogonalProjection,
        };
        let y_svd = target_svd(y, tol)?;
        Ok(SourceRecipe {
            property,
            y: y.clone(),
            y_svd,
            blocks,
        })
    }

    /// Draws random blocks satisfying the hypotheses for `property`, which
    /// must be Hermitian, Reflection or OrthogonalProjection. Real targets
    /// get real blocks.
    pub fn random(property: PropertyClass, y: &ComplexMatrix, seed: u64, tol: &TolerancePolicy) -> Result<Self> {
        let svd = target_svd(y, tol)?;
        let mut rng = seeded(seed);
        let blocks = if y.is_real() {
            random_blocks::<f64>(property, &svd, &mut rng)?
        } else {
            random_blocks::<Complex64>(property, &svd, &mut rng)?
        };
        SourceRecipe::new(y, blocks, tol)
    }

    pub fn rank(&self) -> usize {
        self.y_svd.rank
    }

    /// Checks the block hypotheses and assembles `X = V [[·,·],[·,·]] W*`.
    pub fn build(&self, tol: &TolerancePolicy) -> Result<ComplexMatrix> {
        match &self.blocks {
            SourceBlocks::Hermitian { z11, z21, z22 } => build_source_hermitian(&self.y, z11, z21, z22, tol),
            SourceBlocks::Reflection { u11, u21 } => build_source_reflection(&self.y, u11, u21, tol),
            SourceBlocks::Projection { z21, z22 } => build_source_projection(&self.y, z21, z22, tol),
        }
    }
}

fn target_svd(y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<SvdFactors<Complex64>> {
    tol.validate()?;
    if !y.is_finite() {
        return Err(TargetError::NonFinite);
    }
    match svd_partitioned(y.as_complex(), tol) {
        Err(TargetError::ZeroMatrix { norm, .. }) => Err(TargetError::ZeroMatrix { what: "target Y", norm }),
        other => other,
    }
}

fn random_blocks<T: Scalar>(property: PropertyClass, svd: &SvdFactors<Complex64>, rng: &mut SeededRng) -> Result<SourceBlocks> {
    let (m, n, r) = (svd.rows(), svd.cols(), svd.rank);
    let to = |a: DMatrix<T>| ComplexMatrix::from_generic(&a);
    let blocks = match property {
        PropertyClass::Hermitian => {
            // Σr Z11 = S Hermitian, so Z11 = Σr⁻¹ S.
            let g = gaussian_matrix::<T>(rng, r, r);
            let s = (&g + g.adjoint()) * T::from_re(0.5);
            let inv: Vec<f64> = svd.sigma.iter().map(|s| 1.0 / s).collect();
            let z11 = DMatrix::from_fn(r, r, |i, j| s[(i, j)] * T::from_re(inv[i]));
            SourceBlocks::Hermitian {
                z11: to(z11),
                z21: to(gaussian_matrix::<T>(rng, m - r, r)),
                z22: to(gaussian_matrix::<T>(rng, m - r, n - r)),
            }
        }
        PropertyClass::Reflection => {
            // Leading r columns of a random reflection I - 2QQ*.
            let k = if m > 1 { 1 + rng.random_range(0..m - 1) } else { 1 };
            let q = random_orthonormal::<T>(rng, m, k);
            let refl = DMatrix::<T>::identity(m, m) - &q * q.adjoint() * T::from_re(2.0);
            let u1 = refl.columns(0, r).into_owned();
            SourceBlocks::Reflection {
                u11: to(u1.rows(0, r).into_owned()),
                u21: to(u1.rows(r, m - r).into_owned()),
            }
        }
        PropertyClass::OrthogonalProjection => SourceBlocks::Projection {
            z21: to(gaussian_matrix::<T>(rng, m - r, r)),
            z22: to(gaussian_matrix::<T>(rng, m - r, n - r)),
        },
        other => {
            return Err(TargetError::InvalidProperty(format!(
                "sources are characterized only for hermitian, reflection and projection, not {other}"
            )))
        }
    };
    Ok(blocks)
}

fn expect_shape(name: &str, m: &ComplexMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(TargetError::ShapeMismatch(format!(
            "{name} must be {rows}×{cols}, got {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(TargetError::NonFinite);
    }
    Ok(())
}

/// `X = V [[top_left, 0], [bottom_left, bottom_right]] W*` in the field of
/// the inputs.
fn assemble(
    y: &ComplexMatrix,
    svd: &SvdFactors<Complex64>,
    top_left: &ComplexMatrix,
    bottom_left: &ComplexMatrix,
    bottom_right: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    if [y, top_left, bottom_left, bottom_right].iter().all(|m| m.is_real()) {
        let real_svd = svd_partitioned(&y.cast::<f64>(), tol)?;
        Ok(ComplexMatrix::from_real(assemble_in(&real_svd, &top_left.cast(), &bottom_left.cast(), &bottom_right.cast())))
    } else {
        Ok(ComplexMatrix::from_complex(assemble_in(
            svd,
            top_left.as_complex(),
            bottom_left.as_complex(),
            bottom_right.as_complex(),
        )))
    }
}

fn assemble_in<T: Scalar>(svd: &SvdFactors<T>, tl: &DMatrix<T>, bl: &DMatrix<T>, br: &DMatrix<T>) -> DMatrix<T> {
    let r = svd.rank;
    let n = svd.cols();
    let z = block2x2(tl, &DMatrix::zeros(r, n - r), bl, br);
    &svd.v * z * svd.w.adjoint()
}

fn sigma_matrix(svd: &SvdFactors<Complex64>, real: bool) -> ComplexMatrix {
    let s = DMatrix::from_diagonal(&DVector::from_vec(svd.sigma.clone()));
    if real {
        ComplexMatrix::from_real(s)
    } else {
        ComplexMatrix::from_complex(s.map(|x| Complex64::new(x, 0.0)))
    }
}

fn rank_or_zero(m: &DMatrix<Complex64>, tol: &TolerancePolicy) -> Result<usize> {
    if m.is_empty() || m.norm() <= tol.zero_matrix_tol {
        Ok(0)
    } else {
        numerical_rank(m, tol)
    }
}

/// A source from which some Hermitian `A` reaches `Y`.
///
/// Requires `Σr Z11` Hermitian, and either `Z11` invertible, or
/// `rank [Z11; Z21] = r` together with `(Z21 · null Z11) ∩ col Z22 = {0}`.
pub fn build_source_hermitian(
    y: &ComplexMatrix,
    z11: &ComplexMatrix,
    z21: &ComplexMatrix,
    z22: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    let svd = target_svd(y, tol)?;
    let (m, n, r) = (svd.rows(), svd.cols(), svd.rank);
    expect_shape("Z11", z11, r, r)?;
    expect_shape("Z21", z21, m - r, r)?;
    expect_shape("Z22", z22, m - r, n - r)?;

    let sz = scale_rows(z11.as_complex(), &svd.sigma);
    let skew = (&sz - sz.adjoint()).norm();
    let scale = svd.sigma_max() * z11.frobenius_norm();
    let dev = if scale > 0.0 { skew / scale } else { 0.0 };
    if !(dev <= tol.sym_tol) {
        return Err(TargetError::ConditionViolated(format!(
            "Σr·Z11 is not Hermitian (relative deviation {dev:e})"
        )));
    }

    let z11c = z11.as_complex();
    let head_rank = rank_or_zero(z11c, tol)?;
    if head_rank < r {
        let mut z1 = DMatrix::<Complex64>::zeros(m, r);
        z1.rows_mut(0, r).copy_from(z11c);
        z1.rows_mut(r, m - r).copy_from(z21.as_complex());
        let z1_rank = rank_or_zero(&z1, tol)?;
        if z1_rank < r {
            return Err(TargetError::ConditionViolated(format!(
                "rank [Z11; Z21] = {z1_rank} < r = {r}"
            )));
        }
        let null = null_space_basis(z11c, tol)?;
        let image = z21.as_complex() * null;
        let combined = hstack(&image, z22.as_complex());
        let (ri, r22, rc) = (
            rank_or_zero(&image, tol)?,
            rank_or_zero(z22.as_complex(), tol)?,
            rank_or_zero(&combined, tol)?,
        );
        if rc < ri + r22 {
            return Err(TargetError::ConditionViolated(format!(
                "Z21·null(Z11) meets col Z22 (rank {rc} < {ri} + {r22})"
            )));
        }
    }
    assemble(y, &svd, z11, z21, z22, tol)
}

/// A source from which some reflection reaches `Y`. Requires
/// `[U11; U21]` with orthonormal columns and `U11` Hermitian.
pub fn build_source_reflection(
    y: &ComplexMatrix,
    u11: &ComplexMatrix,
    u21: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    let svd = target_svd(y, tol)?;
    let (m, n, r) = (svd.rows(), svd.cols(), svd.rank);
    expect_shape("U11", u11, r, r)?;
    expect_shape("U21", u21, m - r, r)?;
    let (a, b) = (u11.as_complex(), u21.as_complex());
    let gram = a.adjoint() * a + b.adjoint() * b - DMatrix::<Complex64>::identity(r, r);
    if !(gram.norm() <= tol.sym_tol) {
        return Err(TargetError::ConditionViolated(format!(
            "[U11; U21] does not have orthonormal columns (deviation {:e})",
            gram.norm()
        )));
    }
    let herm = (a - a.adjoint()).norm() / a.norm().max(1.0);
    if !(herm <= tol.sym_tol) {
        return Err(TargetError::ConditionViolated(format!(
            "U11 is not Hermitian (deviation {herm:e})"
        )));
    }
    let real = y.is_real() && u11.is_real() && u21.is_real();
    let sig = sigma_matrix(&svd, real);
    let tl = u11.mul(&sig)?;
    let bl = u21.mul(&sig)?;
    let zero = if real {
        ComplexMatrix::from_real(DMatrix::zeros(m - r, n - r))
    } else {
        ComplexMatrix::zeros(m - r, n - r)
    };
    assemble(y, &svd, &tl, &bl, &zero, tol)
}

/// A source from which some orthogonal projection reaches `Y`; every
/// choice of `Z21`, `Z22` works.
pub fn build_source_projection(
    y: &ComplexMatrix,
    z21: &ComplexMatrix,
    z22: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    let svd = target_svd(y, tol)?;
    let (m, n, r) = (svd.rows(), svd.cols(), svd.rank);
    expect_shape("Z21", z21, m - r, r)?;
    expect_shape("Z22", z22, m - r, n - r)?;
    let real = y.is_real() && z21.is_real() && z22.is_real();
    assemble(y, &svd, &sigma_matrix(&svd, real), z21, z22, tol)
}

/// `V* X W` for the SVD `Y = V Σ W*`, split conformally to `Σ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDecomposition {
    pub rank: usize,
    pub sigma: Vec<f64>,
    pub z11: ComplexMatrix,
    pub z12: ComplexMatrix,
    pub z21: ComplexMatrix,
    pub z22: ComplexMatrix,
}

impl BlockDecomposition {
    /// `‖Σr Z11 - (Σr Z11)*‖_F` relative to `σmax ‖Z11‖_F`.
    pub fn head_hermitian_deviation(&self) -> f64 {
        let sz = scale_rows(self.z11.as_complex(), &self.sigma);
        let scale = self.sigma.first().copied().unwrap_or(0.0) * self.z11.frobenius_norm();
        if scale > 0.0 {
            (&sz - sz.adjoint()).norm() / scale
        } else {
            0.0
        }
    }

    /// `U1 = [Z11; Z21] Σr⁻¹`, the reflection-source factor.
    pub fn reflection_factor(&self) -> ComplexMatrix {
        let r = self.rank;
        let m = r + self.z21.rows();
        let mut z1 = DMatrix::<Complex64>::zeros(m, r);
        z1.rows_mut(0, r).copy_from(self.z11.as_complex());
        z1.rows_mut(r, m - r).copy_from(self.z21.as_complex());
        let inv: Vec<f64> = self.sigma.iter().map(|s| 1.0 / s).collect();
        ComplexMatrix::from_complex(scale_columns(&z1, &inv))
    }
}

/// Splits a candidate source against the SVD of `Y`.
pub fn decompose_source(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<BlockDecomposition> {
    if x.shape() != y.shape() {
        return Err(TargetError::ShapeMismatch(format!(
            "X is {}×{} but Y is {}×{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let svd = target_svd(y, tol)?;
    let (m, n, r) = (svd.rows(), svd.cols(), svd.rank);
    let z = svd.v.adjoint() * x.as_complex() * &svd.w;
    let part = |i: usize, j: usize, h: usize, w: usize| ComplexMatrix::from_complex(z.view((i, j), (h, w)).into_owned());
    Ok(BlockDecomposition {
        rank: r,
        sigma: svd.sigma.clone(),
        z11: part(0, 0, r, r),
        z12: part(0, r, r, n - r),
        z21: part(r, 0, m - r, r),
        z22: part(r, r, m - r, n - r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{solve_hermitian, solve_projection, solve_reflection};
    use crate::feasibility::check;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::real(rows)
    }

    fn empty(rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_real(DMatrix::zeros(rows, cols))
    }

    #[test]
    fn hermitian_identity_recipe() {
        let y = m(&[&[3.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let svd = target_svd(&y, &tol()).unwrap();
        let z11 = sigma_matrix(&svd, true);
        let x = build_source_hermitian(&y, &z11, &empty(1, 2), &empty(1, 0), &tol()).unwrap();
        assert!(x.distance(&y) < 1e-14);
    }

    #[test]
    fn hermitian_scaled_column() {
        let y = m(&[&[1.0], &[0.0]]);
        let x = build_source_hermitian(&y, &m(&[&[2.0]]), &m(&[&[0.0]]), &empty(1, 0), &tol()).unwrap();
        assert!(x.distance(&m(&[&[2.0], &[0.0]])) < 1e-14);
        assert!(solve_hermitian(&x, &y, None, &tol()).is_ok());
    }

    #[test]
    fn hermitian_intersection_condition() {
        let y = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        // Z21·null Z11 = span{1}, col Z22 = {0}: the condition holds.
        let x = build_source_hermitian(&y, &m(&[&[0.0]]), &m(&[&[1.0]]), &m(&[&[0.0]]), &tol()).unwrap();
        assert!(check(PropertyClass::Hermitian, &x, &y, &tol()).unwrap().is_feasible());
        // With Z22 = [1] the two subspaces meet.
        let err = build_source_hermitian(&y, &m(&[&[0.0]]), &m(&[&[1.0]]), &m(&[&[1.0]]), &tol()).unwrap_err();
        assert!(matches!(err, TargetError::ConditionViolated(ref s) if s.contains("meets")));
        // rank [Z11; Z21] < r.
        let err = build_source_hermitian(&y, &m(&[&[0.0]]), &m(&[&[0.0]]), &m(&[&[1.0]]), &tol()).unwrap_err();
        assert!(matches!(err, TargetError::ConditionViolated(ref s) if s.contains("rank")));
    }

    #[test]
    fn hermitian_head_condition() {
        let y = m(&[&[2.0, 0.0], &[0.0, 1.0]]);
        let z11 = m(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let err = build_source_hermitian(&y, &z11, &empty(0, 2), &empty(0, 0), &tol()).unwrap_err();
        assert!(matches!(err, TargetError::ConditionViolated(ref s) if s.contains("Hermitian")));
    }

    #[test]
    fn reflection_recipes() {
        let y = m(&[&[1.0], &[0.0]]);
        let x = build_source_reflection(&y, &m(&[&[1.0]]), &m(&[&[0.0]]), &tol()).unwrap();
        assert!(x.distance(&y) < 1e-14);
        let x = build_source_reflection(&y, &m(&[&[-1.0]]), &m(&[&[0.0]]), &tol()).unwrap();
        assert!(x.distance(&m(&[&[-1.0], &[0.0]])) < 1e-14);
        let x = build_source_reflection(&y, &m(&[&[0.0]]), &m(&[&[1.0]]), &tol()).unwrap();
        assert!((x.frobenius_norm() - 1.0).abs() < 1e-14);
        assert!(x.adjoint().mul(&y).unwrap().frobenius_norm() < 1e-14);
        assert!(solve_reflection(&x, &y, &tol()).is_ok());
        let err = build_source_reflection(&y, &m(&[&[1.0]]), &m(&[&[1.0]]), &tol()).unwrap_err();
        assert!(matches!(err, TargetError::ConditionViolated(_)));
    }

    #[test]
    fn projection_recipes() {
        let y = m(&[&[1.0], &[0.0]]);
        let x = build_source_projection(&y, &m(&[&[5.0]]), &empty(1, 0), &tol()).unwrap();
        assert!(x.distance(&m(&[&[1.0], &[5.0]])) < 1e-14);
        assert!(solve_projection(&x, &y, &tol()).is_ok());
        let x = build_source_projection(&y, &empty(1, 1), &empty(1, 0), &tol()).unwrap();
        assert!(x.distance(&y) < 1e-14);
    }

    #[test]
    fn random_recipes_are_feasible() {
        let y = ComplexMatrix::complex(&[
            &[(1.0, 0.5), (0.0, 1.0), (2.0, 0.0)],
            &[(0.0, 0.0), (1.0, -1.0), (1.0, 1.0)],
            &[(1.0, 0.5), (1.0, 0.0), (3.0, 1.0)],
            &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
        ]);
        for p in [PropertyClass::Hermitian, PropertyClass::Reflection, PropertyClass::OrthogonalProjection] {
            for seed in 0..5 {
                let recipe = SourceRecipe::random(p, &y, seed, &tol()).unwrap();
                let x = recipe.build(&tol()).unwrap();
                assert!(check(p, &x, &y, &tol()).unwrap().is_feasible(), "{p} seed {seed}");
            }
        }
        assert!(SourceRecipe::random(PropertyClass::Unitary, &y, 0, &tol()).is_err());
    }

    #[test]
    fn decomposition_of_projection_source() {
        let y = m(&[&[1.0, 1.0], &[1.0, 1.0], &[0.0, 0.0]]);
        let x = build_source_projection(&y, &m(&[&[0.3], &[-2.0]]), &m(&[&[1.0], &[4.0]]), &tol()).unwrap();
        let d = decompose_source(&x, &y, &tol()).unwrap();
        assert_eq!(d.rank, 1);
        assert!((d.z11.get(0, 0).re - d.sigma[0]).abs() < 1e-13);
        assert!(d.z12.frobenius_norm() < 1e-13);
    }
}
