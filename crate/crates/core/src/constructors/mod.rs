//! One constructive solver per property class. Each solver re-checks
//! feasibility, builds `A`, and verifies the result independently before
//! returning it.

mod basic;
mod hermitian;
mod normal;
mod symmetric;
mod unitary;

pub use basic::{solution_family, solve_invertible, solve_unconstrained};
pub use hermitian::{solve_hermitian, solve_invertible_hermitian, solve_pd, solve_psd};
pub use normal::{completion_gap, solve_normal_two_point, solve_normal_vector, CompletionGap};
pub use symmetric::solve_complex_symmetric;
pub use unitary::{solve_projection, solve_reflection, solve_unitary, solve_unitary_polar};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Result, TargetError};
use crate::feasibility::{check, FeasibilityReport, PropertyClass};
use crate::linalg::{scale_columns_inv, svd_partitioned, SvdFactors};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;
use crate::verify::{verify_property, verify_targeting};

/// A verified targeting matrix together with the choices that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetingSolution {
    pub a: ComplexMatrix,
    pub property: PropertyClass,
    pub free_params: FreeParams,
    /// `‖AX - Y‖_F / max(1, ‖Y‖_F)`.
    pub residual: f64,
    /// Largest identity-type deviation reported by `verify_property`.
    pub property_deviation: f64,
}

/// Free parameters of a construction. Unused entries are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FreeParams {
    /// Numerical rank `r` of `X`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Free block `Z` of `A = YX† + Z(I - XX†)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<ComplexMatrix>,
    /// Corner scalar of the bordered matrix `[[H, L*], [L, λI]]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Columns appended to `B1` to complete `B = [B1 B2]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completion: Option<ComplexMatrix>,
    /// Symmetric corner block of the complex-symmetric construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<ComplexMatrix>,
    /// Ranks of `Y - μX` and `Y - λX` in the two-point construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_point_ranks: Option<(usize, usize)>,
    /// Ratio `‖y‖ / ‖x‖` in the single-vector normal construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

/// The blocks of `V* Y W1 = Z = [Z1; Z2]` and `B1 = Z Σr⁻¹ = [H; L]` built
/// from the SVD `X = V Σ W*`.
#[derive(Debug, Clone)]
pub struct CompletionBlocks<T: Scalar> {
    pub svd: SvdFactors<T>,
    pub z: DMatrix<T>,
    pub z1: DMatrix<T>,
    pub z2: DMatrix<T>,
    pub b1: DMatrix<T>,
    pub h: DMatrix<T>,
    pub l: DMatrix<T>,
}

impl<T: Scalar> CompletionBlocks<T> {
    pub fn new(x: &DMatrix<T>, y: &DMatrix<T>, tol: &TolerancePolicy) -> Result<Self> {
        let svd = svd_partitioned(x, tol)?;
        let (m, r) = (svd.rows(), svd.rank);
        let z = svd.v.adjoint() * y * svd.w1();
        let b1 = scale_columns_inv(&z, &svd.sigma);
        Ok(CompletionBlocks {
            z1: z.rows(0, r).into_owned(),
            z2: z.rows(r, m - r).into_owned(),
            h: b1.rows(0, r).into_owned(),
            l: b1.rows(r, m - r).into_owned(),
            svd,
            z,
            b1,
        })
    }

    pub fn rank(&self) -> usize {
        self.svd.rank
    }

    /// `V B V*`.
    pub fn assemble(&self, b: &DMatrix<T>) -> DMatrix<T> {
        &self.svd.v * b * self.svd.v.adjoint()
    }
}

/// Whether a construction may run in real arithmetic.
pub(crate) fn all_real(mats: &[&ComplexMatrix]) -> bool {
    mats.iter().all(|m| m.is_real())
}

/// Runs the feasibility check and turns an infeasible verdict into an error.
pub(crate) fn require(
    property: PropertyClass,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<FeasibilityReport> {
    check(property, x, y, tol)?.into_result()
}

pub(crate) fn source_is_zero(x: &ComplexMatrix, tol: &TolerancePolicy) -> bool {
    x.frobenius_norm() <= tol.zero_matrix_tol
}

/// Verifies `A` independently and packages it.
pub(crate) fn finish(
    property: PropertyClass,
    a: ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    free_params: FreeParams,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let residual = verify_targeting(&a, x, y)?;
    if !(residual <= tol.residual_tol) {
        return Err(TargetError::NumericFailure(format!(
            "{property}: targeting residual {residual:e} exceeds {:e}",
            tol.residual_tol
        )));
    }
    let report = verify_property(&a, property, tol);
    if let Some(c) = report.conditions.iter().find(|c| !c.satisfied) {
        return Err(TargetError::NumericFailure(format!(
            "{property}: constructed matrix fails '{}' (deviation {:e}, threshold {:e})",
            c.name, c.deviation, c.threshold
        )));
    }
    Ok(TargetingSolution {
        a,
        property,
        free_params,
        residual,
        property_deviation: report.max_deviation(),
    })
}

/// Builds the solution for a zero source (feasible only with `Y = 0`): the
/// scalar matrix `cI`.
pub(crate) fn zero_source_solution(
    property: PropertyClass,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    c: num_complex::Complex64,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    let a = ComplexMatrix::identity(x.rows()).scale(c);
    let free = FreeParams {
        rank: Some(0),
        ..FreeParams::default()
    };
    finish(property, a, x, y, free, tol)
}

/// Solves with default free parameters.
pub fn solve(
    property: PropertyClass,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<TargetingSolution> {
    match property {
        PropertyClass::Unconstrained => solve_unconstrained(x, y, None, tol),
        PropertyClass::Invertible => solve_invertible(x, y, tol),
        PropertyClass::Hermitian => solve_hermitian(x, y, None, tol),
        PropertyClass::InvertibleHermitian => solve_invertible_hermitian(x, y, tol),
        PropertyClass::PositiveSemidefinite => solve_psd(x, y, tol),
        PropertyClass::PositiveDefinite => solve_pd(x, y, tol),
        PropertyClass::Unitary => solve_unitary(x, y, tol),
        PropertyClass::Reflection => solve_reflection(x, y, tol),
        PropertyClass::OrthogonalProjection => solve_projection(x, y, tol),
        PropertyClass::ComplexSymmetric => solve_complex_symmetric(x, y, None, tol),
        PropertyClass::NormalTwoPoint { lambda, mu } => solve_normal_two_point(x, y, lambda, mu, tol),
        PropertyClass::NormalVector => solve_normal_vector(x, y, tol),
    }
}
