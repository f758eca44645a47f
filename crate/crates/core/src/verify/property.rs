use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TargetError};
use crate::feasibility::{Condition, PropertyClass};
use crate::matrix::ComplexMatrix;
use crate::tolerance::TolerancePolicy;

type CMat = DMatrix<Complex64>;

const MAX_ITERATIONS: usize = 100_000;
const SOLVER_EPS: f64 = 5.0 * f64::EPSILON;

/// Named deviations of a matrix from a property class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: PropertyClass,
    pub passed: bool,
    pub conditions: Vec<Condition>,
}

impl PropertyReport {
    /// Largest deviation among the identity-type conditions (those with a
    /// nonnegative threshold), floored at zero.
    pub fn max_deviation(&self) -> f64 {
        self.conditions
            .iter()
            .filter(|c| c.threshold >= 0.0)
            .map(|c| c.deviation)
            .fold(0.0, f64::max)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn fro(m: &CMat) -> f64 {
    m.norm()
}

fn svals(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let Some(svd) = m.clone().try_svd(false, false, SOLVER_EPS, MAX_ITERATIONS) else {
        return vec![f64::INFINITY];
    };
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn hermitian_dev(a: &CMat) -> f64 {
    fro(&(a - a.adjoint())) / fro(a).max(1.0)
}

/// Smallest eigenvalue of `(A + A*)/2` over `‖A‖₂`.
fn min_eig_rel(a: &CMat) -> f64 {
    let h = (a + a.adjoint()).scale(0.5);
    let norm2 = svals(a).first().copied().unwrap_or(0.0);
    if norm2 == 0.0 {
        return 0.0;
    }
    match SymmetricEigen::try_new(h, SOLVER_EPS, MAX_ITERATIONS) {
        Some(e) => e.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min) / norm2,
        None => f64::NEG_INFINITY,
    }
}

/// Eigenvalues of a normal `A`, read off `Q* A Q` where `Q` diagonalizes the
/// Hermitian matrix `Re A + t Im A` for a generic real `t`. For normal `A`
/// the two parts commute, so `Q` diagonalizes `A` as well; for other `A` the
/// result is only indicative. `None` if the eigensolver does not converge.
fn normal_eigenvalues(a: &CMat) -> Option<Vec<Complex64>> {
    const T: f64 = 0.618_033_988_749_894_9;
    let re = (a + a.adjoint()).scale(0.5);
    let im = (a - a.adjoint()) * Complex64::new(0.0, -0.5);
    let e = SymmetricEigen::try_new(re + im.scale(T), SOLVER_EPS, MAX_ITERATIONS)?;
    let q = e.eigenvectors;
    Some((q.adjoint() * a * &q).diagonal().iter().copied().collect())
}

/// Checks `A` against every defining identity of `property`.
pub fn verify_property(
    a: &ComplexMatrix,
    property: PropertyClass,
    tol: &TolerancePolicy,
) -> PropertyReport {
    let mut conds = Vec::new();
    let finite = a.is_finite();
    conds.push(Condition::new("finite", if finite { 0.0 } else { 1.0 }, 0.0));
    let (rows, cols) = a.shape();
    conds.push(Condition::new(
        "square",
        rows.abs_diff(cols) as f64,
        0.0,
    ));
    if !finite || rows != cols {
        return PropertyReport {
            property,
            passed: false,
            conditions: conds,
        };
    }
    let m = rows;
    let am = a.as_complex();
    let id = CMat::identity(m, m);
    let scale = fro(am).max(1.0);

    let hermitian = || Condition::new("hermitian", hermitian_dev(am), tol.sym_tol);
    let invertible = || {
        let s = svals(am);
        let rel = match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
            _ => 0.0,
        };
        Condition::new(
            "invertible",
            -rel,
            -tol.rank_rel_cutoff * m.max(1) as f64,
        )
    };
    let normal = || {
        let c = am.adjoint() * am - am * am.adjoint();
        Condition::new("normal", fro(&c) / (scale * scale), tol.sym_tol)
    };

    match property {
        PropertyClass::Unconstrained => {}
        PropertyClass::Invertible => conds.push(invertible()),
        PropertyClass::Hermitian => conds.push(hermitian()),
        PropertyClass::InvertibleHermitian => {
            conds.push(hermitian());
            conds.push(invertible());
        }
        PropertyClass::PositiveSemidefinite => {
            conds.push(hermitian());
            conds.push(Condition::new(
                "min-eigenvalue",
                (-min_eig_rel(am)).max(0.0),
                tol.psd_tol,
            ));
        }
        PropertyClass::PositiveDefinite => {
            conds.push(hermitian());
            conds.push(Condition::new(
                "positive-definite",
                -min_eig_rel(am),
                -tol.rank_rel_cutoff * m.max(1) as f64,
            ));
        }
        PropertyClass::Unitary => {
            let d = am.adjoint() * am - &id;
            conds.push(Condition::new("unitary", fro(&d), tol.sym_tol));
        }
        PropertyClass::Reflection => {
            conds.push(hermitian());
            let d = am * am - &id;
            conds.push(Condition::new("involution", fro(&d), tol.sym_tol));
        }
        PropertyClass::OrthogonalProjection => {
            conds.push(hermitian());
            let d = am * am - am;
            conds.push(Condition::new("idempotent", fro(&d) / scale, tol.sym_tol));
        }
        PropertyClass::ComplexSymmetric => {
            let d = am - am.transpose();
            conds.push(Condition::new("symmetric", fro(&d) / scale, tol.sym_tol));
        }
        PropertyClass::NormalTwoPoint { lambda, mu } => {
            conds.push(normal());
            let span = 1.0f64.max(lambda.norm()).max(mu.norm());
            let dist = normal_eigenvalues(am).map_or(f64::INFINITY, |ev| {
                ev.into_iter()
                    .map(|z| (z - lambda).norm().min((z - mu).norm()))
                    .fold(0.0, f64::max)
            });
            conds.push(Condition::new("spectrum-distance", dist / span, tol.sym_tol));
            let p = (am - &id * lambda) * (am - &id * mu);
            let norm2 = svals(am).first().copied().unwrap_or(0.0);
            let pscale = (norm2 + lambda.norm()).max(1.0) * (norm2 + mu.norm()).max(1.0);
            conds.push(Condition::new(
                "two-point-annihilator",
                fro(&p) / pscale,
                tol.sym_tol,
            ));
        }
        PropertyClass::NormalVector => conds.push(normal()),
    }
    PropertyReport {
        property,
        passed: conds.iter().all(|c| c.satisfied),
        conditions: conds,
    }
}

/// `‖AX - Y‖_F / max(1, ‖Y‖_F)`.
pub fn verify_targeting(a: &ComplexMatrix, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    if a.rows() != a.cols() || a.cols() != x.rows() || x.shape() != y.shape() {
        return Err(TargetError::ShapeMismatch(format!(
            "A {}×{}, X {}×{}, Y {}×{}",
            a.rows(),
            a.cols(),
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let r = a.as_complex() * x.as_complex() - y.as_complex();
    Ok(fro(&r) / fro(y.as_complex()).max(1.0))
}
