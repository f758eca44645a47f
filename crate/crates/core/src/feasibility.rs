//! Feasibility predicates with certificates: for each property class, the
//! conditions on `(X, Y)` under which a targeting matrix exists, each
//! reported with the scalar that was actually compared.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Result, TargetError};
use crate::linalg::{
    hermitian_eigenvalues, numerical_rank, svd_partitioned, svd_partitioned_with_scale,
};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Structural property requested of the targeting matrix `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropertyClass {
    Unconstrained,
    Invertible,
    Hermitian,
    InvertibleHermitian,
    PositiveSemidefinite,
    PositiveDefinite,
    Unitary,
    Reflection,
    OrthogonalProjection,
    ComplexSymmetric,
    /// Normal with spectrum contained in `{lambda, mu}`.
    NormalTwoPoint {
        lambda: Complex64,
        mu: Complex64,
    },
    /// Normal, single-column source and target.
    NormalVector,
}

impl PropertyClass {
    /// Every class, with `(1, 0)` standing in for the two-point scalars.
    pub const ALL: [PropertyClass; 12] = [
        PropertyClass::Unconstrained,
        PropertyClass::Invertible,
        PropertyClass::Hermitian,
        PropertyClass::InvertibleHermitian,
        PropertyClass::PositiveSemidefinite,
        PropertyClass::PositiveDefinite,
        PropertyClass::Unitary,
        PropertyClass::Reflection,
        PropertyClass::OrthogonalProjection,
        PropertyClass::ComplexSymmetric,
        PropertyClass::NormalTwoPoint {
            lambda: Complex64::new(1.0, 0.0),
            mu: Complex64::new(0.0, 0.0),
        },
        PropertyClass::NormalVector,
    ];

    pub fn two_point(lambda: Complex64, mu: Complex64) -> Result<Self> {
        let p = PropertyClass::NormalTwoPoint { lambda, mu };
        p.validate()?;
        Ok(p)
    }

    /// Command-line name.
    pub fn name(&self) -> &'static str {
        match self {
            PropertyClass::Unconstrained => "unconstrained",
            PropertyClass::Invertible => "invertible",
            PropertyClass::Hermitian => "hermitian",
            PropertyClass::InvertibleHermitian => "invertible-hermitian",
            PropertyClass::PositiveSemidefinite => "psd",
            PropertyClass::PositiveDefinite => "pd",
            PropertyClass::Unitary => "unitary",
            PropertyClass::Reflection => "reflection",
            PropertyClass::OrthogonalProjection => "projection",
            PropertyClass::ComplexSymmetric => "complex-symmetric",
            PropertyClass::NormalTwoPoint { .. } => "normal-two-point",
            PropertyClass::NormalVector => "normal-vector",
        }
    }

    /// Parses a name, attaching the scalars when it names the two-point class.
    pub fn from_name(name: &str, lambda: Option<Complex64>, mu: Option<Complex64>) -> Result<Self> {
        let p = match name.to_ascii_lowercase().as_str() {
            "unconstrained" | "any" => PropertyClass::Unconstrained,
            "invertible" => PropertyClass::Invertible,
            "hermitian" => PropertyClass::Hermitian,
            "invertible-hermitian" => PropertyClass::InvertibleHermitian,
            "psd" | "positive-semidefinite" => PropertyClass::PositiveSemidefinite,
            "pd" | "positive-definite" => PropertyClass::PositiveDefinite,
            "unitary" => PropertyClass::Unitary,
            "reflection" => PropertyClass::Reflection,
            "projection" | "orthogonal-projection" => PropertyClass::OrthogonalProjection,
            "complex-symmetric" | "symmetric" => PropertyClass::ComplexSymmetric,
            "normal-two-point" | "two-point" => match (lambda, mu) {
                (Some(lambda), Some(mu)) => PropertyClass::two_point(lambda, mu)?,
                _ => {
                    return Err(TargetError::InvalidProperty(
                        "normal-two-point needs both lambda and mu".into(),
                    ))
                }
            },
            "normal-vector" => PropertyClass::NormalVector,
            other => {
                return Err(TargetError::InvalidProperty(format!(
                    "unknown property class '{other}'"
                )))
            }
        };
        if !matches!(p, PropertyClass::NormalTwoPoint { .. }) && (lambda.is_some() || mu.is_some())
        {
            return Err(TargetError::InvalidProperty(format!(
                "lambda/mu only apply to normal-two-point, not {}",
                p.name()
            )));
        }
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let PropertyClass::NormalTwoPoint { lambda, mu } = self {
            if !(lambda.re.is_finite()
                && lambda.im.is_finite()
                && mu.re.is_finite()
                && mu.im.is_finite())
            {
                return Err(TargetError::InvalidProperty(
                    "lambda and mu must be finite".into(),
                ));
            }
            if lambda == mu {
                return Err(TargetError::InvalidProperty(format!(
                    "lambda and mu must differ, both are {lambda}"
                )));
            }
        }
        Ok(())
    }

    /// False only for the two-point class with a non-real scalar.
    pub fn is_real(&self) -> bool {
        match self {
            PropertyClass::NormalTwoPoint { lambda, mu } => lambda.im == 0.0 && mu.im == 0.0,
            _ => true,
        }
    }
}

impl fmt::Display for PropertyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyClass::NormalTwoPoint { lambda, mu } => {
                write!(f, "normal-two-point(lambda={lambda}, mu={mu})")
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for PropertyClass {
    type Err = TargetError;

    fn from_str(s: &str) -> Result<Self> {
        PropertyClass::from_name(s, None, None)
    }
}

#[derive(Serialize)]
struct ReIm {
    re: f64,
    im: f64,
}

fn complex_json(z: Complex64) -> ReIm {
    ReIm { re: z.re, im: z.im }
}

impl Serialize for PropertyClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PropertyClass::NormalTwoPoint { lambda, mu } => {
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("name", self.name())?;
                map.serialize_entry("lambda", &complex_json(*lambda))?;
                map.serialize_entry("mu", &complex_json(*mu))?;
                map.end()
            }
            _ => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("name", self.name())?;
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Infeasible,
}

/// One named condition. Satisfied iff `deviation <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub satisfied: bool,
    pub deviation: f64,
    pub threshold: f64,
}

impl Condition {
    pub fn new(name: &str, deviation: f64, threshold: f64) -> Self {
        Condition {
            name: name.to_string(),
            satisfied: deviation <= threshold,
            deviation,
            threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub verdict: Verdict,
    pub property: PropertyClass,
    pub conditions: Vec<Condition>,
}

impl FeasibilityReport {
    pub fn new(property: PropertyClass, conditions: Vec<Condition>) -> Self {
        let verdict = if conditions.iter().all(|c| c.satisfied) {
            Verdict::Feasible
        } else {
            Verdict::Infeasible
        };
        FeasibilityReport {
            verdict,
            property,
            conditions,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// The first condition that failed, if any.
    pub fn first_failure(&self) -> Option<&Condition> {
        self.conditions.iter().find(|c| !c.satisfied)
    }

    /// `Ok(self)` if feasible, otherwise the `Infeasible` error carrying it.
    pub fn into_result(self) -> Result<Self> {
        if self.is_feasible() {
            Ok(self)
        } else {
            Err(TargetError::Infeasible(Box::new(self)))
        }
    }
}

/// Decides whether some `A` of the given class satisfies `AX = Y`.
pub fn check(
    property: PropertyClass,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<FeasibilityReport> {
    tol.validate()?;
    property.validate()?;
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
    if x.is_real() && y.is_real() && property.is_real() {
        check_in(property, &x.cast::<f64>(), &y.cast::<f64>(), tol)
    } else {
        check_in(property, x.as_complex(), y.as_complex(), tol)
    }
}

/// Field-generic body of [`check`]; shapes must already agree.
pub fn check_in<T: Scalar>(
    property: PropertyClass,
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<FeasibilityReport> {
    let n = x.ncols();
    let nx = x.norm();
    let ny = y.norm();

    if property == PropertyClass::NormalVector {
        if n != 1 {
            return Err(TargetError::ShapeMismatch(format!(
                "normal-vector needs single-column X and Y, got {n} columns"
            )));
        }
        if nx <= tol.zero_matrix_tol || ny <= tol.zero_matrix_tol {
            return Err(TargetError::ZeroVector);
        }
        return Ok(FeasibilityReport::new(
            property,
            vec![Condition::new("nonzero-vectors", 0.0, 0.0)],
        ));
    }
    if property == PropertyClass::OrthogonalProjection && ny <= tol.zero_matrix_tol {
        return Err(TargetError::ZeroMatrix {
            what: "target Y",
            norm: ny,
        });
    }
    if nx <= tol.zero_matrix_tol {
        // Only A X = 0 = Y is possible, and the identity (or λI) witnesses it.
        return Ok(FeasibilityReport::new(
            property,
            vec![Condition::new(
                "zero-source-target",
                ny,
                tol.zero_matrix_tol,
            )],
        ));
    }

    let xy_scale = nx * ny;
    let mut conds = Vec::new();
    match property {
        PropertyClass::Unconstrained => {
            conds.push(null_inclusion(x, y, tol)?);
        }
        PropertyClass::Invertible => {
            conds.push(null_inclusion(x, y, tol)?);
            conds.push(rank_equality(x, y, tol)?);
        }
        PropertyClass::Hermitian => {
            conds.push(null_inclusion(x, y, tol)?);
            conds.push(product_hermitian(x, y, tol));
        }
        PropertyClass::InvertibleHermitian => {
            conds.push(null_inclusion(x, y, tol)?);
            conds.push(rank_equality(x, y, tol)?);
            conds.push(product_hermitian(x, y, tol));
        }
        PropertyClass::PositiveSemidefinite => {
            conds.extend(psd_conditions(x, y, tol)?);
        }
        PropertyClass::PositiveDefinite => {
            if numerical_rank(x, tol)? == n {
                let mxy = x.adjoint() * y;
                conds.push(product_hermitian(x, y, tol));
                let lmin = hermitian_eigenvalues(&mxy)?[0];
                conds.push(Condition::new(
                    "product-positive-definite",
                    -lmin / xy_scale,
                    -tol.psd_tol,
                ));
            } else {
                conds.extend(psd_conditions(x, y, tol)?);
                conds.push(rank_equality(x, y, tol)?);
            }
        }
        PropertyClass::Unitary => {
            conds.push(gram_equality(x, y, tol));
        }
        PropertyClass::Reflection => {
            conds.push(product_hermitian(x, y, tol));
            conds.push(gram_equality(x, y, tol));
        }
        PropertyClass::OrthogonalProjection => {
            let d = y.adjoint() * x - y.adjoint() * y;
            conds.push(Condition::new(
                "projection-identity",
                d.norm() / ((nx + ny) * ny),
                tol.residual_tol,
            ));
        }
        PropertyClass::ComplexSymmetric => {
            conds.push(null_inclusion(x, y, tol)?);
            let p = x.transpose() * y;
            conds.push(Condition::new(
                "product-symmetric",
                (&p - p.transpose()).norm() / xy_scale,
                tol.sym_tol,
            ));
        }
        PropertyClass::NormalTwoPoint { lambda, mu } => {
            conds.extend(two_point_conditions(x, y, lambda, mu, tol)?);
        }
        PropertyClass::NormalVector => unreachable!(),
    }
    Ok(FeasibilityReport::new(property, conds))
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// `null X ⊆ null Y`, measured as `‖Y W2‖_F / ‖Y‖_F`.
fn null_inclusion<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<Condition> {
    let f = svd_partitioned(x, tol)?;
    let leak = (y * f.w2()).norm();
    Ok(Condition::new(
        "null-inclusion",
        ratio(leak, y.norm()),
        tol.residual_tol,
    ))
}

fn rank_of<T: Scalar>(m: &DMatrix<T>, tol: &TolerancePolicy) -> Result<usize> {
    if m.norm() <= tol.zero_matrix_tol {
        Ok(0)
    } else {
        numerical_rank(m, tol)
    }
}

/// `rank X = rank Y`; the deviation is the rank difference.
fn rank_equality<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<Condition> {
    let rx = rank_of(x, tol)? as f64;
    let ry = rank_of(y, tol)? as f64;
    Ok(Condition::new("rank-equality", (rx - ry).abs(), 0.0))
}

/// `X*Y` Hermitian, measured as `‖X*Y - Y*X‖_F / (‖X‖_F ‖Y‖_F)`.
fn product_hermitian<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Condition {
    let mxy = x.adjoint() * y;
    let skew = (&mxy - mxy.adjoint()).norm();
    Condition::new(
        "product-hermitian",
        ratio(skew, x.norm() * y.norm()),
        tol.sym_tol,
    )
}

/// `X*X = Y*Y`, measured as `‖X*X - Y*Y‖_F / ‖X‖_F²`.
fn gram_equality<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>, tol: &TolerancePolicy) -> Condition {
    let d = x.adjoint() * x - y.adjoint() * y;
    Condition::new(
        "gram-equality",
        ratio(d.norm(), x.norm_squared()),
        tol.residual_tol,
    )
}

fn psd_conditions<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    tol: &TolerancePolicy,
) -> Result<Vec<Condition>> {
    let scale = x.norm() * y.norm();
    let mxy = x.adjoint() * y;
    let herm = product_hermitian(x, y, tol);
    let lmin = hermitian_eigenvalues(&mxy)?[0];
    let psd = Condition::new("product-psd", ratio((-lmin).max(0.0), scale), tol.psd_tol);
    // null(X*Y) ⊆ null Y; the reverse inclusion always holds.
    let leak = if mxy.norm() <= tol.zero_matrix_tol {
        y.norm()
    } else {
        let f = svd_partitioned_with_scale(&mxy, tol, scale)?;
        (y * f.w2()).norm()
    };
    let null = Condition::new(
        "null-target-equals-null-product",
        ratio(leak, y.norm()),
        tol.residual_tol,
    );
    Ok(vec![herm, psd, null])
}

fn two_point_conditions<T: Scalar>(
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    lambda: Complex64,
    mu: Complex64,
    tol: &TolerancePolicy,
) -> Result<Vec<Condition>> {
    let (l, u) = (T::from_c64(lambda), T::from_c64(mu));
    let f = y - x * l;
    let e = y - x * u;
    let (nx, ny) = (x.norm(), y.norm());
    let scale_f = ny + lambda.norm() * nx;
    let scale_e = ny + mu.norm() * nx;
    let orth = Condition::new(
        "two-point-orthogonality",
        ratio((f.adjoint() * &e).norm(), scale_f * scale_e),
        tol.residual_tol,
    );
    // With rank X = m the equation A X = Y pins A down; if Y is a multiple of
    // X by one of the scalars, that A is a scalar matrix with one eigenvalue.
    let m = x.nrows();
    let coincide = ratio(f.norm(), scale_f) <= tol.residual_tol
        || ratio(e.norm(), scale_e) <= tol.residual_tol;
    let proviso_fails = coincide && numerical_rank(x, tol)? == m;
    let proviso = Condition::new(
        "two-point-rank-proviso",
        if proviso_fails { 1.0 } else { 0.0 },
        0.0,
    );
    Ok(vec![orth, proviso])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn chk(p: PropertyClass, x: &ComplexMatrix, y: &ComplexMatrix) -> FeasibilityReport {
        check(p, x, y, &tol()).unwrap()
    }

    #[test]
    fn unconstrained_null_inclusion_counterexample() {
        let x = ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let y = ComplexMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = chk(PropertyClass::Unconstrained, &x, &y);
        assert_eq!(r.verdict, Verdict::Infeasible);
        let c = r.first_failure().unwrap();
        assert_eq!(c.name, "null-inclusion");
        assert!((c.deviation - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_norm_mismatch_deviation() {
        let x = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        let y = ComplexMatrix::real(&[&[2.0], &[0.0]]);
        let r = chk(PropertyClass::Unitary, &x, &y);
        assert_eq!(r.verdict, Verdict::Infeasible);
        assert!((r.conditions[0].deviation - 3.0).abs() < 1e-15);
    }

    #[test]
    fn projection_example() {
        let x = ComplexMatrix::real(&[&[1.0], &[1.0]]);
        let y = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        assert!(chk(PropertyClass::OrthogonalProjection, &x, &y).is_feasible());
        let y2 = ComplexMatrix::real(&[&[2.0], &[0.0]]);
        let x2 = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        assert!(!chk(PropertyClass::OrthogonalProjection, &x2, &y2).is_feasible());
        let z = ComplexMatrix::zeros(2, 1);
        assert!(matches!(
            check(PropertyClass::OrthogonalProjection, &x, &z, &tol()),
            Err(TargetError::ZeroMatrix { .. })
        ));
    }

    #[test]
    fn hermitian_cases() {
        let e1 = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        let e2 = ComplexMatrix::real(&[&[0.0], &[1.0]]);
        assert!(chk(PropertyClass::Hermitian, &e1, &e2).is_feasible());
        let ie1 = ComplexMatrix::complex(&[&[(0.0, 1.0)], &[(0.0, 0.0)]]);
        let r = chk(PropertyClass::Hermitian, &e1, &ie1);
        assert_eq!(r.first_failure().unwrap().name, "product-hermitian");
        // Invertible Hermitian needs equal null spaces.
        let i2 = ComplexMatrix::identity(2);
        let d = ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let r = chk(PropertyClass::InvertibleHermitian, &i2, &d);
        assert_eq!(r.first_failure().unwrap().name, "rank-equality");
    }

    #[test]
    fn psd_and_pd() {
        let x = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        let y = ComplexMatrix::real(&[&[1.0], &[1.0]]);
        assert!(chk(PropertyClass::PositiveSemidefinite, &x, &y).is_feasible());
        assert!(chk(PropertyClass::PositiveDefinite, &x, &y).is_feasible());
        let neg = ComplexMatrix::real(&[&[-1.0], &[0.0]]);
        let r = chk(PropertyClass::PositiveSemidefinite, &x, &neg);
        assert_eq!(r.first_failure().unwrap().name, "product-psd");
        // X*Y = 0 but Y ≠ 0: any PSD A with A e1 = e2 would have e1*A e1 = 0,
        // forcing A e1 = 0.
        let e2 = ComplexMatrix::real(&[&[0.0], &[1.0]]);
        let r = chk(PropertyClass::PositiveSemidefinite, &x, &e2);
        assert_eq!(
            r.first_failure().unwrap().name,
            "null-target-equals-null-product"
        );
        // Full-rank shortcut.
        let i2 = ComplexMatrix::identity(2);
        let y = ComplexMatrix::real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let r = chk(PropertyClass::PositiveDefinite, &i2, &y);
        assert!(r.is_feasible());
        assert!(r.condition("product-positive-definite").is_some());
        // PSD but singular product with full column rank X is not PD-feasible.
        let y = ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(!chk(PropertyClass::PositiveDefinite, &i2, &y).is_feasible());
        assert!(chk(PropertyClass::PositiveSemidefinite, &i2, &y).is_feasible());
    }

    #[test]
    fn reflection_and_complex_symmetric() {
        let x = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        let y = ComplexMatrix::real(&[&[0.0], &[1.0]]);
        assert!(chk(PropertyClass::Reflection, &x, &y).is_feasible());
        let iy = ComplexMatrix::complex(&[&[(0.0, 1.0)], &[(0.0, 0.0)]]);
        assert!(!chk(PropertyClass::Reflection, &x, &iy).is_feasible());
        assert!(chk(PropertyClass::ComplexSymmetric, &x, &iy).is_feasible());
        let i2 = ComplexMatrix::identity(2);
        let n = ComplexMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = chk(PropertyClass::ComplexSymmetric, &i2, &n);
        assert_eq!(r.first_failure().unwrap().name, "product-symmetric");
    }

    #[test]
    fn two_point_proviso() {
        let p =
            PropertyClass::two_point(Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let y = i2.scale(Complex64::new(2.0, 0.0));
        let r = chk(p, &i2, &y);
        assert_eq!(r.first_failure().unwrap().name, "two-point-rank-proviso");
        // Rank-deficient square X escapes the proviso.
        let x = ComplexMatrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let y = x.scale(Complex64::new(2.0, 0.0));
        assert!(chk(p, &x, &y).is_feasible());
        assert!(
            PropertyClass::two_point(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).is_err()
        );
    }

    #[test]
    fn zero_source() {
        let z = ComplexMatrix::zeros(2, 2);
        let y = ComplexMatrix::identity(2);
        assert!(chk(PropertyClass::Unitary, &z, &z).is_feasible());
        let r = chk(PropertyClass::Hermitian, &z, &y);
        assert_eq!(r.first_failure().unwrap().name, "zero-source-target");
    }

    #[test]
    fn normal_vector_preconditions() {
        let x = ComplexMatrix::real(&[&[1.0], &[0.0]]);
        let z = ComplexMatrix::zeros(2, 1);
        assert!(matches!(
            check(PropertyClass::NormalVector, &x, &z, &tol()),
            Err(TargetError::ZeroVector)
        ));
        let i2 = ComplexMatrix::identity(2);
        assert!(matches!(
            check(PropertyClass::NormalVector, &i2, &i2, &tol()),
            Err(TargetError::ShapeMismatch(_))
        ));
        assert!(chk(PropertyClass::NormalVector, &x, &x).is_feasible());
    }

    #[test]
    fn names_round_trip() {
        for p in PropertyClass::ALL {
            let parsed = match p {
                PropertyClass::NormalTwoPoint { lambda, mu } => {
                    PropertyClass::from_name(p.name(), Some(lambda), Some(mu)).unwrap()
                }
                _ => p.name().parse().unwrap(),
            };
            assert_eq!(parsed, p);
        }
        assert!("normal-two-point".parse::<PropertyClass>().is_err());
        assert!("bogus".parse::<PropertyClass>().is_err());
    }

    #[test]
    fn shape_mismatch() {
        let a = ComplexMatrix::zeros(2, 1);
        let b = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            check(PropertyClass::Unconstrained, &a, &b, &tol()),
            Err(TargetError::ShapeMismatch(_))
        ));
    }
}
