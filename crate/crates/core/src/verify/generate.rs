//! Seeded instances `(X, Y = A X)` built from a random witness `A` of the
//! requested class.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Result, TargetError};
use crate::feasibility::PropertyClass;
use crate::matrix::ComplexMatrix;
use crate::sampling::{gaussian_matrix, random_orthonormal, random_unitary, seeded, uniform, SeededRng};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSpec {
    pub property: PropertyClass,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub field: Field,
    /// Forces `rank X = min(m, n) - rank_deficiency`.
    pub rank_deficiency: Option<usize>,
}

impl InstanceSpec {
    pub fn new(property: PropertyClass, m: usize, n: usize, seed: u64, field: Field) -> Self {
        InstanceSpec {
            property,
            m,
            n,
            seed,
            field,
            rank_deficiency: None,
        }
    }

    pub fn with_rank_deficiency(mut self, deficiency: usize) -> Self {
        self.rank_deficiency = Some(deficiency);
        self
    }

    pub fn rank(&self) -> usize {
        self.m.min(self.n) - self.rank_deficiency.unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TargetError::BadSpec(msg));
        if self.m == 0 || self.n == 0 {
            return bad(format!("dimensions must be positive, got {}×{}", self.m, self.n));
        }
        if self.n > self.m {
            return bad(format!("generated instances need n ≤ m, got {}×{}", self.m, self.n));
        }
        if let Some(d) = self.rank_deficiency {
            if d >= self.m.min(self.n) {
                return bad(format!("rank deficiency {d} must be below min(m, n) = {}", self.n));
            }
        }
        self.property.validate()?;
        match self.property {
            PropertyClass::NormalVector if self.n != 1 => bad("normal-vector instances need n = 1".into()),
            PropertyClass::NormalTwoPoint { .. } if self.m < 2 => {
                bad("normal-two-point instances need m ≥ 2 so both eigenvalues occur".into())
            }
            p @ PropertyClass::NormalTwoPoint { .. } if self.field == Field::Real && !p.is_real() => {
                bad("real instances need real λ and μ".into())
            }
            _ => Ok(()),
        }
    }
}

/// A spec with shape, field and rank profile drawn from `seed`: `m ≤ max_m`,
/// `n ≤ m`, complex half the time (always when `property` needs it), and a
/// rank deficiency a third of the time.
pub fn random_spec(property: PropertyClass, seed: u64, max_m: usize) -> InstanceSpec {
    let mut rng = seeded(seed ^ 0x9e37_79b9_7f4a_7c15);
    let min_m = if matches!(property, PropertyClass::NormalTwoPoint { .. }) { 2 } else { 1 };
    let m = rng.random_range(min_m..=max_m.max(min_m));
    let n = if property == PropertyClass::NormalVector { 1 } else { rng.random_range(1..=m) };
    let field = if !property.is_real() || rng.random_bool(0.5) {
        Field::Complex
    } else {
        Field::Real
    };
    let mut spec = InstanceSpec::new(property, m, n, seed, field);
    if n > 1 && rng.random_bool(1.0 / 3.0) {
        spec.rank_deficiency = Some(rng.random_range(1..n));
    }
    spec
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub witness: ComplexMatrix,
}

/// Deterministic in `spec`: the same spec gives bitwise-identical matrices.
pub fn generate_instance(spec: &InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    match spec.field {
        Field::Real => generate_in::<f64>(spec, &mut rng),
        Field::Complex => generate_in::<Complex64>(spec, &mut rng),
    }
}

fn generate_in<T: Scalar>(spec: &InstanceSpec, rng: &mut SeededRng) -> Result<Instance> {
    let a = witness::<T>(spec.property, spec.m, rng);
    let k = spec.rank();
    let x = gaussian_matrix::<T>(rng, spec.m, k) * gaussian_matrix::<T>(rng, k, spec.n);
    let y = &a * &x;
    Ok(Instance {
        x: ComplexMatrix::from_generic(&x),
        y: ComplexMatrix::from_generic(&y),
        witness: ComplexMatrix::from_generic(&a),
    })
}

fn diag_conjugate<T: Scalar>(q: &DMatrix<T>, d: &[T]) -> DMatrix<T> {
    q * DMatrix::from_diagonal(&DVector::from_column_slice(d)) * q.adjoint()
}

fn projector<T: Scalar>(rng: &mut SeededRng, m: usize, k: usize) -> DMatrix<T> {
    let q = random_orthonormal::<T>(rng, m, k);
    &q * q.adjoint()
}

/// Magnitudes in `[0.5, 2]` keep the witness well away from singular.
fn magnitude(rng: &mut SeededRng) -> f64 {
    uniform(rng, 0.5, 2.0)
}

fn sign(rng: &mut SeededRng) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

fn witness<T: Scalar>(property: PropertyClass, m: usize, rng: &mut SeededRng) -> DMatrix<T> {
    let half = T::from_re(0.5);
    match property {
        PropertyClass::Unconstrained => gaussian_matrix(rng, m, m),
        PropertyClass::Invertible => {
            let u = random_unitary::<T>(rng, m);
            let v = random_unitary::<T>(rng, m);
            let d: Vec<T> = (0..m).map(|_| T::from_re(magnitude(rng))).collect();
            u * DMatrix::from_diagonal(&DVector::from_vec(d)) * v.adjoint()
        }
        PropertyClass::Hermitian => {
            let g = gaussian_matrix::<T>(rng, m, m);
            (&g + g.adjoint()) * half
        }
        PropertyClass::InvertibleHermitian => {
            let q = random_unitary::<T>(rng, m);
            let d: Vec<T> = (0..m).map(|_| T::from_re(sign(rng) * magnitude(rng))).collect();
            diag_conjugate(&q, &d)
        }
        PropertyClass::PositiveSemidefinite => {
            let q = random_unitary::<T>(rng, m);
            let d: Vec<T> = (0..m)
                .map(|_| {
                    let v = uniform(rng, 0.1, 1.0);
                    T::from_re(if rng.random_bool(0.3) { 0.0 } else { v })
                })
                .collect();
            diag_conjugate(&q, &d)
        }
        PropertyClass::PositiveDefinite => {
            let q = random_unitary::<T>(rng, m);
            let d: Vec<T> = (0..m).map(|_| T::from_re(uniform(rng, 0.1, 1.0))).collect();
            diag_conjugate(&q, &d)
        }
        PropertyClass::Unitary => random_unitary(rng, m),
        PropertyClass::Reflection => {
            let k = rng.random_range(0..=m);
            DMatrix::identity(m, m) - projector::<T>(rng, m, k) * T::from_re(2.0)
        }
        PropertyClass::OrthogonalProjection => {
            let k = rng.random_range(1..=m);
            projector(rng, m, k)
        }
        PropertyClass::ComplexSymmetric => {
            let g = gaussian_matrix::<T>(rng, m, m);
            (&g + g.transpose()) * half
        }
        PropertyClass::NormalTwoPoint { lambda, mu } => {
            let k = rng.random_range(1..m);
            let p = projector::<T>(rng, m, k);
            let id = DMatrix::<T>::identity(m, m);
            &p * T::from_c64(lambda) + (id - &p) * T::from_c64(mu)
        }
        PropertyClass::NormalVector => {
            let q = random_unitary::<T>(rng, m);
            let d: Vec<T> = match T::FIELD {
                Field::Real => (0..m).map(|_| T::from_re(sign(rng) * magnitude(rng))).collect(),
                Field::Complex => (0..m)
                    .map(|_| {
                        let angle = uniform(rng, 0.0, std::f64::consts::TAU);
                        T::from_c64(Complex64::from_polar(magnitude(rng), angle))
                    })
                    .collect(),
            };
            diag_conjugate(&q, &d)
        }
    }
}
