//! Scalar field abstraction: every construction runs either in real or in
//! complex arithmetic, chosen from the field tags of its inputs.

use nalgebra::ComplexField;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// `f64` or `Complex64`, with lossless conversion to the complex carrier.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    const FIELD: Field;

    /// Converts from the complex carrier. The real implementation drops the
    /// imaginary part; callers only take that path for real-tagged data.
    fn from_c64(z: Complex64) -> Self;

    fn to_c64(self) -> Complex64;

    fn from_re(x: f64) -> Self {
        Self::from_real(x)
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn from_c64(z: Complex64) -> Self {
        z.re
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(self) -> Complex64 {
        self
    }
}
