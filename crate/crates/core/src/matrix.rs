//! Dense complex matrix carrier with a field tag.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Result, TargetError};
use crate::scalar::{Field, Scalar};

/// Dense `rows × cols` matrix of complex scalars.
///
/// The field tag is `Real` exactly when every imaginary part is `0.0`; it is
/// computed on construction and decides whether downstream constructions run
/// in real arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
    field: Field,
}

impl ComplexMatrix {
    pub fn from_complex(data: DMatrix<Complex64>) -> Self {
        let field = if data.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        Self { data, field }
    }

    pub fn from_real(data: DMatrix<f64>) -> Self {
        Self {
            data: data.map(|x| Complex64::new(x, 0.0)),
            field: Field::Real,
        }
    }

    pub fn from_generic<T: Scalar>(data: &DMatrix<T>) -> Self {
        Self::from_complex(data.map(|z| z.to_c64()))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(TargetError::ShapeMismatch(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self::from_complex(DMatrix::from_row_slice(
            rows, cols, entries,
        )))
    }

    pub fn from_real_row_slice(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(TargetError::ShapeMismatch(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self::from_real(DMatrix::from_row_slice(
            rows, cols, entries,
        )))
    }

    /// Real matrix from nested rows; panics on ragged input. Intended for
    /// literals in tests and examples.
    pub fn real(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged matrix literal"
        );
        Self::from_real(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    /// Complex matrix from nested rows of `(re, im)` pairs; panics on ragged input.
    pub fn complex(rows: &[&[(f64, f64)]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged matrix literal"
        );
        Self::from_complex(DMatrix::from_fn(nrows, ncols, |i, j| {
            let (re, im) = rows[i][j];
            Complex64::new(re, im)
        }))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_real(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real(DMatrix::identity(n, n))
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn as_complex(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_complex(self) -> DMatrix<Complex64> {
        self.data
    }

    /// Real parts, or `None` if the matrix is complex-tagged.
    pub fn to_real(&self) -> Option<DMatrix<f64>> {
        self.is_real().then(|| self.data.map(|z| z.re))
    }

    /// Converts to the requested scalar type. Casting a complex-tagged matrix
    /// to `f64` drops imaginary parts.
    pub fn cast<T: Scalar>(&self) -> DMatrix<T> {
        self.data.map(T::from_c64)
    }

    pub fn row_major_entries(&self) -> Vec<Complex64> {
        let (r, c) = self.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.data[(i, j)])
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest imaginary magnitude over all entries.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_complex(self.data.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::from_complex(self.data.transpose())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(TargetError::ShapeMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self::from_complex(&self.data * &rhs.data))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_complex(self.data.map(|z| z * factor))
    }

    /// Frobenius distance to `other`; shapes must agree.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.data - &other.data).norm()
    }
}

impl From<DMatrix<f64>> for ComplexMatrix {
    fn from(data: DMatrix<f64>) -> Self {
        Self::from_real(data)
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(data: DMatrix<Complex64>) -> Self {
        Self::from_complex(data)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| {
                    let z = self.data[(i, j)];
                    if self.is_real() {
                        format!("{:.6}", z.re)
                    } else {
                        format!("{:.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// JSON form: `{rows, cols, field, re, im}` with row-major entry lists; `im`
/// is omitted for real-tagged matrices.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.row_major_entries();
        let re: Vec<f64> = entries.iter().map(|z| z.re).collect();
        let fields = if self.is_real() { 4 } else { 5 };
        let mut s = serializer.serialize_struct("ComplexMatrix", fields)?;
        s.serialize_field("rows", &self.rows())?;
        s.serialize_field("cols", &self.cols())?;
        s.serialize_field("field", &self.field)?;
        s.serialize_field("re", &re)?;
        if !self.is_real() {
            let im: Vec<f64> = entries.iter().map(|z| z.im).collect();
            s.serialize_field("im", &im)?;
        }
        s.end()
    }
}
