//! Seeded random matrices for instance and source generation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::scalar::{Field, Scalar};

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard normal scalar; complex draws have unit expected modulus squared.
pub fn gaussian<T: Scalar>(rng: &mut SeededRng) -> T {
    let re: f64 = rng.sample(StandardNormal);
    match T::FIELD {
        Field::Real => T::from_re(re),
        Field::Complex => {
            let im: f64 = rng.sample(StandardNormal);
            T::from_c64(Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2)
        }
    }
}

/// Entries drawn row by row.
pub fn gaussian_matrix<T: Scalar>(rng: &mut SeededRng, rows: usize, cols: usize) -> DMatrix<T> {
    let entries: Vec<T> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    DMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary (orthogonal when real): QR of a Gaussian matrix
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<T: Scalar>(rng: &mut SeededRng, m: usize) -> DMatrix<T> {
    let g = gaussian_matrix::<T>(rng, m, m);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..m {
        let d = r[(j, j)];
        let modulus = d.modulus();
        if modulus > 0.0 {
            let phase = d * T::from_re(1.0 / modulus);
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// `m × k` matrix with orthonormal columns.
pub fn random_orthonormal<T: Scalar>(rng: &mut SeededRng, m: usize, k: usize) -> DMatrix<T> {
    random_unitary::<T>(rng, m).columns(0, k).into_owned()
}

/// Uniform draw from `[lo, hi)`.
pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
