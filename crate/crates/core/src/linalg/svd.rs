use nalgebra::DMatrix;

use super::{check_finite, complete_orthonormal, scale_columns};
use crate::error::{Result, TargetError};
use crate::scalar::Scalar;
use crate::tolerance::TolerancePolicy;

/// Largest relative `‖U Σ V* - X‖_F` accepted from the SVD.
const RECONSTRUCTION_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Full singular value decomposition `X = V Σ W*`, partitioned by numerical
/// rank: `V = [V1 V2]`, `W = [W1 W2]`, with `V1`, `W1` spanning the retained
/// singular directions and `W2` the numerical null space of `X`.
#[derive(Debug, Clone)]
pub struct SvdFactors<T: Scalar> {
    /// `m × m` unitary.
    pub v: DMatrix<T>,
    /// `n × n` unitary.
    pub w: DMatrix<T>,
    /// Retained singular values, descending, all above the rank threshold.
    pub sigma: Vec<f64>,
    /// Singular values at or below the rank threshold.
    pub discarded: Vec<f64>,
    pub rank: usize,
}

impl<T: Scalar> SvdFactors<T> {
    pub fn rows(&self) -> usize {
        self.v.nrows()
    }

    pub fn cols(&self) -> usize {
        self.w.nrows()
    }

    pub fn v1(&self) -> DMatrix<T> {
        self.v.columns(0, self.rank).into_owned()
    }

    pub fn v2(&self) -> DMatrix<T> {
        self.v
            .columns(self.rank, self.rows() - self.rank)
            .into_owned()
    }

    pub fn w1(&self) -> DMatrix<T> {
        self.w.columns(0, self.rank).into_owned()
    }

    pub fn w2(&self) -> DMatrix<T> {
        self.w
            .columns(self.rank, self.cols() - self.rank)
            .into_owned()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// `Σr` as an `r × r` diagonal matrix.
    pub fn sigma_r(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.rank, self.rank, |i, j| {
            if i == j {
                T::from_re(self.sigma[i])
            } else {
                T::zero()
            }
        })
    }

    /// `V1 Σr W1*`.
    pub fn reconstruct(&self) -> DMatrix<T> {
        scale_columns(&self.v1(), &self.sigma) * self.w1().adjoint()
    }
}

/// Partitioned SVD with the rank threshold taken relative to `σmax`.
pub fn svd_partitioned<T: Scalar>(x: &DMatrix<T>, tol: &TolerancePolicy) -> Result<SvdFactors<T>> {
    svd_partitioned_with_scale(x, tol, 0.0)
}

/// Partitioned SVD whose rank threshold is taken relative to
/// `max(σmax, reference_scale)`. A computed difference such as `X - Y` is
/// dominated by rounding noise of size `eps·(‖X‖ + ‖Y‖)`, so its rank must be
/// judged against the scale of its operands rather than its own.
pub fn svd_partitioned_with_scale<T: Scalar>(
    x: &DMatrix<T>,
    tol: &TolerancePolicy,
    reference_scale: f64,
) -> Result<SvdFactors<T>> {
    check_finite(x)?;
    let (m, n) = x.shape();
    let norm = x.norm();
    if x.is_empty() || norm <= tol.zero_matrix_tol {
        return Err(TargetError::ZeroMatrix {
            what: "matrix",
            norm,
        });
    }
    let (u, values, right) = jacobi_svd(x)?;
    let drift = (scale_columns(&u, &values) * right.adjoint() - x).norm();
    if !(drift <= RECONSTRUCTION_TOL * norm) {
        return Err(TargetError::NumericFailure(format!(
            "SVD does not reproduce its input (relative error {:e})",
            drift / norm
        )));
    }
    let k = values.len();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let sigma_max = sorted[0];
    let threshold = tol.rank_threshold(sigma_max.max(reference_scale), m, n);
    let rank = sorted.iter().take_while(|&&s| s > threshold).count();

    let v1 = DMatrix::from_fn(m, rank, |i, j| u[(i, order[j])]);
    let w1 = DMatrix::from_fn(n, rank, |i, j| right[(i, order[j])]);
    let v = if rank == 0 {
        DMatrix::identity(m, m)
    } else {
        complete_orthonormal(&v1, tol)?
    };
    let w = if rank == 0 {
        DMatrix::identity(n, n)
    } else {
        complete_orthonormal(&w1, tol)?
    };
    Ok(SvdFactors {
        v,
        w,
        sigma: sorted[..rank].to_vec(),
        discarded: sorted[rank..].to_vec(),
        rank,
    })
}

/// Thin SVD `x = U diag(s) V*` by one-sided Jacobi rotations, unsorted, with
/// `min(m, n)` columns in `U` and `V`. Columns of `U` belonging to zero
/// singular values are zero.
///
/// Used instead of nalgebra's bidiagonal SVD, whose 2×2 deflation step loses
/// up to half the working digits on ill-conditioned blocks.
pub(crate) fn jacobi_svd<T: Scalar>(x: &DMatrix<T>) -> Result<(DMatrix<T>, Vec<f64>, DMatrix<T>)> {
    if x.nrows() < x.ncols() {
        let (u, s, v) = jacobi_svd(&x.adjoint())?;
        return Ok((v, s, u));
    }
    let n = x.ncols();
    let mut g = x.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(TargetError::NumericFailure("Jacobi SVD did not converge".into()));
        }
        sweeps += 1;
        converged = true;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = g.column(p).norm_squared();
                let beta = g.column(q).norm_squared();
                let gamma = g.column(p).dotc(&g.column(q));
                let gmod = gamma.modulus();
                if gmod <= f64::EPSILON * (alpha * beta).sqrt() || gmod == 0.0 {
                    continue;
                }
                converged = false;
                // Rotate the phase of column q so that the inner product is
                // real, then apply a real plane rotation.
                let phase = gamma * T::from_re(1.0 / gmod);
                let zeta = (beta - alpha) / (2.0 * gmod);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut g, &mut v] {
                    for i in 0..mat.nrows() {
                        let a = mat[(i, p)];
                        let b = mat[(i, q)] * phase.conjugate();
                        mat[(i, p)] = a * T::from_re(c) - b * T::from_re(s);
                        mat[(i, q)] = a * T::from_re(s) + b * T::from_re(c);
                    }
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    for (j, &s) in values.iter().enumerate() {
        let mut col = g.column_mut(j);
        if s > 0.0 {
            col.unscale_mut(s);
        } else {
            col.fill(T::zero());
        }
    }
    Ok((g, values, v))
}

/// Numerical rank; zero for a zero (or empty) matrix.
pub fn numerical_rank<T: Scalar>(x: &DMatrix<T>, tol: &TolerancePolicy) -> Result<usize> {
    match svd_partitioned(x, tol) {
        Ok(f) => Ok(f.rank),
        Err(TargetError::ZeroMatrix { .. }) => Ok(0),
        Err(e) => Err(e),
    }
}

/// Orthonormal basis of the numerical null space of `x` (`n × (n - r)`);
/// the identity when `x` is zero.
pub fn null_space_basis<T: Scalar>(x: &DMatrix<T>, tol: &TolerancePolicy) -> Result<DMatrix<T>> {
    match svd_partitioned(x, tol) {
        Ok(f) => Ok(f.w2()),
        Err(TargetError::ZeroMatrix { .. }) => Ok(DMatrix::identity(x.ncols(), x.ncols())),
        Err(e) => Err(e),
    }
}
