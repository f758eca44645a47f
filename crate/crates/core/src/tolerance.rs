//! Numeric thresholds used by every decision the crate makes.

use serde::Serialize;

use crate::error::{Result, TargetError};

/// All thresholds in one record. Every field except `zero_matrix_tol` is
/// relative: it is scaled by a norm of the operand it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TolerancePolicy {
    /// Singular values at or below `rank_rel_cutoff * sigma_max * max(m, n)`
    /// are treated as zero.
    pub rank_rel_cutoff: f64,
    /// Hermitian / symmetric / equality deviation, relative to `max(1, ‖M‖_F)`.
    pub sym_tol: f64,
    /// Eigenvalue floor, relative to the spectral norm.
    pub psd_tol: f64,
    /// Targeting residual `‖AX - Y‖_F / max(1, ‖Y‖_F)` and null-space leakage.
    pub residual_tol: f64,
    /// Absolute Frobenius-norm threshold below which an input is zero.
    pub zero_matrix_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rel_cutoff: 1e-12,
            sym_tol: 1e-10,
            psd_tol: 1e-10,
            residual_tol: 1e-9,
            zero_matrix_tol: 1e-300,
        }
    }
}

impl TolerancePolicy {
    /// Policy with the symmetry, PSD and residual tolerances all set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Self {
            sym_tol: tol,
            psd_tol: tol,
            residual_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_rel_cutoff", self.rank_rel_cutoff),
            ("sym_tol", self.sym_tol),
            ("psd_tol", self.psd_tol),
            ("residual_tol", self.residual_tol),
            ("zero_matrix_tol", self.zero_matrix_tol),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(TargetError::BadTolerance(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Absolute singular-value threshold for an `rows × cols` operand whose
    /// reference scale is `scale` (normally its largest singular value).
    pub fn rank_threshold(&self, scale: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rel_cutoff * scale * rows.max(cols).max(1) as f64
    }
}
