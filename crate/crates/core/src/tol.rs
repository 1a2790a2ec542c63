//! Numerical tolerances shared across the crate.
//!
//! Tolerances are relative wherever a norm of the operands is available;
//! the individual call sites document which norm is used.

use serde::Serialize;

/// Negative eigenvalues above `-PSD_TOL * ‖M‖` are clipped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Eigendecomposition reconstruction and orthonormality residual.
pub const EIG_TOL: f64 = 1e-9;
/// Residual of `R² = A` for the PSD square root.
pub const SQRT_TOL: f64 = 1e-8;
/// Unit-norm tolerance for pure states.
pub const UNIT_TOL: f64 = 1e-10;
/// Components with modulus at or below this do not fix the canonical phase.
pub const PHASE_TOL: f64 = 1e-12;
/// Trace-one tolerance.
pub const TRACE_TOL: f64 = 1e-9;
/// Hermiticity check on raw input matrices, relative to the Frobenius norm.
pub const HERMITICITY_TOL: f64 = PSD_TOL;

/// Clip floor applied to fidelity values (`value ≥ -NUM_TOL`).
pub const NUM_TOL: f64 = 1e-12;
pub const SYM_TOL: f64 = 1e-8;
pub const CROSS_TOL: f64 = 1e-8;
pub const ORDER_TOL: f64 = 1e-8;
pub const ORTH_TOL: f64 = 1e-8;

/// Numerical rank threshold relative to the largest eigenvalue.
pub const RANK_TOL: f64 = 1e-8;
/// Minimum trace of a witness in an orthogonal certificate.
pub const CERT_TOL: f64 = 1e-12;

pub const PROBE_TOL: f64 = 1e-7;
pub const PHASE_FIX_TOL: f64 = 1e-7;
pub const CERTIFY_TOL: f64 = 1e-7;
pub const UNITARY_TOL: f64 = 1e-9;
pub const VERIFICATION_TRIALS: usize = 64;

pub const CLASSIFY_TOL: f64 = 1e-6;

/// Eigenvalues below `NOISE_FLOOR_ULPS * d * ε * λ_max` are treated as exact
/// zeros by matrix functions whose derivative blows up at zero (the square
/// root). Without this, rounding noise of size ε in a null direction becomes
/// a spurious √ε ≈ 1e-8 entry.
pub const NOISE_FLOOR_ULPS: f64 = 4.0;

/// Snapshot of every tolerance in effect, recorded in report files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub psd_tol: f64,
    pub eig_tol: f64,
    pub sqrt_tol: f64,
    pub unit_tol: f64,
    pub phase_tol: f64,
    pub trace_tol: f64,
    pub sym_tol: f64,
    pub order_tol: f64,
    pub orth_tol: f64,
    pub rank_tol: f64,
    pub probe_tol: f64,
    pub phase_fix_tol: f64,
    pub certify_tol: f64,
    pub unitary_tol: f64,
    pub classify_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd_tol: PSD_TOL,
            eig_tol: EIG_TOL,
            sqrt_tol: SQRT_TOL,
            unit_tol: UNIT_TOL,
            phase_tol: PHASE_TOL,
            trace_tol: TRACE_TOL,
            sym_tol: SYM_TOL,
            order_tol: ORDER_TOL,
            orth_tol: ORTH_TOL,
            rank_tol: RANK_TOL,
            probe_tol: PROBE_TOL,
            phase_fix_tol: PHASE_FIX_TOL,
            certify_tol: CERTIFY_TOL,
            unitary_tol: UNITARY_TOL,
            classify_tol: CLASSIFY_TOL,
        }
    }
}
