//! Numerical tolerances shared by every module.
//!
//! All checks in the crate read from a [`Tolerances`] record; the
//! [`Tolerances::default`] values are the ones the test suites are pinned to.

/// Largest dense matrix dimension accepted by default (12 qubits).
pub const DENSE_DIM_CAP: usize = 1 << 12;

/// Largest state-vector dimension accepted on the pure-state path (14 qubits).
pub const PURE_DIM_CAP: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-norm deviation allowed between a matrix and its adjoint.
    pub hermitian: f64,
    /// Eigenvalues down to `-psd` are treated as zero.
    pub psd: f64,
    /// Reconstruction error allowed for eigendecompositions.
    pub reconstruction: f64,
    /// Allowed deviation of a density-matrix trace from one.
    pub trace: f64,
    /// Allowed deviation of a state-vector norm from one.
    pub norm: f64,
    /// Radicands in `[-radicand, 0)` are clamped to zero before square roots.
    pub radicand: f64,
    /// Negative eigenvalues down to `-repair` are clamped when repair is enabled.
    pub repair: f64,
    /// Dense matrix dimension cap.
    pub dense_dim_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            psd: 1e-10,
            reconstruction: 1e-9,
            trace: 1e-10,
            norm: 1e-12,
            radicand: 1e-10,
            repair: 1e-8,
            dense_dim_cap: DENSE_DIM_CAP,
        }
    }
}

/// Clamp `value` to zero if it lies in `[-tol, 0)`; larger negatives pass through.
pub(crate) fn clamp_dust(value: f64, tol: f64) -> f64 {
    if value < 0.0 && value >= -tol {
        0.0
    } else {
        value
    }
}
