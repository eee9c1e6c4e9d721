use std::fmt;

use thiserror::Error;

/// Density-matrix invariant that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Hermitian,
    UnitTrace,
    PositiveSemidefinite,
    UnitNorm,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Invariant::Hermitian => "hermiticity",
            Invariant::UnitTrace => "unit trace",
            Invariant::PositiveSemidefinite => "positive semidefiniteness",
            Invariant::UnitNorm => "unit norm",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("subset mask must select a nonempty proper subset of the qubits")]
    EmptySubset,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least {min} qubits are required, got {n}")]
    TooFewQubits { n: usize, min: usize },

    #[error("excitation number {k} out of range 1..={} for {n} qubits", .n.saturating_sub(1))]
    ExcitationOutOfRange { n: usize, k: usize },

    #[error("parameter {name} = {value} is out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {invariant} (deviation {magnitude:e})")]
    InvariantViolation { invariant: Invariant, magnitude: f64 },

    #[error("expected a two-qubit state, got {n_qubits} qubits")]
    WrongDimension { n_qubits: usize },

    #[error("{bound} does not apply to {n} qubits")]
    WrongQubitCount { bound: &'static str, n: usize },

    #[error("threshold radicand is negative ({value:e}); invalid (N, d, k) regime")]
    NegativeRadicand { value: f64 },

    #[error("certified bound is not monotone in the family parameter: drops by {drop:e} near x = {at}")]
    NonMonotoneFamily { at: f64, drop: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("state is not a member of the {family} family (max deviation {deviation:e})")]
    NotInFamily { family: &'static str, deviation: f64 },

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("lower-bound source {0} cannot be used here")]
    UnsupportedSource(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by bad input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::ConvergenceFailure { .. } | Error::NonMonotoneFamily { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
