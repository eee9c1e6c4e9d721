//! Multipartite concurrence for N-qubit states.
//!
//! * [`concurrence`]: exact pure-state concurrence, cut concurrences, the
//!   Wootters two-qubit formula and the `H` invariant.
//! * [`bounds`]: lower bounds on mixed-state concurrence from pairwise
//!   concurrences, and the exact value for GHZ mixed with white noise.
//! * [`witness`]: k-nonseparability thresholds, verdicts and crossing search.
//! * [`states`]: named states, noisy families and density-matrix files.
//! * [`oracle`]: seeded Haar sampling and brute-force reference routines.

pub mod bounds;
pub mod concurrence;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod states;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Invariant, Result};
pub use num_complex::Complex64;
