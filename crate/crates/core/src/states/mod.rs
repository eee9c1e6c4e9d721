//! Pure states, validated density matrices and the named state families.

mod io;

pub use io::{load_density_matrix, load_density_matrix_with, write_csv, write_json, LoadOptions};

use num_complex::Complex64;

use crate::error::{Error, Invariant, Result};
use crate::linalg::{
    hermitian_eigensystem_with, partial_trace, qubit_count, ComplexMatrix, SubsetMask,
};
use crate::tolerance::{Tolerances, PURE_DIM_CAP};

/// Normalized state vector of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_pure_dim(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 {
        return Err(Error::TooFewQubits { n: 0, min: 1 });
    }
    let dim = 1usize.checked_shl(n_qubits as u32).unwrap_or(usize::MAX);
    if n_qubits >= usize::BITS as usize || dim > PURE_DIM_CAP {
        return Err(Error::DimensionOverflow {
            dim,
            cap: PURE_DIM_CAP,
        });
    }
    Ok(dim)
}

impl PureState {
    /// Takes amplitudes that must already have unit norm (within 1e-12).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = Self::qubits_for(amplitudes.len())?;
        let deviation = (norm(&amplitudes) - 1.0).abs();
        if deviation > Tolerances::default().norm {
            return Err(Error::InvariantViolation {
                invariant: Invariant::UnitNorm,
                magnitude: deviation,
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes the given amplitudes.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = Self::qubits_for(amplitudes.len())?;
        let nrm = norm(&amplitudes);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::InvariantViolation {
                invariant: Invariant::UnitNorm,
                magnitude: 1.0,
            });
        }
        amplitudes.iter_mut().for_each(|z| *z /= nrm);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    fn qubits_for(len: usize) -> Result<usize> {
        let n = qubit_count(len).filter(|&n| n >= 1).ok_or(Error::DimensionMismatch {
            expected: len.next_power_of_two().max(2),
            found: len,
        })?;
        check_pure_dim(n)?;
        Ok(n)
    }

    /// Equal-weight superposition of the listed basis indices.
    pub fn uniform_superposition(n_qubits: usize, indices: &[usize]) -> Result<Self> {
        let dim = check_pure_dim(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for &i in indices {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i + 1,
                });
            }
            amps[i] += 1.0;
        }
        Self::from_unnormalized(amps)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Self::uniform_superposition(n_qubits, &[index])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `|self> ⊗ |other>`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_pure_dim(self.n_qubits + other.n_qubits)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(PureState {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        })
    }

    /// Apply a 2x2 unitary `u` (row-major) to 1-based `qubit`.
    pub fn apply_single_qubit(&self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<PureState> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(Error::ParameterOutOfRange {
                name: "qubit",
                value: qubit as f64,
            });
        }
        let bit = 1usize << (self.n_qubits - qubit);
        let mut out = self.amplitudes.clone();
        for i0 in (0..self.dim()).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i1]);
            out[i0] = u[0][0] * a0 + u[0][1] * a1;
            out[i1] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(PureState {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }

    /// Reduced density matrix on `keep`, formed directly from the amplitudes.
    pub fn reduced(&self, keep: SubsetMask) -> Result<ComplexMatrix> {
        if keep.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: keep.n_qubits(),
            });
        }
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        if keep.is_full() {
            return Ok(ComplexMatrix::outer(&self.amplitudes));
        }
        let rows = self.split(keep);
        let dk = rows.len();
        Ok(ComplexMatrix::from_fn(dk, |i, j| {
            rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| a * b.conj())
                .sum()
        }))
    }

    /// Reshape into a matrix whose rows index `rows_mask` and columns its
    /// complement.
    pub(crate) fn split(&self, rows_mask: SubsetMask) -> Vec<Vec<Complex64>> {
        use crate::linalg::{bit_positions, deposit_bits};
        let row_pos = bit_positions(rows_mask.bits());
        let col_pos = bit_positions(rows_mask.complement().bits());
        let col_index: Vec<usize> = (0..1usize << col_pos.len())
            .map(|c| deposit_bits(c, &col_pos))
            .collect();
        (0..1usize << row_pos.len())
            .map(|r| {
                let base = deposit_bits(r, &row_pos);
                col_index.iter().map(|&c| self.amplitudes[base | c]).collect()
            })
            .collect()
    }

    pub fn projector(&self) -> Result<DensityMatrix> {
        let dim = self.dim();
        if dim > Tolerances::default().dense_dim_cap {
            return Err(Error::DimensionOverflow {
                dim,
                cap: Tolerances::default().dense_dim_cap,
            });
        }
        Ok(DensityMatrix::trusted(
            self.n_qubits,
            ComplexMatrix::outer(&self.amplitudes),
        ))
    }
}

/// Validated density matrix of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

/// What to do with a nearly-PSD input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Repair {
    /// Reject any invariant violation.
    #[default]
    Reject,
    /// Clamp negative eigenvalues down to `-tol.repair` and renormalize the trace.
    ClampEigenvalues,
}

impl DensityMatrix {
    /// Validate hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_options(matrix, Repair::Reject, &Tolerances::default())
    }

    pub fn with_options(matrix: ComplexMatrix, repair: Repair, tol: &Tolerances) -> Result<Self> {
        let n_qubits = qubit_count(matrix.dim())
            .filter(|&n| n >= 1)
            .ok_or(Error::DimensionMismatch {
                expected: matrix.dim().next_power_of_two().max(2),
                found: matrix.dim(),
            })?;
        if matrix.dim() > tol.dense_dim_cap {
            return Err(Error::DimensionOverflow {
                dim: matrix.dim(),
                cap: tol.dense_dim_cap,
            });
        }
        let herm = matrix.hermitian_deviation();
        if herm > tol.hermitian {
            return Err(Error::InvariantViolation {
                invariant: Invariant::Hermitian,
                magnitude: herm,
            });
        }
        let matrix = matrix.hermitian_part();
        let eig = hermitian_eigensystem_with(&matrix, tol)?;
        let min = eig.values.last().copied().unwrap_or(0.0);

        match repair {
            Repair::Reject => {
                let trace_dev = (matrix.trace().re - 1.0).abs();
                if trace_dev > tol.trace {
                    return Err(Error::InvariantViolation {
                        invariant: Invariant::UnitTrace,
                        magnitude: trace_dev,
                    });
                }
                if min < -tol.psd {
                    return Err(Error::InvariantViolation {
                        invariant: Invariant::PositiveSemidefinite,
                        magnitude: -min,
                    });
                }
                Ok(Self { n_qubits, matrix })
            }
            Repair::ClampEigenvalues => {
                if min < -tol.repair {
                    return Err(Error::InvariantViolation {
                        invariant: Invariant::PositiveSemidefinite,
                        magnitude: -min,
                    });
                }
                let total: f64 = eig.values.iter().map(|&x| x.max(0.0)).sum();
                if total <= 0.0 {
                    return Err(Error::InvariantViolation {
                        invariant: Invariant::UnitTrace,
                        magnitude: 1.0,
                    });
                }
                let repaired = eig.reconstruct_with(|x| x.max(0.0) / total).hermitian_part();
                Ok(Self {
                    n_qubits,
                    matrix: repaired,
                })
            }
        }
    }

    /// For matrices valid by construction.
    pub(crate) fn trusted(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << n_qubits);
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = check_pure_dim(n_qubits)?;
        let cap = Tolerances::default().dense_dim_cap;
        if dim > cap {
            return Err(Error::DimensionOverflow { dim, cap });
        }
        Ok(Self::trusted(
            n_qubits,
            ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Reduced state on the qubits in `keep`.
    pub fn reduce(&self, keep: SubsetMask) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, keep)?;
        Ok(Self::trusted(keep.len(), m))
    }

    /// Reduced state on two 1-based qubits `i < j`.
    pub fn reduce_pair(&self, i: usize, j: usize) -> Result<DensityMatrix> {
        self.reduce(SubsetMask::from_qubits(self.n_qubits, &[i, j])?)
    }

    pub fn purity(&self) -> f64 {
        crate::linalg::purity(&self.matrix)
    }
}

pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    dicke_state(n, 1)
}

/// Equal superposition of all basis states with exactly `k` ones.
pub fn dicke_state(n: usize, k: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if k == 0 || k >= n {
        return Err(Error::ExcitationOutOfRange { n, k });
    }
    let dim = check_pure_dim(n)?;
    let indices: Vec<usize> = (0..dim).filter(|i| i.count_ones() as usize == k).collect();
    PureState::uniform_superposition(n, &indices)
}

pub fn ghz_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    let dim = check_pure_dim(n)?;
    PureState::uniform_superposition(n, &[0, dim - 1])
}

/// `(|0011> + |0101> + |0110> + |1010>) / 2`.
pub fn example3_state() -> PureState {
    PureState::uniform_superposition(4, &[0b0011, 0b0101, 0b0110, 0b1010])
        .expect("fixed four-qubit state")
}

/// `(|0000> + |0011> + |1100> + |1111>) / 2`.
pub fn example4_state() -> PureState {
    PureState::uniform_superposition(4, &[0b0000, 0b0011, 0b1100, 0b1111])
        .expect("fixed four-qubit state")
}

/// `(1 - x) / 2^N * I + x |psi><psi|`.
pub fn white_noise_mix(psi: &PureState, x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange {
            name: "mixing parameter",
            value: x,
        });
    }
    let projector = psi.projector()?.into_matrix();
    let dim = psi.dim();
    let noise = (1.0 - x) / dim as f64;
    let mut m = projector.scale_real(x);
    for i in 0..dim {
        m[(i, i)] += noise;
    }
    Ok(DensityMatrix::trusted(psi.n_qubits(), m))
}

/// Symbol the source material uses for a family's mixing parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterName {
    T,
    P,
    A,
}

/// A pure state mixed with white noise, `x ↦ white_noise_mix(base, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyFamily {
    pub base: PureState,
    pub parameter: ParameterName,
}

impl NoisyFamily {
    pub fn new(base: PureState, parameter: ParameterName) -> Self {
        Self { base, parameter }
    }

    pub fn w_noise(n: usize) -> Result<Self> {
        Ok(Self::new(w_state(n)?, ParameterName::T))
    }

    pub fn dicke_noise(n: usize, k: usize) -> Result<Self> {
        Ok(Self::new(dicke_state(n, k)?, ParameterName::T))
    }

    pub fn example3() -> Self {
        Self::new(example3_state(), ParameterName::A)
    }

    pub fn example4() -> Self {
        Self::new(example4_state(), ParameterName::T)
    }

    pub fn ghz_noise(n: usize) -> Result<Self> {
        Ok(Self::new(ghz_state(n)?, ParameterName::P))
    }

    pub fn n_qubits(&self) -> usize {
        self.base.n_qubits()
    }

    pub fn mixture(&self, x: f64) -> Result<DensityMatrix> {
        white_noise_mix(&self.base, x)
    }
}
