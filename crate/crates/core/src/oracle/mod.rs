//! Reference machinery for tests: seeded Haar-random sampling and dense
//! brute-force recomputations that share no code path with the optimized
//! routines they check.
//!
//! A [`HaarSampler`] owns its RNG and is driven through `&mut self`; create
//! one per worker thread.

pub mod relations;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, purity, ComplexMatrix, SubsetMask};
use crate::states::PureState;
use crate::tolerance::PURE_DIM_CAP;

/// Default number of samples per property relation and qubit count.
pub const DEFAULT_SAMPLE_COUNT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub n_qubits: usize,
    pub seed: u64,
    pub count: usize,
}

impl SamplerConfig {
    pub fn new(n_qubits: usize, seed: u64, count: usize) -> Self {
        Self {
            n_qubits,
            seed,
            count,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "count",
                value: 0.0,
            });
        }
        if self.n_qubits == 0 {
            return Err(Error::TooFewQubits { n: 0, min: 1 });
        }
        if self.n_qubits > 14 {
            return Err(Error::DimensionOverflow {
                dim: 1usize << self.n_qubits.min(60),
                cap: PURE_DIM_CAP,
            });
        }
        Ok(())
    }
}

pub struct HaarSampler {
    rng: ChaCha8Rng,
}

impl HaarSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn gaussian(&mut self) -> Complex64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        Complex64::new(re, im)
    }

    /// Normalized vector of independent complex Gaussians.
    pub fn pure_state(&mut self, n_qubits: usize) -> Result<PureState> {
        let amps = (0..1usize << n_qubits).map(|_| self.gaussian()).collect();
        PureState::from_unnormalized(amps)
    }

    /// Haar-random 2x2 unitary (Gram-Schmidt on a complex Ginibre matrix).
    pub fn unitary2(&mut self) -> [[Complex64; 2]; 2] {
        let mut a = [self.gaussian(), self.gaussian()];
        let mut b = [self.gaussian(), self.gaussian()];
        let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        a.iter_mut().for_each(|z| *z /= na);
        let overlap = a[0].conj() * b[0] + a[1].conj() * b[1];
        b[0] -= overlap * a[0];
        b[1] -= overlap * a[1];
        let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
        b.iter_mut().for_each(|z| *z /= nb);
        // columns a, b
        [[a[0], b[0]], [a[1], b[1]]]
    }

    /// Apply an independent Haar unitary to every qubit.
    pub fn local_unitary(&mut self, psi: &PureState) -> Result<PureState> {
        let mut out = psi.clone();
        for q in 1..=psi.n_qubits() {
            let u = self.unitary2();
            out = out.apply_single_qubit(q, &u)?;
        }
        Ok(out)
    }

    /// Random PSD matrix `A A^dagger / Tr` from a Ginibre `A`.
    pub fn density_matrix(&mut self, n_qubits: usize) -> ComplexMatrix {
        let dim = 1usize << n_qubits;
        let a = ComplexMatrix::from_fn(dim, |_, _| self.gaussian());
        let m = &a * &a.adjoint();
        let tr = m.trace().re;
        m.scale_real(1.0 / tr).hermitian_part()
    }

    /// Random Hermitian matrix with Gaussian entries.
    pub fn hermitian(&mut self, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| self.gaussian()).hermitian_part()
    }

    pub fn matrix(&mut self, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| self.gaussian())
    }
}

/// `config.count` Haar-random pure states; the same seed gives the same sequence.
pub fn haar_random_pure(config: &SamplerConfig) -> Result<Vec<PureState>> {
    config.validate()?;
    let mut sampler = HaarSampler::new(config.seed);
    (0..config.count)
        .map(|_| sampler.pure_state(config.n_qubits))
        .collect()
}

/// Random pure states that factorize across `partition` (1-based qubit blocks).
pub fn random_product_pure(config: &SamplerConfig, partition: &[Vec<usize>]) -> Result<Vec<PureState>> {
    config.validate()?;
    let n = config.n_qubits;
    let mut seen = vec![false; n + 1];
    for block in partition {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        for &q in block {
            if q == 0 || q > n {
                return Err(Error::InvalidPartition(format!("qubit {q} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidPartition(format!("qubit {q} appears twice")));
            }
        }
    }
    if let Some(q) = (1..=n).find(|&q| !seen[q]) {
        return Err(Error::InvalidPartition(format!("qubit {q} is not covered")));
    }

    // Build each factor on its block, then permute qubits into place.
    let order: Vec<usize> = partition.iter().flatten().copied().collect();
    let mut sampler = HaarSampler::new(config.seed);
    (0..config.count)
        .map(|_| {
            let mut joint: Option<PureState> = None;
            for block in partition {
                let factor = sampler.pure_state(block.len())?;
                joint = Some(match joint {
                    None => factor,
                    Some(acc) => acc.tensor(&factor)?,
                });
            }
            let joint = joint.expect("partition is nonempty");
            permute_qubits(&joint, &order)
        })
        .collect()
}

/// Relabel so that position `k` (1-based) of `psi` becomes qubit `order[k-1]`.
fn permute_qubits(psi: &PureState, order: &[usize]) -> Result<PureState> {
    let n = psi.n_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for (src, &a) in psi.amplitudes().iter().enumerate() {
        let mut dst = 0usize;
        for (k, &q) in order.iter().enumerate() {
            let bit = (src >> (n - 1 - k)) & 1;
            dst |= bit << (n - q);
        }
        amps[dst] = a;
    }
    PureState::new(amps)
}

/// `Σ_S Tr(rho_S^2)` by dense partial traces of `|psi><psi|` over every
/// nonempty proper subset.
pub fn brute_force_purity_sum(psi: &PureState) -> Result<f64> {
    let n = psi.n_qubits();
    if n > 10 {
        return Err(Error::DimensionOverflow {
            dim: psi.dim(),
            cap: 1 << 10,
        });
    }
    let rho = ComplexMatrix::outer(psi.amplitudes());
    let mut total = 0.0;
    for mask in SubsetMask::proper_subsets(n) {
        total += purity(&partial_trace(&rho, mask)?);
    }
    Ok(total)
}
