//! Pure-state identities and inequalities between concurrences, evaluated
//! over seeded Haar samples.
//!
//! Identities report `|lhs - rhs|`; inequalities report the slack
//! `lhs - rhs`, which must stay above `-tolerance`.

use std::fmt;

use crate::bounds::{theorem2_coefficient, theorem3_coefficient, THEOREM1_COEFFICIENT};
use crate::concurrence::{
    cut_concurrence_squared, h_invariant, pairwise_table_pure, pure_concurrence,
    wootters_concurrence, CutConcurrenceProfile,
};
use crate::error::Result;
use crate::linalg::SubsetMask;
use crate::states::PureState;

use super::{HaarSampler, SamplerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `C² = 2^(2-N) Σ_{bipartitions} C²_{S|S̄}` (four qubits: the 7-cut average).
    BipartitionDecomposition,
    /// `C² = 2^(1-N) Σ_{j=1}^{N-1} Σ_{|S|=j} C²_{S|S̄}`.
    SizeGroupedDecomposition,
    /// Even N: `C² = 2^(2-N) (Σ_1 + ... + Σ_{N/2-1} + Σ_{N/2} / 2)`.
    EvenHalfDecomposition,
    /// `2|H|² = Σ_1 - Σ_2 + ... + (-1)^N Σ_{N-1}`.
    MonogamyEquality,
    /// `C²_{1|rest} ≥ Σ_{i≥2} C²_{1i}`.
    Monogamy,
    /// Four qubits: `C²_{12|34} + C²_{13|24} + C²_{14|23} ≥ 3/4 Σ_1`.
    DistributedFourQubit,
    /// `Σ_2 ≥ (N-2)/2 Σ_1`.
    DistributedNQubit,
    /// Two qubits: pure-state formula equals Wootters on the projector.
    TwoQubitConsistency,
    /// `C² ≥ 7/8 Σ C_ij²` (N = 4).
    Theorem1Soundness,
    /// `C² ≥ N/2^(N-2) Σ C_ij²` (N ≥ 5).
    Theorem2Soundness,
    /// `C² ≥ (N-2)/2^(N-3) Σ C_ij²` (even N ≥ 6).
    Theorem3Soundness,
    /// Local unitaries leave `C`, every `C²_{S|S̄}` and every `C_ij` unchanged.
    LocalUnitaryInvariance,
}

impl Relation {
    pub fn is_identity(self) -> bool {
        matches!(
            self,
            Relation::BipartitionDecomposition
                | Relation::SizeGroupedDecomposition
                | Relation::EvenHalfDecomposition
                | Relation::MonogamyEquality
                | Relation::TwoQubitConsistency
                | Relation::LocalUnitaryInvariance
        )
    }

    /// Residual (identities) or slack (inequalities) for one state.
    ///
    /// `sampler` is only used by [`Relation::LocalUnitaryInvariance`].
    pub fn evaluate(self, psi: &PureState, sampler: &mut HaarSampler) -> Result<f64> {
        let n = psi.n_qubits();
        let c2 = pure_concurrence(psi).powi(2);
        let cut = |qs: &[usize]| -> Result<f64> {
            cut_concurrence_squared(psi, SubsetMask::from_qubits(n, qs)?)
        };
        Ok(match self {
            Relation::BipartitionDecomposition => {
                let top = 1u64 << (n - 1);
                let mut sum = 0.0;
                for bits in top..(1u64 << n) - 1 {
                    sum += cut_concurrence_squared(psi, SubsetMask::new(bits, n)?)?;
                }
                (c2 - 2f64.powi(2 - n as i32) * sum).abs()
            }
            Relation::SizeGroupedDecomposition => {
                let p = CutConcurrenceProfile::new(psi)?;
                let total: f64 = (1..n).map(|j| p.size_sum(j)).sum();
                (c2 - 2f64.powi(1 - n as i32) * total).abs()
            }
            Relation::EvenHalfDecomposition => {
                let p = CutConcurrenceProfile::new(psi)?;
                let half = n / 2;
                let total: f64 =
                    (1..half).map(|j| p.size_sum(j)).sum::<f64>() + 0.5 * p.size_sum(half);
                (c2 - 2f64.powi(2 - n as i32) * total).abs()
            }
            Relation::MonogamyEquality => {
                let p = CutConcurrenceProfile::new(psi)?;
                let alt: f64 = (1..n)
                    .map(|j| if j % 2 == 1 { p.size_sum(j) } else { -p.size_sum(j) })
                    .sum();
                (2.0 * h_invariant(psi).norm_sqr() - alt).abs()
            }
            Relation::Monogamy => {
                let table = pairwise_table_pure(psi)?;
                let pairs: f64 = (2..=n).map(|i| table.get(1, i).powi(2)).sum();
                cut(&[1])? - pairs
            }
            Relation::DistributedFourQubit => {
                let twos = cut(&[1, 2])? + cut(&[1, 3])? + cut(&[1, 4])?;
                let ones: f64 = (1..=4).map(|q| cut(&[q])).sum::<Result<f64>>()?;
                twos - 0.75 * ones
            }
            Relation::DistributedNQubit => {
                let p = CutConcurrenceProfile::new(psi)?;
                p.size_sum(2) - (n as f64 - 2.0) / 2.0 * p.size_sum(1)
            }
            Relation::TwoQubitConsistency => {
                (pure_concurrence(psi) - wootters_concurrence(&psi.projector()?)?).abs()
            }
            Relation::Theorem1Soundness => {
                c2 - THEOREM1_COEFFICIENT * pairwise_table_pure(psi)?.sum_of_squares()
            }
            Relation::Theorem2Soundness => {
                c2 - theorem2_coefficient(n) * pairwise_table_pure(psi)?.sum_of_squares()
            }
            Relation::Theorem3Soundness => {
                c2 - theorem3_coefficient(n) * pairwise_table_pure(psi)?.sum_of_squares()
            }
            Relation::LocalUnitaryInvariance => {
                let moved = sampler.local_unitary(psi)?;
                let mut worst = (pure_concurrence(psi) - pure_concurrence(&moved)).abs();
                for mask in SubsetMask::proper_subsets(n) {
                    let a = cut_concurrence_squared(psi, mask)?;
                    let b = cut_concurrence_squared(&moved, mask)?;
                    worst = worst.max((a - b).abs());
                }
                let (ta, tb) = (pairwise_table_pure(psi)?, pairwise_table_pure(&moved)?);
                for (a, b) in ta.pairs().zip(tb.pairs()) {
                    worst = worst.max((a.1 - b.1).abs());
                }
                worst
            }
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome of one relation over one batch of samples.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub relation: Relation,
    pub n_qubits: usize,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    /// Largest residual (identities) or smallest slack (inequalities).
    pub worst: f64,
    /// Index of the sample that produced `worst`.
    pub worst_index: usize,
    /// The offending state when the check fails.
    pub offender: Option<PureState>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        if self.relation.is_identity() {
            self.worst <= self.tolerance
        } else {
            self.worst >= -self.tolerance
        }
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = if self.relation.is_identity() {
            "max residual"
        } else {
            "min slack"
        };
        write!(
            f,
            "{} N={} seed={} samples={}: {} {:.3e} (sample #{}, tol {:.0e})",
            self.relation,
            self.n_qubits,
            self.seed,
            self.samples,
            what,
            self.worst,
            self.worst_index,
            self.tolerance
        )
    }
}

/// Evaluate `relation` on `config.count` Haar states drawn from `config.seed`.
pub fn check_relation(relation: Relation, config: &SamplerConfig, tolerance: f64) -> Result<RelationReport> {
    let states = super::haar_random_pure(config)?;
    // separate stream for the local unitaries
    let mut sampler = HaarSampler::new(config.seed ^ 0x9e37_79b9_7f4a_7c15);
    let identity = relation.is_identity();
    let mut worst = if identity { 0.0 } else { f64::INFINITY };
    let mut worst_index = 0;
    for (i, psi) in states.iter().enumerate() {
        let v = relation.evaluate(psi, &mut sampler)?;
        let worse = if identity { v > worst } else { v < worst };
        if worse {
            worst = v;
            worst_index = i;
        }
    }
    let mut report = RelationReport {
        relation,
        n_qubits: config.n_qubits,
        seed: config.seed,
        samples: states.len(),
        tolerance,
        worst,
        worst_index,
        offender: None,
    };
    if !report.passed() {
        report.offender = Some(states[worst_index].clone());
    }
    Ok(report)
}
