//! k-nonseparability detection.
//!
//! A state whose concurrence exceeds [`k_nonsep_threshold`] cannot be written
//! as a mixture of k-separable pure states. The test is one-sided: a verdict
//! with `detected == false` says nothing about separability.

use serde::Serialize;

use crate::bounds::{best_bound, bound_for, ghz_noise_exact_concurrence, Theorem};
use crate::concurrence::{pairwise_table, pure_concurrence};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigensystem;
use crate::states::{ghz_state, white_noise_mix, DensityMatrix, NoisyFamily, PureState};
use crate::tolerance::{clamp_dust, Tolerances};

/// Binomial coefficient in exact integer arithmetic.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the division is exact.
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn threshold_impl(n: usize, d: usize, k: usize, block_dim: f64) -> Result<f64> {
    if !(2..=60).contains(&n) {
        return Err(Error::ParameterOutOfRange {
            name: "N",
            value: n as f64,
        });
    }
    if d < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    if k < 2 || k > n {
        return Err(Error::ParameterOutOfRange {
            name: "k",
            value: k as f64,
        });
    }
    let nf = n as u32;
    let df = d as f64;
    let two_k = 2f64.powi(k as i32);
    let mut radicand = 2f64.powi(n as i32) - two_k + (two_k - 2.0) / block_dim;
    let upper = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 - 1 };
    for i in 1..=upper as u32 {
        radicand -= 2.0 * binomial(nf, i) as f64 / df.powi(i as i32);
    }
    if n.is_multiple_of(2) {
        let half = nf / 2;
        radicand -= binomial(nf, half) as f64 / df.powi(half as i32);
    }
    let radicand = clamp_dust(radicand, Tolerances::default().radicand);
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand { value: radicand });
    }
    Ok(2f64.powf(1.0 - n as f64 / 2.0) * radicand.sqrt())
}

/// Concurrence above which an `n`-party state with local dimension `d` is
/// k-nonseparable (mixed-state form, worst-case block size 1).
pub fn k_nonsep_threshold(n: usize, d: usize, k: usize) -> Result<f64> {
    threshold_impl(n, d, k, d as f64)
}

/// Pure-state form of the threshold for a k-separable pure state whose
/// smallest block holds `min_block` parties.
pub fn k_nonsep_threshold_pure(n: usize, d: usize, k: usize, min_block: usize) -> Result<f64> {
    if min_block == 0 || min_block * k > n {
        return Err(Error::ParameterOutOfRange {
            name: "min_block",
            value: min_block as f64,
        });
    }
    threshold_impl(n, d, k, (d as f64).powi(min_block as i32))
}

/// Where the certified lower bound on `C(ρ)` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerBoundSource {
    Theorem1,
    Theorem2,
    Theorem3,
    /// Exact formula for GHZ + white noise; `ρ` must be in that family.
    GhzExact,
    /// Exact pure-state concurrence; `ρ` must be pure.
    PureExact,
    /// A lower bound certified elsewhere.
    UserSupplied(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SourceKind {
    Theorem1,
    Theorem2,
    Theorem3,
    GhzExact,
    PureExact,
    UserSupplied,
}

impl LowerBoundSource {
    pub fn kind(&self) -> SourceKind {
        match self {
            LowerBoundSource::Theorem1 => SourceKind::Theorem1,
            LowerBoundSource::Theorem2 => SourceKind::Theorem2,
            LowerBoundSource::Theorem3 => SourceKind::Theorem3,
            LowerBoundSource::GhzExact => SourceKind::GhzExact,
            LowerBoundSource::PureExact => SourceKind::PureExact,
            LowerBoundSource::UserSupplied(_) => SourceKind::UserSupplied,
        }
    }

    fn theorem(&self) -> Option<Theorem> {
        match self {
            LowerBoundSource::Theorem1 => Some(Theorem::T1),
            LowerBoundSource::Theorem2 => Some(Theorem::T2),
            LowerBoundSource::Theorem3 => Some(Theorem::T3),
            _ => None,
        }
    }
}

impl SourceKind {
    pub fn label(self) -> &'static str {
        match self {
            SourceKind::Theorem1 => "THEOREM1",
            SourceKind::Theorem2 => "THEOREM2",
            SourceKind::Theorem3 => "THEOREM3",
            SourceKind::GhzExact => "GHZ_EXACT",
            SourceKind::PureExact => "PURE_EXACT",
            SourceKind::UserSupplied => "USER_SUPPLIED",
        }
    }
}

/// One-sided k-nonseparability verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessVerdict {
    pub n_parties: usize,
    pub local_dim: usize,
    pub k: usize,
    pub threshold: f64,
    pub certified_lower_bound_on_c: f64,
    pub source: SourceKind,
    pub detected: bool,
}

/// Mixing parameter `p` if `rho` is GHZ_n mixed with white noise.
fn ghz_mixing_parameter(rho: &DensityMatrix) -> Result<f64> {
    let n = rho.n_qubits();
    let m = rho.matrix();
    let p = 2.0 * m[(0, m.dim() - 1)].re;
    let not_in_family = |deviation| Error::NotInFamily {
        family: "GHZ + white noise",
        deviation,
    };
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(not_in_family(p.abs()));
    }
    let p = p.clamp(0.0, 1.0);
    let reference = white_noise_mix(&ghz_state(n)?, p)?;
    let deviation = reference.matrix().max_abs_diff(m);
    if deviation > 1e-9 {
        return Err(not_in_family(deviation));
    }
    Ok(p)
}

/// Dominant eigenvector of a pure density matrix.
fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let purity = rho.purity();
    if (purity - 1.0).abs() > 1e-10 {
        return Err(Error::NotPure { purity });
    }
    let eig = hermitian_eigensystem(rho.matrix())?;
    PureState::from_unnormalized(eig.vector(0))
}

/// Certified lower bound on `C(ρ)` from `source`.
pub fn certified_lower_bound(rho: &DensityMatrix, source: LowerBoundSource) -> Result<f64> {
    if let Some(theorem) = source.theorem() {
        let table = pairwise_table(rho)?;
        return Ok(bound_for(theorem, &table)?.bound_on_c);
    }
    match source {
        LowerBoundSource::GhzExact => {
            ghz_noise_exact_concurrence(rho.n_qubits(), ghz_mixing_parameter(rho)?)
        }
        LowerBoundSource::PureExact => Ok(pure_concurrence(&purify(rho)?)),
        LowerBoundSource::UserSupplied(value) => {
            if value.is_finite() && value >= 0.0 {
                Ok(value)
            } else {
                Err(Error::ParameterOutOfRange {
                    name: "user-supplied bound",
                    value,
                })
            }
        }
        _ => unreachable!("theorem sources handled above"),
    }
}

/// Combine a certified bound with the qubit threshold for `k`.
pub fn verdict(n_qubits: usize, k: usize, bound: f64, source: SourceKind) -> Result<WitnessVerdict> {
    let threshold = k_nonsep_threshold(n_qubits, 2, k)?;
    Ok(WitnessVerdict {
        n_parties: n_qubits,
        local_dim: 2,
        k,
        threshold,
        certified_lower_bound_on_c: bound,
        source,
        detected: bound > threshold,
    })
}

pub fn detect_k_nonseparability(
    rho: &DensityMatrix,
    k: usize,
    source: LowerBoundSource,
) -> Result<WitnessVerdict> {
    // validate k before doing any work
    k_nonsep_threshold(rho.n_qubits(), 2, k)?;
    let bound = certified_lower_bound(rho, source)?;
    verdict(rho.n_qubits(), k, bound, source.kind())
}

/// Best available theorem bound on `C(ρ)` (used when no source is named).
pub fn best_theorem_bound(rho: &DensityMatrix) -> Result<(SourceKind, f64)> {
    let summary = best_bound(rho)?;
    let best = summary.best_report();
    let kind = match best.theorem {
        Theorem::T1 => SourceKind::Theorem1,
        Theorem::T2 => SourceKind::Theorem2,
        Theorem::T3 => SourceKind::Theorem3,
        Theorem::GhzExact => SourceKind::GhzExact,
    };
    Ok((kind, best.bound_on_c))
}

/// What a crossing search is looking for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionTarget {
    /// Certified bound strictly positive: the state is entangled.
    Entanglement,
    /// Certified bound above the k-nonseparability threshold.
    KNonseparable(usize),
}

impl DetectionTarget {
    pub fn threshold(&self, n_qubits: usize) -> Result<f64> {
        match *self {
            DetectionTarget::Entanglement => Ok(0.0),
            DetectionTarget::KNonseparable(k) => k_nonsep_threshold(n_qubits, 2, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    /// Detection holds for every parameter above this value.
    At(f64),
    /// The bound never exceeds the threshold on `[0, 1]`.
    NoCrossing,
}

impl Crossing {
    pub fn value(&self) -> Option<f64> {
        match self {
            Crossing::At(x) => Some(*x),
            Crossing::NoCrossing => None,
        }
    }
}

const MONOTONE_SAMPLES: usize = 100;
const MONOTONE_SLACK: f64 = 1e-9;
const BISECTION_WIDTH: f64 = 1e-12;

/// Smallest family parameter at which `source` detects `target`, by bisection.
pub fn detection_threshold(
    family: &NoisyFamily,
    target: DetectionTarget,
    source: LowerBoundSource,
) -> Result<Crossing> {
    if let LowerBoundSource::UserSupplied(_) = source {
        return Err(Error::UnsupportedSource("USER_SUPPLIED"));
    }
    let threshold = target.threshold(family.n_qubits())?;
    let bound_at = |x: f64| certified_lower_bound(&family.mixture(x)?, source);

    let grid: Vec<f64> = (0..=MONOTONE_SAMPLES)
        .map(|i| i as f64 / MONOTONE_SAMPLES as f64)
        .collect();
    let values = grid
        .iter()
        .map(|&x| bound_at(x))
        .collect::<Result<Vec<_>>>()?;
    for (w, xs) in values.windows(2).zip(grid.windows(2)) {
        if w[1] < w[0] - MONOTONE_SLACK {
            return Err(Error::NonMonotoneFamily {
                at: xs[1],
                drop: w[0] - w[1],
            });
        }
    }

    let Some(first) = values.iter().position(|&b| b > threshold) else {
        return Ok(Crossing::NoCrossing);
    };
    if first == 0 {
        return Ok(Crossing::At(0.0));
    }
    let (mut lo, mut hi) = (grid[first - 1], grid[first]);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if bound_at(mid)? > threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Crossing::At(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{example4_state, DensityMatrix};

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn threshold_examples() {
        let t = k_nonsep_threshold(4, 2, 3).unwrap();
        assert!((t - 22f64.sqrt() / 4.0).abs() < 1e-12);
        assert!((t - 1.172604).abs() < 1e-6);
        assert_eq!(k_nonsep_threshold(2, 2, 2).unwrap(), 0.0);
        assert!((k_nonsep_threshold(3, 2, 2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn threshold_argument_checks() {
        assert!(k_nonsep_threshold(4, 2, 1).is_err());
        assert!(k_nonsep_threshold(4, 2, 5).is_err());
        assert!(k_nonsep_threshold(4, 1, 2).is_err());
        assert!(k_nonsep_threshold(1, 2, 2).is_err());
        assert!(k_nonsep_threshold_pure(4, 2, 3, 2).is_err());
        // block size 1 reproduces the mixed-state form
        assert_eq!(
            k_nonsep_threshold_pure(5, 3, 2, 1).unwrap(),
            k_nonsep_threshold(5, 3, 2).unwrap()
        );
        // block size 1 is the worst case
        assert!(k_nonsep_threshold_pure(4, 2, 2, 2).unwrap() < k_nonsep_threshold(4, 2, 2).unwrap());
    }

    #[test]
    fn example4_family_verdicts() {
        let at = |t| white_noise_mix(&example4_state(), t).unwrap();
        let v = detect_k_nonseparability(&at(0.93), 3, LowerBoundSource::Theorem1).unwrap();
        assert!(v.detected);
        assert_eq!(v.source, SourceKind::Theorem1);
        let v = detect_k_nonseparability(&at(0.92), 3, LowerBoundSource::Theorem1).unwrap();
        assert!(!v.detected);
    }

    #[test]
    fn ghz_family_verdicts() {
        let at = |p| white_noise_mix(&ghz_state(4).unwrap(), p).unwrap();
        assert!(detect_k_nonseparability(&at(0.90), 3, LowerBoundSource::GhzExact)
            .unwrap()
            .detected);
        assert!(!detect_k_nonseparability(&at(0.89), 3, LowerBoundSource::GhzExact)
            .unwrap()
            .detected);
        // a non-member is rejected
        let other = white_noise_mix(&example4_state(), 0.9).unwrap();
        assert!(matches!(
            certified_lower_bound(&other, LowerBoundSource::GhzExact),
            Err(Error::NotInFamily { .. })
        ));
    }

    #[test]
    fn maximally_mixed_never_detected() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        for k in 2..=4 {
            for source in [LowerBoundSource::Theorem1, LowerBoundSource::GhzExact] {
                let v = detect_k_nonseparability(&rho, k, source).unwrap();
                assert!(!v.detected);
                assert_eq!(v.certified_lower_bound_on_c, 0.0);
            }
        }
    }

    #[test]
    fn pure_and_user_sources() {
        let rho = ghz_state(3).unwrap().projector().unwrap();
        let v = detect_k_nonseparability(&rho, 2, LowerBoundSource::PureExact).unwrap();
        assert!((v.certified_lower_bound_on_c - 1.5f64.sqrt()).abs() < 1e-10);
        assert!(v.detected);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            detect_k_nonseparability(&mixed, 2, LowerBoundSource::PureExact),
            Err(Error::NotPure { .. })
        ));
        let v = detect_k_nonseparability(&mixed, 3, LowerBoundSource::UserSupplied(0.5)).unwrap();
        assert_eq!(v.source, SourceKind::UserSupplied);
        assert!(v.detected); // threshold for (3, 2, 3) is 0
        assert!(detect_k_nonseparability(&mixed, 3, LowerBoundSource::UserSupplied(-1.0)).is_err());
    }

    #[test]
    fn wrong_theorem_for_qubit_count() {
        let rho = DensityMatrix::maximally_mixed(5).unwrap();
        assert!(matches!(
            detect_k_nonseparability(&rho, 3, LowerBoundSource::Theorem1),
            Err(Error::WrongQubitCount { .. })
        ));
    }

    #[test]
    fn crossings() {
        let fam = NoisyFamily::example4();
        let x = detection_threshold(&fam, DetectionTarget::KNonseparable(3), LowerBoundSource::Theorem1)
            .unwrap()
            .value()
            .unwrap();
        // closed form: (sqrt7/2) (3t-1)/2 = sqrt22/4
        let exact = (1.0 + (22.0f64 / 7.0).sqrt()) / 3.0;
        assert!((x - exact).abs() < 1e-9);
        assert!((x - 0.9243).abs() < 1e-4);

        let x = detection_threshold(&fam, DetectionTarget::Entanglement, LowerBoundSource::Theorem1)
            .unwrap()
            .value()
            .unwrap();
        assert!((x - 1.0 / 3.0).abs() < 1e-9);

        // k = 2 needs C > sqrt(7.5)/2 ≈ 1.369, above the family's maximum sqrt7/2
        assert_eq!(
            detection_threshold(&fam, DetectionTarget::KNonseparable(2), LowerBoundSource::Theorem1)
                .unwrap(),
            Crossing::NoCrossing
        );
        assert!(detection_threshold(
            &fam,
            DetectionTarget::Entanglement,
            LowerBoundSource::UserSupplied(1.0)
        )
        .is_err());
    }
}
