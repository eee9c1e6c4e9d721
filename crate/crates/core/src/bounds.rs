//! Lower bounds on mixed-state concurrence from pairwise concurrences, and the
//! exact concurrence of the GHZ + white-noise family.
//!
//! Every bound has the form `C²(ρ) ≥ coefficient · Σ_{i<j} C_ij²(ρ)`:
//!
//! | bound      | qubits        | coefficient            |
//! |------------|---------------|------------------------|
//! | `T1`       | N = 4         | 7/8                    |
//! | `T2`       | N ≥ 5         | N / 2^(N-2)            |
//! | `T3`       | N ≥ 6, even   | (N-2) / 2^(N-3)        |

use serde::Serialize;

use crate::concurrence::{pairwise_table, PairwiseConcurrenceTable};
use crate::error::{Error, Result};
use crate::states::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    #[serde(rename = "GHZ_EXACT")]
    GhzExact,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::GhzExact => "GHZ_EXACT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub n_qubits: usize,
    /// `Σ_{i<j} C_ij²`; absent for the exact GHZ formula.
    pub pair_sum: Option<f64>,
    pub coefficient: Option<f64>,
    pub bound_on_c2: f64,
    pub bound_on_c: f64,
}

impl BoundReport {
    fn from_pairs(theorem: Theorem, table: &PairwiseConcurrenceTable, coefficient: f64) -> Self {
        let pair_sum = table.sum_of_squares();
        let bound_on_c2 = coefficient * pair_sum;
        Self {
            theorem,
            n_qubits: table.n_qubits(),
            pair_sum: Some(pair_sum),
            coefficient: Some(coefficient),
            bound_on_c2,
            bound_on_c: bound_on_c2.sqrt(),
        }
    }
}

pub const THEOREM1_COEFFICIENT: f64 = 7.0 / 8.0;

pub fn theorem2_coefficient(n: usize) -> f64 {
    n as f64 / 2f64.powi(n as i32 - 2)
}

pub fn theorem3_coefficient(n: usize) -> f64 {
    (n as f64 - 2.0) / 2f64.powi(n as i32 - 3)
}

/// Four-qubit bound, `C² ≥ 7/8 Σ C_ij²`.
pub fn theorem1_bound(table: &PairwiseConcurrenceTable) -> Result<BoundReport> {
    if table.n_qubits() != 4 {
        return Err(Error::WrongQubitCount {
            bound: "T1",
            n: table.n_qubits(),
        });
    }
    Ok(BoundReport::from_pairs(
        Theorem::T1,
        table,
        THEOREM1_COEFFICIENT,
    ))
}

/// `C² ≥ N / 2^(N-2) Σ C_ij²` for N ≥ 5.
pub fn theorem2_bound(table: &PairwiseConcurrenceTable) -> Result<BoundReport> {
    let n = table.n_qubits();
    if n < 5 {
        return Err(Error::WrongQubitCount { bound: "T2", n });
    }
    Ok(BoundReport::from_pairs(
        Theorem::T2,
        table,
        theorem2_coefficient(n),
    ))
}

/// `C² ≥ (N-2) / 2^(N-3) Σ C_ij²` for even N ≥ 6.
pub fn theorem3_bound(table: &PairwiseConcurrenceTable) -> Result<BoundReport> {
    let n = table.n_qubits();
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::WrongQubitCount { bound: "T3", n });
    }
    Ok(BoundReport::from_pairs(
        Theorem::T3,
        table,
        theorem3_coefficient(n),
    ))
}

/// Pairwise-bound theorems that apply to `n` qubits.
pub fn applicable_theorems(n: usize) -> Vec<Theorem> {
    let mut out = Vec::new();
    if n == 4 {
        out.push(Theorem::T1);
    }
    if n >= 5 {
        out.push(Theorem::T2);
    }
    if n >= 6 && n.is_multiple_of(2) {
        out.push(Theorem::T3);
    }
    out
}

pub fn bound_for(theorem: Theorem, table: &PairwiseConcurrenceTable) -> Result<BoundReport> {
    match theorem {
        Theorem::T1 => theorem1_bound(table),
        Theorem::T2 => theorem2_bound(table),
        Theorem::T3 => theorem3_bound(table),
        Theorem::GhzExact => Err(Error::UnsupportedSource("GHZ_EXACT")),
    }
}

/// All applicable bounds for one state.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSummary {
    pub pairwise: PairwiseConcurrenceTable,
    pub reports: Vec<BoundReport>,
    /// Theorem with the largest `bound_on_c2` (first in report order on ties).
    pub best: Theorem,
    /// `Some(true)` when both T2 and T3 apply and T3 has the larger coefficient.
    pub t3_dominates_t2: Option<bool>,
}

impl BoundSummary {
    pub fn from_table(table: PairwiseConcurrenceTable) -> Result<Self> {
        let n = table.n_qubits();
        if n < 4 {
            return Err(Error::WrongQubitCount { bound: "T1/T2/T3", n });
        }
        let reports = applicable_theorems(n)
            .into_iter()
            .map(|t| bound_for(t, &table))
            .collect::<Result<Vec<_>>>()?;
        let best = reports
            .iter()
            .fold(None::<&BoundReport>, |acc, r| match acc {
                Some(b) if b.bound_on_c2 >= r.bound_on_c2 => Some(b),
                _ => Some(r),
            })
            .map(|r| r.theorem)
            .expect("at least one theorem applies for N >= 4");
        let t3_dominates_t2 = (n >= 6 && n.is_multiple_of(2))
            .then(|| theorem3_coefficient(n) > theorem2_coefficient(n));
        Ok(Self {
            pairwise: table,
            reports,
            best,
            t3_dominates_t2,
        })
    }

    pub fn best_report(&self) -> &BoundReport {
        self.reports
            .iter()
            .find(|r| r.theorem == self.best)
            .expect("best is one of the reports")
    }

    pub fn report(&self, theorem: Theorem) -> Option<&BoundReport> {
        self.reports.iter().find(|r| r.theorem == theorem)
    }
}

/// Pairwise table plus every applicable theorem bound for `rho`.
pub fn best_bound(rho: &DensityMatrix) -> Result<BoundSummary> {
    if rho.n_qubits() < 4 {
        return Err(Error::WrongQubitCount {
            bound: "T1/T2/T3",
            n: rho.n_qubits(),
        });
    }
    BoundSummary::from_table(pairwise_table(rho)?)
}

/// Mixing parameter below which the GHZ + noise state is fully separable.
pub fn ghz_separability_point(n: usize) -> f64 {
    1.0 / (2f64.powi(n as i32 - 1) + 1.0)
}

/// Exact concurrence of `(1-p)/2^n I + p |GHZ_n><GHZ_n|`.
///
/// `sqrt((2^(n-1) - 1) / 2^(n-2)) · ((2^(n-1) + 1) p - 1) / 2^(n-1)` above the
/// separability point, zero below it.
pub fn ghz_noise_exact_concurrence(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange {
            name: "p",
            value: p,
        });
    }
    let half = 2f64.powi(n as i32 - 1);
    if p <= ghz_separability_point(n) {
        return Ok(0.0);
    }
    let prefactor = ((half - 1.0) / 2f64.powi(n as i32 - 2)).sqrt();
    Ok((prefactor * ((half + 1.0) * p - 1.0) / half).max(0.0))
}

pub fn ghz_noise_exact_report(n: usize, p: f64) -> Result<BoundReport> {
    let c = ghz_noise_exact_concurrence(n, p)?;
    Ok(BoundReport {
        theorem: Theorem::GhzExact,
        n_qubits: n,
        pair_sum: None,
        coefficient: None,
        bound_on_c2: c * c,
        bound_on_c: c,
    })
}

/// Coefficients of the earlier parametrized bound quoted alongside the
/// four-qubit examples, `C² ≥ k · C_12²`. Reference values only.
pub mod comparison {
    /// W₄ + noise.
    pub const W_NOISE: f64 = 3.0;
    /// Dicke D₄² + noise.
    pub const DICKE_NOISE: f64 = 3.0;
    /// Example-3 family.
    pub const EXAMPLE3: f64 = 2.0;
    /// Example-4 family.
    pub const EXAMPLE4: f64 = 1.0;
    /// Entanglement-detection thresholds quoted for the Dicke family by two
    /// earlier bounds (parametrized bound, GME-concurrence bound).
    pub const DICKE_PARAMETRIZED_THRESHOLD: f64 = 0.618034;
    pub const DICKE_GME_THRESHOLD: f64 = 0.636364;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_with(n: usize, f: impl Fn(usize, usize) -> f64) -> PairwiseConcurrenceTable {
        let values = (1..n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        PairwiseConcurrenceTable::from_values(n, values).unwrap()
    }

    #[test]
    fn theorem1_on_uniform_and_example_patterns() {
        let c = 0.3;
        // six equal pairs: 7/8 * 6 c² = 21/4 c²
        let t = theorem1_bound(&table_with(4, |_, _| c)).unwrap();
        assert!((t.bound_on_c2 - 21.0 / 4.0 * c * c).abs() < 1e-15);
        // four equal pairs: 7/2 c²
        let t = theorem1_bound(&table_with(4, |i, j| {
            if (i, j) == (1, 3) || (i, j) == (2, 4) {
                0.0
            } else {
                c
            }
        }))
        .unwrap();
        assert!((t.bound_on_c2 - 3.5 * c * c).abs() < 1e-15);
        assert!((t.bound_on_c - (3.5f64).sqrt() * c).abs() < 1e-15);
        assert!(theorem1_bound(&table_with(5, |_, _| c)).is_err());
    }

    #[test]
    fn theorem2_readout() {
        let zero = theorem2_bound(&table_with(5, |_, _| 0.0)).unwrap();
        assert_eq!(zero.bound_on_c2, 0.0);
        let c = 0.4;
        let one = theorem2_bound(&table_with(5, |i, j| if (i, j) == (1, 2) { c } else { 0.0 }))
            .unwrap();
        assert!((one.bound_on_c2 - 5.0 / 8.0 * c * c).abs() < 1e-15);
        assert!(matches!(
            theorem2_bound(&table_with(4, |_, _| c)),
            Err(Error::WrongQubitCount { n: 4, .. })
        ));
    }

    #[test]
    fn theorem3_readout() {
        let c = 0.4;
        let one = theorem3_bound(&table_with(6, |i, j| if (i, j) == (1, 2) { c } else { 0.0 }))
            .unwrap();
        assert!((one.bound_on_c2 - 0.5 * c * c).abs() < 1e-15);
        let all = theorem3_bound(&table_with(8, |_, _| c)).unwrap();
        assert!((all.bound_on_c2 - 6.0 / 32.0 * 28.0 * c * c).abs() < 1e-15);
        assert!(theorem3_bound(&table_with(7, |_, _| c)).is_err());
        assert!(theorem3_bound(&table_with(4, |_, _| c)).is_err());
    }

    #[test]
    fn coefficient_facts() {
        assert_eq!(THEOREM1_COEFFICIENT, 0.875);
        for n in (6..=20).step_by(2) {
            let ratio = theorem3_coefficient(n) / theorem2_coefficient(n);
            assert!((ratio - 2.0 * (n as f64 - 2.0) / n as f64).abs() < 1e-12);
            assert!(ratio > 1.0);
        }
        let s = BoundSummary::from_table(table_with(6, |_, _| 0.1)).unwrap();
        assert_eq!(s.t3_dominates_t2, Some(true));
        assert_eq!(s.best, Theorem::T3);
        assert_eq!(s.reports.len(), 2);
        let s = BoundSummary::from_table(table_with(5, |_, _| 0.1)).unwrap();
        assert_eq!(s.t3_dominates_t2, None);
        assert_eq!(s.best, Theorem::T2);
    }

    #[test]
    fn ghz_exact_formula() {
        for n in 2..=10 {
            let p0 = ghz_separability_point(n);
            assert!(ghz_noise_exact_concurrence(n, p0).unwrap().abs() < 1e-12);
            assert_eq!(ghz_noise_exact_concurrence(n, p0 / 2.0).unwrap(), 0.0);
            let top = ((2f64.powi(n as i32 - 1) - 1.0) / 2f64.powi(n as i32 - 2)).sqrt();
            assert!((ghz_noise_exact_concurrence(n, 1.0).unwrap() - top).abs() < 1e-14);
        }
        let c = ghz_noise_exact_concurrence(4, 0.9).unwrap();
        let expected = 7f64.sqrt() / 2.0 * (9.0 * 0.9 - 1.0) / 8.0;
        assert!((c - expected).abs() < 1e-14);
        assert!((c - 1.174052).abs() < 1e-6);
        assert!(ghz_noise_exact_concurrence(4, 1.01).is_err());
        assert!(ghz_noise_exact_concurrence(1, 0.5).is_err());
    }

    #[test]
    fn ghz_exact_is_affine_above_threshold() {
        for n in [3, 4, 6] {
            let p0 = ghz_separability_point(n);
            let f = |p: f64| ghz_noise_exact_concurrence(n, p).unwrap();
            for k in 0..20 {
                let a = p0 + (1.0 - p0) * k as f64 / 20.0;
                let b = p0 + (1.0 - p0) * (k + 1) as f64 / 20.0;
                assert!((f((a + b) / 2.0) - (f(a) + f(b)) / 2.0).abs() < 1e-14);
            }
        }
    }
}
