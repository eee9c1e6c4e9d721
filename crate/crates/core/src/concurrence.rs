//! Exact concurrences: the multipartite pure-state formula, bipartite cut
//! concurrences, the Wootters two-qubit formula and the `H` invariant.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, kron, psd_sqrt, sigma_y, ComplexMatrix, SubsetMask};
use crate::states::{DensityMatrix, PureState};
use crate::tolerance::{clamp_dust, Tolerances};

/// `Tr(rho_S^2)` for the reduced state of `psi` on `subset`.
///
/// Works on the Gram matrix of the smaller side of the cut, so the full
/// density matrix is never formed.
pub fn subset_purity(psi: &PureState, subset: SubsetMask) -> Result<f64> {
    if subset.n_qubits() != psi.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: psi.n_qubits(),
            found: subset.n_qubits(),
        });
    }
    if !subset.is_proper() {
        return Err(Error::EmptySubset);
    }
    let small = if subset.len() <= subset.n_qubits() - subset.len() {
        subset
    } else {
        subset.complement()
    };
    let rows = psi.split(small);
    let mut acc = 0.0;
    for i in 0..rows.len() {
        for j in i..rows.len() {
            let g: Complex64 = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| a * b.conj())
                .sum();
            acc += if i == j { g.norm_sqr() } else { 2.0 * g.norm_sqr() };
        }
    }
    Ok(acc)
}

/// `Σ_S Tr(rho_S^2)` over all `2^N - 2` nonempty proper subsets.
pub fn purity_sum(psi: &PureState) -> f64 {
    let n = psi.n_qubits();
    if n < 2 {
        return 0.0;
    }
    // S and its complement have equal purity; visit the half that excludes qubit 1.
    let top = 1u64 << (n - 1);
    let half: f64 = (1..top)
        .map(|bits| {
            let mask = SubsetMask::new(bits, n).expect("bits below 2^n");
            subset_purity(psi, mask).expect("proper subset")
        })
        .sum();
    2.0 * half
}

/// `C(|psi>) = 2^(1 - N/2) sqrt(2^N - 2 - Σ_S Tr(rho_S^2))`.
pub fn pure_concurrence(psi: &PureState) -> f64 {
    let n = psi.n_qubits();
    if n < 2 {
        return 0.0;
    }
    let total = 2f64.powi(n as i32) - 2.0;
    let radicand = total - purity_sum(psi);
    // Rounding in the purity sum leaves O(eps * 2^N) residue for product
    // states; under a square root that would read as C ~ 1e-8.
    let radicand = if radicand.abs() <= 64.0 * f64::EPSILON * total {
        0.0
    } else {
        clamp_dust(radicand, Tolerances::default().radicand).max(0.0)
    };
    2f64.powf(1.0 - n as f64 / 2.0) * radicand.sqrt()
}

/// Squared concurrence `2 (1 - Tr rho_S^2)` of the bipartition `S | S̄`.
pub fn cut_concurrence_squared(psi: &PureState, cut: SubsetMask) -> Result<f64> {
    let p = subset_purity(psi, cut)?;
    Ok(clamp_dust(2.0 * (1.0 - p), Tolerances::default().radicand).max(0.0))
}

/// Squared cut concurrences of a pure state, grouped by subset size.
#[derive(Debug, Clone, Serialize)]
pub struct CutConcurrenceProfile {
    pub n_qubits: usize,
    /// `(mask bits, C²_{S|S̄})` for every nonempty proper subset, in increasing bitmask order.
    pub values: Vec<(u64, f64)>,
    /// `by_subset_size[j - 1]` lists `C²` over all subsets of size `j`, bitmask order.
    pub by_subset_size: Vec<Vec<f64>>,
}

impl CutConcurrenceProfile {
    pub fn new(psi: &PureState) -> Result<Self> {
        let n = psi.n_qubits();
        if n < 2 {
            return Err(Error::TooFewQubits { n, min: 2 });
        }
        let mut values = Vec::with_capacity((1 << n) - 2);
        let mut by_subset_size = vec![Vec::new(); n - 1];
        for mask in SubsetMask::proper_subsets(n) {
            let c2 = cut_concurrence_squared(psi, mask)?;
            values.push((mask.bits(), c2));
            by_subset_size[mask.len() - 1].push(c2);
        }
        Ok(Self {
            n_qubits: n,
            values,
            by_subset_size,
        })
    }

    /// `Σ_{|S| = j} C²_{S|S̄}`.
    pub fn size_sum(&self, j: usize) -> f64 {
        self.by_subset_size
            .get(j.wrapping_sub(1))
            .map(|v| v.iter().sum())
            .unwrap_or(0.0)
    }

    pub fn get(&self, mask: SubsetMask) -> Option<f64> {
        self.values
            .binary_search_by_key(&mask.bits(), |&(b, _)| b)
            .ok()
            .map(|i| self.values[i].1)
    }
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&sigma_y(), &sigma_y()).expect("4x4");
    &(&yy * &rho.conj()) * &yy
}

/// Wootters concurrence `max{λ1 - λ2 - λ3 - λ4, 0}` of a two-qubit state.
///
/// The `λ_i` are the eigenvalues of `sqrt(sqrt(ρ) ρ̃ sqrt(ρ))`, which match the
/// square roots of the spectrum of `ρ ρ̃` without a non-Hermitian solver.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::WrongDimension {
            n_qubits: rho.n_qubits(),
        });
    }
    let m = rho.matrix();
    let root = psd_sqrt(m)?;
    let inner = (&(&root * &spin_flip(m)) * &root).hermitian_part();
    let mu = hermitian_eigensystem(&inner)?.values;
    // Eigenvalues below the solver's resolution are rank dust: sqrt would
    // inflate 1e-17 into 3e-9.
    let dust = 16.0 * f64::EPSILON * mu[0].abs().max(f64::MIN_POSITIVE);
    let lambda: Vec<f64> = mu
        .iter()
        .map(|&x| if x <= dust { 0.0 } else { x.sqrt() })
        .collect();
    let c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Wootters concurrence of every two-qubit marginal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseConcurrenceTable {
    n_qubits: usize,
    /// Row-major upper triangle: (1,2), (1,3), ..., (N-1,N).
    values: Vec<f64>,
}

impl PairwiseConcurrenceTable {
    /// Build a table from explicit values in (1,2), (1,3), ..., (N-1,N) order.
    pub fn from_values(n_qubits: usize, values: Vec<f64>) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::TooFewQubits {
                n: n_qubits,
                min: 2,
            });
        }
        let expected = n_qubits * (n_qubits - 1) / 2;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&c| !(0.0..=1.0).contains(&c)) {
            return Err(Error::ParameterOutOfRange {
                name: "pairwise concurrence",
                value: bad,
            });
        }
        Ok(Self { n_qubits, values })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let n = self.n_qubits;
        let (i, j) = (i - 1, j - 1);
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// `C_ij` for 1-based qubits; symmetric in `(i, j)`, zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i >= 1 && j >= 1 && i <= self.n_qubits && j <= self.n_qubits);
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.values[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.values[self.offset(j, i)],
        }
    }

    /// `((i, j), C_ij)` for `i < j` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let n = self.n_qubits;
        (1..n)
            .flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
            .zip(self.values.iter().copied())
    }

    /// `Σ_{i<j} C_ij²`.
    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|c| c * c).sum()
    }
}

pub fn pairwise_table(rho: &DensityMatrix) -> Result<PairwiseConcurrenceTable> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..n {
        for j in i + 1..=n {
            values.push(wootters_concurrence(&rho.reduce_pair(i, j)?)?);
        }
    }
    PairwiseConcurrenceTable::from_values(n, values)
}

/// Pairwise table of a pure state, reducing straight from the amplitudes.
pub fn pairwise_table_pure(psi: &PureState) -> Result<PairwiseConcurrenceTable> {
    let n = psi.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..n {
        for j in i + 1..=n {
            let reduced = psi.reduced(SubsetMask::from_qubits(n, &[i, j])?)?;
            let rho = DensityMatrix::trusted(2, reduced.hermitian_part());
            values.push(wootters_concurrence(&rho)?);
        }
    }
    PairwiseConcurrenceTable::from_values(n, values)
}

/// `H(|psi>) = <psi| σ_y^{⊗n} |psi*>`.
pub fn h_invariant(psi: &PureState) -> Complex64 {
    let n = psi.n_qubits();
    let amps = psi.amplitudes();
    let flip = amps.len() - 1;
    // σ_y^{⊗n}|x> = i^n (-1)^{|x|} |x̄>
    let i_pow_n = Complex64::new(0.0, 1.0).powu(n as u32);
    let sum: Complex64 = amps
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let sign = if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            amps[x ^ flip].conj() * a.conj() * sign
        })
        .sum();
    i_pow_n * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{example3_state, example4_state, ghz_state, w_state, white_noise_mix};

    fn bell() -> PureState {
        ghz_state(2).unwrap()
    }

    fn product(n: usize) -> PureState {
        // |+>|0>|+>...
        let plus = PureState::uniform_superposition(1, &[0, 1]).unwrap();
        let zero = PureState::basis(1, 0).unwrap();
        let mut psi = plus.clone();
        for q in 1..n {
            psi = psi.tensor(if q % 2 == 0 { &plus } else { &zero }).unwrap();
        }
        psi
    }

    #[test]
    fn product_states_have_zero_concurrence() {
        for n in 2..=6 {
            assert!(pure_concurrence(&product(n)) < 1e-10);
        }
    }

    #[test]
    fn ghz_concurrence() {
        for n in 2..=8 {
            let expected = ((2f64.powi(n - 1) - 1.0) / 2f64.powi(n - 2)).sqrt();
            let c = pure_concurrence(&ghz_state(n as usize).unwrap());
            assert!((c - expected).abs() < 1e-12, "n={n}: {c} vs {expected}");
        }
    }

    #[test]
    fn example4_concurrence() {
        let c = pure_concurrence(&example4_state());
        assert!((c - 7f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn bell_consistency() {
        let c = pure_concurrence(&bell());
        let w = wootters_concurrence(&bell().projector().unwrap()).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cut_examples() {
        let p = product(4);
        let cut = SubsetMask::from_qubits(4, &[1]).unwrap();
        assert!(cut_concurrence_squared(&p, cut).unwrap() < 1e-12);
        let g = ghz_state(4).unwrap();
        assert!((cut_concurrence_squared(&g, cut).unwrap() - 1.0).abs() < 1e-12);
        let b = bell();
        let cut2 = SubsetMask::from_qubits(2, &[1]).unwrap();
        assert!((cut_concurrence_squared(&b, cut2).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            cut_concurrence_squared(&g, SubsetMask::new(0, 4).unwrap()),
            Err(Error::EmptySubset)
        ));
        assert!(matches!(
            cut_concurrence_squared(&g, SubsetMask::new(15, 4).unwrap()),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn wootters_examples() {
        let zero = PureState::basis(2, 0).unwrap().projector().unwrap();
        assert!(wootters_concurrence(&zero).unwrap() < 1e-12);

        let w4 = w_state(4).unwrap();
        let rho = white_noise_mix(&w4, 0.9).unwrap().reduce_pair(1, 2).unwrap();
        let expected = (0.9 - 0.19f64.sqrt()) / 2.0;
        assert!((wootters_concurrence(&rho).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.232055).abs() < 1e-6);

        let rho = white_noise_mix(&w4, 0.8).unwrap().reduce_pair(1, 2).unwrap();
        assert!((wootters_concurrence(&rho).unwrap() - 0.1).abs() < 1e-12);

        let d = crate::states::dicke_state(4, 2).unwrap();
        let rho = white_noise_mix(&d, 0.9).unwrap().reduce_pair(1, 2).unwrap();
        assert!((wootters_concurrence(&rho).unwrap() - 0.25).abs() < 1e-12);

        let three = crate::states::DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            wootters_concurrence(&three),
            Err(Error::WrongDimension { n_qubits: 3 })
        ));
    }

    #[test]
    fn example3_pairs() {
        let rho = white_noise_mix(&example3_state(), 0.9).unwrap();
        let table = pairwise_table(&rho).unwrap();
        let c = (0.9 - 0.1f64.sqrt()) / 2.0;
        assert!((c - 0.291886).abs() < 1e-6);
        for (i, j) in [(1, 2), (1, 4), (2, 3), (3, 4)] {
            assert!((table.get(i, j) - c).abs() < 1e-12, "({i},{j})");
            assert_eq!(table.get(i, j), table.get(j, i));
        }
        assert!(table.get(1, 3) < 1e-12);
        assert!(table.get(2, 4) < 1e-12);
        // the a = 1 limit
        let table = pairwise_table(&example3_state().projector().unwrap()).unwrap();
        assert!(table.get(1, 3) < 1e-12);
    }

    #[test]
    fn example4_pairs() {
        let table = pairwise_table(&example4_state().projector().unwrap()).unwrap();
        for ((i, j), c) in table.pairs() {
            let expected = if (i, j) == (1, 2) || (i, j) == (3, 4) { 1.0 } else { 0.0 };
            assert!((c - expected).abs() < 1e-12, "({i},{j}) = {c}");
        }
        let pure = pairwise_table_pure(&example4_state()).unwrap();
        for (a, b) in table.pairs().zip(pure.pairs()) {
            assert!((a.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_pairs() {
        let rho = crate::states::DensityMatrix::maximally_mixed(4).unwrap();
        let table = pairwise_table(&rho).unwrap();
        assert!(table.pairs().all(|(_, c)| c == 0.0));
    }

    #[test]
    fn table_indexing() {
        let t = PairwiseConcurrenceTable::from_values(4, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
            .unwrap();
        assert_eq!(t.get(1, 2), 0.1);
        assert_eq!(t.get(1, 4), 0.3);
        assert_eq!(t.get(2, 3), 0.4);
        assert_eq!(t.get(4, 3), 0.6);
        assert!(PairwiseConcurrenceTable::from_values(4, vec![0.0; 5]).is_err());
        assert!(PairwiseConcurrenceTable::from_values(2, vec![1.5]).is_err());
    }

    /// Dense `σ_y^{⊗n}` route for the H invariant.
    fn h_dense(psi: &PureState) -> Complex64 {
        let mut y = sigma_y();
        for _ in 1..psi.n_qubits() {
            y = kron(&y, &sigma_y()).unwrap();
        }
        let conj: Vec<Complex64> = psi.amplitudes().iter().map(|z| z.conj()).collect();
        let tilde = y.matvec(&conj);
        psi.amplitudes()
            .iter()
            .zip(&tilde)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    #[test]
    fn h_invariant_examples() {
        for n in [2, 4, 6] {
            let g = ghz_state(n).unwrap();
            assert!((h_invariant(&g).norm() - 1.0).abs() < 1e-12);
        }
        assert!(h_invariant(&w_state(4).unwrap()).norm() < 1e-15);
        assert!((h_invariant(&bell()).norm() - 1.0).abs() < 1e-12);
        for psi in [example3_state(), example4_state(), w_state(3).unwrap(), ghz_state(3).unwrap()] {
            assert!((h_invariant(&psi) - h_dense(&psi)).norm() < 1e-12);
        }
    }

    #[test]
    fn profile_grouping() {
        let g = ghz_state(4).unwrap();
        let prof = CutConcurrenceProfile::new(&g).unwrap();
        assert_eq!(prof.values.len(), 14);
        assert_eq!(prof.by_subset_size[0].len(), 4);
        assert_eq!(prof.by_subset_size[1].len(), 6);
        assert!((prof.size_sum(1) - 4.0).abs() < 1e-12);
        assert!((prof.size_sum(2) - 6.0).abs() < 1e-12);
        let m = SubsetMask::from_qubits(4, &[2, 3]).unwrap();
        assert!((prof.get(m).unwrap() - 1.0).abs() < 1e-12);
    }
}
