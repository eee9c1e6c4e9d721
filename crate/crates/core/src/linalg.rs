//! Dense complex linear algebra for small qubit systems.
//!
//! Basis convention: qubit 1 is the most significant bit of a computational
//! basis index, so `|0001>` is index 1 and `|1000>` is index 8 for four
//! qubits. [`SubsetMask`] bits are laid out the same way, which lets a mask be
//! applied directly to basis indices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::{Tolerances, DENSE_DIM_CAP};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Rank-one projector `|v><v|` (not normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m - m^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mul_impl(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Pauli `sigma_y`.
pub fn sigma_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = Complex64::new(0.0, -1.0);
    m[(1, 0)] = Complex64::new(0.0, 1.0);
    m
}

/// Subset of the qubits `1..=n_qubits`, stored as a bitmask aligned with
/// basis-index bits (qubit 1 is bit `n_qubits - 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u64,
    n_qubits: usize,
}

impl SubsetMask {
    pub fn new(bits: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 63 {
            return Err(Error::ParameterOutOfRange {
                name: "n_qubits",
                value: n_qubits as f64,
            });
        }
        if bits >= 1u64 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: 64 - bits.leading_zeros() as usize,
            });
        }
        Ok(Self { bits, n_qubits })
    }

    /// Mask from 1-based qubit labels.
    pub fn from_qubits(n_qubits: usize, qubits: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &q in qubits {
            if q == 0 || q > n_qubits {
                return Err(Error::ParameterOutOfRange {
                    name: "qubit",
                    value: q as f64,
                });
            }
            bits |= 1u64 << (n_qubits - q);
        }
        Self::new(bits, n_qubits)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == (1u64 << self.n_qubits) - 1
    }

    /// Nonempty and not the whole register.
    pub fn is_proper(&self) -> bool {
        !self.is_empty() && !self.is_full()
    }

    pub fn contains(&self, qubit: usize) -> bool {
        qubit >= 1 && qubit <= self.n_qubits && self.bits & (1u64 << (self.n_qubits - qubit)) != 0
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & ((1u64 << self.n_qubits) - 1),
            n_qubits: self.n_qubits,
        }
    }

    /// 1-based qubit labels in increasing order.
    pub fn qubits(&self) -> Vec<usize> {
        (1..=self.n_qubits).filter(|&q| self.contains(q)).collect()
    }

    /// All nonempty proper subsets in increasing bitmask order.
    pub fn proper_subsets(n_qubits: usize) -> impl Iterator<Item = SubsetMask> {
        let full = (1u64 << n_qubits) - 1;
        (1..full).map(move |bits| SubsetMask { bits, n_qubits })
    }
}

/// Bit positions (LSB = 0) set in `mask`, lowest first.
pub(crate) fn bit_positions(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask & (1u64 << b) != 0).collect()
}

/// Scatter the low bits of `value` into the positions listed in `positions`.
#[inline]
pub(crate) fn deposit_bits(value: usize, positions: &[u32]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0usize, |acc, (k, &p)| acc | (((value >> k) & 1) << p))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Real eigenvalues in nonincreasing order.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }

    pub(crate) fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim();
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * mapped[k])
                .sum()
        })
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Eigensystem> {
    hermitian_eigensystem_with(m, &Tolerances::default())
}

pub fn hermitian_eigensystem_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<Eigensystem> {
    let deviation = m.hermitian_deviation();
    if deviation > tol.hermitian {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut converged = n == 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= f64::EPSILON * 1e-2 * scale || off < f64::MIN_POSITIVE;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps ties in index order, so the output is deterministic.
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Eigensystem { values, vectors })
}

/// Annihilate `a[p][q]` with a unitary rotation in the (p, q) plane.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase makes the pivot real; then a real symmetric Jacobi rotation.
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = diag(phase^*) on q times the real rotation [[c, s], [-s, c]].
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-tol.psd, 0)` are clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with(m, &Tolerances::default())
}

pub fn psd_sqrt_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eigensystem_with(m, tol)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()).hermitian_part())
}

/// Kronecker product `a ⊗ b` with the default dimension cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_cap(a, b, DENSE_DIM_CAP)
}

pub fn kron_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da
        .checked_mul(db)
        .filter(|&d| d <= cap)
        .ok_or(Error::DimensionOverflow {
            dim: da.saturating_mul(db),
            cap,
        })?;
    Ok(ComplexMatrix::from_fn(dim, |i, j| {
        a[(i / db, j / db)] * b[(i % db, j % db)]
    }))
}

/// Number of qubits for a `2^n`-dimensional space.
pub(crate) fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// Reduced matrix on the qubits in `keep`, tracing out the rest.
pub fn partial_trace(rho: &ComplexMatrix, keep: SubsetMask) -> Result<ComplexMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    let expected = 1usize << keep.n_qubits();
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    let kept = bit_positions(keep.bits());
    let traced = bit_positions(keep.complement().bits());
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let kept_index: Vec<usize> = (0..dk).map(|i| deposit_bits(i, &kept)).collect();
    let traced_index: Vec<usize> = (0..dt).map(|t| deposit_bits(t, &traced)).collect();

    Ok(ComplexMatrix::from_fn(dk, |i, j| {
        let (ri, rj) = (kept_index[i], kept_index[j]);
        traced_index.iter().map(|&t| rho[(ri | t, rj | t)]).sum()
    }))
}

/// `Tr(rho^2)` as a real number.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (rho[(i, j)] * rho[(j, i)]).re;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_projector() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)])
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eigensystem(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0]);
    }

    #[test]
    fn sigma_y_spectrum() {
        let eig = hermitian_eigensystem(&sigma_y()).unwrap();
        assert_abs_diff_eq!(eig.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.values[1], -1.0, epsilon = 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&sigma_y()) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = ONE;
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let r = psd_sqrt(&ComplexMatrix::from_diagonal(&[4.0, 1.0])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diagonal(&[2.0, 1.0])) < 1e-14);
        let z = psd_sqrt(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let m = ComplexMatrix::from_diagonal(&[1.0, -1e-6]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPsd { .. })));
        // dust is clamped
        let m = ComplexMatrix::from_diagonal(&[1.0, -1e-12]);
        let r = psd_sqrt(&m).unwrap();
        assert_eq!(r[(1, 1)], ZERO);
    }

    #[test]
    fn kron_of_paulis() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));

        // hand expansion: anti-diagonal (-1, 1, 1, -1)
        let yy = kron(&sigma_y(), &sigma_y()).unwrap();
        let mut expected = ComplexMatrix::zeros(4);
        expected[(0, 3)] = c(-1.0, 0.0);
        expected[(1, 2)] = c(1.0, 0.0);
        expected[(2, 1)] = c(1.0, 0.0);
        expected[(3, 0)] = c(-1.0, 0.0);
        assert_eq!(yy, expected);
    }

    #[test]
    fn kron_respects_cap() {
        let a = ComplexMatrix::identity(64);
        assert_eq!(kron(&a, &a).unwrap().dim(), 4096);
        let b = ComplexMatrix::identity(2);
        assert!(matches!(
            kron(&kron(&a, &a).unwrap(), &b),
            Err(Error::DimensionOverflow { dim: 8192, cap: 4096 })
        ));
        assert!(matches!(
            kron_with_cap(&a, &a, 1024),
            Err(Error::DimensionOverflow { dim: 4096, cap: 1024 })
        ));
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let mut zz = ComplexMatrix::zeros(4);
        zz[(0, 0)] = ONE;
        let keep1 = SubsetMask::from_qubits(2, &[1]).unwrap();
        let r = partial_trace(&zz, keep1).unwrap();
        assert_eq!(r, ComplexMatrix::from_diagonal(&[1.0, 0.0]));

        let r = partial_trace(&bell_projector(), keep1).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&rho, SubsetMask::new(0, 2).unwrap()),
            Err(Error::EmptySubset)
        ));
        assert!(matches!(
            partial_trace(&rho, SubsetMask::new(1, 3).unwrap()),
            Err(Error::DimensionMismatch { expected: 8, found: 4 })
        ));
    }

    #[test]
    fn partial_trace_keeps_qubit_order() {
        // |01><01| on qubits (1, 2) of three qubits, qubit 3 in |0>.
        let mut rho = ComplexMatrix::zeros(8);
        rho[(0b010, 0b010)] = ONE;
        let r = partial_trace(&rho, SubsetMask::from_qubits(3, &[1, 2]).unwrap()).unwrap();
        assert_eq!(r[(0b01, 0b01)], ONE);
        let r = partial_trace(&rho, SubsetMask::from_qubits(3, &[2, 3]).unwrap()).unwrap();
        assert_eq!(r[(0b10, 0b10)], ONE);
    }

    #[test]
    fn purity_examples() {
        assert_abs_diff_eq!(
            purity(&ComplexMatrix::from_diagonal(&[0.5, 0.5])),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(purity(&bell_projector()), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            purity(&ComplexMatrix::from_diagonal(&[0.75, 0.25])),
            0.625,
            epsilon = 1e-15
        );
    }

    #[test]
    fn subset_mask_basics() {
        let m = SubsetMask::from_qubits(4, &[1, 3]).unwrap();
        assert_eq!(m.bits(), 0b1010);
        assert_eq!(m.qubits(), vec![1, 3]);
        assert_eq!(m.complement().qubits(), vec![2, 4]);
        assert!(m.is_proper());
        assert!(SubsetMask::new(16, 4).is_err());
        assert_eq!(SubsetMask::proper_subsets(3).count(), 6);
    }
}
