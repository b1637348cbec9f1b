//! Symmetric matrices, determinants over a generic coefficient ring, and
//! mixed discriminants by polarization (inclusion-exclusion over subsets),
//! exact whenever the inputs are exact.

use crate::poly::Polynomial;
use crate::scalar::{factorial, Rational, Scalar};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not positive semi-definite")]
    NotPsd,
}

/// Minimal ring interface for determinant expansion. `zero_like` seeds the
/// accumulator from an existing element (polynomials carry a shape).
pub trait DetRing: Clone {
    fn zero_like(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn div_nat(&self, n: u64) -> Self;
}

impl DetRing for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_nat(&self, n: u64) -> Self {
        self * &Scalar::from_ratio(1, n as i64)
    }
}

impl DetRing for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_nat(&self, n: u64) -> Self {
        self / n as f64
    }
}

impl DetRing for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_nat(&self, n: u64) -> Self {
        self / n as f64
    }
}

impl DetRing for Polynomial {
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.shape())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_nat(&self, n: u64) -> Self {
        self.scale(&Scalar::from_ratio(1, n as i64))
    }
}

/// Determinant by Leibniz expansion; intended for n <= 5.
pub fn det_ring<T: DetRing>(m: &[Vec<T>]) -> T {
    let n = m.len();
    assert!(n >= 1 && m.iter().all(|r| r.len() == n));
    let mut acc = m[0][0].zero_like();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut term = m[0][perm[0]].clone();
        for (row, &col) in perm.iter().enumerate().skip(1) {
            term = term.mul_ref(&m[row][col]);
        }
        if permutation_sign(&perm) > 0 {
            acc = acc.add_ref(&term);
        } else {
            acc = acc.sub_ref(&term);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    acc
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Mixed discriminant of n square matrices of size n, normalized so that
/// `D(A, ..., A) = det A`:
///
/// D(A_1,...,A_n) = (1/n!) * sum over nonempty S of (-1)^{n-|S|} det(sum_{i in S} A_i).
pub fn mixed_discriminant<T: DetRing>(mats: &[Vec<Vec<T>>]) -> Result<T, MatrixError> {
    let n = mats.len();
    if n == 0 {
        return Err(MatrixError::DimensionMismatch("need at least one matrix".into()));
    }
    for m in mats {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(MatrixError::DimensionMismatch(format!(
                "expected {} matrices of size {n}x{n}",
                n
            )));
        }
    }
    let zero = mats[0][0][0].zero_like();
    let mut acc = zero.clone();
    for mask in 1u32..(1 << n) {
        let mut sum = vec![vec![zero.clone(); n]; n];
        for (i, m) in mats.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for r in 0..n {
                    for c in 0..n {
                        sum[r][c] = sum[r][c].add_ref(&m[r][c]);
                    }
                }
            }
        }
        let d = det_ring(&sum);
        if (n - mask.count_ones() as usize) % 2 == 0 {
            acc = acc.add_ref(&d);
        } else {
            acc = acc.sub_ref(&d);
        }
    }
    let nf = factorial(n as u64).to_integer().to_u64().unwrap();
    Ok(acc.div_nat(nf))
}

/// Determinant of a flat row-major complex matrix, n <= 5.
pub fn det_complex_flat(m: &[Complex64], n: usize) -> Complex64 {
    match n {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            // cofactor expansion along the first row
            let mut acc = Complex64::new(0.0, 0.0);
            let mut minor = [Complex64::new(0.0, 0.0); 16];
            for col in 0..n {
                let mut idx = 0;
                for r in 1..n {
                    for c in 0..n {
                        if c != col {
                            minor[idx] = m[r * n + c];
                            idx += 1;
                        }
                    }
                }
                let d = det_complex_flat(&minor[..(n - 1) * (n - 1)], n - 1);
                if col % 2 == 0 {
                    acc += m[col] * d;
                } else {
                    acc -= m[col] * d;
                }
            }
            acc
        }
    }
}

/// Scratch space for the allocation-free mixed discriminant.
#[derive(Default)]
pub struct MixedDiscriminantScratch {
    sum: Vec<Complex64>,
}

/// Mixed discriminant of flat row-major complex matrices, without
/// allocation beyond the scratch buffer.
pub fn mixed_discriminant_complex_flat(
    slots: &[&[Complex64]],
    n: usize,
    scratch: &mut MixedDiscriminantScratch,
) -> Complex64 {
    debug_assert_eq!(slots.len(), n);
    debug_assert!(n <= 5, "mixed discriminant supported for n <= 5");
    scratch.sum.resize(n * n, Complex64::new(0.0, 0.0));
    let mut acc = Complex64::new(0.0, 0.0);
    for mask in 1u32..(1 << n) {
        for v in scratch.sum.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for (i, slot) in slots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (s, v) in scratch.sum.iter_mut().zip(slot.iter()) {
                    *s += v;
                }
            }
        }
        let d = det_complex_flat(&scratch.sum, n);
        if (n - mask.count_ones() as usize) % 2 == 0 {
            acc += d;
        } else {
            acc -= d;
        }
    }
    let mut nf = 1.0;
    for j in 2..=n {
        nf *= j as f64;
    }
    acc / nf
}

/// Exact symmetric matrix with rational entries; the upper triangle is
/// authoritative on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrixQ {
    dim: usize,
    entries: Vec<Vec<Scalar>>,
}

impl SymMatrixQ {
    pub fn new(upper: Vec<Vec<Scalar>>) -> Self {
        let dim = upper.len();
        assert!(upper.iter().all(|r| r.len() == dim));
        let mut entries = upper;
        for i in 0..dim {
            for j in 0..i {
                entries[i][j] = entries[j][i].clone();
            }
        }
        SymMatrixQ { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrixQ {
            dim,
            entries: vec![vec![Scalar::zero(); dim]; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i][i] = Scalar::one();
        }
        m
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.entries[i][i] = Scalar::from_int(v);
        }
        m
    }

    /// Rank-one matrix v v^T.
    pub fn rank_one(v: &[Scalar]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i][j] = &v[i] * &v[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i][j] = v.clone();
        self.entries[j][i] = v;
    }

    pub fn rows(&self) -> &Vec<Vec<Scalar>> {
        &self.entries
    }

    pub fn add(&self, other: &SymMatrixQ) -> SymMatrixQ {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i][j] = &out.entries[i][j] + &other.entries[i][j];
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SymMatrixQ {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = &*e * c;
            }
        }
        out
    }

    pub fn det(&self) -> Scalar {
        det_ring(&self.entries)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| e.to_f64()).collect())
            .collect()
    }

    /// Exact LDL^T pivots; errors out if a negative pivot or an
    /// indefiniteness witness appears, so success certifies PSD.
    /// Returns the rank-one decomposition `sum_j d_j v_j v_j^T` with all
    /// d_j > 0.
    pub fn psd_rank_one_decomposition(&self) -> Result<Vec<(Rational, Vec<Scalar>)>, MatrixError> {
        let n = self.dim;
        let mut a: Vec<Vec<Rational>> = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        debug_assert!(e.is_real());
                        e.re.clone()
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for i in 0..n {
            let pivot = a[i][i].clone();
            if pivot.is_negative() {
                return Err(MatrixError::NotPsd);
            }
            if pivot.is_zero() {
                // PSD with zero diagonal forces zero row
                if a[i].iter().any(|v| !v.is_zero()) {
                    return Err(MatrixError::NotPsd);
                }
                continue;
            }
            let col: Vec<Rational> = (0..n).map(|r| &a[r][i] / &pivot).collect();
            for r in 0..n {
                for c in 0..n {
                    let delta = &col[r] * &col[c] * &pivot;
                    a[r][c] = &a[r][c] - &delta;
                }
            }
            out.push((pivot, col.into_iter().map(Scalar::from_rational).collect()));
        }
        Ok(out)
    }

    pub fn is_psd(&self) -> bool {
        self.psd_rank_one_decomposition().is_ok()
    }

    /// k-th elementary symmetric function of the eigenvalues, computed
    /// exactly as the sum of principal k-by-k minors.
    pub fn elementary_symmetric(&self, k: usize) -> Scalar {
        if k == 0 {
            return Scalar::one();
        }
        let mut acc = Scalar::zero();
        for subset in subsets_of_size(self.dim, k) {
            let sub: Vec<Vec<Scalar>> = subset
                .iter()
                .map(|&r| subset.iter().map(|&c| self.entries[r][c].clone()).collect())
                .collect();
            acc += &det_ring(&sub);
        }
        acc
    }
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

pub fn min_eigenvalue(m: &[Vec<f64>]) -> f64 {
    sym_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min)
}
