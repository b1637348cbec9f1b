//! Exact multivariate polynomials on the entries of an n-by-k matrix of
//! variables `w[i,j]`, graded by column multidegree.
//!
//! Monomials are encoded by their exponent matrix flattened column-major
//! (column 1 rows 1..n, then column 2, ...), and the monomial order is the
//! lexicographic order on that flat vector. This realizes the variable order
//! `w[1,1] > w[2,1] > ... > w[n,1] > w[1,2] > ... > w[n,k]`.

use crate::scalar::Scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("shape mismatch: ({0}) vs ({1})")]
    ShapeMismatch(MatShape, MatShape),
    #[error("zero polynomial has no initial term")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Shape of the variable matrix: n rows (ambient dimension), k columns
/// (homogeneity degree), 1 <= k <= n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MatShape {
    n: usize,
    k: usize,
}

impl MatShape {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n >= 1 && k >= 1 && k <= n, "require 1 <= k <= n");
        MatShape { n, k }
    }

    /// Column vector of n variables (k = 1), used for polynomials on C^n.
    pub fn vector(n: usize) -> Self {
        MatShape::new(n, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vars(&self) -> usize {
        self.n * self.k
    }

    /// Flat position of variable w[row, col]; both 0-based here.
    pub fn flat(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n && col < self.k);
        col * self.n + row
    }
}

impl fmt::Display for MatShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, k={}", self.n, self.k)
    }
}

/// Exponent matrix of a monomial, flattened column-major.
///
/// `Ord` is the lexicographic order on the flat vector, which is exactly the
/// monomial order used throughout: total, multiplicative, and a well-order
/// on each degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn zero(shape: MatShape) -> Self {
        MultiIndex {
            exps: vec![0; shape.num_vars()],
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        MultiIndex { exps }
    }

    /// Single variable w[row, col] (0-based).
    pub fn var(shape: MatShape, row: usize, col: usize) -> Self {
        let mut m = Self::zero(shape);
        m.exps[shape.flat(row, col)] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn get(&self, shape: MatShape, row: usize, col: usize) -> u32 {
        self.exps[shape.flat(row, col)]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Degree in each column: component j is the total degree in column j.
    pub fn column_degrees(&self, shape: MatShape) -> Vec<u32> {
        (0..shape.k)
            .map(|j| self.exps[j * shape.n..(j + 1) * shape.n].iter().sum())
            .collect()
    }

    /// Degree in each row (the torus weight of the monomial).
    pub fn row_degrees(&self, shape: MatShape) -> Vec<u32> {
        (0..shape.n)
            .map(|i| (0..shape.k).map(|j| self.exps[shape.flat(i, j)]).sum())
            .collect()
    }

    pub fn mul(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        MultiIndex {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn quotient(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert!(self.divides(other));
        MultiIndex {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    /// True if the exponent is supported on the last column only.
    pub fn last_column_only(&self, shape: MatShape) -> bool {
        self.exps[..(shape.k - 1) * shape.n].iter().all(|&e| e == 0)
    }

    /// Exponent restricted to the first k-1 columns (last column zeroed).
    pub fn head_columns(&self, shape: MatShape) -> MultiIndex {
        let mut exps = self.exps.clone();
        for e in exps[(shape.k - 1) * shape.n..].iter_mut() {
            *e = 0;
        }
        MultiIndex { exps }
    }

    /// Exponent of the last column as a vector index on C^n.
    pub fn last_column(&self, shape: MatShape) -> MultiIndex {
        MultiIndex {
            exps: self.exps[(shape.k - 1) * shape.n..].to_vec(),
        }
    }

    pub fn lcm(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.cmp(&other.exps)
    }
}

/// The fixed monomial order (see module docs). Kept as a unit-like handle so
/// call sites can name the order they compare with.
#[derive(Clone, Copy, Debug)]
pub struct MonomialOrder {
    pub shape: MatShape,
}

impl MonomialOrder {
    pub fn lex(shape: MatShape) -> Self {
        MonomialOrder { shape }
    }

    pub fn cmp(&self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        a.cmp(b)
    }
}

/// Sparse exact polynomial: a map from monomials to nonzero scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    shape: MatShape,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Polynomial {
    pub fn zero(shape: MatShape) -> Self {
        Polynomial {
            shape,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(shape: MatShape, c: Scalar) -> Self {
        let mut p = Self::zero(shape);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(shape), c);
        }
        p
    }

    pub fn one(shape: MatShape) -> Self {
        Self::constant(shape, Scalar::one())
    }

    /// The variable w[row, col] (0-based).
    pub fn var(shape: MatShape, row: usize, col: usize) -> Self {
        Self::monomial(shape, MultiIndex::var(shape, row, col), Scalar::one())
    }

    pub fn monomial(shape: MatShape, idx: MultiIndex, c: Scalar) -> Self {
        assert_eq!(idx.num_vars(), shape.num_vars());
        let mut p = Self::zero(shape);
        if !c.is_zero() {
            p.terms.insert(idx, c);
        }
        p
    }

    pub fn from_terms(shape: MatShape, terms: Vec<(MultiIndex, Scalar)>) -> Self {
        let mut p = Self::zero(shape);
        for (idx, c) in terms {
            p.add_term(idx, c);
        }
        p
    }

    pub fn shape(&self) -> MatShape {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// All coefficients are real rationals.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Scalar {
        self.terms.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in descending monomial order (canonical display order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter().rev()
    }

    /// Largest monomial with its coefficient.
    pub fn initial_term(&self) -> Result<(MultiIndex, Scalar), PolyError> {
        self.terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.shape);
        }
        Polynomial {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, idx: &MultiIndex, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.shape);
        }
        Polynomial {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.mul(idx), v * c))
                .collect(),
        }
    }

    fn check_shape(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.shape != other.shape {
            Err(PolyError::ShapeMismatch(self.shape, other.shape))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_shape(other)?;
        let mut out = Polynomial::zero(self.shape);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.shape);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Column multidegree if the polynomial is homogeneous with respect to
    /// rescaling each column independently, else `None`.
    pub fn column_degree(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.column_degrees(self.shape);
        for m in it {
            if m.column_degrees(self.shape) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Total degree (max over terms); zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// The homogeneous slice of total degree `d`.
    pub fn homogeneous_slice(&self, d: u32) -> Polynomial {
        Polynomial {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation at a scalar matrix point, given column-major entries
    /// (point[col][row]).
    pub fn eval_scalar(&self, point: &[Vec<Scalar>]) -> Result<Scalar, PolyError> {
        let (n, k) = (self.shape.n(), self.shape.k());
        if point.len() != k || point.iter().any(|c| c.len() != n) {
            return Err(PolyError::DimensionMismatch(format!(
                "point must be {} columns of {} entries",
                k, n
            )));
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for col in 0..k {
                for row in 0..n {
                    let e = m.get(self.shape, row, col);
                    if e > 0 {
                        term *= &point[col][row].pow(e);
                    }
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Numeric evaluation at a complex matrix point (column-major).
    pub fn eval_complex(&self, point: &[Vec<Complex64>]) -> Complex64 {
        let (n, k) = (self.shape.n(), self.shape.k());
        assert_eq!(point.len(), k);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = c.to_complex();
            for col in 0..k {
                for row in 0..n {
                    let e = m.get(self.shape, row, col);
                    for _ in 0..e {
                        term *= point[col][row];
                    }
                }
            }
            acc += term;
        }
        acc
    }

    /// General substitution: variable w[row, col] is replaced by
    /// `subst(row, col)`, a polynomial on `target` shape. Exact.
    pub fn substitute<F>(&self, target: MatShape, subst: F) -> Polynomial
    where
        F: Fn(usize, usize) -> Polynomial,
    {
        let (n, k) = (self.shape.n(), self.shape.k());
        // Cache images and their powers lazily.
        let mut images: Vec<Option<Polynomial>> = vec![None; n * k];
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for col in 0..k {
                for row in 0..n {
                    let e = m.get(self.shape, row, col);
                    if e > 0 {
                        let img = images[self.shape.flat(row, col)]
                            .get_or_insert_with(|| subst(row, col));
                        term = &term * &img.pow(e);
                    }
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Partial derivative with respect to w[row, col].
    pub fn derivative(&self, row: usize, col: usize) -> Polynomial {
        let pos = self.shape.flat(row, col);
        let mut out = Polynomial::zero(self.shape);
        for (m, c) in &self.terms {
            let e = m.exps()[pos];
            if e > 0 {
                let mut exps = m.exps().to_vec();
                exps[pos] -= 1;
                out.add_term(MultiIndex::from_exps(exps), c * &Scalar::from_int(e as i64));
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::render_poly(self))
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a, 'b> $trait<&'b Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'b Polynomial) -> Polynomial {
                self.$try(rhs).expect("polynomial shape mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$try(&rhs).expect("polynomial shape mismatch")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Scalar::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minor::{minor, OrderedTuple};

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn binomial_square() {
        let shape = MatShape::new(2, 1);
        let w11 = Polynomial::var(shape, 0, 0);
        let w21 = Polynomial::var(shape, 1, 0);
        let sum = &w11 + &w21;
        let sq = &sum * &sum;
        let expect = &(&(&w11 * &w11) + &(&w11 * &w21).scale(&s(2))) + &(&w21 * &w21);
        assert_eq!(sq, expect);
    }

    #[test]
    fn mul_by_zero() {
        let shape = MatShape::new(2, 2);
        let p = &Polynomial::var(shape, 0, 0) + &Polynomial::one(shape);
        assert!((&p * &Polynomial::zero(shape)).is_zero());
    }

    #[test]
    fn det2x2_squared() {
        let shape = MatShape::new(2, 2);
        let d = minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let d2 = &d * &d;
        // w11^2 w22^2 - 2 w11 w21 w12 w22 + w21^2 w12^2
        let w = |r: usize, c: usize| Polynomial::var(shape, r, c);
        let expect = &(&(&(&w(0, 0) * &w(0, 0)) * &(&w(1, 1) * &w(1, 1)))
            - &(&(&w(0, 0) * &w(1, 0)) * &(&w(0, 1) * &w(1, 1))).scale(&s(2)))
            + &(&(&w(1, 0) * &w(1, 0)) * &(&w(0, 1) * &w(0, 1)));
        assert_eq!(d2, expect);
    }

    #[test]
    fn initial_term_column_one_dominates() {
        let shape = MatShape::new(2, 2);
        let p = &Polynomial::var(shape, 1, 0) + &Polynomial::var(shape, 0, 1);
        let (m, c) = p.initial_term().unwrap();
        assert_eq!(m, MultiIndex::var(shape, 1, 0));
        assert_eq!(c, Scalar::one());
    }

    #[test]
    fn initial_term_of_constant() {
        let shape = MatShape::new(2, 1);
        let p = Polynomial::constant(shape, s(5));
        let (m, c) = p.initial_term().unwrap();
        assert_eq!(m, MultiIndex::zero(shape));
        assert_eq!(c, s(5));
        assert_eq!(
            Polynomial::zero(shape).initial_term(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn initial_term_of_det() {
        let shape = MatShape::new(2, 2);
        let d = minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let (m, c) = d.initial_term().unwrap();
        let expect = MultiIndex::var(shape, 0, 0).mul(&MultiIndex::var(shape, 1, 1));
        assert_eq!(m, expect);
        assert_eq!(c, Scalar::one());
    }

    #[test]
    fn column_degrees() {
        let shape = MatShape::new(3, 2);
        let d = minor(shape, &OrderedTuple::new(shape, vec![0, 2]).unwrap());
        assert_eq!(d.column_degree(), Some(vec![1, 1]));
        assert_eq!((&d * &d).column_degree(), Some(vec![2, 2]));
        let shape1 = MatShape::new(1, 1);
        let w = Polynomial::var(shape1, 0, 0);
        let mixed = &w + &(&w * &w);
        assert_eq!(mixed.column_degree(), None);
    }

    #[test]
    fn substitute_restriction_to_plane() {
        // Restrict Delta^2 on (n=3, k=2) to E = span{e1, e2}: principal minor squared.
        let shape = MatShape::new(3, 2);
        let target = MatShape::new(2, 2);
        let d = minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let d2 = &d * &d;
        let restricted = d2.substitute(target, |row, col| {
            if row < 2 {
                Polynomial::var(target, row, col)
            } else {
                Polynomial::zero(target)
            }
        });
        let de = minor(target, &OrderedTuple::new(target, vec![0, 1]).unwrap());
        assert_eq!(restricted, &de * &de);
    }

    #[test]
    fn eval_at_identity_columns() {
        let shape = MatShape::new(2, 2);
        let d = minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let point = vec![vec![s(1), s(0)], vec![s(0), s(1)]];
        assert_eq!(d.eval_scalar(&point).unwrap(), s(1));
    }

    #[test]
    fn eval_last_column_var_at_diagonal_point() {
        let shape = MatShape::new(3, 2);
        let p = Polynomial::var(shape, 0, 1);
        let z = vec![s(7), s(2), s(3)];
        let point = vec![z.clone(), z];
        assert_eq!(p.eval_scalar(&point).unwrap(), s(7));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = Polynomial::one(MatShape::new(2, 1));
        let b = Polynomial::one(MatShape::new(3, 1));
        assert!(a.try_add(&b).is_err());
    }
}
