//! Division with remainder against the ordered minor-product basis, module
//! membership, the Buchberger verification, graded dimensions, and the
//! symbolic representation-theoretic checks.
//!
//! The coefficient ring acts through the last column only: a term is
//! reducible by a basis element exactly when its first k-1 column exponents
//! coincide with those of the initial term and its last-column exponent
//! dominates. Reduction then proceeds through the basis in descending
//! initial-term order; one pass suffices because no multiple of
//! `P - in(P)` contains a monomial reducible by `in(P)`, and later
//! subtractions cannot reintroduce reducibility by earlier initials.

use crate::linalg::Matrix;
use crate::minor::{build_basis, MinorGroebnerBasis, OrderedTuple};
use crate::poly::{MatShape, MultiIndex, Polynomial};
use crate::scalar::Scalar;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DivisionError {
    #[error("input shape ({0}) does not match basis shape ({1})")]
    ShapeMismatch(MatShape, MatShape),
    #[error("the selected minor restricts to zero on the given subspace; resample the subspace")]
    DegenerateSubspace,
}

/// Exact certificate `input = sum_j coefficients[j] * basis[j] + remainder`
/// with every coefficient a polynomial in the last-column variables and no
/// remainder monomial reducible by any basis initial term.
#[derive(Clone, Debug)]
pub struct DivisionCertificate {
    pub input: Polynomial,
    pub coefficients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl DivisionCertificate {
    /// Recomposes `sum_j g_j P_j + remainder`; equals the input exactly.
    pub fn recompose(&self, basis: &MinorGroebnerBasis) -> Polynomial {
        let mut acc = self.remainder.clone();
        for (g, e) in self.coefficients.iter().zip(&basis.elements) {
            acc = &acc + &(g * &e.polynomial);
        }
        acc
    }
}

pub fn divide(f: &Polynomial, basis: &MinorGroebnerBasis) -> Result<DivisionCertificate, DivisionError> {
    if f.shape() != basis.shape {
        return Err(DivisionError::ShapeMismatch(f.shape(), basis.shape));
    }
    let shape = basis.shape;
    let mut rest = f.clone();
    let mut coefficients = Vec::with_capacity(basis.len());
    for elem in &basis.elements {
        let head = elem.initial.head_columns(shape);
        let mut g = Polynomial::zero(shape);
        for (m, c) in rest.terms() {
            if m.head_columns(shape) == head && elem.initial.divides(m) {
                g.add_term(elem.initial.quotient(m), c.clone());
            }
        }
        if !g.is_zero() {
            rest = &rest - &(&g * &elem.polynomial);
        }
        coefficients.push(g);
    }
    Ok(DivisionCertificate {
        input: f.clone(),
        coefficients,
        remainder: rest,
    })
}

/// True iff `f` lies in the module generated by the quadratic minor
/// products over polynomials in the last column.
pub fn membership(f: &Polynomial, basis: &MinorGroebnerBasis) -> Result<bool, DivisionError> {
    Ok(divide(f, basis)?.remainder.is_zero())
}

#[derive(Debug, Clone, Serialize)]
pub struct BuchbergerReport {
    pub n: usize,
    pub k: usize,
    pub basis_size: usize,
    pub pair_count: usize,
    pub reduced_to_zero: usize,
    pub max_reduction_length: usize,
    pub side_condition_holds: bool,
    pub all_reduced: bool,
}

/// Runs the module Buchberger criterion: S-pairs are formed between basis
/// elements whose initial terms share the same first k-1 column exponents
/// (the free-module component), with cofactors taken in the last-column
/// coefficient ring; each S-polynomial must reduce to zero.
///
/// Also verifies the side condition needed by the division algorithm: no
/// multiple of `P - in(P)` by a last-column monomial contains a monomial
/// divisible by `in(P)`.
pub fn buchberger_check(basis: &MinorGroebnerBasis) -> BuchbergerReport {
    let shape = basis.shape;
    let mut pair_count = 0;
    let mut reduced = 0;
    let mut max_len = 0;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let ei = &basis.elements[i];
            let ej = &basis.elements[j];
            if ei.initial.head_columns(shape) != ej.initial.head_columns(shape) {
                continue;
            }
            pair_count += 1;
            let ti = ei.initial.last_column_part(shape);
            let tj = ej.initial.last_column_part(shape);
            let lcm = ti.lcm(&tj);
            let mi = ti.quotient(&lcm);
            let mj = tj.quotient(&lcm);
            let s = &ei.polynomial.mul_monomial(&mi, &Scalar::one())
                - &ej.polynomial.mul_monomial(&mj, &Scalar::one());
            let cert = divide(&s, basis).expect("shapes match");
            if cert.remainder.is_zero() {
                reduced += 1;
            }
            let len: usize = cert.coefficients.iter().map(|g| g.num_terms()).sum();
            max_len = max_len.max(len);
        }
    }
    BuchbergerReport {
        n: shape.n(),
        k: shape.k(),
        basis_size: basis.len(),
        pair_count,
        reduced_to_zero: reduced,
        max_reduction_length: max_len,
        side_condition_holds: no_divisible_multiple_check(basis),
        all_reduced: reduced == pair_count,
    }
}

trait LastColumnExt {
    fn last_column_part(&self, shape: MatShape) -> MultiIndex;
}

impl LastColumnExt for MultiIndex {
    /// The index with first k-1 columns zeroed (a last-column monomial of
    /// full length, so products stay within one exponent vector size).
    fn last_column_part(&self, shape: MatShape) -> MultiIndex {
        let mut exps = self.exps().to_vec();
        for e in exps[..(shape.k() - 1) * shape.n()].iter_mut() {
            *e = 0;
        }
        MultiIndex::from_exps(exps)
    }
}

/// Exhaustive check of the division-algorithm hypothesis on generator
/// supports: for every basis element, no non-initial monomial times a
/// last-column monomial is divisible by the element's own initial term.
/// Since last-column multiplication fixes the first k-1 columns, this
/// reduces to a pointwise domination test on those columns.
pub fn no_divisible_multiple_check(basis: &MinorGroebnerBasis) -> bool {
    let shape = basis.shape;
    for elem in &basis.elements {
        let in_head = elem.initial.head_columns(shape);
        for (m, _) in elem.polynomial.terms() {
            if *m == elem.initial {
                continue;
            }
            if in_head.divides(&m.head_columns(shape)) {
                return false;
            }
        }
    }
    true
}

/// Dimension of the degree-m slice of the module: the rank of
/// `{w_k^beta * P_j : |beta| = m - 2k}` over the rationals; 0 below
/// degree 2k.
pub fn graded_dimension(shape: MatShape, m: u32) -> usize {
    let two_k = 2 * shape.k() as u32;
    if m < two_k {
        return 0;
    }
    let basis = build_basis(shape);
    let betas = last_column_monomials(shape, m - two_k);
    let mut rows: Vec<Polynomial> = Vec::new();
    for elem in &basis.elements {
        for beta in &betas {
            rows.push(elem.polynomial.mul_monomial(beta, &Scalar::one()));
        }
    }
    span_rank(&rows)
}

fn last_column_monomials(shape: MatShape, degree: u32) -> Vec<MultiIndex> {
    let n = shape.n();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, shape: MatShape, out: &mut Vec<MultiIndex>) {
        let n = shape.n();
        if pos == n - 1 {
            cur[pos] = left;
            let mut exps = vec![0u32; shape.num_vars()];
            for (i, &e) in cur.iter().enumerate() {
                exps[shape.flat(i, shape.k() - 1)] = e;
            }
            out.push(MultiIndex::from_exps(exps));
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(cur, pos + 1, left - e, shape, out);
        }
    }
    rec(&mut cur, 0, degree, shape, &mut out);
    out
}

/// Exact rank of the span of a family of polynomials.
pub fn span_rank(polys: &[Polynomial]) -> usize {
    let mut monomials: BTreeSet<MultiIndex> = BTreeSet::new();
    for p in polys {
        for (m, _) in p.terms() {
            monomials.insert(m.clone());
        }
    }
    let cols: Vec<&MultiIndex> = monomials.iter().collect();
    let col_index: std::collections::BTreeMap<&MultiIndex, usize> =
        cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut mat = Matrix::zeros(polys.len(), cols.len());
    for (r, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            mat.set(r, col_index[&m], c.clone());
        }
    }
    mat.rank()
}

/// Brute-force rank of the span of all quadratic minor products (the
/// independent oracle for the dimension formula).
pub fn minor_product_span_rank(shape: MatShape) -> usize {
    let tuples = OrderedTuple::enumerate(shape);
    let minors: Vec<Polynomial> = tuples.iter().map(|t| crate::minor::minor(shape, t)).collect();
    let mut products = Vec::new();
    for a in 0..minors.len() {
        for b in a..minors.len() {
            products.push(&minors[a] * &minors[b]);
        }
    }
    span_rank(&products)
}

#[derive(Debug, Clone, Serialize)]
pub struct HighestWeightReport {
    pub d: u32,
    pub unitriangular_invariant: bool,
    pub is_weight_vector: bool,
    pub weight: Vec<u32>,
    pub expected_weight: Vec<u32>,
    pub ok: bool,
}

/// Verifies that `Delta_k^2 w[1,k]^d` is a highest weight vector: invariant
/// under upper-unitriangular substitutions w -> g^T w, and a torus weight
/// vector of weight (d+2, 2, ..., 2, 0, ..., 0).
pub fn highest_weight_check<R: Rng>(shape: MatShape, d: u32, rng: &mut R) -> HighestWeightReport {
    let k = shape.k();
    let n = shape.n();
    let delta = crate::minor::minor(
        shape,
        &OrderedTuple::new(shape, (0..k).collect()).unwrap(),
    );
    let w1k = Polynomial::var(shape, 0, k - 1);
    let p = &(&delta * &delta) * &w1k.pow(d);

    // (i) invariance under N_n^+ acting by w -> g^T w, sampled.
    let mut invariant = true;
    for _ in 0..3 {
        let mut g = vec![vec![Scalar::zero(); n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                if l == i {
                    *entry = Scalar::one();
                } else if l > i {
                    *entry = Scalar::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
                }
            }
        }
        // w[i,j] -> sum_l g[l][i] w[l,j]
        let image = p.substitute(shape, |i, j| {
            let mut acc = Polynomial::zero(shape);
            for (l, row) in g.iter().enumerate() {
                if !row[i].is_zero() {
                    acc = &acc + &Polynomial::var(shape, l, j).scale(&row[i]);
                }
            }
            acc
        });
        if image != p {
            invariant = false;
        }
    }

    // (ii) torus weight with symbolic h: substituting w -> diag(h)^T w
    // multiplies each monomial by h^(row degrees), so P is a weight vector
    // iff all its monomials share the same row-degree vector.
    let mut groups: BTreeSet<Vec<u32>> = BTreeSet::new();
    for (m, _) in p.terms() {
        groups.insert(m.row_degrees(shape));
    }
    let is_weight_vector = groups.len() == 1;
    let weight = groups.into_iter().next().unwrap_or_default();
    let mut expected = vec![0u32; n];
    expected[0] = d + 2;
    for e in expected.iter_mut().take(k).skip(1) {
        *e = 2;
    }
    let ok = invariant && is_weight_vector && weight == expected;
    HighestWeightReport {
        d,
        unitriangular_invariant: invariant,
        is_weight_vector,
        weight,
        expected_weight: expected,
        ok,
    }
}

#[derive(Debug, Clone)]
pub struct RestrictionReport {
    pub holds: bool,
    pub quotient: Option<Polynomial>,
}

/// Checks whether `p` restricted to E^k factors as `Delta^2|_E` times a
/// polynomial in the last column only, by exact division in E-coordinates.
pub fn restriction_factorization_check(
    p: &Polynomial,
    delta: &Polynomial,
    e_basis: &[Vec<Scalar>],
) -> Result<RestrictionReport, DivisionError> {
    let shape = p.shape();
    let k = shape.k();
    assert_eq!(e_basis.len(), k, "need k basis vectors for E");
    let target = MatShape::new(k, k);
    let restrict = |q: &Polynomial| -> Polynomial {
        q.substitute(target, |i, j| {
            let mut acc = Polynomial::zero(target);
            for (l, b) in e_basis.iter().enumerate() {
                if !b[i].is_zero() {
                    acc = &acc + &Polynomial::var(target, l, j).scale(&b[i]);
                }
            }
            acc
        })
    };
    let delta_e = restrict(delta);
    if delta_e.is_zero() {
        return Err(DivisionError::DegenerateSubspace);
    }
    // Delta|_E = c * det(u); recover c as the ratio against the full minor.
    let det_u = crate::minor::minor(target, &OrderedTuple::new(target, (0..k).collect()).unwrap());
    let (m0, c0) = delta_e.initial_term().unwrap();
    let (md, cd) = det_u.initial_term().unwrap();
    if m0 != md || &delta_e - &det_u.scale(&(&c0 / &cd)) != Polynomial::zero(target) {
        // Restriction of a k-minor combination is always a multiple of det;
        // anything else marks a degenerate sample.
        return Err(DivisionError::DegenerateSubspace);
    }
    let c = &c0 / &cd;
    let p_e = restrict(p);
    let basis_kk = build_basis(target);
    debug_assert_eq!(basis_kk.len(), 1);
    let cert = divide(&p_e, &basis_kk)?;
    if cert.remainder.is_zero() {
        // p|_E = g(u_k) det^2 = (g / c^2) Delta_E^2
        let quotient = cert.coefficients[0].scale(&(&c * &c).recip());
        Ok(RestrictionReport {
            holds: true,
            quotient: Some(quotient),
        })
    } else {
        Ok(RestrictionReport {
            holds: false,
            quotient: None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangeDirection {
    /// w -> ((w_1+w_k)/k, ..., (w_{k-1}+w_k)/k, w_k/k - sum_{j<k} w_j/k)
    Forward,
    /// w -> (k w_1 - sum, ..., k w_{k-1} - sum, sum)
    Inverse,
}

/// The diagonal coordinate change on points with scalar entries
/// (column-major: point[j] is column j).
pub fn diagonal_change_point(cols: &[Vec<Scalar>], dir: ChangeDirection) -> Vec<Vec<Scalar>> {
    let k = cols.len();
    let n = cols[0].len();
    let kq = Scalar::from_int(k as i64);
    let mut out = vec![vec![Scalar::zero(); n]; k];
    match dir {
        ChangeDirection::Forward => {
            for i in 0..n {
                let mut head_sum = Scalar::zero();
                for col in cols.iter().take(k - 1) {
                    head_sum += &col[i];
                }
                for j in 0..k - 1 {
                    out[j][i] = &(&cols[j][i] + &cols[k - 1][i]) / &kq;
                }
                out[k - 1][i] = &(&cols[k - 1][i] - &head_sum) / &kq;
            }
        }
        ChangeDirection::Inverse => {
            for i in 0..n {
                let mut total = Scalar::zero();
                for col in cols.iter() {
                    total += &col[i];
                }
                for j in 0..k - 1 {
                    out[j][i] = &(&cols[j][i] * &kq) - &total;
                }
                out[k - 1][i] = total;
            }
        }
    }
    out
}

/// The same coordinate change applied to a polynomial by substitution:
/// returns `p o T` (Forward) or `p o T^{-1}` (Inverse).
pub fn diagonal_change_poly(p: &Polynomial, dir: ChangeDirection) -> Polynomial {
    let shape = p.shape();
    let k = shape.k();
    let inv_k = Scalar::from_ratio(1, k as i64);
    let kq = Scalar::from_int(k as i64);
    p.substitute(shape, |i, j| match dir {
        ChangeDirection::Forward => {
            if j < k - 1 {
                (&Polynomial::var(shape, i, j) + &Polynomial::var(shape, i, k - 1)).scale(&inv_k)
            } else {
                let mut acc = Polynomial::var(shape, i, k - 1);
                for l in 0..k - 1 {
                    acc = &acc - &Polynomial::var(shape, i, l);
                }
                acc.scale(&inv_k)
            }
        }
        ChangeDirection::Inverse => {
            let mut total = Polynomial::zero(shape);
            for l in 0..k {
                total = &total + &Polynomial::var(shape, i, l);
            }
            if j < k - 1 {
                &Polynomial::var(shape, i, j).scale(&kq) - &total
            } else {
                total
            }
        }
    })
}

/// Diagonal component d(w): every column is the column average.
pub fn diagonal_component(cols: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let k = cols.len();
    let n = cols[0].len();
    let inv_k = Scalar::from_ratio(1, k as i64);
    let mut avg = vec![Scalar::zero(); n];
    for col in cols {
        for (a, v) in avg.iter_mut().zip(col) {
            *a += v;
        }
    }
    for a in avg.iter_mut() {
        *a *= &inv_k;
    }
    vec![avg; k]
}

/// Seeded random element of the module: coefficients in the last column of
/// total degree at most `max_deg`. Returns the element and the coefficients
/// used to build it.
pub fn random_module_element<R: Rng>(
    basis: &MinorGroebnerBasis,
    rng: &mut R,
    max_deg: u32,
) -> (Polynomial, Vec<Polynomial>) {
    let shape = basis.shape;
    let mut f = Polynomial::zero(shape);
    let mut gs = Vec::new();
    for elem in &basis.elements {
        let mut g = Polynomial::zero(shape);
        // sparse random coefficient: up to 3 monomials
        for _ in 0..rng.gen_range(0..=3u32) {
            let deg = rng.gen_range(0..=max_deg);
            let mut exps = vec![0u32; shape.num_vars()];
            for _ in 0..deg {
                let row = rng.gen_range(0..shape.n());
                exps[shape.flat(row, shape.k() - 1)] += 1;
            }
            let c = Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            g.add_term(MultiIndex::from_exps(exps), c);
        }
        f = &f + &(&g * &elem.polynomial);
        gs.push(g);
    }
    (f, gs)
}

/// Seeded random polynomial guaranteed to lie outside the module: a module
/// element plus an irreducible poison term (a repeated-row monomial for
/// k >= 2, a linear term for k = 1).
pub fn random_nonmember<R: Rng>(
    basis: &MinorGroebnerBasis,
    rng: &mut R,
    max_deg: u32,
) -> Polynomial {
    let shape = basis.shape;
    let (f, _) = random_module_element(basis, rng, max_deg);
    let mut exps = vec![0u32; shape.num_vars()];
    if shape.k() >= 2 {
        // all columns carry w[1,j]^2: no minor product supports it and no
        // initial term's head matches, so it survives division.
        for j in 0..shape.k() {
            exps[shape.flat(0, j)] = 2;
        }
    } else {
        exps[shape.flat(rng.gen_range(0..shape.n()), 0)] = 1;
    }
    let poison = Polynomial::monomial(
        shape,
        MultiIndex::from_exps(exps),
        Scalar::from_int(rng.gen_range(1..=5)),
    );
    &f + &poison
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn divide_single_generator() {
        let shape = MatShape::new(2, 2);
        let basis = build_basis(shape);
        let d2 = basis.elements[0].polynomial.clone();
        let f = &Polynomial::var(shape, 0, 1) * &d2;
        let cert = divide(&f, &basis).unwrap();
        assert!(cert.remainder.is_zero());
        assert_eq!(cert.coefficients[0], Polynomial::var(shape, 0, 1));
        assert_eq!(cert.recompose(&basis), f);
    }

    #[test]
    fn delta_itself_is_not_in_module() {
        let shape = MatShape::new(2, 2);
        let basis = build_basis(shape);
        let delta = crate::minor::minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let cert = divide(&delta, &basis).unwrap();
        assert_eq!(cert.remainder, delta);
        assert!(!membership(&delta, &basis).unwrap());
    }

    #[test]
    fn construct_then_divide_recovers_membership() {
        for (n, k) in [(2, 1), (3, 2), (4, 2)] {
            let shape = MatShape::new(n, k);
            let basis = build_basis(shape);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..10 {
                let (f, _) = random_module_element(&basis, &mut rng, 3);
                let cert = divide(&f, &basis).unwrap();
                assert!(cert.remainder.is_zero(), "n={n} k={k}");
                assert_eq!(cert.recompose(&basis), f);
                for g in &cert.coefficients {
                    for (m, _) in g.terms() {
                        assert!(m.last_column_only(shape));
                    }
                }
            }
        }
    }

    #[test]
    fn division_is_linear_and_idempotent() {
        let shape = MatShape::new(3, 2);
        let basis = build_basis(shape);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let nonmember = random_nonmember(&basis, &mut rng, 2);
        let (member, _) = random_module_element(&basis, &mut rng, 2);
        let c1 = divide(&nonmember, &basis).unwrap();
        let c2 = divide(&(&nonmember + &member), &basis).unwrap();
        let cm = divide(&member, &basis).unwrap();
        assert_eq!(c1.remainder, c2.remainder);
        for j in 0..basis.len() {
            assert_eq!(
                &c1.coefficients[j] + &cm.coefficients[j],
                c2.coefficients[j]
            );
        }
        // remainder is already in normal form
        let c3 = divide(&c1.remainder, &basis).unwrap();
        assert_eq!(c3.remainder, c1.remainder);
        assert!(c3.coefficients.iter().all(|g| g.is_zero()));
    }

    #[test]
    fn membership_examples() {
        let shape = MatShape::new(3, 2);
        let basis = build_basis(shape);
        let delta = crate::minor::minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let d2 = &delta * &delta;
        assert!(membership(&d2, &basis).unwrap());
        let w11 = Polynomial::var(shape, 0, 0);
        assert!(!membership(&w11, &basis).unwrap());
        // Delta_k^2 w[1,k]^d for d = 0..3
        for d in 0..4u32 {
            let f = &d2 * &Polynomial::var(shape, 0, 1).pow(d);
            assert!(membership(&f, &basis).unwrap(), "d={d}");
        }
    }

    #[test]
    fn buchberger_small_monomial_case() {
        let basis = build_basis(MatShape::new(2, 1));
        let report = buchberger_check(&basis);
        assert!(report.all_reduced);
        assert!(report.side_condition_holds);
        assert_eq!(report.pair_count, 3);
    }

    #[test]
    fn buchberger_n3_k2() {
        let basis = build_basis(MatShape::new(3, 2));
        let report = buchberger_check(&basis);
        assert!(report.all_reduced);
        assert!(report.side_condition_holds);
        assert!(report.pair_count > 0);
    }

    #[test]
    fn graded_dimensions() {
        // n=1, k=1: the module is w^2 P(C), dimension 1 in each degree >= 2.
        let shape = MatShape::new(1, 1);
        assert_eq!(graded_dimension(shape, 0), 0);
        assert_eq!(graded_dimension(shape, 1), 0);
        for m in 2..6 {
            assert_eq!(graded_dimension(shape, m), 1);
        }
        assert_eq!(graded_dimension(MatShape::new(2, 1), 2), 3);
        assert_eq!(graded_dimension(MatShape::new(2, 2), 4), 1);
    }

    #[test]
    fn brute_force_rank_matches_formula_small() {
        for (n, k) in [(2, 1), (2, 2), (3, 2), (4, 2)] {
            assert_eq!(
                minor_product_span_rank(MatShape::new(n, k)),
                crate::minor::expected_basis_size(n, k),
                "n={n} k={k}"
            );
        }
    }

    #[test]
    fn highest_weight_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = highest_weight_check(MatShape::new(2, 1), 0, &mut rng);
        assert!(r.ok);
        assert_eq!(r.weight, vec![2, 0]);
        let r = highest_weight_check(MatShape::new(2, 2), 1, &mut rng);
        assert!(r.ok);
        assert_eq!(r.weight, vec![3, 2]);
        let r = highest_weight_check(MatShape::new(3, 2), 0, &mut rng);
        assert!(r.ok);
        assert_eq!(r.weight, vec![2, 2, 0]);
    }

    #[test]
    fn restriction_factorization() {
        let shape = MatShape::new(3, 2);
        let delta = crate::minor::minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        let d2 = &delta * &delta;
        let p = &d2 * &Polynomial::var(shape, 0, 1);
        // E spanned by e1 + e3, e2 (Delta restricts nontrivially)
        let e_basis = vec![
            vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(1)],
            vec![Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(0)],
        ];
        let rep = restriction_factorization_check(&p, &delta, &e_basis).unwrap();
        assert!(rep.holds);

        // the initial monomial alone does not factor
        let (m, c) = d2.initial_term().unwrap();
        let mono = Polynomial::monomial(shape, m, c);
        let rep = restriction_factorization_check(&mono, &delta, &e_basis).unwrap();
        assert!(!rep.holds);

        // degenerate subspace: Delta = [12] restricted to span{e1, e1+e2*0}
        let degenerate = vec![
            vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(0)],
            vec![Scalar::from_int(2), Scalar::from_int(0), Scalar::from_int(0)],
        ];
        assert!(matches!(
            restriction_factorization_check(&p, &delta, &degenerate),
            Err(DivisionError::DegenerateSubspace)
        ));
    }

    #[test]
    fn gram_polynomial_restricts_to_delta_squared() {
        // det(<w_i, w_j>) on an orthonormal rational basis equals Delta^2
        // with quotient 1.
        let shape = MatShape::new(3, 2);
        let mut gram_entries = vec![vec![Polynomial::zero(shape); 2]; 2];
        for (i, row) in gram_entries.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = Polynomial::zero(shape);
                for l in 0..3 {
                    acc = &acc + &(&Polynomial::var(shape, l, i) * &Polynomial::var(shape, l, j));
                }
                *entry = acc;
            }
        }
        let gram = &(&gram_entries[0][0] * &gram_entries[1][1])
            - &(&gram_entries[0][1] * &gram_entries[1][0]);
        let delta = crate::minor::minor(shape, &OrderedTuple::new(shape, vec![0, 1]).unwrap());
        // orthonormal rational basis of a 2-plane: (3/5, 4/5, 0), (-4/5, 3/5, 0)
        let e_basis = vec![
            vec![
                Scalar::from_ratio(3, 5),
                Scalar::from_ratio(4, 5),
                Scalar::from_int(0),
            ],
            vec![
                Scalar::from_ratio(-4, 5),
                Scalar::from_ratio(3, 5),
                Scalar::from_int(0),
            ],
        ];
        let rep = restriction_factorization_check(&gram, &delta, &e_basis).unwrap();
        assert!(rep.holds);
        let q = rep.quotient.unwrap();
        // Gram restricts to det(u)^2 exactly and Delta|_E = +-det(u), so the
        // quotient is the constant 1.
        assert_eq!(q, Polynomial::one(MatShape::new(2, 2)));
    }

    #[test]
    fn diagonal_change_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let cols: Vec<Vec<Scalar>> = (0..2)
                .map(|_| {
                    (0..3)
                        .map(|_| Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                        .collect()
                })
                .collect();
            let fwd = diagonal_change_point(&cols, ChangeDirection::Forward);
            let back = diagonal_change_point(&fwd, ChangeDirection::Inverse);
            assert_eq!(back, cols);
        }
        // k = 1 is the identity
        let col = vec![vec![Scalar::from_int(3), Scalar::from_int(-2)]];
        assert_eq!(
            diagonal_change_point(&col, ChangeDirection::Forward),
            col
        );
        // diagonal points are fixed by d(w) with zero off-diagonal part
        let z = vec![Scalar::from_int(4), Scalar::from_int(1), Scalar::from_int(0)];
        let w = vec![z.clone(), z.clone()];
        let d = diagonal_component(&w);
        assert_eq!(d, w);
    }

    #[test]
    fn diagonal_change_poly_round_trip() {
        let shape = MatShape::new(2, 2);
        let p = parse_poly("w[1,1]^2*w[2,2] - 3*w[2,1]*w[1,2]", shape).unwrap();
        let q = diagonal_change_poly(&diagonal_change_poly(&p, ChangeDirection::Forward), ChangeDirection::Inverse);
        assert_eq!(p, q);
    }

    #[test]
    fn nonmembers_have_nonzero_remainder() {
        for (n, k) in [(2, 1), (3, 2)] {
            let shape = MatShape::new(n, k);
            let basis = build_basis(shape);
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            for _ in 0..10 {
                let f = random_nonmember(&basis, &mut rng, 2);
                assert!(!membership(&f, &basis).unwrap());
            }
        }
    }
}
