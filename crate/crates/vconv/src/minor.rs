//! k-minors of the variable matrix and the ordered generating set of the
//! module spanned by their quadratic products.

use crate::poly::{MatShape, MultiIndex, Polynomial};
use crate::scalar::{binomial, Scalar};
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinorError {
    #[error("row tuple {0:?} is not strictly increasing within 0..n")]
    BadTuple(Vec<usize>),
}

/// Strictly increasing k-tuple of row indices (0-based internally).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OrderedTuple {
    rows: Vec<usize>,
}

impl OrderedTuple {
    pub fn new(shape: MatShape, rows: Vec<usize>) -> Result<Self, MinorError> {
        let ok = rows.len() == shape.k()
            && rows.windows(2).all(|p| p[0] < p[1])
            && rows.iter().all(|&r| r < shape.n());
        if ok {
            Ok(OrderedTuple { rows })
        } else {
            Err(MinorError::BadTuple(rows))
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// 1-based rows for display and serialization.
    pub fn rows_one_based(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r + 1).collect()
    }

    /// Componentwise comparison: `self >= other` in every entry.
    pub fn dominates(&self, other: &OrderedTuple) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a >= b)
    }

    /// The index alpha(I): column j carries e_{i_j}.
    pub fn alpha(&self, shape: MatShape) -> MultiIndex {
        let mut exps = vec![0u32; shape.num_vars()];
        for (j, &i) in self.rows.iter().enumerate() {
            exps[shape.flat(i, j)] = 1;
        }
        MultiIndex::from_exps(exps)
    }

    /// All strictly increasing k-tuples in 0..n, lexicographic order.
    pub fn enumerate(shape: MatShape) -> Vec<OrderedTuple> {
        let (n, k) = (shape.n(), shape.k());
        let mut out = Vec::new();
        let mut cur = (0..k).collect::<Vec<_>>();
        loop {
            out.push(OrderedTuple { rows: cur.clone() });
            // next combination
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
}

/// The k-by-k minor [I]: determinant of the rows `I` of the variable matrix,
/// expanded exactly over the rationals.
pub fn minor(shape: MatShape, tuple: &OrderedTuple) -> Polynomial {
    let k = shape.k();
    let mut out = Polynomial::zero(shape);
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let sign = permutation_sign(&perm);
        let mut exps = vec![0u32; shape.num_vars()];
        for (col, &p) in perm.iter().enumerate() {
            exps[shape.flat(tuple.rows[p], col)] += 1;
        }
        out.add_term(
            MultiIndex::from_exps(exps),
            if sign > 0 {
                Scalar::one()
            } else {
                -Scalar::one()
            },
        );
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
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

/// A product [I][I'] with I >= I' componentwise, cached with its polynomial
/// and initial exponent.
#[derive(Clone, Debug)]
pub struct MinorProduct {
    pub upper: OrderedTuple,
    pub lower: OrderedTuple,
    pub polynomial: Polynomial,
    pub initial: MultiIndex,
}

/// The ordered generating set of the module spanned by quadratic minor
/// products, sorted descending by initial term. This set has N_{n,k}
/// elements with pairwise distinct initial terms.
#[derive(Clone, Debug)]
pub struct MinorGroebnerBasis {
    pub shape: MatShape,
    pub elements: Vec<MinorProduct>,
}

/// N_{n,k} = C(n,k)^2 - C(n,k-1) C(n,n-k-1).
pub fn expected_basis_size(n: usize, k: usize) -> usize {
    let c = |a: usize, b: i64| -> i64 {
        if b < 0 {
            0
        } else {
            binomial(a as u64, b as u64).to_integer().to_i64().unwrap()
        }
    };
    let v = c(n, k as i64) * c(n, k as i64) - c(n, k as i64 - 1) * c(n, n as i64 - k as i64 - 1);
    v as usize
}

/// Builds the ordered basis: all products [I][I'] over pairs with I >= I'
/// componentwise. The componentwise pairing produces exactly N_{n,k}
/// elements with distinct initial terms; lexicographic pairing would not
/// (for n=4, k=2 it yields 21 products with one duplicated initial term).
pub fn build_basis(shape: MatShape) -> MinorGroebnerBasis {
    let tuples = OrderedTuple::enumerate(shape);
    let minors: Vec<Polynomial> = tuples.iter().map(|t| minor(shape, t)).collect();
    let mut elements = Vec::new();
    for (a, ta) in tuples.iter().enumerate() {
        for (b, tb) in tuples.iter().enumerate() {
            if ta.dominates(tb) {
                let polynomial = &minors[a] * &minors[b];
                let initial = ta.alpha(shape).mul(&tb.alpha(shape));
                debug_assert_eq!(polynomial.initial_term().unwrap().0, initial);
                elements.push(MinorProduct {
                    upper: ta.clone(),
                    lower: tb.clone(),
                    polynomial,
                    initial,
                });
            }
        }
    }
    elements.sort_by(|x, y| y.initial.cmp(&x.initial));
    debug_assert!(elements.windows(2).all(|p| p[0].initial > p[1].initial));
    assert_eq!(
        elements.len(),
        expected_basis_size(shape.n(), shape.k()),
        "basis size must match N_{{n,k}}"
    );
    MinorGroebnerBasis { shape, elements }
}

impl MinorGroebnerBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn single_variable_minor() {
        let shape = MatShape::new(2, 1);
        let t = OrderedTuple::new(shape, vec![0]).unwrap();
        assert_eq!(minor(shape, &t), Polynomial::var(shape, 0, 0));
    }

    #[test]
    fn two_by_two_minor_rows_1_3() {
        let shape = MatShape::new(3, 2);
        let t = OrderedTuple::new(shape, vec![0, 2]).unwrap();
        let expect = parse_poly("w[1,1]*w[3,2] - w[3,1]*w[1,2]", shape).unwrap();
        assert_eq!(minor(shape, &t), expect);
    }

    #[test]
    fn full_minor_is_determinant() {
        let shape = MatShape::new(3, 3);
        let t = OrderedTuple::new(shape, vec![0, 1, 2]).unwrap();
        let d = minor(shape, &t);
        assert_eq!(d.num_terms(), 6);
        assert_eq!(d.column_degree(), Some(vec![1, 1, 1]));
        // Laplace check at a rational point.
        let p = vec![
            vec![Scalar::from_int(2), Scalar::from_int(0), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(3), Scalar::from_int(0)],
            vec![Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(4)],
        ];
        // det [[2,1,0],[0,3,1],[1,0,4]] = 2*12 - 1*(-1) + 0 = 25
        assert_eq!(d.eval_scalar(&p).unwrap(), Scalar::from_int(25));
    }

    #[test]
    fn tuple_validation() {
        let shape = MatShape::new(3, 2);
        assert!(OrderedTuple::new(shape, vec![1, 1]).is_err());
        assert!(OrderedTuple::new(shape, vec![2, 1]).is_err());
        assert!(OrderedTuple::new(shape, vec![0, 3]).is_err());
    }

    #[test]
    fn basis_n2_k1() {
        let shape = MatShape::new(2, 1);
        let basis = build_basis(shape);
        assert_eq!(basis.len(), 3);
        let rendered: Vec<String> = basis
            .elements
            .iter()
            .map(|e| crate::parse::render_poly(&e.polynomial))
            .collect();
        assert_eq!(rendered, vec!["w[1,1]^2", "w[1,1]*w[2,1]", "w[2,1]^2"]);
    }

    #[test]
    fn basis_n2_k2_single_element() {
        let shape = MatShape::new(2, 2);
        let basis = build_basis(shape);
        assert_eq!(basis.len(), 1);
        assert_eq!(expected_basis_size(2, 2), 1);
    }

    #[test]
    fn basis_sizes_match_formula() {
        assert_eq!(expected_basis_size(3, 2), 6);
        assert_eq!(expected_basis_size(4, 2), 20);
        assert_eq!(expected_basis_size(4, 3), 10);
        assert_eq!(expected_basis_size(5, 2), 50);
        for n in 1..=5 {
            for k in 1..=n {
                let basis = build_basis(MatShape::new(n, k));
                assert_eq!(basis.len(), expected_basis_size(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn initial_terms_strictly_descending_and_distinct() {
        for (n, k) in [(3, 2), (4, 2), (4, 3)] {
            let basis = build_basis(MatShape::new(n, k));
            for pair in basis.elements.windows(2) {
                assert!(pair[0].initial > pair[1].initial);
            }
        }
    }
}
