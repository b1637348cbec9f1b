//! Translation equivariant Monge-Ampere operators: mixed Hessian densities
//! with positive semi-definite tails, their exact Q polynomials through the
//! rank-1 mixed-discriminant identity, and a basis aligned with the minor
//! Groebner basis.

use crate::convex::{ConvexFunctionHandle, ConvexError};
use crate::division::span_rank;
use crate::linalg::Matrix;
use crate::minor::build_basis;
use crate::poly::{MatShape, MultiIndex, Polynomial};
use crate::scalar::{binomial, factorial, Scalar};
use crate::symmat::{mixed_discriminant, DetRing, SymMatrixQ};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MavalError {
    #[error("expected {expected} argument(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("operation needs quadratic handles")]
    NonQuadratic,
    #[error("handle has no Hessian: {0}")]
    NoHessian(#[from] ConvexError),
    #[error("random tails failed to span the minor-product space")]
    SpanNotReached,
}

/// One operator `c * MA(.[k], Q_{k+1}, ..., Q_n)`: the density on smooth
/// k-tuples is `c * D(D^2 f_1(x), ..., D^2 f_k(x), T_{k+1}, ..., T_n)`.
#[derive(Clone, Debug)]
pub struct MixedMaOperator {
    pub n: usize,
    pub k: usize,
    pub constant: Scalar,
    pub tails: Vec<SymMatrixQ>,
}

impl MixedMaOperator {
    pub fn new(n: usize, k: usize, constant: Scalar, tails: Vec<SymMatrixQ>) -> Self {
        assert_eq!(tails.len(), n - k);
        assert!(tails.iter().all(|t| t.dim() == n));
        assert!(tails.iter().all(|t| t.is_psd()), "tails must be PSD");
        MixedMaOperator {
            n,
            k,
            constant,
            tails,
        }
    }

    /// The k-th Hessian measure: identity tails and constant C(n,k), so the
    /// equal-slot density is the k-th elementary symmetric function of the
    /// Hessian eigenvalues.
    pub fn hessian_type(n: usize, k: usize) -> Self {
        MixedMaOperator {
            n,
            k,
            constant: Scalar::from_rational(binomial(n as u64, k as u64)),
            tails: vec![SymMatrixQ::identity(n); n - k],
        }
    }

    fn tails_as<T: DetRing>(&self, convert: impl Fn(&Scalar) -> T) -> Vec<Vec<Vec<T>>> {
        self.tails
            .iter()
            .map(|t| {
                t.rows()
                    .iter()
                    .map(|row| row.iter().map(&convert).collect())
                    .collect()
            })
            .collect()
    }

    /// Exact density on quadratic slots.
    pub fn density_exact(&self, hessians: &[SymMatrixQ]) -> Result<Scalar, MavalError> {
        if hessians.len() != self.k {
            return Err(MavalError::ArityMismatch {
                expected: self.k,
                got: hessians.len(),
            });
        }
        let mut mats: Vec<Vec<Vec<Scalar>>> =
            hessians.iter().map(|h| h.rows().clone()).collect();
        mats.extend(self.tails_as(|s| s.clone()));
        let d = mixed_discriminant(&mats).expect("dimensions validated");
        Ok(&d * &self.constant)
    }

    /// Numeric density on complex Hessians (one quadrature node).
    pub fn density_complex(&self, hessians: &[Vec<Vec<Complex64>>]) -> Complex64 {
        debug_assert_eq!(hessians.len(), self.k);
        let mut mats: Vec<Vec<Vec<Complex64>>> = hessians.to_vec();
        mats.extend(self.tails_as(|s| s.to_complex()));
        let d = mixed_discriminant(&mats).expect("dimensions validated");
        d * self.constant.to_complex()
    }

    /// Symbolic density on polynomial Hessians (entries are polynomials in
    /// the space variable); exact.
    pub fn density_poly(&self, hessians: &[Vec<Vec<Polynomial>>]) -> Polynomial {
        debug_assert_eq!(hessians.len(), self.k);
        let shape = hessians[0][0][0].shape();
        let mut mats: Vec<Vec<Vec<Polynomial>>> = hessians.to_vec();
        mats.extend(self.tails_as(|s| Polynomial::constant(shape, s.clone())));
        let d = mixed_discriminant(&mats).expect("dimensions validated");
        d.scale(&self.constant)
    }

    /// The exact Q polynomial on Mat(n, k): on exponential slots the density
    /// is a polynomial in w times the exponential, because each Hessian is
    /// the rank-one matrix -w_j w_j^T times the exponential. Matching the
    /// normalization (-1)^k/k! gives `Q = k! c D(w_1 w_1^T, ..., tails)`,
    /// computed symbolically.
    pub fn q_polynomial(&self) -> Polynomial {
        let shape = MatShape::new(self.n, self.k);
        let rank_one = |j: usize| -> Vec<Vec<Polynomial>> {
            (0..self.n)
                .map(|a| {
                    (0..self.n)
                        .map(|b| &Polynomial::var(shape, a, j) * &Polynomial::var(shape, b, j))
                        .collect()
                })
                .collect()
        };
        let mut mats: Vec<Vec<Vec<Polynomial>>> = (0..self.k).map(rank_one).collect();
        mats.extend(self.tails_as(|s| Polynomial::constant(shape, s.clone())));
        let d = mixed_discriminant(&mats).expect("dimensions validated");
        let kfact = Scalar::from_rational(factorial(self.k as u64));
        d.scale(&(&kfact * &self.constant))
    }
}

/// Element of the space of translation equivariant Monge-Ampere operators,
/// presented as a rational combination of mixed MA operators together with
/// its exact Q polynomial.
#[derive(Clone, Debug)]
pub struct MaValElement {
    pub n: usize,
    pub k: usize,
    pub combo: Vec<(Scalar, MixedMaOperator)>,
    pub q: Polynomial,
}

impl MaValElement {
    pub fn from_operator(op: MixedMaOperator) -> Self {
        let q = op.q_polynomial();
        MaValElement {
            n: op.n,
            k: op.k,
            combo: vec![(Scalar::one(), op)],
            q,
        }
    }

    pub fn hessian_type(n: usize, k: usize) -> Self {
        Self::from_operator(MixedMaOperator::hessian_type(n, k))
    }

    pub fn density_complex(&self, hessians: &[Vec<Vec<Complex64>>]) -> Complex64 {
        self.combo
            .iter()
            .map(|(c, op)| op.density_complex(hessians) * c.to_complex())
            .sum()
    }

    pub fn density_exact(&self, hessians: &[SymMatrixQ]) -> Result<Scalar, MavalError> {
        let mut acc = Scalar::zero();
        for (c, op) in &self.combo {
            acc += &(&op.density_exact(hessians)? * c);
        }
        Ok(acc)
    }

    pub fn density_poly(&self, hessians: &[Vec<Vec<Polynomial>>]) -> Polynomial {
        let shape = hessians[0][0][0].shape();
        let mut acc = Polynomial::zero(shape);
        for (c, op) in &self.combo {
            acc = &acc + &op.density_poly(hessians).scale(c);
        }
        acc
    }
}

/// Float-compiled density for hot quadrature loops: combo coefficients and
/// PSD tails converted once; evaluation runs the allocation-free mixed
/// discriminant on flat matrices.
pub struct CompiledDensity {
    pub n: usize,
    pub k: usize,
    ops: Vec<(Complex64, Vec<Vec<Complex64>>)>,
}

impl MaValElement {
    pub fn compile(&self) -> CompiledDensity {
        let ops = self
            .combo
            .iter()
            .map(|(c, op)| {
                let coeff = (c * &op.constant).to_complex();
                let tails: Vec<Vec<Complex64>> = op
                    .tails
                    .iter()
                    .map(|t| {
                        let mut flat = Vec::with_capacity(self.n * self.n);
                        for row in t.rows() {
                            for e in row {
                                flat.push(e.to_complex());
                            }
                        }
                        flat
                    })
                    .collect();
                (coeff, tails)
            })
            .collect();
        CompiledDensity {
            n: self.n,
            k: self.k,
            ops,
        }
    }
}

impl CompiledDensity {
    /// Density on flat row-major complex Hessians (one per slot).
    pub fn eval(
        &self,
        hessians: &[Vec<Complex64>],
        scratch: &mut crate::symmat::MixedDiscriminantScratch,
    ) -> Complex64 {
        debug_assert_eq!(hessians.len(), self.k);
        let mut slots: Vec<&[Complex64]> = Vec::with_capacity(self.n);
        for h in hessians {
            slots.push(h.as_slice());
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (coeff, tails) in &self.ops {
            slots.truncate(self.k);
            for t in tails {
                slots.push(t.as_slice());
            }
            acc += *coeff
                * crate::symmat::mixed_discriminant_complex_flat(&slots, self.n, scratch);
        }
        acc
    }
}

/// Q of a combination of operators; linear by construction.
pub fn q_of_psi(combo: &[(Scalar, MixedMaOperator)]) -> Polynomial {
    assert!(!combo.is_empty());
    let shape = MatShape::new(combo[0].1.n, combo[0].1.k);
    let mut acc = Polynomial::zero(shape);
    for (c, op) in combo {
        assert_eq!((op.n, op.k), (shape.n(), shape.k()), "inconsistent dimensions");
        acc = &acc + &op.q_polynomial().scale(c);
    }
    acc
}

/// Basis of the operator space aligned with the minor Groebner basis:
/// element j has `Q(Psi_j)` equal to the j-th ordered minor product. Tails
/// are found by seeded random search over rank-one forms plus an exact
/// linear solve, so the construction is reproducible.
pub fn maval_basis<R: Rng>(shape: MatShape, rng: &mut R) -> Result<Vec<MaValElement>, MavalError> {
    let (n, k) = (shape.n(), shape.k());
    let groebner = build_basis(shape);
    let target = groebner.len();

    // candidate operators with rank-one tails
    let mut candidates: Vec<MixedMaOperator> = vec![MixedMaOperator::hessian_type(n, k)];
    let mut qs: Vec<Polynomial> = vec![candidates[0].q_polynomial()];
    let max_candidates = 12 * target + 12;
    while span_rank(&qs) < target {
        if candidates.len() > max_candidates {
            return Err(MavalError::SpanNotReached);
        }
        let tails: Vec<SymMatrixQ> = (0..n - k)
            .map(|_| {
                let v: Vec<Scalar> = (0..n)
                    .map(|_| Scalar::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
                    .collect();
                SymMatrixQ::rank_one(&v)
            })
            .collect();
        let op = MixedMaOperator::new(n, k, Scalar::one(), tails);
        qs.push(op.q_polynomial());
        candidates.push(op);
    }

    // coefficient matrix over the union of monomials
    let mut monomials: BTreeSet<MultiIndex> = BTreeSet::new();
    for q in &qs {
        for (m, _) in q.terms() {
            monomials.insert(m.clone());
        }
    }
    for e in &groebner.elements {
        for (m, _) in e.polynomial.terms() {
            monomials.insert(m.clone());
        }
    }
    let rows: Vec<&MultiIndex> = monomials.iter().collect();
    let mut mat = Matrix::zeros(rows.len(), qs.len());
    for (c, q) in qs.iter().enumerate() {
        for (r, m) in rows.iter().enumerate() {
            mat.set(r, c, q.coefficient(m));
        }
    }

    let mut out = Vec::with_capacity(target);
    for elem in &groebner.elements {
        let rhs: Vec<Scalar> = rows.iter().map(|m| elem.polynomial.coefficient(m)).collect();
        let x = mat.solve(&rhs).ok_or(MavalError::SpanNotReached)?;
        let combo: Vec<(Scalar, MixedMaOperator)> = x
            .iter()
            .zip(&candidates)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, op)| (c.clone(), op.clone()))
            .collect();
        let q = q_of_psi(&combo);
        assert_eq!(q, elem.polynomial, "alignment must be exact");
        out.push(MaValElement {
            n,
            k,
            combo,
            q,
        });
    }
    Ok(out)
}

/// `C(n,k) * D(D^2 f_1(x), ..., D^2 f_k(x), T_{k+1}, ..., T_n)` with
/// identity tails by default; reproduces the k-th elementary symmetric
/// function of the Hessian eigenvalues on equal slots.
pub fn hessian_density(
    handles: &[ConvexFunctionHandle],
    x: &[f64],
    tails: Option<&[SymMatrixQ]>,
) -> Result<f64, MavalError> {
    let n = handles[0].dim();
    let k = handles.len();
    let mut mats: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n);
    for h in handles {
        mats.push(h.hessian_at(x)?);
    }
    match tails {
        Some(ts) => {
            assert_eq!(ts.len(), n - k);
            for t in ts {
                mats.push(t.to_f64());
            }
        }
        None => {
            let id = SymMatrixQ::identity(n).to_f64();
            for _ in k..n {
                mats.push(id.clone());
            }
        }
    }
    let d = mixed_discriminant(&mats).expect("dimension checked");
    let c = binomial(n as u64, k as u64).to_f64().unwrap();
    Ok(c * d)
}

/// Exact Lebesgue density of the mixed Monge-Ampere measure of n quadratic
/// functions: the mixed discriminant of their quadratic parts.
pub fn mixed_ma_quadratics(handles: &[ConvexFunctionHandle]) -> Result<Scalar, MavalError> {
    let n = handles[0].dim();
    if handles.len() != n {
        return Err(MavalError::ArityMismatch {
            expected: n,
            got: handles.len(),
        });
    }
    let mut mats = Vec::with_capacity(n);
    for h in handles {
        match h {
            ConvexFunctionHandle::Quadratic { a, .. } => mats.push(a.rows().clone()),
            _ => return Err(MavalError::NonQuadratic),
        }
    }
    Ok(mixed_discriminant(&mats).expect("dimension checked"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::membership;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn q_of_second_derivative_in_1d() {
        let op = MixedMaOperator::hessian_type(1, 1);
        let q = op.q_polynomial();
        let shape = MatShape::new(1, 1);
        assert_eq!(q, Polynomial::var(shape, 0, 0).pow(2));
    }

    #[test]
    fn q_of_top_degree_is_det_squared() {
        for n in 2..=3 {
            let op = MixedMaOperator::hessian_type(n, n);
            let q = op.q_polynomial();
            let shape = MatShape::new(n, n);
            let det = crate::minor::minor(
                shape,
                &crate::minor::OrderedTuple::new(shape, (0..n).collect()).unwrap(),
            );
            assert_eq!(q, &det * &det);
        }
    }

    #[test]
    fn q_is_linear_in_psi() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let mk = |rng: &mut ChaCha8Rng| {
            let v: Vec<Scalar> = (0..3)
                .map(|_| Scalar::from_int(rng.gen_range(-2..=2)))
                .collect();
            MixedMaOperator::new(3, 2, Scalar::one(), vec![SymMatrixQ::rank_one(&v)])
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let ca = Scalar::from_ratio(2, 3);
        let cb = Scalar::from_int(-3);
        let lhs = q_of_psi(&[(ca.clone(), a.clone()), (cb.clone(), b.clone())]);
        let rhs = &a.q_polynomial().scale(&ca) + &b.q_polynomial().scale(&cb);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_lands_in_minor_module() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (n, k) in [(2, 1), (3, 2), (3, 1)] {
            let shape = MatShape::new(n, k);
            let basis = build_basis(shape);
            for _ in 0..5 {
                let tails: Vec<SymMatrixQ> = (0..n - k)
                    .map(|_| {
                        let v: Vec<Scalar> = (0..n)
                            .map(|_| Scalar::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
                            .collect();
                        SymMatrixQ::rank_one(&v)
                    })
                    .collect();
                let op = MixedMaOperator::new(n, k, Scalar::one(), tails);
                let q = op.q_polynomial();
                assert!(membership(&q, &basis).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn basis_aligns_with_groebner_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for (n, k) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let shape = MatShape::new(n, k);
            let basis = maval_basis(shape, &mut rng).unwrap();
            let groebner = build_basis(shape);
            assert_eq!(basis.len(), groebner.len());
            for (e, g) in basis.iter().zip(&groebner.elements) {
                assert_eq!(e.q, g.polynomial);
            }
        }
    }

    #[test]
    fn n2_k1_q_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let basis = maval_basis(MatShape::new(2, 1), &mut rng).unwrap();
        assert_eq!(basis.len(), 3);
        // Q polynomials span {w1^2, w1 w2, w2^2}
        assert_eq!(span_rank(&basis.iter().map(|e| e.q.clone()).collect::<Vec<_>>()), 3);
    }

    #[test]
    fn hessian_density_examples() {
        // f = |x|^2/2 with identity tail: C(n,k) * 1
        for (n, k) in [(2, 1), (3, 2), (3, 3)] {
            let f = ConvexFunctionHandle::half_norm_squared(n);
            let handles = vec![f; k];
            let d = hessian_density(&handles, &vec![0.3; n], None).unwrap();
            let c = binomial(n as u64, k as u64).to_f64().unwrap();
            assert!((d - c).abs() < 1e-12, "n={n} k={k}: {d}");
        }
        // n=2, k=1: the density is the Laplacian
        let a = SymMatrixQ::new(vec![
            vec![Scalar::from_int(3), Scalar::from_int(1)],
            vec![Scalar::from_int(0), Scalar::from_int(5)],
        ]);
        let f = ConvexFunctionHandle::quadratic(a, vec![Scalar::zero(); 2], Scalar::zero());
        let d = hessian_density(&[f], &[0.0, 0.0], None).unwrap();
        assert!((d - 8.0).abs() < 1e-12);
        // n=1, k=1: density is f''
        let a1 = SymMatrixQ::new(vec![vec![Scalar::from_ratio(7, 2)]]);
        let f1 = ConvexFunctionHandle::quadratic(a1, vec![Scalar::zero()], Scalar::zero());
        let d1 = hessian_density(&[f1], &[0.4], None).unwrap();
        assert!((d1 - 3.5).abs() < 1e-12);
    }

    #[test]
    fn mixed_ma_quadratics_examples() {
        let n = 2;
        let e1 = ConvexFunctionHandle::quadratic(
            SymMatrixQ::diagonal(&[1, 0]),
            vec![Scalar::zero(); n],
            Scalar::zero(),
        );
        let e2 = ConvexFunctionHandle::quadratic(
            SymMatrixQ::diagonal(&[0, 1]),
            vec![Scalar::zero(); n],
            Scalar::zero(),
        );
        assert_eq!(
            mixed_ma_quadratics(&[e1, e2]).unwrap(),
            Scalar::from_ratio(1, 2)
        );
        let id = ConvexFunctionHandle::half_norm_squared(n);
        assert_eq!(
            mixed_ma_quadratics(&[id.clone(), id.clone()]).unwrap(),
            Scalar::one()
        );
        // non-quadratic input is an error
        use num_traits::Zero;
        let ma = ConvexFunctionHandle::max_affine(vec![(
            vec![crate::scalar::Rational::zero(); 2],
            crate::scalar::Rational::zero(),
        )]);
        assert!(matches!(
            mixed_ma_quadratics(&[id, ma]),
            Err(MavalError::NonQuadratic)
        ));
    }
}
