//! Smooth valuations presented over a basis of translation equivariant
//! Monge-Ampere operators: evaluation, polarization (direct mixed-Hessian
//! path and a finite-difference oracle), Goodey-Weil evaluation on test
//! tensors, and mollification.

use crate::bump::BumpFunction;
use crate::convex::{ConvexFunctionHandle, DiscreteMeasure};
use crate::maval::MaValElement;
use crate::poly::{MatShape, Polynomial};
use crate::quad::{BoxDomain, TensorRule};
use crate::scalar::{ExactValue, Rational, Scalar};
use crate::symmat::{min_eigenvalue, SymMatrixQ};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

pub const CONVEXITY_EIG_TOL: f64 = -1e-9;

#[derive(Debug, Error)]
pub enum ValuationError {
    #[error("input is not convex: Hessian eigenvalue {eig} at a quadrature node")]
    NotConvex { eig: f64 },
    #[error("max-affine evaluation requires top degree k = n")]
    MaxAffineNeedsTopDegree,
    #[error("inclusion-exclusion oracle restricted to k <= 2, n <= 2")]
    OracleTooLarge,
    #[error("slot is not real-valued")]
    ComplexSlot,
    #[error(transparent)]
    Convex(#[from] crate::convex::ConvexError),
    #[error(transparent)]
    Maval(#[from] crate::maval::MavalError),
}

/// A k-homogeneous smooth valuation `f -> sum_j int phi_j dPsi_j(f)`.
#[derive(Clone)]
pub struct SmoothValuation {
    pub shape: MatShape,
    pub terms: Vec<(BumpFunction, MaValElement)>,
    pub support_box: BoxDomain,
}

impl SmoothValuation {
    pub fn new(shape: MatShape, terms: Vec<(BumpFunction, MaValElement)>) -> Self {
        assert!(!terms.is_empty());
        let mut support_box = terms[0].0.support_box();
        for (phi, psi) in &terms {
            assert_eq!(phi.dim(), shape.n());
            assert_eq!((psi.n, psi.k), (shape.n(), shape.k()));
            support_box = support_box.union(&phi.support_box());
        }
        SmoothValuation {
            shape,
            terms,
            support_box,
        }
    }

    /// Single-term valuation over the k-th Hessian measure.
    pub fn hessian_type(n: usize, k: usize, phi: BumpFunction) -> Self {
        SmoothValuation::new(
            MatShape::new(n, k),
            vec![(phi, MaValElement::hessian_type(n, k))],
        )
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }

    /// mu(f) by quadrature (smooth or quadratic f) or exact atom summation
    /// (max-affine f, top degree only).
    pub fn evaluate(&self, f: &ConvexFunctionHandle, order: usize) -> Result<Complex64, ValuationError> {
        if f.is_max_affine() {
            return Ok(self.evaluate_max_affine_exact(f)?.to_complex());
        }
        let handles = vec![f.clone(); self.k()];
        self.density_integral(&handles, order, true)
    }

    /// Exact evaluation on a max-affine function at top degree: atoms of the
    /// discrete Monge-Ampere measure weighted by exact bump values.
    pub fn evaluate_max_affine_exact(&self, f: &ConvexFunctionHandle) -> Result<ExactValue, ValuationError> {
        if self.k() != self.n() {
            return Err(ValuationError::MaxAffineNeedsTopDegree);
        }
        let ma: DiscreteMeasure = crate::convex::discrete_ma(f)?;
        let mut acc = ExactValue::zero();
        for (phi, psi) in &self.terms {
            // at top degree every operator is a scalar multiple of MA
            let mut scalar = Scalar::zero();
            for (c, op) in &psi.combo {
                debug_assert!(op.tails.is_empty());
                scalar += &(c * &op.constant);
            }
            for (x, w) in &ma.atoms {
                let v = phi.eval_exact(x).scale(&(&scalar * &Scalar::from_rational(w.clone())));
                acc = acc.add(&v);
            }
        }
        Ok(acc)
    }

    /// Polarization by the direct multilinear mixed-Hessian path;
    /// `polarize(f, ..., f) = evaluate(f)`.
    pub fn polarize(
        &self,
        handles: &[ConvexFunctionHandle],
        order: usize,
    ) -> Result<Complex64, ValuationError> {
        assert_eq!(handles.len(), self.k());
        self.density_integral(handles, order, true)
    }

    fn density_integral(
        &self,
        handles: &[ConvexFunctionHandle],
        order: usize,
        police_convexity: bool,
    ) -> Result<Complex64, ValuationError> {
        let n = self.n();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scratch = crate::symmat::MixedDiscriminantScratch::default();
        let mut flat: Vec<Vec<Complex64>> =
            vec![vec![Complex64::new(0.0, 0.0); n * n]; handles.len()];
        for (phi, psi) in &self.terms {
            let density = psi.compile();
            let bump = phi.compile();
            let rule = TensorRule::new(&phi.support_box(), order);
            for (node, w) in rule.iter() {
                for (h, out) in handles.iter().zip(flat.iter_mut()) {
                    let hess = h.hessian_at(node)?;
                    if police_convexity {
                        let eig = min_eigenvalue(&hess);
                        if eig < CONVEXITY_EIG_TOL {
                            return Err(ValuationError::NotConvex { eig });
                        }
                    }
                    for (i, row) in hess.iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            out[i * n + j] = Complex64::new(*v, 0.0);
                        }
                    }
                }
                acc += bump.eval(node) * density.eval(&flat, &mut scratch) * w;
            }
        }
        Ok(acc)
    }

    /// Polarization oracle: exact polynomial interpolation of
    /// `lambda -> mu(sum lambda_j f_j)` on the grid {0, ..., k}^k, reading
    /// off the coefficient of `lambda_1 ... lambda_k`.
    pub fn polarize_fd(
        &self,
        handles: &[ConvexFunctionHandle],
        order: usize,
    ) -> Result<Complex64, ValuationError> {
        let k = self.k();
        assert_eq!(handles.len(), k);
        let grid = k + 1;
        let mut values = vec![Complex64::new(0.0, 0.0); grid.pow(k as u32)];
        let mut idx = vec![0usize; k];
        loop {
            let coeffs: Vec<f64> = idx.iter().map(|&i| i as f64).collect();
            let combo = ConvexFunctionHandle::linear_combination(&coeffs, handles);
            let flat = idx.iter().fold(0, |acc, &i| acc * grid + i);
            values[flat] = self.density_integral(&vec![combo; k], order, false)?;
            if !advance(&mut idx, grid) {
                break;
            }
        }
        // per-axis inverse Vandermonde on nodes 0..k
        let vinv = inverse_vandermonde(grid);
        for axis in 0..k {
            values = apply_axis(&values, &vinv, grid, k, axis);
        }
        // coefficient of lambda_1^1 ... lambda_k^1
        let mut flat = 0;
        for _ in 0..k {
            flat = flat * grid + 1;
        }
        Ok(values[flat] / factorial_f64(k))
    }

    /// Multilinear Goodey-Weil evaluation on arbitrary smooth slots.
    pub fn gw_eval(&self, slots: &[TestSlot], order: usize) -> Complex64 {
        assert_eq!(slots.len(), self.k());
        let n = self.n();
        let compiled: Vec<CompiledSlot> = slots.iter().map(|s| s.compile()).collect();
        let mut scratch = crate::symmat::MixedDiscriminantScratch::default();
        let mut flat: Vec<Vec<Complex64>> =
            vec![vec![Complex64::new(0.0, 0.0); n * n]; slots.len()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (phi, psi) in &self.terms {
            let density = psi.compile();
            let bump = phi.compile();
            let rule = TensorRule::new(&phi.support_box(), order);
            for (node, w) in rule.iter() {
                for (s, out) in compiled.iter().zip(flat.iter_mut()) {
                    s.hessian_into(node, out);
                }
                acc += bump.eval(node) * density.eval(&flat, &mut scratch) * w;
            }
        }
        acc
    }

    /// Exact Goodey-Weil evaluation on polynomial slots: the mixed-Hessian
    /// density is a polynomial in x and the bump moments are exact.
    pub fn gw_eval_polynomial_exact(&self, slots: &[Polynomial]) -> ExactValue {
        assert_eq!(slots.len(), self.k());
        let n = self.n();
        let vshape = MatShape::vector(n);
        let hessians: Vec<Vec<Vec<Polynomial>>> = slots
            .iter()
            .map(|p| {
                assert_eq!(p.shape(), vshape);
                (0..n)
                    .map(|i| (0..n).map(|j| p.derivative(i, 0).derivative(j, 0)).collect())
                    .collect()
            })
            .collect();
        let mut acc = ExactValue::zero();
        for (phi, psi) in &self.terms {
            let density = psi.density_poly(&hessians);
            for (m, c) in density.terms() {
                let moment = phi.moment(m.exps());
                acc = acc.add(&moment.scale(c));
            }
        }
        acc
    }

    /// Goodey-Weil evaluation of a tensor of compactly supported real slots
    /// through the convexification inclusion-exclusion formula; a slow
    /// independent oracle for k <= 2, n <= 2.
    pub fn gw_eval_inclusion_exclusion(
        &self,
        slots: &[TestSlot],
        order: usize,
    ) -> Result<Complex64, ValuationError> {
        let k = self.k();
        let n = self.n();
        if k > 2 || n > 2 {
            return Err(ValuationError::OracleTooLarge);
        }
        assert_eq!(slots.len(), k);
        if slots.iter().any(|s| !s.is_real()) {
            return Err(ValuationError::ComplexSlot);
        }
        let region = self.support_box.inflate(1.0);
        let center: Vec<f64> = region
            .lo
            .iter()
            .zip(&region.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        // convexification: f_j = c_j |x - x0|^2 / 2 dominates the slot
        let fs: Vec<ConvexFunctionHandle> = slots
            .iter()
            .map(|s| {
                let c = s.hessian_norm_bound(&region) + 1.0;
                let ctr = center.clone();
                ConvexFunctionHandle::smooth(n, move |_x| {
                    let mut h = vec![vec![0.0; ctr.len()]; ctr.len()];
                    for (i, row) in h.iter_mut().enumerate() {
                        row[i] = c;
                    }
                    h
                })
            })
            .collect();
        let hs: Vec<ConvexFunctionHandle> = slots
            .iter()
            .zip(&fs)
            .map(|(s, f)| {
                let slot = s.clone();
                let f = f.clone();
                ConvexFunctionHandle::smooth(n, move |x| {
                    let mut h = f.hessian_at(x).unwrap();
                    let hs = slot.hessian_real(x);
                    for i in 0..h.len() {
                        for j in 0..h.len() {
                            h[i][j] += hs[i][j];
                        }
                    }
                    h
                })
            })
            .collect();
        // sum_{j=0}^{k} (-1)^{k-j}/(j!(k-j)!) sum_{sigma in S_k}
        //   polarized(h_{sigma(1)}, ..., h_{sigma(j)}, f_{sigma(j+1)}, ..., f_{sigma(k)})
        let mut acc = Complex64::new(0.0, 0.0);
        let perms = permutations(k);
        for j in 0..=k {
            let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = sign / (factorial_f64(j) * factorial_f64(k - j));
            for perm in &perms {
                let mut args = Vec::with_capacity(k);
                for (pos, &p) in perm.iter().enumerate() {
                    if pos < j {
                        args.push(hs[p].clone());
                    } else {
                        args.push(fs[p].clone());
                    }
                }
                acc += self.polarize_fd(&args, order)? * weight;
            }
        }
        Ok(acc)
    }

    /// Convolution of the valuation with a mollifier: each density is
    /// convolved, the support box grows by the mollifier support. Returns
    /// the mollified valuation and whether the mollifier has unit mass.
    pub fn mollify(&self, rho: &BumpFunction) -> (SmoothValuation, bool) {
        let unit = {
            let total = rho.integral();
            (total.to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-9
        };
        let terms = self
            .terms
            .iter()
            .map(|(phi, psi)| (phi.convolve(rho), psi.clone()))
            .collect();
        (
            SmoothValuation {
                shape: self.shape,
                terms,
                support_box: self.support_box.sum(&rho.support_box()),
            },
            unit,
        )
    }

    /// The translated valuation `f -> mu(f(. + y))`, realized by shifting
    /// every density by +y.
    pub fn translate(&self, y: &[Rational]) -> SmoothValuation {
        let terms: Vec<(BumpFunction, MaValElement)> = self
            .terms
            .iter()
            .map(|(phi, psi)| (phi.translate(y), psi.clone()))
            .collect();
        SmoothValuation::new(self.shape, terms)
    }
}

fn to_complex_matrix(h: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    h.iter()
        .map(|row| row.iter().map(|&v| Complex64::new(v, 0.0)).collect())
        .collect()
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn factorial_f64(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product::<f64>().max(1.0)
}

/// Exact inverse of the Vandermonde matrix on nodes 0..=k, as f64.
fn inverse_vandermonde(size: usize) -> Vec<Vec<f64>> {
    use crate::linalg::Matrix;
    let mut rows = Vec::with_capacity(size);
    for i in 0..size {
        let mut row = Vec::with_capacity(size);
        for j in 0..size {
            row.push(Scalar::from_int((i as i64).pow(j as u32)));
        }
        rows.push(row);
    }
    let m = Matrix::from_rows(rows);
    let mut inv = vec![vec![0.0; size]; size];
    for col in 0..size {
        let mut e = vec![Scalar::zero(); size];
        e[col] = Scalar::one();
        let x = m.solve(&e).expect("Vandermonde is invertible");
        for (r, v) in x.iter().enumerate() {
            inv[r][col] = v.re.to_f64().unwrap();
        }
    }
    inv
}

/// Applies a matrix along one axis of a k-dimensional value tensor stored
/// flat with stride base^k.
fn apply_axis(
    values: &[Complex64],
    mat: &[Vec<f64>],
    base: usize,
    rank: usize,
    axis: usize,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    let stride = base.pow((rank - 1 - axis) as u32);
    for (flat, _) in values.iter().enumerate() {
        let axis_idx = (flat / stride) % base;
        let base_flat = flat - axis_idx * stride;
        let mut acc = Complex64::new(0.0, 0.0);
        for src in 0..base {
            acc += values[base_flat + src * stride] * mat[axis_idx][src];
        }
        out[flat] = acc;
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        if !next_perm(&mut cur) {
            return out;
        }
    }
}

fn next_perm(perm: &mut [usize]) -> bool {
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

/// One slot of a test tensor: a smooth function exposing a complex Hessian.
#[derive(Clone)]
pub enum TestSlot {
    /// Polynomial on R^n (complex coefficients allowed).
    Polynomial {
        value: Polynomial,
        hessian: Vec<Vec<Polynomial>>,
    },
    /// exp(-i <w, x>) for w in C^n.
    ComplexExponential { w: Vec<Complex64> },
    /// Re exp(-i <w, x>).
    ReExponential { w: Vec<Complex64> },
    /// Im exp(-i <w, x>).
    ImExponential { w: Vec<Complex64> },
    /// x^T A x / 2.
    Quadratic { a: SymMatrixQ },
    /// A compactly supported bump with symbolic second derivatives.
    Bump {
        value: BumpFunction,
        hessian: Vec<Vec<BumpFunction>>,
    },
}

impl TestSlot {
    pub fn polynomial(p: Polynomial) -> Self {
        let n = p.shape().n();
        assert_eq!(p.shape().k(), 1);
        let hessian = (0..n)
            .map(|i| (0..n).map(|j| p.derivative(i, 0).derivative(j, 0)).collect())
            .collect();
        TestSlot::Polynomial { value: p, hessian }
    }

    pub fn complex_exponential(w: Vec<Complex64>) -> Self {
        TestSlot::ComplexExponential { w }
    }

    pub fn quadratic(a: SymMatrixQ) -> Self {
        TestSlot::Quadratic { a }
    }

    pub fn bump(b: BumpFunction) -> Self {
        let n = b.dim();
        let first: Vec<BumpFunction> = (0..n).map(|i| b.derivative(i)).collect();
        let hessian = (0..n)
            .map(|i| (0..n).map(|j| first[i].derivative(j)).collect())
            .collect();
        TestSlot::Bump { value: b, hessian }
    }

    pub fn is_real(&self) -> bool {
        match self {
            TestSlot::Polynomial { value, .. } => value.is_real(),
            TestSlot::ComplexExponential { .. } => false,
            TestSlot::ReExponential { .. } | TestSlot::ImExponential { .. } => true,
            TestSlot::Quadratic { .. } => true,
            TestSlot::Bump { value, .. } => match value {
                BumpFunction::Ball(b, _) => b.base_polynomial.is_real(),
                _ => false,
            },
        }
    }

    pub fn hessian_complex(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        match self {
            TestSlot::Polynomial { hessian, .. } => {
                let point = vec![x.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>()];
                hessian
                    .iter()
                    .map(|row| row.iter().map(|p| p.eval_complex(&point)).collect())
                    .collect()
            }
            TestSlot::ComplexExponential { w } => {
                let n = w.len();
                let mut phase = Complex64::new(0.0, 0.0);
                for (wi, xi) in w.iter().zip(x) {
                    phase += wi * *xi;
                }
                let e = (Complex64::new(0.0, -1.0) * phase).exp();
                (0..n)
                    .map(|a| (0..n).map(|b| -w[a] * w[b] * e).collect())
                    .collect()
            }
            TestSlot::ReExponential { w } => to_complex_matrix(&exp_part_hessian(w, x, true)),
            TestSlot::ImExponential { w } => to_complex_matrix(&exp_part_hessian(w, x, false)),
            TestSlot::Quadratic { a } => to_complex_matrix(&a.to_f64()),
            TestSlot::Bump { hessian, .. } => hessian
                .iter()
                .map(|row| row.iter().map(|b| b.eval(x)).collect())
                .collect(),
        }
    }

    pub fn hessian_real(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.hessian_complex(x)
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.re).collect())
            .collect()
    }

    /// Sampled sup of the Hessian Frobenius norm over a region, with a
    /// safety factor; exponential slots use the closed-form bound
    /// `4 exp(h_region(Im w)) |w|^2`.
    pub fn hessian_norm_bound(&self, region: &BoxDomain) -> f64 {
        match self {
            TestSlot::ReExponential { w } | TestSlot::ImExponential { w } => {
                let im: Vec<f64> = w.iter().map(|v| v.im).collect();
                let mut h = 0.0;
                for i in 0..im.len() {
                    h += im[i].abs() * region.lo[i].abs().max(region.hi[i].abs());
                }
                let norm2: f64 = w.iter().map(|v| v.norm_sqr()).sum();
                4.0 * h.exp() * norm2
            }
            _ => {
                let mut sup: f64 = 0.0;
                let samples = 9usize;
                let dim = region.dim();
                let mut idx = vec![0usize; dim];
                loop {
                    let x: Vec<f64> = (0..dim)
                        .map(|d| {
                            region.lo[d]
                                + (region.hi[d] - region.lo[d]) * idx[d] as f64
                                    / (samples - 1) as f64
                        })
                        .collect();
                    let h = self.hessian_real(&x);
                    let frob: f64 = h
                        .iter()
                        .flat_map(|r| r.iter())
                        .map(|v| v * v)
                        .sum::<f64>()
                        .sqrt();
                    sup = sup.max(frob);
                    if !advance(&mut idx, samples) {
                        break;
                    }
                }
                1.5 * sup
            }
        }
    }
}

/// Float-compiled slot: Hessian entries written into a flat buffer without
/// per-node allocation or exact-arithmetic conversion.
pub enum CompiledSlot {
    Exponential { w: Vec<Complex64> },
    ExpPart { w: Vec<Complex64>, real: bool },
    Constant { h: Vec<Complex64> },
    /// n*n entries, each a flattened list of (coefficient, exponents)
    Monomials { n: usize, entries: Vec<Vec<(Complex64, Vec<u32>)>> },
    Bumps { n: usize, entries: Vec<crate::bump::CompiledBump> },
}

impl TestSlot {
    pub fn compile(&self) -> CompiledSlot {
        match self {
            TestSlot::ComplexExponential { w } => CompiledSlot::Exponential { w: w.clone() },
            TestSlot::ReExponential { w } => CompiledSlot::ExpPart {
                w: w.clone(),
                real: true,
            },
            TestSlot::ImExponential { w } => CompiledSlot::ExpPart {
                w: w.clone(),
                real: false,
            },
            TestSlot::Quadratic { a } => {
                let n = a.dim();
                let mut h = Vec::with_capacity(n * n);
                for row in a.rows() {
                    for e in row {
                        h.push(e.to_complex());
                    }
                }
                CompiledSlot::Constant { h }
            }
            TestSlot::Polynomial { hessian, .. } => {
                let n = hessian.len();
                let entries = hessian
                    .iter()
                    .flat_map(|row| {
                        row.iter().map(|p| {
                            p.terms()
                                .map(|(m, c)| (c.to_complex(), m.exps().to_vec()))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                CompiledSlot::Monomials { n, entries }
            }
            TestSlot::Bump { hessian, .. } => {
                let n = hessian.len();
                CompiledSlot::Bumps {
                    n,
                    entries: hessian
                        .iter()
                        .flat_map(|row| row.iter().map(|b| b.compile()))
                        .collect(),
                }
            }
        }
    }
}

impl CompiledSlot {
    /// Writes the n x n Hessian at x into `out` (flat row-major).
    pub fn hessian_into(&self, x: &[f64], out: &mut [Complex64]) {
        match self {
            CompiledSlot::Exponential { w } => {
                let n = w.len();
                let mut phase = Complex64::new(0.0, 0.0);
                for (wi, xi) in w.iter().zip(x) {
                    phase += wi * *xi;
                }
                let e = (Complex64::new(0.0, -1.0) * phase).exp();
                for a in 0..n {
                    for b in 0..n {
                        out[a * n + b] = -w[a] * w[b] * e;
                    }
                }
            }
            CompiledSlot::ExpPart { w, real } => {
                let h = exp_part_hessian(w, x, *real);
                let n = w.len();
                for (i, row) in h.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        out[i * n + j] = Complex64::new(*v, 0.0);
                    }
                }
            }
            CompiledSlot::Constant { h } => out.copy_from_slice(h),
            CompiledSlot::Monomials { n, entries } => {
                for (pos, entry) in entries.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, exps) in entry {
                        let mut v = *c;
                        for (xi, &e) in x.iter().zip(exps) {
                            for _ in 0..e {
                                v *= xi;
                            }
                        }
                        acc += v;
                    }
                    out[pos] = acc;
                }
                let _ = n;
            }
            CompiledSlot::Bumps { n, entries } => {
                for (pos, b) in entries.iter().enumerate() {
                    out[pos] = b.eval(x);
                }
                let _ = n;
            }
        }
    }
}

fn exp_part_hessian(w: &[Complex64], x: &[f64], real_part: bool) -> Vec<Vec<f64>> {
    let n = w.len();
    let a: Vec<f64> = w.iter().map(|v| v.re).collect();
    let b: Vec<f64> = w.iter().map(|v| v.im).collect();
    let dot_a: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
    let dot_b: f64 = b.iter().zip(x).map(|(u, v)| u * v).sum();
    let u = dot_b.exp();
    let c = dot_a.cos();
    let s = dot_a.sin();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if real_part {
                        (b[i] * b[j] - a[i] * a[j]) * u * c - (b[i] * a[j] + a[i] * b[j]) * u * s
                    } else {
                        (a[i] * a[j] - b[i] * b[j]) * u * s - (a[i] * b[j] + b[i] * a[j]) * u * c
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn bump_1d() -> BumpFunction {
        BumpFunction::plain(vec![r(0)], r(1), 4)
    }

    #[test]
    fn second_derivative_valuation_on_half_x_squared() {
        // k = n = 1, mu = int phi f'': f = x^2/2 gives int phi
        let mu = SmoothValuation::hessian_type(1, 1, bump_1d());
        let f = ConvexFunctionHandle::half_norm_squared(1);
        let v = mu.evaluate(&f, 24).unwrap();
        let expect = bump_1d().integral().to_complex();
        assert!((v - expect).norm() < 1e-10, "{v} vs {expect}");
    }

    #[test]
    fn affine_shifts_leave_value_unchanged() {
        let mu = SmoothValuation::hessian_type(2, 1, BumpFunction::plain(vec![r(0), r(0)], r(1), 3));
        let f = ConvexFunctionHandle::half_norm_squared(2);
        let g = f.add_affine(&[r(3), r(-2)], &r(7));
        let a = mu.evaluate(&f, 16).unwrap();
        let b = mu.evaluate(&g, 16).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn homogeneity_in_the_degree() {
        for (n, k) in [(1usize, 1usize), (2, 1), (2, 2)] {
            let mu = SmoothValuation::hessian_type(n, k, BumpFunction::plain(vec![r(0); n], r(1), 3));
            let f = ConvexFunctionHandle::half_norm_squared(n);
            let base = mu.evaluate(&f, 16).unwrap();
            for t in [r(2), r(3), Rational::new(1.into(), 2.into())] {
                let scaled = mu.evaluate(&f.scale(&t), 16).unwrap();
                let tf = t.to_f64().unwrap().powi(k as i32);
                assert!(
                    (scaled - base * tf).norm() <= 1e-10 * base.norm().max(1.0),
                    "n={n} k={k} t={t}"
                );
            }
        }
    }

    #[test]
    fn rejects_nonconvex_input() {
        let mu = SmoothValuation::hessian_type(2, 1, BumpFunction::plain(vec![r(0), r(0)], r(1), 3));
        let f = ConvexFunctionHandle::quadratic(
            SymMatrixQ::diagonal(&[1, -1]),
            vec![Scalar::zero(); 2],
            Scalar::zero(),
        );
        assert!(matches!(
            mu.evaluate(&f, 8),
            Err(ValuationError::NotConvex { .. })
        ));
    }

    #[test]
    fn polarize_diagonal_matches_evaluate() {
        let mu = SmoothValuation::hessian_type(2, 2, BumpFunction::plain(vec![r(0), r(0)], r(1), 3));
        let f = ConvexFunctionHandle::half_norm_squared(2);
        let via_eval = mu.evaluate(&f, 16).unwrap();
        let via_pol = mu.polarize(&[f.clone(), f.clone()], 16).unwrap();
        assert!((via_eval - via_pol).norm() < 1e-12);
        let via_fd = mu.polarize_fd(&[f.clone(), f], 16).unwrap();
        assert!((via_eval - via_fd).norm() < 1e-8, "{via_eval} vs {via_fd}");
    }

    #[test]
    fn polarize_mixed_discriminant_example() {
        // n = 2, k = 2, slots x1^2/2 and x2^2/2: density D(diag(1,0), diag(0,1)) = 1/2
        let phi = BumpFunction::plain(vec![r(0), r(0)], r(1), 3);
        let mu = SmoothValuation::hessian_type(2, 2, phi.clone());
        let f1 = ConvexFunctionHandle::quadratic(
            SymMatrixQ::diagonal(&[1, 0]),
            vec![Scalar::zero(); 2],
            Scalar::zero(),
        );
        let f2 = ConvexFunctionHandle::quadratic(
            SymMatrixQ::diagonal(&[0, 1]),
            vec![Scalar::zero(); 2],
            Scalar::zero(),
        );
        let direct = mu.polarize(&[f1.clone(), f2.clone()], 16).unwrap();
        // against the same-rule quadrature of phi: the factor 1/2 is exact
        let unit = mu
            .evaluate(&ConvexFunctionHandle::half_norm_squared(2), 16)
            .unwrap();
        assert!((direct - 0.5 * unit).norm() < 1e-13 * unit.norm());
        // and against the exact integral at quadrature accuracy
        let expect = 0.5 * phi.integral().to_complex();
        assert!((direct - expect).norm() < 1e-4 * expect.norm());
        let fd = mu.polarize_fd(&[f1, f2], 16).unwrap();
        assert!((direct - fd).norm() < 1e-8);
    }

    #[test]
    fn gw_eval_kills_affine_slots() {
        let mu = SmoothValuation::hessian_type(2, 2, BumpFunction::plain(vec![r(0), r(0)], r(1), 3));
        let shape = MatShape::vector(2);
        let affine = TestSlot::polynomial(
            &Polynomial::var(shape, 0, 0) + &Polynomial::constant(shape, Scalar::from_int(5)),
        );
        let quad = TestSlot::quadratic(SymMatrixQ::identity(2));
        let v = mu.gw_eval(&[affine, quad], 12);
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn gw_eval_multilinear_in_slots() {
        let mu = SmoothValuation::hessian_type(2, 2, BumpFunction::plain(vec![r(0), r(0)], r(1), 3));
        let shape = MatShape::vector(2);
        let p1 = &Polynomial::var(shape, 0, 0) * &Polynomial::var(shape, 1, 0);
        let p2 = Polynomial::var(shape, 1, 0).pow(2);
        let base = mu.gw_eval(
            &[TestSlot::polynomial(p1.clone()), TestSlot::polynomial(p2.clone())],
            12,
        );
        let scaled = mu.gw_eval(
            &[
                TestSlot::polynomial(p1.scale(&Scalar::from_int(3))),
                TestSlot::polynomial(p2.clone()),
            ],
            12,
        );
        assert!((scaled - base * 3.0).norm() < 1e-12);
        // symmetry under slot swap
        let swapped = mu.gw_eval(&[TestSlot::polynomial(p2), TestSlot::polynomial(p1)], 12);
        assert_eq!(base, swapped);
    }

    #[test]
    fn gw_exact_matches_quadrature_on_polynomial_slots() {
        let mu = SmoothValuation::hessian_type(2, 1, BumpFunction::plain(vec![r(0), r(0)], r(1), 8));
        let shape = MatShape::vector(2);
        let p = &Polynomial::var(shape, 0, 0).pow(2)
            + &(&Polynomial::var(shape, 0, 0) * &Polynomial::var(shape, 1, 0)).scale(&Scalar::from_int(2));
        let exact = mu.gw_eval_polynomial_exact(&[p.clone()]);
        let quad = mu.gw_eval(&[TestSlot::polynomial(p)], 40);
        assert!(
            (exact.to_complex() - quad).norm() < 1e-7 * exact.to_complex().norm(),
            "{} vs {quad}",
            exact.to_complex()
        );
    }

    #[test]
    fn inclusion_exclusion_k1_is_a_difference() {
        // k = 1: GW(mu)[phi] = mu(f + phi) - mu(f), and equals the direct path
        let mu = SmoothValuation::hessian_type(1, 1, bump_1d());
        let slot_bump = BumpFunction::plain(vec![r(0)], r(2), 5);
        let slot = TestSlot::bump(slot_bump);
        let direct = mu.gw_eval(&[slot.clone()], 24);
        let oracle = mu.gw_eval_inclusion_exclusion(&[slot], 24).unwrap();
        assert!(
            (direct - oracle).norm() < 1e-6 * direct.norm().max(1.0),
            "{direct} vs {oracle}"
        );
    }

    #[test]
    fn inclusion_exclusion_matches_direct_2d() {
        let mu = SmoothValuation::hessian_type(2, 2, BumpFunction::plain(vec![r(0), r(0)], r(1), 3));
        let s1 = TestSlot::bump(BumpFunction::plain(vec![r(0), r(0)], r(2), 5));
        let shape = MatShape::vector(2);
        let s2 = TestSlot::polynomial(
            &Polynomial::var(shape, 0, 0).pow(2) + &Polynomial::var(shape, 1, 0).pow(2),
        );
        let direct = mu.gw_eval(&[s1.clone(), s2.clone()], 16);
        let oracle = mu.gw_eval_inclusion_exclusion(&[s1, s2], 16).unwrap();
        assert!(
            (direct - oracle).norm() < 1e-5 * direct.norm().max(1.0),
            "{direct} vs {oracle}"
        );
    }

    #[test]
    fn mollify_support_and_two_path() {
        let mu = SmoothValuation::hessian_type(1, 1, bump_1d());
        let rho = BumpFunction::normalized(vec![r(0)], Rational::new(1.into(), 2.into()), 3);
        let (mollified, unit) = mu.mollify(&rho);
        assert!(unit);
        let sb = mollified.support_box;
        assert!((sb.lo[0] + 1.5).abs() < 1e-12 && (sb.hi[0] - 1.5).abs() < 1e-12);
        // two-path: evaluate(mollify(mu), f) vs quadrature of x -> mu(f(. - x))
        let (mollified, _) = mu.mollify(&rho);
        let f = ConvexFunctionHandle::half_norm_squared(1);
        let lhs = mollified.evaluate(&f, 20).unwrap();
        // for f = x^2/2, mu(f(. - x)) is constant in x, so rhs = mu(f)
        let rhs = mu.evaluate(&f, 20).unwrap();
        assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn mollify_delta_limit() {
        let mu = SmoothValuation::hessian_type(1, 1, bump_1d());
        // a convex function with non-constant second derivative
        let f = ConvexFunctionHandle::smooth(1, |x| vec![vec![2.0 + x[0] * x[0]]]);
        let base = mu.evaluate(&f, 32).unwrap();
        let mut errs = Vec::new();
        for denom in [2i64, 4, 8] {
            let rho = BumpFunction::normalized(vec![r(0)], Rational::new(1.into(), denom.into()), 3);
            let (mollified, _) = mu.mollify(&rho);
            let v = mollified.evaluate(&f, 32).unwrap();
            errs.push((v - base).norm());
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn translation_covariance() {
        let mu = SmoothValuation::hessian_type(1, 1, bump_1d());
        let y = vec![Rational::new(1.into(), 2.into())];
        // f with varying Hessian
        let f = ConvexFunctionHandle::smooth(1, |x| vec![vec![2.0 + x[0] * x[0]]]);
        let f_shift = ConvexFunctionHandle::smooth(1, |x| vec![vec![2.0 + (x[0] + 0.5) * (x[0] + 0.5)]]);
        let lhs = mu.evaluate(&f_shift, 24).unwrap();
        let rhs = mu.translate(&y).evaluate(&f, 24).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn support_locality() {
        let mu = SmoothValuation::hessian_type(1, 1, bump_1d());
        // f and g agree on a neighborhood of the support box [-1, 1]
        let f = ConvexFunctionHandle::smooth(1, |x| vec![vec![1.0 + x[0] * x[0]]]);
        let g = ConvexFunctionHandle::smooth(1, |x| {
            let h = if x[0].abs() <= 1.1 {
                1.0 + x[0] * x[0]
            } else {
                50.0
            };
            vec![vec![h]]
        });
        let a = mu.evaluate(&f, 24).unwrap();
        let b = mu.evaluate(&g, 24).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn top_degree_max_affine_valuation_axioms() {
        // F + max(0, l) pairs: exact valuation identity at top degree
        let phi = BumpFunction::polynomial_bump(
            {
                let shape = MatShape::vector(2);
                &Polynomial::one(shape) + &Polynomial::var(shape, 0, 0)
            },
            vec![r(0), r(0)],
            r(3),
            3,
        );
        let mu = SmoothValuation::hessian_type(2, 2, phi);
        let base = ConvexFunctionHandle::max_affine(vec![
            (vec![r(1), r(0)], r(0)),
            (vec![r(-1), r(1)], r(0)),
            (vec![r(0), r(-1)], r(0)),
        ]);
        let plus = ConvexFunctionHandle::max_affine(vec![
            (vec![r(0), r(0)], r(0)),
            (vec![r(1), r(1)], r(-1)),
        ]);
        let minus = ConvexFunctionHandle::max_affine(vec![
            (vec![r(0), r(0)], r(0)),
            (vec![r(-1), r(-1)], r(1)),
        ]);
        let f = base.max_affine_sum(&plus).unwrap();
        let h = base.max_affine_sum(&minus).unwrap();
        let join = base
            .max_affine_sum(&plus.max_affine_max(&minus).unwrap())
            .unwrap();
        let meet = base.clone();
        let lhs = mu
            .evaluate_max_affine_exact(&join)
            .unwrap()
            .add(&mu.evaluate_max_affine_exact(&meet).unwrap());
        let rhs = mu
            .evaluate_max_affine_exact(&f)
            .unwrap()
            .add(&mu.evaluate_max_affine_exact(&h).unwrap());
        assert_eq!(lhs, rhs);
    }
}
