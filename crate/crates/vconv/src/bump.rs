//! Compactly supported test densities: polynomial bumps
//! `p(x) (1 - |x-c|^2/r^2)_+^s`, their derivatives, and convolutions.
//! Moments are available in closed form (Beta integrals) and by quadrature.

use crate::poly::{MatShape, MultiIndex, Polynomial};
use crate::quad::{BoxDomain, TensorRule};
use crate::scalar::{factorial, gamma_half_rational, ExactValue, Rational, Scalar};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

/// A ball-supported bump written as `sum_t q_t(x) u^t` on `B_r(c)` with
/// `u = 1 - |x-c|^2/r^2`; the family is closed under differentiation.
#[derive(Clone, Debug)]
pub struct BallBump {
    pub center: Vec<Rational>,
    pub radius: Rational,
    /// Smoothness exponent of the base bump (before derivatives).
    pub smoothness: u32,
    /// Derivative multi-index applied to the base bump.
    pub derivative: Vec<u32>,
    /// Terms (q_t, t); every power t >= 1 keeps the function continuous.
    terms: Vec<(Polynomial, u32)>,
    /// Base polynomial factor, kept for serialization.
    pub base_polynomial: Polynomial,
}

#[derive(Clone, Debug)]
pub enum BumpFunction {
    Ball(BallBump, i32),
    /// Convolution (phi * rho)(x) = int phi(x - y) rho(y) dy.
    Convolution(Box<BumpFunction>, Box<BumpFunction>),
}

impl BumpFunction {
    /// `p(x) (1 - |x-c|^2/r^2)_+^s`. Requires s >= 2 so the bump is C^1.
    pub fn polynomial_bump(p: Polynomial, center: Vec<Rational>, radius: Rational, s: u32) -> Self {
        let n = center.len();
        assert_eq!(p.shape(), MatShape::vector(n));
        assert!(s >= 2, "smoothness s >= 2 required");
        assert!(radius.is_positive(), "radius must be positive");
        BumpFunction::Ball(
            BallBump {
                center,
                radius,
                smoothness: s,
                derivative: vec![0; n],
                terms: vec![(p.clone(), s)],
                base_polynomial: p,
            },
            0,
        )
    }

    /// The plain bump `(1 - |x-c|^2/r^2)_+^s`.
    pub fn plain(center: Vec<Rational>, radius: Rational, s: u32) -> Self {
        let n = center.len();
        Self::polynomial_bump(Polynomial::one(MatShape::vector(n)), center, radius, s)
    }

    /// Plain bump rescaled to unit integral (exactly).
    pub fn normalized(center: Vec<Rational>, radius: Rational, s: u32) -> Self {
        let b = Self::plain(center, radius, s);
        let total = b.moment(&vec![0; b.dim()]);
        assert!(!total.is_zero());
        match b {
            BumpFunction::Ball(mut ball, pi_pow) => {
                let inv = total.rat.recip();
                for (q, _) in ball.terms.iter_mut() {
                    *q = q.scale(&inv);
                }
                ball.base_polynomial = ball.base_polynomial.scale(&inv);
                BumpFunction::Ball(ball, pi_pow - total.pi_pow)
            }
            _ => unreachable!(),
        }
    }

    /// `partial^alpha` of a polynomial bump. Requires s >= |alpha| + 2 so the
    /// result stays C^1.
    pub fn derivative_of_bump(base: &BumpFunction, alpha: &[u32]) -> Self {
        let total: u32 = alpha.iter().sum();
        let BumpFunction::Ball(ball, pi_pow) = base else {
            panic!("derivatives only for ball bumps");
        };
        assert!(
            ball.smoothness >= total + 2,
            "need s >= |alpha| + 2 for a continuous derivative"
        );
        let mut out = base.clone();
        for (dir, &count) in alpha.iter().enumerate() {
            for _ in 0..count {
                out = out.derivative(dir);
            }
        }
        if let BumpFunction::Ball(b, _) = &mut out {
            b.derivative = alpha.to_vec();
            let _ = pi_pow;
        }
        out
    }

    /// Single partial derivative.
    pub fn derivative(&self, dir: usize) -> BumpFunction {
        match self {
            BumpFunction::Ball(ball, pi_pow) => {
                let n = ball.center.len();
                let shape = MatShape::vector(n);
                // d/dx_i u = -2 (x_i - c_i) / r^2
                let r2 = &ball.radius * &ball.radius;
                let du = (&Polynomial::var(shape, dir, 0)
                    - &Polynomial::constant(shape, Scalar::from_rational(ball.center[dir].clone())))
                .scale(&Scalar::from_rational(-Rational::from_integer(2.into()) / r2));
                let mut terms: Vec<(Polynomial, u32)> = Vec::new();
                let mut push = |q: Polynomial, t: u32| {
                    if q.is_zero() {
                        return;
                    }
                    if let Some(entry) = terms.iter_mut().find(|(_, tt)| *tt == t) {
                        entry.0 = &entry.0 + &q;
                    } else {
                        terms.push((q, t));
                    }
                };
                for (q, t) in &ball.terms {
                    push(q.derivative(dir, 0), *t);
                    if *t >= 1 {
                        push(
                            (q * &du).scale(&Scalar::from_int(*t as i64)),
                            *t - 1,
                        );
                    }
                }
                terms.retain(|(q, _)| !q.is_zero());
                assert!(
                    terms.iter().all(|(_, t)| *t >= 1),
                    "derivative would be discontinuous at the support boundary"
                );
                let mut deriv = ball.derivative.clone();
                deriv[dir] += 1;
                BumpFunction::Ball(
                    BallBump {
                        center: ball.center.clone(),
                        radius: ball.radius.clone(),
                        smoothness: ball.smoothness,
                        derivative: deriv,
                        terms,
                        base_polynomial: ball.base_polynomial.clone(),
                    },
                    *pi_pow,
                )
            }
            BumpFunction::Convolution(_, _) => panic!("derivatives only for ball bumps"),
        }
    }

    /// Convolution with a mollifier.
    pub fn convolve(&self, rho: &BumpFunction) -> BumpFunction {
        BumpFunction::Convolution(Box::new(self.clone()), Box::new(rho.clone()))
    }

    pub fn dim(&self) -> usize {
        match self {
            BumpFunction::Ball(b, _) => b.center.len(),
            BumpFunction::Convolution(a, _) => a.dim(),
        }
    }

    pub fn support_box(&self) -> BoxDomain {
        match self {
            BumpFunction::Ball(b, _) => {
                let r = b.radius.to_f64().unwrap();
                let c: Vec<f64> = b.center.iter().map(|v| v.to_f64().unwrap()).collect();
                BoxDomain::centered(&c, r)
            }
            BumpFunction::Convolution(a, b) => a.support_box().sum(&b.support_box()),
        }
    }

    pub fn translate(&self, y: &[Rational]) -> BumpFunction {
        match self {
            BumpFunction::Ball(b, pi_pow) => {
                let n = b.center.len();
                let shape = MatShape::vector(n);
                // q(x) becomes q(x - y)
                let shift = |q: &Polynomial| {
                    q.substitute(shape, |row, _| {
                        &Polynomial::var(shape, row, 0)
                            - &Polynomial::constant(
                                shape,
                                Scalar::from_rational(y[row].clone()),
                            )
                    })
                };
                BumpFunction::Ball(
                    BallBump {
                        center: b.center.iter().zip(y).map(|(c, yi)| c + yi).collect(),
                        radius: b.radius.clone(),
                        smoothness: b.smoothness,
                        derivative: b.derivative.clone(),
                        terms: b.terms.iter().map(|(q, t)| (shift(q), *t)).collect(),
                        base_polynomial: shift(&b.base_polynomial),
                    },
                    *pi_pow,
                )
            }
            BumpFunction::Convolution(a, b) => {
                BumpFunction::Convolution(Box::new(a.translate(y)), b.clone())
            }
        }
    }

    /// Pointwise value (complex in general: prescribed-moment bumps carry
    /// Gaussian coefficients).
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            BumpFunction::Ball(b, pi_pow) => {
                let r = b.radius.to_f64().unwrap();
                let mut u = 1.0;
                for (xi, ci) in x.iter().zip(&b.center) {
                    let d = xi - ci.to_f64().unwrap();
                    u -= d * d / (r * r);
                }
                if u <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let point = vec![x.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>()];
                let mut acc = Complex64::new(0.0, 0.0);
                for (q, t) in &b.terms {
                    acc += q.eval_complex(&point) * u.powi(*t as i32);
                }
                acc * std::f64::consts::PI.powi(*pi_pow)
            }
            BumpFunction::Convolution(a, rho) => {
                // int a(x - y) rho(y) dy over supp rho
                let rule = TensorRule::new(&rho.support_box(), 20);
                rule.integrate_complex(|y| {
                    let shifted: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| xi - yi).collect();
                    a.eval(&shifted) * rho.eval(y)
                })
            }
        }
    }

    /// Exact value at a rational point (ball bumps only).
    pub fn eval_exact(&self, x: &[Rational]) -> ExactValue {
        match self {
            BumpFunction::Ball(b, pi_pow) => {
                let r2 = &b.radius * &b.radius;
                let mut u = Rational::one();
                for (xi, ci) in x.iter().zip(&b.center) {
                    let d = xi - ci;
                    u -= &d * &d / &r2;
                }
                if !u.is_positive() {
                    return ExactValue::zero();
                }
                let point = vec![x
                    .iter()
                    .map(|v| Scalar::from_rational(v.clone()))
                    .collect::<Vec<_>>()];
                let mut acc = Scalar::zero();
                for (q, t) in &b.terms {
                    let mut up = Rational::one();
                    for _ in 0..*t {
                        up *= &u;
                    }
                    acc += &(&q.eval_scalar(&point).unwrap() * &Scalar::from_rational(up));
                }
                ExactValue::new(acc, *pi_pow)
            }
            BumpFunction::Convolution(_, _) => {
                panic!("exact evaluation only for ball bumps")
            }
        }
    }

    /// Exact moment `int x^alpha phi(x) dx` via Beta integrals. The result
    /// carries pi^(floor(n/2) + pi_pow).
    pub fn moment(&self, alpha: &[u32]) -> ExactValue {
        match self {
            BumpFunction::Ball(b, pi_pow) => {
                let mut acc = ExactValue::zero();
                for (q, t) in &b.terms {
                    let part = ball_term_moment(&b.center, &b.radius, q, *t, alpha);
                    acc = acc.add(&part);
                }
                ExactValue::new(acc.rat, acc.pi_pow + *pi_pow)
            }
            BumpFunction::Convolution(a, rho) => {
                // m_alpha(a * rho) = sum_{beta <= alpha} C(alpha, beta)
                //                    m_beta(a) m_{alpha-beta}(rho)
                let mut acc = ExactValue::zero();
                for beta in sub_indices(alpha) {
                    let mut c = Rational::one();
                    for (&ai, &bi) in alpha.iter().zip(&beta) {
                        c *= crate::scalar::binomial(ai as u64, bi as u64);
                    }
                    let rest: Vec<u32> =
                        alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
                    let term = a.moment(&beta).mul(&rho.moment(&rest));
                    acc = acc.add(&term.scale(&Scalar::from_rational(c)));
                }
                acc
            }
        }
    }

    pub fn integral(&self) -> ExactValue {
        self.moment(&vec![0; self.dim()])
    }

    /// Numeric Fourier transform `int phi(x) exp(-i<z, x>) dx` by
    /// quadrature at the given order.
    pub fn fourier(&self, z: &[Complex64], order: usize) -> Complex64 {
        let rule = TensorRule::new(&self.support_box(), order);
        rule.integrate_complex(|x| {
            let mut phase = Complex64::new(0.0, 0.0);
            for (zi, xi) in z.iter().zip(x) {
                phase += zi * *xi;
            }
            self.eval(x) * (Complex64::new(0.0, -1.0) * phase).exp()
        })
    }

    /// Scales the density by an exact rational constant.
    pub fn scale(&self, c: &Scalar) -> BumpFunction {
        match self {
            BumpFunction::Ball(b, pi_pow) => {
                let mut out = b.clone();
                for (q, _) in out.terms.iter_mut() {
                    *q = q.scale(c);
                }
                out.base_polynomial = out.base_polynomial.scale(c);
                BumpFunction::Ball(out, *pi_pow)
            }
            BumpFunction::Convolution(a, rho) => {
                BumpFunction::Convolution(Box::new(a.scale(c)), rho.clone())
            }
        }
    }
}

/// Float-compiled bump for hot quadrature loops: rational data converted
/// once, polynomial terms flattened.
pub enum CompiledBump {
    Ball {
        center: Vec<f64>,
        inv_r2: f64,
        pi_factor: f64,
        /// (power of u, flattened monomials (coeff, exponents))
        terms: Vec<(u32, Vec<(Complex64, Vec<u32>)>)>,
    },
    Convolution {
        inner: Box<CompiledBump>,
        mollifier: Box<CompiledBump>,
        rule: crate::quad::TensorRule,
    },
}

impl BumpFunction {
    pub fn compile(&self) -> CompiledBump {
        match self {
            BumpFunction::Ball(b, pi_pow) => {
                let r = b.radius.to_f64().unwrap();
                CompiledBump::Ball {
                    center: b.center.iter().map(|c| c.to_f64().unwrap()).collect(),
                    inv_r2: 1.0 / (r * r),
                    pi_factor: std::f64::consts::PI.powi(*pi_pow),
                    terms: b
                        .terms
                        .iter()
                        .map(|(q, t)| {
                            (
                                *t,
                                q.terms()
                                    .map(|(m, c)| (c.to_complex(), m.exps().to_vec()))
                                    .collect(),
                            )
                        })
                        .collect(),
                }
            }
            BumpFunction::Convolution(a, rho) => CompiledBump::Convolution {
                inner: Box::new(a.compile()),
                mollifier: Box::new(rho.compile()),
                rule: crate::quad::TensorRule::new(&rho.support_box(), 20),
            },
        }
    }
}

impl CompiledBump {
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            CompiledBump::Ball {
                center,
                inv_r2,
                pi_factor,
                terms,
            } => {
                let mut u = 1.0;
                for (xi, ci) in x.iter().zip(center) {
                    let d = xi - ci;
                    u -= d * d * inv_r2;
                }
                if u <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, monomials) in terms {
                    let mut part = Complex64::new(0.0, 0.0);
                    for (c, exps) in monomials {
                        let mut v = *c;
                        for (xi, &e) in x.iter().zip(exps) {
                            for _ in 0..e {
                                v *= xi;
                            }
                        }
                        part += v;
                    }
                    acc += part * u.powi(*t as i32);
                }
                acc * *pi_factor
            }
            CompiledBump::Convolution {
                inner,
                mollifier,
                rule,
            } => {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut shifted = vec![0.0; x.len()];
                for (y, w) in rule.iter() {
                    for ((s, xi), yi) in shifted.iter_mut().zip(x).zip(y) {
                        *s = xi - yi;
                    }
                    acc += inner.eval(&shifted) * mollifier.eval(y) * w;
                }
                acc
            }
        }
    }
}

/// Moment of one term `q(x) u^t` over the ball.
fn ball_term_moment(
    center: &[Rational],
    radius: &Rational,
    q: &Polynomial,
    t: u32,
    alpha: &[u32],
) -> ExactValue {
    let n = center.len();
    let shape = MatShape::vector(n);
    // substitute x = c + r y and multiply by x^alpha: polynomial in y
    let subst = |p: &Polynomial| {
        p.substitute(shape, |row, _| {
            &Polynomial::constant(shape, Scalar::from_rational(center[row].clone()))
                + &Polynomial::var(shape, row, 0)
                    .scale(&Scalar::from_rational(radius.clone()))
        })
    };
    let mut integrand = subst(q);
    for (i, &ai) in alpha.iter().enumerate() {
        if ai > 0 {
            let xi = &Polynomial::constant(shape, Scalar::from_rational(center[i].clone()))
                + &Polynomial::var(shape, i, 0).scale(&Scalar::from_rational(radius.clone()));
            integrand = &integrand * &xi.pow(ai);
        }
    }
    // r^n volume factor
    let mut rn = Rational::one();
    for _ in 0..n {
        rn *= radius;
    }
    let mut acc = Scalar::zero();
    let pi_pow = (n / 2) as i32;
    for (m, c) in integrand.terms() {
        let gamma = m.exps();
        if gamma.iter().any(|g| g % 2 == 1) {
            continue;
        }
        let half: Vec<u64> = gamma.iter().map(|&g| (g / 2) as u64).collect();
        let total_half: u64 = half.iter().sum();
        // prod Gamma(m_i + 1/2) * Gamma(t+1) / Gamma(total + n/2 + t + 1)
        let mut num = Rational::one();
        for &h in &half {
            num *= gamma_half_rational(h);
        }
        num *= factorial(t as u64);
        let denom = if n % 2 == 0 {
            // integer argument
            factorial(total_half + (n as u64) / 2 + t as u64)
        } else {
            gamma_half_rational(total_half + t as u64 + (n as u64 + 1) / 2)
        };
        let unit_ball_integral = num / denom;
        acc += &(c * &Scalar::from_rational(unit_ball_integral));
    }
    ExactValue::new(&acc * &Scalar::from_rational(rn), pi_pow)
}

fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &a in alpha {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=a {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Finds `phi = (sum c_beta x^beta) * (1-|x|^2/r^2)^s` whose Fourier
/// transform matches the polynomial `p` up to order `n_max`: the moment
/// system `(-i)^{|a|}/a! m_a(phi) = p_a` is solved exactly. The moment
/// matrix is a Gram matrix of monomials in a positive weight, hence
/// nonsingular.
pub fn prescribe_moments(p: &Polynomial, n_max: u32, radius: Rational, s: u32) -> BumpFunction {
    let n = p.shape().n();
    assert_eq!(p.shape().k(), 1, "prescription runs over C^n polynomials");
    assert!(p.total_degree() <= n_max, "deg P <= N required");
    let shape = MatShape::vector(n);
    let indices = indices_up_to(n, n_max);
    let weight = BumpFunction::plain(vec![Rational::zero(); n], radius.clone(), s);
    // common pi power of all moments
    let pi_pow = (n / 2) as i32;
    let mut rows = Vec::with_capacity(indices.len());
    for a in &indices {
        let mut row = Vec::with_capacity(indices.len());
        for b in &indices {
            let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let m = weight.moment(&sum);
            debug_assert!(m.is_zero() || m.pi_pow == pi_pow);
            row.push(m.rat);
        }
        rows.push(row);
    }
    let rhs: Vec<Scalar> = indices
        .iter()
        .map(|a| {
            let coeff = p.coefficient(&MultiIndex::from_exps(a.clone()));
            let total: u32 = a.iter().sum();
            let mut fact = Rational::one();
            for &ai in a {
                fact *= factorial(ai as u64);
            }
            // p_a * a! * i^{|a|}
            &(&coeff * &Scalar::from_rational(fact)) * &Scalar::neg_i_pow(total).conj()
        })
        .collect();
    let mat = crate::linalg::Matrix::from_rows(rows);
    let coeffs = mat
        .solve(&rhs)
        .expect("moment matrix is positive definite");
    let mut q = Polynomial::zero(shape);
    for (a, c) in indices.iter().zip(coeffs) {
        q.add_term(MultiIndex::from_exps(a.clone()), c);
    }
    let phi = BumpFunction::polynomial_bump(q, vec![Rational::zero(); n], radius, s);
    match phi {
        BumpFunction::Ball(b, _) => BumpFunction::Ball(b, -pi_pow),
        _ => unreachable!(),
    }
}

pub fn indices_up_to(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() - 1 {
            for v in 0..=left {
                cur[pos] = v;
                out.push(cur.clone());
            }
            cur[pos] = 0;
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(cur, pos + 1, left - v, out);
        }
        cur[pos] = 0;
    }
    rec(&mut cur, 0, max_total, &mut out);
    out.sort();
    out.dedup();
    out
}

use num_traits::Signed;

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn unit_integral_1d() {
        // int_{-1}^{1} (1 - x^2)^2 dx = 16/15, no pi factor in 1D
        let b = BumpFunction::plain(vec![r(0)], r(1), 2);
        let total = b.integral();
        assert_eq!(total.pi_pow, 0);
        assert_eq!(total.rat, Scalar::from_ratio(16, 15));
    }

    #[test]
    fn unit_integral_2d_has_pi() {
        // int_{B_1} (1-|x|^2)^s dx = pi/(s+1) in 2D
        let b = BumpFunction::plain(vec![r(0), r(0)], r(1), 3);
        let total = b.integral();
        assert_eq!(total.pi_pow, 1);
        assert_eq!(total.rat, Scalar::from_ratio(1, 4));
    }

    #[test]
    fn moments_match_quadrature() {
        let shape = MatShape::vector(2);
        let p = &Polynomial::var(shape, 0, 0) + &Polynomial::one(shape);
        let b = BumpFunction::polynomial_bump(p, vec![r(1), r(0)], Rational::new(3.into(), 2.into()), 5);
        for alpha in [[0, 0], [1, 0], [2, 1], [0, 3]] {
            let exact = b.moment(&alpha).to_complex();
            let rule = TensorRule::new(&b.support_box(), 60);
            let quad = rule.integrate_complex(|x| {
                b.eval(x) * x[0].powi(alpha[0] as i32) * x[1].powi(alpha[1] as i32)
            });
            assert!(
                (exact - quad).norm() < 1e-8,
                "alpha={alpha:?}: {exact} vs {quad}"
            );
        }
    }

    #[test]
    fn derivative_moments_integrate_by_parts() {
        // int x^m (d/dx) psi = -m int x^{m-1} psi
        let psi = BumpFunction::plain(vec![r(0)], r(1), 4);
        let dpsi = BumpFunction::derivative_of_bump(&psi, &[1]);
        for m in 1..5u32 {
            let lhs = dpsi.moment(&[m]);
            let rhs = psi.moment(&[m - 1]).scale(&Scalar::from_int(-(m as i64)));
            assert_eq!(lhs, rhs, "m={m}");
        }
        // moment 0 of the derivative vanishes
        assert!(dpsi.moment(&[0]).is_zero());
    }

    #[test]
    fn normalized_bump_has_unit_mass() {
        let b = BumpFunction::normalized(vec![r(0), r(0)], r(2), 2);
        let total = b.integral();
        assert_eq!(total.rat, Scalar::one());
        assert_eq!(total.pi_pow, 0);
    }

    #[test]
    fn convolution_moments_binomial() {
        let a = BumpFunction::plain(vec![r(0)], r(1), 2);
        let rho = BumpFunction::normalized(vec![r(0)], Rational::new(1.into(), 2.into()), 2);
        let conv = a.convolve(&rho);
        // mass preserved
        assert_eq!(conv.integral(), a.integral());
        // first moment adds: m1(conv) = m1(a) * m0(rho) + m0(a) * m1(rho) = m1(a)
        assert_eq!(conv.moment(&[1]), a.moment(&[1]));
        // pointwise value sanity at 0 by quadrature
        let v = conv.eval(&[0.0]);
        assert!(v.im.abs() < 1e-12);
        assert!(v.re > 0.5 && v.re < 1.2, "{v}");
    }

    #[test]
    fn translate_shifts_support_and_moments() {
        let b = BumpFunction::plain(vec![r(0)], r(1), 2);
        let t = b.translate(&[r(2)]);
        let sb = t.support_box();
        assert!((sb.lo[0] - 1.0).abs() < 1e-12 && (sb.hi[0] - 3.0).abs() < 1e-12);
        // m1 of translated = m1 + 2 m0
        let expect = b
            .moment(&[1])
            .add(&b.moment(&[0]).scale(&Scalar::from_int(2)));
        assert_eq!(t.moment(&[1]), expect);
    }

    #[test]
    fn prescribe_constant_one() {
        let shape = MatShape::vector(1);
        let p = Polynomial::one(shape);
        let phi = prescribe_moments(&p, 0, r(1), 3);
        assert_eq!(phi.integral().rat, Scalar::one());
        assert_eq!(phi.integral().pi_pow, 0);
    }

    #[test]
    fn prescribe_linear_coordinate() {
        // P = z_1 in 2D: int phi = 0, int x_1 phi = i, int x_2 phi = 0
        let shape = MatShape::vector(2);
        let p = Polynomial::var(shape, 0, 0);
        let phi = prescribe_moments(&p, 1, r(1), 3);
        assert!(phi.integral().is_zero());
        let m1 = phi.moment(&[1, 0]);
        assert_eq!(&m1.rat * &Scalar::neg_i_pow(1), Scalar::one());
        assert_eq!(m1.pi_pow, 0);
        assert!(phi.moment(&[0, 1]).is_zero());
    }

    #[test]
    fn exact_eval_matches_float() {
        let shape = MatShape::vector(2);
        let p = &Polynomial::var(shape, 1, 0).scale(&Scalar::from_ratio(1, 2))
            + &Polynomial::one(shape);
        let b = BumpFunction::polynomial_bump(p, vec![r(0), r(1)], r(2), 3);
        let x = vec![Rational::new(1.into(), 2.into()), r(1)];
        let exact = b.eval_exact(&x).to_complex();
        let xf: Vec<f64> = x.iter().map(|v| v.to_f64().unwrap()).collect();
        assert!((exact - b.eval(&xf)).norm() < 1e-13);
        // outside the support
        assert!(b.eval_exact(&[r(5), r(5)]).is_zero());
    }
}
