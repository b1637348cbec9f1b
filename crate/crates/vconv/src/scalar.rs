//! Exact scalars: Gaussian rationals `a + b*i` with arbitrary-precision
//! rational parts, plus a small wrapper for exact values carrying a power
//! of pi (ball-bump moments are rational multiples of a fixed pi power).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub type Rational = BigRational;

/// Gaussian rational scalar. Pure-rational values keep `im == 0`, so exact
/// rational inputs never leave the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Scalar {
            re: Rational::from_integer(BigInt::from(v)),
            im: Rational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: Rational::new(BigInt::from(num), BigInt::from(den)),
            im: Rational::zero(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar {
            re: r,
            im: Rational::zero(),
        }
    }

    pub fn from_parts(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus `a^2 + b^2` (a rational).
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        let n = self.norm_sqr();
        Scalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `(-i)^e`, cycling through 1, -i, -1, i.
    pub fn neg_i_pow(e: u32) -> Self {
        match e % 4 {
            0 => Scalar::one(),
            1 => -Scalar::i(),
            2 => -Scalar::one(),
            _ => Scalar::i(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn to_f64(&self) -> f64 {
        debug_assert!(self.is_real());
        self.re.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "({}-{}i)", self.re, -self.im.clone())
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| Scalar {
    re: &a.re + &b.re,
    im: &a.im + &b.im,
});
scalar_binop!(Sub, sub, |a, b| Scalar {
    re: &a.re - &b.re,
    im: &a.im - &b.im,
});
scalar_binop!(Mul, mul, |a, b| Scalar {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});
scalar_binop!(Div, div, |a, b| a * &b.recip());

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Exact value `rat * pi^pi_pow`. Moments of ball bumps in dimension n are
/// rational multiples of pi^floor(n/2); tracking the power keeps chained
/// moment computations exact until a numeric value is needed.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactValue {
    pub rat: Scalar,
    pub pi_pow: i32,
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue {
            rat: Scalar::zero(),
            pi_pow: 0,
        }
    }

    pub fn rational(rat: Scalar) -> Self {
        ExactValue { rat, pi_pow: 0 }
    }

    pub fn new(rat: Scalar, pi_pow: i32) -> Self {
        ExactValue { rat, pi_pow }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn add(&self, other: &ExactValue) -> ExactValue {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.pi_pow, other.pi_pow,
            "cannot add exact values with different pi powers"
        );
        ExactValue {
            rat: &self.rat + &other.rat,
            pi_pow: self.pi_pow,
        }
    }

    pub fn mul(&self, other: &ExactValue) -> ExactValue {
        ExactValue {
            rat: &self.rat * &other.rat,
            pi_pow: self.pi_pow + other.pi_pow,
        }
    }

    pub fn scale(&self, c: &Scalar) -> ExactValue {
        ExactValue {
            rat: &self.rat * c,
            pi_pow: self.pi_pow,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.rat.to_complex() * std::f64::consts::PI.powi(self.pi_pow)
    }
}

/// Gamma(m + 1/2) expressed as `sqrt(pi) * rational`: returns the rational
/// part `(2m)! / (4^m m!)`.
pub fn gamma_half_rational(m: u64) -> Rational {
    let mut num = BigInt::one();
    for j in 1..=(2 * m) {
        num *= BigInt::from(j);
    }
    let mut den = BigInt::one();
    for j in 1..=m {
        den *= BigInt::from(j);
    }
    den *= BigInt::from(4u8).pow(m as u32);
    Rational::new(num, den)
}

pub fn factorial(m: u64) -> Rational {
    let mut acc = BigInt::one();
    for j in 1..=m {
        acc *= BigInt::from(j);
    }
    Rational::from_integer(acc)
}

pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for j in 0..k {
        acc *= Rational::new(BigInt::from(n - j), BigInt::from(j + 1));
    }
    acc
}
