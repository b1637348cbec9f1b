//! Text grammar for polynomials.
//!
//! ```text
//! polynomial := term (("+"|"-") term)*
//! term       := coeff ("*" var)* | [coeff "*"] var ("*" var)*
//! var        := "w[" row "," col "]" ("^" exp)?
//! coeff      := rational | rational "i" | "i" | "(" rational ("+"|"-") rational "i" ")"
//! ```
//!
//! Whitespace insensitive, indices 1-based. `render_poly . parse_poly` is the
//! identity on canonical forms (terms in descending monomial order).

use crate::poly::{MatShape, MultiIndex, Polynomial};
use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            got => Err(self.err(format!(
                "expected '{}', found {}",
                c as char,
                got.map(|g| format!("'{}'", g as char))
                    .unwrap_or_else(|| "end of input".into())
            ))),
        }
    }

    fn err(&self, msg: String) -> ParseError {
        ParseError { pos: self.pos, msg }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits".into()));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse::<BigInt>().unwrap())
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.err("zero denominator".into()));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }
}

pub fn parse_poly(text: &str, shape: MatShape) -> Result<Polynomial, ParseError> {
    let mut lex = Lexer::new(text);
    let mut poly = Polynomial::zero(shape);
    let mut first = true;
    loop {
        lex.skip_ws();
        if lex.pos >= lex.src.len() {
            if first {
                return Err(lex.err("empty polynomial".into()));
            }
            break;
        }
        let mut sign = Scalar::one();
        match lex.peek() {
            Some(b'+') => {
                lex.bump();
            }
            Some(b'-') => {
                lex.bump();
                sign = -Scalar::one();
            }
            _ if !first => {
                return Err(lex.err("expected '+' or '-' between terms".into()));
            }
            _ => {}
        }
        let (idx, coeff) = parse_term(&mut lex, shape)?;
        poly.add_term(idx, &coeff * &sign);
        first = false;
    }
    Ok(poly)
}

fn parse_term(lex: &mut Lexer, shape: MatShape) -> Result<(MultiIndex, Scalar), ParseError> {
    let mut coeff = Scalar::one();
    let mut idx = MultiIndex::zero(shape);
    let mut saw_factor = false;

    // Optional leading coefficient.
    match lex.peek() {
        Some(c) if c.is_ascii_digit() || c == b'(' || c == b'i' => {
            coeff = parse_coeff(lex)?;
            saw_factor = true;
            if lex.peek() == Some(b'*') {
                lex.bump();
            } else if lex.peek() == Some(b'w') {
                return Err(lex.err("expected '*' between coefficient and variable".into()));
            }
        }
        _ => {}
    }

    loop {
        match lex.peek() {
            Some(b'w') => {
                let (pos_err, row, col, exp) = parse_var(lex, shape)?;
                let _ = pos_err;
                let mut exps = idx.exps().to_vec();
                exps[shape.flat(row, col)] += exp;
                idx = MultiIndex::from_exps(exps);
                saw_factor = true;
                if lex.peek() == Some(b'*') {
                    lex.bump();
                    continue;
                }
                break;
            }
            _ if !saw_factor => {
                return Err(lex.err("expected coefficient or variable".into()));
            }
            _ => break,
        }
    }
    Ok((idx, coeff))
}

fn parse_coeff(lex: &mut Lexer) -> Result<Scalar, ParseError> {
    match lex.peek() {
        Some(b'(') => {
            lex.bump();
            let re = lex.rational()?;
            let sign = match lex.bump() {
                Some(b'+') => Rational::one(),
                Some(b'-') => -Rational::one(),
                _ => return Err(lex.err("expected '+' or '-' in complex coefficient".into())),
            };
            let im = lex.rational()?;
            lex.expect(b'i')?;
            lex.expect(b')')?;
            Ok(Scalar::from_parts(re, sign * im))
        }
        Some(b'i') => {
            lex.bump();
            Ok(Scalar::i())
        }
        _ => {
            let r = lex.rational()?;
            if lex.peek() == Some(b'i') {
                lex.bump();
                Ok(Scalar::from_parts(Rational::zero(), r))
            } else {
                Ok(Scalar::from_rational(r))
            }
        }
    }
}

fn parse_var(
    lex: &mut Lexer,
    shape: MatShape,
) -> Result<(usize, usize, usize, u32), ParseError> {
    let start = lex.pos;
    lex.expect(b'w')?;
    lex.expect(b'[')?;
    let row = lex.integer()?;
    lex.expect(b',')?;
    let col = lex.integer()?;
    lex.expect(b']')?;
    let to_index = |v: &BigInt, max: usize, what: &str| -> Result<usize, ParseError> {
        use num_traits::ToPrimitive;
        let v = v.to_usize().unwrap_or(0);
        if v < 1 || v > max {
            Err(ParseError {
                pos: start,
                msg: format!("{} index must be in 1..={}, got {}", what, max, v),
            })
        } else {
            Ok(v - 1)
        }
    };
    let row = to_index(&row, shape.n(), "row")?;
    let col = to_index(&col, shape.k(), "column")?;
    let exp = if lex.peek() == Some(b'^') {
        lex.bump();
        use num_traits::ToPrimitive;
        let e = lex.integer()?;
        e.to_u32()
            .ok_or_else(|| lex.err("exponent too large".into()))?
    } else {
        1
    };
    Ok((start, row, col, exp))
}

fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_coeff(c: &Scalar) -> String {
    if c.im.is_zero() {
        render_rational(&c.re)
    } else if c.re.is_zero() {
        format!("{}i", render_rational(&c.im))
    } else if c.im.is_negative() {
        format!(
            "({}-{}i)",
            render_rational(&c.re),
            render_rational(&(-c.im.clone()))
        )
    } else {
        format!("({}+{}i)", render_rational(&c.re), render_rational(&c.im))
    }
}

fn render_monomial(shape: MatShape, idx: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for col in 0..shape.k() {
        for row in 0..shape.n() {
            let e = idx.get(shape, row, col);
            if e == 1 {
                parts.push(format!("w[{},{}]", row + 1, col + 1));
            } else if e > 1 {
                parts.push(format!("w[{},{}]^{}", row + 1, col + 1, e));
            }
        }
    }
    parts.join("*")
}

/// Canonical rendering: descending monomial order, explicit signs.
pub fn render_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let shape = p.shape();
    let mut out = String::new();
    for (i, (idx, c)) in p.terms_desc().enumerate() {
        // A leading minus on real or pure-imaginary coefficients is folded
        // into the term separator.
        let (neg, c_abs) = if c.im.is_zero() && c.re.is_negative() {
            (true, -c.clone())
        } else if c.re.is_zero() && c.im.is_negative() {
            (true, -c.clone())
        } else {
            (false, c.clone())
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mono = render_monomial(shape, idx);
        let coeff_str = render_coeff(&c_abs);
        if mono.is_empty() {
            out.push_str(&coeff_str);
        } else if coeff_str == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&coeff_str);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
