//! JSON-facing representations: polynomials as grammar strings, rationals
//! as "p/q" strings, valuations as {n, k, terms, support_box} specs.

use crate::bump::BumpFunction;
use crate::convex::ConvexFunctionHandle;
use crate::division::DivisionCertificate;
use crate::maval::{MaValElement, MixedMaOperator};
use crate::minor::MinorGroebnerBasis;
use crate::parse::{parse_poly, render_poly};
use crate::poly::{MatShape, Polynomial};
use crate::scalar::{Rational, Scalar};
use crate::symmat::SymMatrixQ;
use crate::valuation::SmoothValuation;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("bad rational literal '{0}'")]
    BadRational(String),
    #[error("polynomial parse error: {0}")]
    Poly(#[from] crate::parse::ParseError),
    #[error("basis index {0} out of range")]
    BadBasisIndex(usize),
    #[error("{0}")]
    Invalid(String),
}

pub fn rational_to_string(r: &Rational) -> String {
    crate::parse::render_poly(&Polynomial::constant(
        MatShape::new(1, 1),
        Scalar::from_rational(r.clone()),
    ))
}

pub fn rational_from_string(s: &str) -> Result<Rational, SpecError> {
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let parts: Vec<&str> = t.split('/').collect();
    let parse_int = |x: &str| {
        num_bigint::BigInt::from_str(x.trim()).map_err(|_| SpecError::BadRational(s.to_string()))
    };
    let r = match parts.as_slice() {
        [p] => Rational::from_integer(parse_int(p)?),
        [p, q] => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(SpecError::BadRational(s.to_string()));
            }
            Rational::new(parse_int(p)?, den)
        }
        _ => return Err(SpecError::BadRational(s.to_string())),
    };
    Ok(if neg { -r } else { r })
}

/// Basis dump: one entry per ordered minor product.
#[derive(Serialize, Deserialize)]
pub struct BasisDump {
    pub n: usize,
    pub k: usize,
    pub count: usize,
    pub elements: Vec<BasisElementDump>,
}

#[derive(Serialize, Deserialize)]
pub struct BasisElementDump {
    #[serde(rename = "I")]
    pub upper: Vec<usize>,
    #[serde(rename = "I2")]
    pub lower: Vec<usize>,
    pub initial: String,
    pub terms: String,
}

pub fn dump_basis(basis: &MinorGroebnerBasis) -> BasisDump {
    let shape = basis.shape;
    BasisDump {
        n: shape.n(),
        k: shape.k(),
        count: basis.len(),
        elements: basis
            .elements
            .iter()
            .map(|e| BasisElementDump {
                upper: e.upper.rows_one_based(),
                lower: e.lower.rows_one_based(),
                initial: render_poly(&Polynomial::monomial(
                    shape,
                    e.initial.clone(),
                    Scalar::one(),
                )),
                terms: render_poly(&e.polynomial),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize)]
pub struct CertificateDump {
    pub input: String,
    pub coefficients: Vec<String>,
    pub remainder: String,
    pub member: bool,
}

pub fn dump_certificate(cert: &DivisionCertificate) -> CertificateDump {
    CertificateDump {
        input: render_poly(&cert.input),
        coefficients: cert.coefficients.iter().map(render_poly).collect(),
        remainder: render_poly(&cert.remainder),
        member: cert.remainder.is_zero(),
    }
}

/// Serializable bump: center, radius, smoothness, polynomial factor, and a
/// derivative multi-index.
#[derive(Serialize, Deserialize, Clone)]
pub struct BumpSpec {
    pub center: Vec<String>,
    pub radius: String,
    pub smoothness: u32,
    #[serde(default = "default_poly_one")]
    pub polynomial: String,
    #[serde(default)]
    pub derivative: Vec<u32>,
}

fn default_poly_one() -> String {
    "1".to_string()
}

impl BumpSpec {
    pub fn to_bump(&self, n: usize) -> Result<BumpFunction, SpecError> {
        if self.center.len() != n {
            return Err(SpecError::Invalid(format!(
                "bump center must have {n} entries"
            )));
        }
        let center = self
            .center
            .iter()
            .map(|s| rational_from_string(s))
            .collect::<Result<Vec<_>, _>>()?;
        let radius = rational_from_string(&self.radius)?;
        let p = parse_poly(&self.polynomial, MatShape::vector(n))?;
        let base = BumpFunction::polynomial_bump(p, center, radius, self.smoothness);
        if self.derivative.iter().any(|&d| d > 0) {
            if self.derivative.len() != n {
                return Err(SpecError::Invalid(format!(
                    "derivative index must have {n} entries"
                )));
            }
            Ok(BumpFunction::derivative_of_bump(&base, &self.derivative))
        } else {
            Ok(base)
        }
    }

    pub fn from_bump(b: &BumpFunction) -> Option<BumpSpec> {
        match b {
            BumpFunction::Ball(ball, pi_pow) if *pi_pow == 0 => Some(BumpSpec {
                center: ball.center.iter().map(rational_to_string).collect(),
                radius: rational_to_string(&ball.radius),
                smoothness: ball.smoothness,
                polynomial: render_poly(&ball.base_polynomial),
                derivative: ball.derivative.clone(),
            }),
            _ => None,
        }
    }
}

/// Basis element by index into the aligned basis, or explicit tails.
#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
pub enum PsiSpec {
    BasisIndex { basis_index: usize },
    Tails { constant: String, tails: Vec<Vec<Vec<String>>> },
}

impl PsiSpec {
    pub fn to_element(
        &self,
        shape: MatShape,
        basis: &[MaValElement],
    ) -> Result<MaValElement, SpecError> {
        match self {
            PsiSpec::BasisIndex { basis_index } => basis
                .get(*basis_index)
                .cloned()
                .ok_or(SpecError::BadBasisIndex(*basis_index)),
            PsiSpec::Tails { constant, tails } => {
                let n = shape.n();
                let c = rational_from_string(constant)?;
                let mats = tails
                    .iter()
                    .map(|rows| {
                        let entries = rows
                            .iter()
                            .map(|row| {
                                row.iter()
                                    .map(|s| rational_from_string(s).map(Scalar::from_rational))
                                    .collect::<Result<Vec<_>, _>>()
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
                            return Err(SpecError::Invalid(format!(
                                "tail matrices must be {n}x{n}"
                            )));
                        }
                        Ok(SymMatrixQ::new(entries))
                    })
                    .collect::<Result<Vec<_>, SpecError>>()?;
                if mats.len() != n - shape.k() {
                    return Err(SpecError::Invalid(format!(
                        "expected {} tail matrices",
                        n - shape.k()
                    )));
                }
                let op = MixedMaOperator::new(
                    n,
                    shape.k(),
                    Scalar::from_rational(c),
                    mats,
                );
                Ok(MaValElement::from_operator(op))
            }
        }
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ValuationSpec {
    pub n: usize,
    pub k: usize,
    pub terms: Vec<TermSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_box: Option<crate::quad::BoxDomain>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TermSpec {
    pub phi: BumpSpec,
    pub psi: PsiSpec,
}

impl ValuationSpec {
    pub fn to_valuation(&self, basis: &[MaValElement]) -> Result<SmoothValuation, SpecError> {
        let shape = MatShape::new(self.n, self.k);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok((
                    t.phi.to_bump(self.n)?,
                    t.psi.to_element(shape, basis)?,
                ))
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        Ok(SmoothValuation::new(shape, terms))
    }
}

/// Quadratic handle as {A, b, c}; max-affine as a list of {a, b}.
#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
pub enum HandleSpec {
    Quadratic {
        #[serde(rename = "A")]
        a: Vec<Vec<String>>,
        b: Vec<String>,
        c: String,
    },
    MaxAffine(Vec<AffinePieceSpec>),
}

#[derive(Serialize, Deserialize, Clone)]
pub struct AffinePieceSpec {
    pub a: Vec<String>,
    pub b: String,
}

impl HandleSpec {
    pub fn to_handle(&self) -> Result<ConvexFunctionHandle, SpecError> {
        match self {
            HandleSpec::Quadratic { a, b, c } => {
                let rows = a
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| rational_from_string(s).map(Scalar::from_rational))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let bv = b
                    .iter()
                    .map(|s| rational_from_string(s).map(Scalar::from_rational))
                    .collect::<Result<Vec<_>, _>>()?;
                let cv = Scalar::from_rational(rational_from_string(c)?);
                Ok(ConvexFunctionHandle::quadratic(
                    SymMatrixQ::new(rows),
                    bv,
                    cv,
                ))
            }
            HandleSpec::MaxAffine(pieces) => {
                let ps = pieces
                    .iter()
                    .map(|p| {
                        let a = p
                            .a
                            .iter()
                            .map(|s| rational_from_string(s))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok((a, rational_from_string(&p.b)?))
                    })
                    .collect::<Result<Vec<_>, SpecError>>()?;
                Ok(ConvexFunctionHandle::max_affine(ps))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["3/2", "-7", "0", "22/7"] {
            let r = rational_from_string(s).unwrap();
            assert_eq!(rational_to_string(&r), s);
        }
        assert!(rational_from_string("1/0").is_err());
        assert!(rational_from_string("abc").is_err());
    }

    #[test]
    fn valuation_spec_round_trip() {
        use rand::SeedableRng;
        let shape = MatShape::new(2, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let basis = crate::maval::maval_basis(shape, &mut rng).unwrap();
        let spec = ValuationSpec {
            n: 2,
            k: 1,
            terms: vec![TermSpec {
                phi: BumpSpec {
                    center: vec!["0".into(), "1/2".into()],
                    radius: "1".into(),
                    smoothness: 3,
                    polynomial: "1 + w[1,1]".into(),
                    derivative: vec![],
                },
                psi: PsiSpec::BasisIndex { basis_index: 0 },
            }],
            support_box: None,
        };
        let mu = spec.to_valuation(&basis).unwrap();
        assert_eq!(mu.terms.len(), 1);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ValuationSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.terms.len(), 1);
    }

    #[test]
    fn handle_spec_parses_both_kinds() {
        let quad: HandleSpec = serde_json::from_str(
            r#"{"A": [["1","0"],["0","2"]], "b": ["0","0"], "c": "0"}"#,
        )
        .unwrap();
        let h = quad.to_handle().unwrap();
        assert!(h.is_quadratic());
        let ma: HandleSpec =
            serde_json::from_str(r#"[{"a": ["1","0"], "b": "0"}, {"a": ["-1","0"], "b": "0"}]"#)
                .unwrap();
        let h = ma.to_handle().unwrap();
        assert!(h.is_max_affine());
    }
}
