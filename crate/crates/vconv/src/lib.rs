//! Symbolic-numeric toolkit for dually epi-translation invariant valuations
//! on convex functions.
//!
//! The exact layer provides multivariate polynomial arithmetic on matrix
//! variables, the ordered basis of quadratic minor products with division
//! and membership, mixed discriminants, and discrete Monge-Ampere measures
//! of max-affine functions. The numeric layer evaluates smooth valuations
//! presented over a basis of translation equivariant Monge-Ampere operators,
//! their Goodey-Weil distributions, and the Fourier-Laplace transform with
//! its Paley-Wiener-Schwartz-type envelope diagnostics.

pub mod scalar;
pub mod poly;
pub mod parse;
pub mod linalg;
pub mod minor;
pub mod division;
pub mod symmat;
pub mod quad;
pub mod convex;
pub mod bump;
pub mod maval;
pub mod valuation;
pub mod fourier;
pub mod serial;
pub mod suites;

pub use poly::{MatShape, MonomialOrder, MultiIndex, PolyError, Polynomial};
pub use scalar::{ExactValue, Rational, Scalar};
