//! Exact equivariant volumes of linear symplectic and hyper-Kähler
//! quotients, computed by iterated positive residues.
//!
//! The core is generic over [`Scalar`]; the aliases below fix the exact
//! rational instantiation used by the quotient, ADHM and series layers.

pub mod adhm;
pub mod algebra;
pub mod cache;
pub mod json;
pub mod nekrasov;
pub mod oracle;
pub mod quotient;
pub mod render;
pub mod residue;
pub mod samples;
pub mod scalar;

pub use scalar::{FromRational, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
pub type Form = algebra::LinearForm<Rational>;
pub type Poly = algebra::Polynomial<Rational>;
pub type RationalFunction = algebra::FactoredRational<Rational>;
/// Floating point instantiation for quick numerical evaluation.
pub type FloatFunction = algebra::FactoredRational<f64>;
