//! Exact symbolic algebra: symbols, linear forms, sparse polynomials and
//! rational functions with linear denominators.

mod factored;
mod form;
mod poly;
mod symbols;

pub use factored::{DenFactor, FactoredRational};
pub use form::LinearForm;
pub use poly::{Monomial, Polynomial};
pub use symbols::{Role, SymbolInfo, SymbolTable};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operands use different symbol tables")]
    SymbolMismatch,
    #[error("structural error: {0}")]
    Structure(String),
    #[error("not divisible by {0}")]
    NotDivisible(String),
    #[error("denominator factor {0} vanishes identically after substitution")]
    VanishingFactor(String),
    #[error("pole at assignment: factor {0} vanishes")]
    PoleAtAssignment(String),
    #[error("replacement for {0} must not involve {0}")]
    SelfReferential(String),
}
