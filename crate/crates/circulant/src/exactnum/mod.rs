//! Exact scalar arithmetic: arbitrary-precision rationals, sparse multivariate
//! polynomials over named parameters, and rational expressions built from them.
//!
//! Every coefficient that flows through the library is one of these types.
//! There is no floating point anywhere; equality of expressions is decidable
//! and decided exactly.

mod monomial;
mod parser;
mod polynomial;
mod scalar;

pub use monomial::Monomial;
pub use parser::{parse_polynomial, parse_scalar};
pub use polynomial::Polynomial;
pub use scalar::ScalarExpr;

use thiserror::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Errors from parsing or evaluating scalar expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("zero denominator in rational literal at position {pos}")]
    ZeroDenominatorLiteral { pos: usize },
    #[error("division by a zero expression")]
    DivisionByZero,
    #[error("no value assigned to parameter `{name}`")]
    MissingParameter { name: String },
    #[error("denominator vanishes at the given point")]
    DenominatorVanishes,
}
