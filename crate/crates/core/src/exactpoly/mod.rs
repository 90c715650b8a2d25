//! Exact multivariate polynomials over arbitrary-precision rationals.

mod json;
mod monomial;
mod naming;
mod polynomial;

pub use json::{PolynomialJson, TermJson};
pub use monomial::Monomial;
pub use naming::VariableNaming;
pub use polynomial::Polynomial;
pub(crate) use polynomial::rational_to_f64;

/// Reduced fraction with a positive denominator; zero is `0/1`.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
