//! Exact coefficient rings and sparse polynomials.
//!
//! Polynomials are generic over a [`Ring`] and carry a [`Domain`] tag; mixing
//! domains is reported as [`AlgebraError::DomainMismatch`] rather than
//! silently coerced.

mod json;
mod multivariate;
mod parse;
mod residue;
mod ring;
mod univariate;

pub use json::{PolyJson, TermJson};
pub use multivariate::{BiPoly, MultiPoly, TriPoly};
pub use parse::{parse_poly, ParseError};
pub use residue::{
    checked_prime_power, is_prime, mod_inverse, mod_pow, rational_valuation, valuation_of, PadicInt,
    MAX_MODULUS,
};
pub use ring::{float_to_rational, is_integral, rational_to_float, Domain, Ring};
pub use univariate::UniPoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("coefficient domain mismatch: {left} vs {right}")]
    DomainMismatch { left: Domain, right: Domain },
    #[error("division leaves a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("leading coefficient of the divisor is not invertible")]
    NonInvertibleLeading,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be positive, got {0}")]
    BadPrecision(u32),
    #[error("modulus {p}^{n} exceeds the supported range")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("coefficient is not {p}-integral")]
    NotPIntegral { p: u64 },
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}
