//! Exact arithmetic in characteristic 2: binary fields, Laurent polynomials,
//! precision-tracked series in the deformation parameter, and rational
//! functions with their local expansions.

pub mod field;
pub mod laurent;
pub mod rational;
pub mod series;

pub use field::{Gf, Gf2nField, DEFAULT_FIELD_DEGREE};
pub use laurent::{Coeff, LaurentPolynomial, Variable};
pub use rational::{local_expansion, LocalSeries, Place, RationalFunction};
pub use series::{TruncatedSeries, DEFAULT_SERIES_PRECISION};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Char2Error {
    #[error("unsupported field degree {0}: must be even and at most 16")]
    UnsupportedFieldDegree(u32),
    #[error("bit pattern {bits:#x} does not fit in GF(2^{degree})")]
    BitsOutOfRange { bits: u32, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("odd exponent w^{exponent} present: not a square in k((w))")]
    OddExponentPresent { exponent: i64 },
    #[error("series has a pole of order {} and no reduction mod w", -valuation)]
    NotIntegral { valuation: i64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
}
