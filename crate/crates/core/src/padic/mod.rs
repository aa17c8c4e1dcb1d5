//! Truncated arithmetic in a totally ramified extension of the Witt vectors
//! of `GF(2^m)`, with `v(2) = 1`.

mod poly;
mod ring;

use thiserror::Error;

pub use poly::PadicPolynomial;
pub use ring::{
    PadicConfig, PadicRing, RamifiedElement, Valuation, DEFAULT_PADIC_PRECISION,
    DEFAULT_RAM_INDEX, DEFAULT_RESIDUE_DEGREE,
};

use crate::char2::Char2Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("invalid p-adic configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed element: {0}")]
    MalformedElement(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("indeterminate at working precision: {0}")]
    IndeterminateAtPrecision(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error(transparent)]
    Char2(#[from] Char2Error),
}
