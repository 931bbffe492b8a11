//! Exact arithmetic: rationals, elements of real quadratic fields, integer
//! square roots, plus a high-precision float used for numeric cross-checks.

mod bigfloat;
mod integer;
mod quad;
mod rational;

use num_bigint::BigInt;
use thiserror::Error;

pub use bigfloat::{BigFloat, DEFAULT_PRECISION};
pub use integer::{
    is_perfect_square, is_squarefree, isqrt, isqrt_u128, isqrt_unsigned, squarefree_core,
};
pub use quad::{mul_count, reset_mul_count, QuadElem};
pub use rational::BigRat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("elements of Q(√{left}) and Q(√{right}) cannot be combined")]
    FieldMismatch { left: BigInt, right: BigInt },
    #[error("{0} is not a valid field discriminant (need squarefree d > 1)")]
    BadDiscriminant(BigInt),
    #[error("negative input {0}")]
    NegativeInput(BigInt),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}
