//! Exact scalars: rationals and real quadratic fields, plus prime-exponent
//! coordinates for rational slope groups.

mod factor;
mod parse;
mod scalar;

pub use factor::{factor_exponents, is_prime, multiplicative_basis, ExponentVector};
pub use parse::parse_scalar;
pub use scalar::{Scalar, Surd};

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible radicands sqrt({0}) and sqrt({1})")]
    IncompatibleRadicands(u64, u64),
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("radicand does not fit in 64 bits")]
    RadicandTooLarge,
    #[error("square root argument must be rational")]
    IrrationalRadicand,
    #[error("expected a positive rational, got {0}")]
    NotPositiveRational(String),
    #[error("cofactor {0} has a prime outside the basis")]
    PrimeOutsideBasis(BigUint),
    #[error("parse error at column {column}: {message}")]
    Parse { message: String, column: usize },
}
