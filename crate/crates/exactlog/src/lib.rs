//! Exact arithmetic in the ℚ-vector space spanned by `1` and the natural
//! logarithms of prime numbers.
//!
//! A [`LogScalar`] is a finite sum `r + Σ cₚ·log p` with rational `r`, rational
//! coefficients `cₚ`, and `p` ranging over primes. Because `{1} ∪ {log p}` is
//! linearly independent over ℚ, a value is zero exactly when all its
//! coefficients vanish, so equality is decidable by pure bookkeeping. Strict
//! comparisons of distinct values are certified numerically: an interval
//! enclosure of the value is refined through a precision ladder until it
//! excludes zero, and the verdict records how much precision that took.
//!
//! [`LogPoly2`] extends the same certification to formal polynomials of degree
//! at most two in the `log p`, which is what 2-D orientation determinants with
//! [`LogScalar`] coordinates live in.

mod float;
mod interval;
mod parse;
mod poly2;
mod primes;
mod scalar;

pub use float::{f64_to_rational, rational_to_f64};
pub use interval::{log_prime_enclosure, RatInterval};
pub use poly2::LogPoly2;
pub use primes::{factor_u64, is_prime_u64};
pub use scalar::{default_precision_cap, LogScalar, SignKind, SignVerdict, PRECISION_ENV_VAR};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Errors from constructors and the text codec.
#[derive(Debug, Error)]
pub enum ExactLogError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("logarithm argument must be a positive rational, got {0}")]
    NotPositive(BigRational),
    #[error("cannot factor {0}: too large for trial division")]
    NotFactorable(BigInt),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience constructor for a rational from an integer pair.
pub fn qr(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Convenience constructor for an integer rational.
pub fn qi(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}
