//! Exact scalars for phases.
//!
//! A phase class `[φ_j] ∈ ℂ/ℤ` is stored as a rational part in `[0,1)` plus
//! rational coefficients on opaque symbols. The symbols, together with `1`,
//! are assumed linearly independent over ℚ; that assumption is a contract
//! with the caller and is never checked.

mod float;
mod gaussian;
mod phase;

pub use float::{BigFloat, ComplexBig, Precision};
pub use gaussian::GaussianRational;
pub use phase::{
    is_integral_combination, phase_from_terms, Combination, ExactError, MultiIndex, PhaseScalar,
    PhaseVector, Rational, SymbolBasis,
};

use num_bigint::BigInt;

/// Builds a rational from a numerator and a nonzero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}
