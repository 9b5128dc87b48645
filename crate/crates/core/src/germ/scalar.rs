use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{ComplexBig, GaussianRational, Precision, Rational};

/// Bits of headroom below the working precision under which a numeric
/// coefficient counts as zero relative to a reference magnitude.
pub const NUMERIC_GUARD_BITS: u32 = 48;

/// Coefficient field of a jet: exact ℚ(i) or fixed-precision complex floats.
///
/// `Ctx` carries whatever is needed to build constants (the precision for
/// floats, nothing for exact values).
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    type Ctx: Copy + PartialEq + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: Self::Ctx) -> Self;
    fn one_in(ctx: Self::Ctx) -> Self;
    fn from_rational_in(value: &Rational, ctx: Self::Ctx) -> Self;
    fn from_gaussian_in(value: &GaussianRational, ctx: Self::Ctx) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn try_div(&self, other: &Self) -> Option<Self>;
    fn vanishes(&self) -> bool;
    /// Approximate `log2 |x|`, `None` for an exact zero.
    fn log2_magnitude(&self) -> Option<f64>;
    /// Zero for exact values; below `reference · 2^-(P - guard)` for floats.
    fn is_negligible(&self, reference_log2: Option<f64>) -> bool;
    /// Mantissa width for floats, `None` for exact values.
    fn resolution_bits(&self) -> Option<u32>;
}

fn log2_int(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x.abs() >> shift).to_f64().unwrap_or(0.0);
    top.log2() + shift as f64
}

fn log2_rational(r: &Rational) -> f64 {
    if r.is_zero() {
        f64::NEG_INFINITY
    } else {
        log2_int(r.numer()) - log2_int(r.denom())
    }
}

impl Scalar for GaussianRational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero_in(_: ()) -> Self {
        GaussianRational::zero()
    }

    fn one_in(_: ()) -> Self {
        GaussianRational::one()
    }

    fn from_rational_in(value: &Rational, _: ()) -> Self {
        GaussianRational::from_rational(value.clone())
    }

    fn from_gaussian_in(value: &GaussianRational, _: ()) -> Self {
        value.clone()
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negate(&self) -> Self {
        -self
    }

    fn try_div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn log2_magnitude(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let (a, b) = (log2_rational(&self.re), log2_rational(&self.im));
        let m = a.max(b);
        if m == f64::NEG_INFINITY {
            return None;
        }
        Some(m + 0.5 * ((a - m).exp2().powi(2) + (b - m).exp2().powi(2)).log2())
    }

    fn is_negligible(&self, _: Option<f64>) -> bool {
        self.is_zero()
    }

    fn resolution_bits(&self) -> Option<u32> {
        None
    }
}

impl Scalar for ComplexBig {
    type Ctx = Precision;

    fn ctx(&self) -> Precision {
        self.precision()
    }

    fn zero_in(ctx: Precision) -> Self {
        ComplexBig::zero(ctx)
    }

    fn one_in(ctx: Precision) -> Self {
        ComplexBig::one(ctx)
    }

    fn from_rational_in(value: &Rational, ctx: Precision) -> Self {
        ComplexBig::from_rational(value, ctx)
    }

    fn from_gaussian_in(value: &GaussianRational, ctx: Precision) -> Self {
        ComplexBig::from_gaussian(value, ctx)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn negate(&self) -> Self {
        self.neg()
    }

    fn try_div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn log2_magnitude(&self) -> Option<f64> {
        self.log2_abs()
    }

    fn is_negligible(&self, reference_log2: Option<f64>) -> bool {
        match self.log2_abs() {
            None => true,
            Some(l) => {
                let bound = reference_log2.unwrap_or(0.0) - f64::from(self.precision().bits() - NUMERIC_GUARD_BITS);
                l < bound
            }
        }
    }

    fn resolution_bits(&self) -> Option<u32> {
        Some(self.precision().bits())
    }
}
