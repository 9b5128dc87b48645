//! Binary floating point over `BigInt` mantissas.
//!
//! A [`BigFloat`] is `mant·2^exp` with an odd mantissa (or zero); every
//! operation takes the mantissa width to round to. [`ComplexBig`] pairs two of
//! them with the precision they were computed at.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gaussian::GaussianRational;
use super::phase::{ExactError, Rational};

/// Mantissa width in bits; never below 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self, ExactError> {
        if bits < Self::MIN_BITS {
            Err(ExactError::PrecisionTooLow(bits))
        } else {
            Ok(Self(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn extend(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

fn strip(mut mant: BigInt, mut exp: i64) -> BigFloat {
    if mant.is_zero() {
        return BigFloat::zero();
    }
    if let Some(tz) = mant.trailing_zeros() {
        if tz > 0 {
            mant >>= tz;
            exp += tz as i64;
        }
    }
    BigFloat { mant, exp }
}

fn round(mant: BigInt, exp: i64, bits: u32) -> BigFloat {
    if mant.is_zero() {
        return BigFloat::zero();
    }
    let b = mant.bits();
    if b <= bits as u64 {
        return strip(mant, exp);
    }
    let shift = b - bits as u64;
    let neg = mant.is_negative();
    let mut a = mant.abs();
    a += BigInt::one() << (shift - 1);
    a >>= shift;
    strip(if neg { -a } else { a }, exp + shift as i64)
}

impl BigFloat {
    pub fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(value: BigInt) -> Self {
        strip(value, 0)
    }

    pub fn from_i64(value: i64) -> Self {
        Self::from_int(BigInt::from(value))
    }

    pub fn from_rational(value: &Rational, prec: Precision) -> Self {
        let num = Self::from_int(value.numer().clone());
        let den = Self::from_int(value.denom().clone());
        num.div(&den, prec).unwrap_or_default()
    }

    /// Nearest value for a finite `f64`.
    pub fn from_f64(value: f64) -> Self {
        if value == 0.0 || !value.is_finite() {
            return Self::zero();
        }
        let bits = value.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        strip(BigInt::from(m) * sign, e)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn mant_at(&self, e: i64) -> BigInt {
        if self.exp >= e {
            &self.mant << ((self.exp - e) as u64)
        } else {
            &self.mant >> ((e - self.exp) as u64)
        }
    }

    pub fn round_to(&self, prec: Precision) -> Self {
        round(self.mant.clone(), self.exp, prec.bits())
    }

    pub fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self, prec: Precision) -> Self {
        if self.is_zero() {
            return other.round_to(prec);
        }
        if other.is_zero() {
            return self.round_to(prec);
        }
        let top = self.top().max(other.top());
        let floor = top - prec.bits() as i64 - 32;
        let e = self.exp.min(other.exp).max(floor);
        round(self.mant_at(e) + other.mant_at(e), e, prec.bits())
    }

    pub fn sub(&self, other: &Self, prec: Precision) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: Precision) -> Self {
        round(&self.mant * &other.mant, self.exp + other.exp, prec.bits())
    }

    pub fn div(&self, other: &Self, prec: Precision) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let want = prec.bits() as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let shift = want.max(0);
        let q = (&self.mant << (shift as u64)) / &other.mant;
        Some(round(q, self.exp - other.exp - shift, prec.bits()))
    }

    pub fn sqrt(&self, prec: Precision) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let need = 2 * prec.bits() as i64 + 4 - self.mant.bits() as i64;
        let mut shift = need.max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let r = (&self.mant << (shift as u64)).sqrt();
        Some(round(r, (self.exp - shift) / 2, prec.bits()))
    }

    /// Approximate `log2 |x|`, `None` for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let b = self.mant.bits();
        let shift = b.saturating_sub(60);
        let top = (self.mant.abs() >> shift).to_f64().unwrap_or(1.0);
        Some(top.log2() + (self.exp + shift as i64) as f64)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits();
        let shift = b.saturating_sub(60);
        let top = (&self.mant >> shift).to_f64().unwrap_or(0.0);
        let k = self.exp + shift as i64;
        if k < -1200 {
            return 0.0 * top.signum();
        }
        if k > 1100 {
            return f64::INFINITY * top.signum();
        }
        top * (k as f64).exp2()
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let l2 = self.log2_abs().unwrap_or(0.0);
        let mut e10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let upper = num_traits::pow(ten.clone(), digits);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        let mut q;
        let mut guard = 0;
        loop {
            let k = digits as i64 - 1 - e10;
            let mut num = self.mant.abs();
            let mut den = BigInt::one();
            if k >= 0 {
                num *= num_traits::pow(ten.clone(), k as usize);
            } else {
                den *= num_traits::pow(ten.clone(), (-k) as usize);
            }
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            q = (&num * 2u32 + &den) / (&den * 2u32);
            guard += 1;
            if q >= upper && guard < 4 {
                e10 += 1;
            } else if q < lower && guard < 4 {
                e10 -= 1;
            } else {
                break;
            }
        }
        let s = q.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if self.is_negative() { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// π rounded to `prec` bits.
    pub fn pi(prec: Precision) -> Self {
        let w = prec.bits() as u64 + 40;
        let pi = atan_inv_fixed(5, w) * 16 - atan_inv_fixed(239, w) * 4;
        round(pi, -(w as i64), prec.bits())
    }
}

/// `atan(1/k)·2^w` truncated.
fn atan_inv_fixed(k: u32, w: u64) -> BigInt {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut term = (BigInt::one() << w) / BigInt::from(k);
    let mut sum = term.clone();
    let mut n: u64 = 1;
    loop {
        term /= &k2;
        if term.is_zero() {
            break;
        }
        let t = &term / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        n += 1;
    }
    sum
}

/// Complex value with both parts at a recorded precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexBig {
    pub re: BigFloat,
    pub im: BigFloat,
    prec: Precision,
}

impl ComplexBig {
    pub fn new(re: BigFloat, im: BigFloat, prec: Precision) -> Self {
        Self {
            re: re.round_to(prec),
            im: im.round_to(prec),
            prec,
        }
    }

    pub fn zero(prec: Precision) -> Self {
        Self {
            re: BigFloat::zero(),
            im: BigFloat::zero(),
            prec,
        }
    }

    pub fn one(prec: Precision) -> Self {
        Self::new(BigFloat::one(), BigFloat::zero(), prec)
    }

    pub fn i(prec: Precision) -> Self {
        Self::new(BigFloat::zero(), BigFloat::one(), prec)
    }

    pub fn from_real(re: BigFloat, prec: Precision) -> Self {
        Self::new(re, BigFloat::zero(), prec)
    }

    pub fn from_rational(value: &Rational, prec: Precision) -> Self {
        Self::new(BigFloat::from_rational(value, prec), BigFloat::zero(), prec)
    }

    pub fn from_gaussian(value: &GaussianRational, prec: Precision) -> Self {
        Self::new(
            BigFloat::from_rational(&value.re, prec),
            BigFloat::from_rational(&value.im, prec),
            prec,
        )
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn with_precision(&self, prec: Precision) -> Self {
        Self::new(self.re.clone(), self.im.clone(), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn joint(&self, other: &Self) -> Precision {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.joint(other);
        Self {
            re: self.re.add(&other.re, p),
            im: self.im.add(&other.im, p),
            prec: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.joint(other);
        Self {
            re: self.re.sub(&other.re, p),
            im: self.im.sub(&other.im, p),
            prec: p,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.joint(other);
        let w = p.extend(8);
        let rr = self.re.mul(&other.re, w);
        let ii = self.im.mul(&other.im, w);
        let ri = self.re.mul(&other.im, w);
        let ir = self.im.mul(&other.re, w);
        Self {
            re: rr.sub(&ii, p),
            im: ri.add(&ir, p),
            prec: p,
        }
    }

    pub fn scale(&self, factor: &BigFloat) -> Self {
        Self {
            re: self.re.mul(factor, self.prec),
            im: self.im.mul(factor, self.prec),
            prec: self.prec,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self {
            re: self.re.mul_pow2(k),
            im: self.im.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let w = self.prec.extend(8);
        self.re
            .mul(&self.re, w)
            .add(&self.im.mul(&self.im, w), self.prec)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec).unwrap_or_default()
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let p = self.joint(other);
        let w = p.extend(16);
        let den = other.norm_sqr().round_to(w);
        let den = if den.is_zero() {
            other.re.mul(&other.re, w).add(&other.im.mul(&other.im, w), w)
        } else {
            den
        };
        if den.is_zero() {
            return None;
        }
        let num = self.mul(&ComplexBig {
            re: other.re.clone(),
            im: other.im.neg(),
            prec: w,
        });
        Some(Self {
            re: num.re.div(&den, p)?,
            im: num.im.div(&den, p)?,
            prec: p,
        })
    }

    /// Approximate `log2 |z|`, `None` for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        match (self.re.log2_abs(), self.im.log2_abs()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => {
                let m = a.max(b);
                let s = (a - m).exp2().powi(2) + (b - m).exp2().powi(2);
                Some(m + 0.5 * s.log2())
            }
        }
    }

    /// `e^z` at the value's own precision.
    pub fn exp(&self) -> Self {
        let p = self.prec;
        let mag = match (self.re.log2_abs(), self.im.log2_abs()) {
            (None, None) => return Self::one(p),
            (a, b) => a.unwrap_or(f64::MIN).max(b.unwrap_or(f64::MIN)),
        };
        let s = if mag < -10.0 { 0 } else { (mag.ceil() as i64 + 10).max(0) as u32 };
        let w = p.extend(40 + s);
        let y = self.with_precision(w).mul_pow2(-(s as i64));
        let mut sum = Self::one(w);
        let mut term = Self::one(w);
        let mut n: i64 = 1;
        loop {
            term = term.mul(&y);
            let inv_n = BigFloat::one().div(&BigFloat::from_i64(n), w).unwrap_or_default();
            term = term.scale(&inv_n);
            sum = sum.add(&term);
            match term.log2_abs() {
                None => break,
                Some(l) if l < -(w.bits() as f64) - 4.0 => break,
                _ => {}
            }
            n += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum.with_precision(p)
    }

    /// `e^{2πi·x}` for real rational `x`.
    pub fn exp_two_pi_i(x: &Rational, prec: Precision) -> Self {
        let w = prec.extend(16);
        let arg = BigFloat::pi(w)
            .mul_pow2(1)
            .mul(&BigFloat::from_rational(x, w), w);
        ComplexBig::new(BigFloat::zero(), arg, w).exp().with_precision(prec)
    }

    pub fn to_decimal(&self) -> String {
        let digits = (self.prec.bits() as f64 * std::f64::consts::LOG10_2).floor() as usize;
        let re = self.re.to_decimal(digits);
        if self.im.is_negative() {
            format!("{} - {} I", re, self.im.neg().to_decimal(digits))
        } else {
            format!("{} + {} I", re, self.im.to_decimal(digits))
        }
    }
}

impl fmt::Display for ComplexBig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    #[test]
    fn precision_floor_enforced() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(64).unwrap().bits(), 64);
    }

    #[test]
    fn rational_round_trip_within_ulp() {
        let prec = p(128);
        let third = BigFloat::from_rational(&rat(1, 3), prec);
        let back = third.mul(&BigFloat::from_i64(3), prec);
        let err = back.sub(&BigFloat::one(), prec);
        assert!(err.log2_abs().map_or(true, |l| l < -125.0));
    }

    #[test]
    fn sqrt_two_squares_back() {
        let prec = p(200);
        let r = BigFloat::from_i64(2).sqrt(prec).unwrap();
        let err = r.mul(&r, prec).sub(&BigFloat::from_i64(2), prec);
        assert!(err.log2_abs().map_or(true, |l| l < -196.0));
    }

    #[test]
    fn pi_leading_digits() {
        let s = BigFloat::pi(p(128)).to_decimal(30);
        assert_eq!(s, "3.14159265358979323846264338328e0");
    }

    #[test]
    fn exp_one_leading_digits() {
        let e = ComplexBig::one(p(128)).exp();
        assert_eq!(e.re.to_decimal(30), "2.71828182845904523536028747135e0");
        assert!(e.im.is_zero());
    }

    #[test]
    fn full_turn_is_one() {
        let prec = p(256);
        let z = ComplexBig::exp_two_pi_i(&rat(1, 1), prec);
        let err = z.sub(&ComplexBig::one(prec));
        assert!(err.log2_abs().map_or(true, |l| l < -250.0));
        let half = ComplexBig::exp_two_pi_i(&rat(1, 2), prec);
        let err = half.add(&ComplexBig::one(prec));
        assert!(err.log2_abs().map_or(true, |l| l < -250.0));
    }

    #[test]
    fn division_inverts_multiplication() {
        let prec = p(160);
        let a = ComplexBig::from_gaussian(&GaussianRational::new(rat(3, 7), rat(-2, 5)), prec);
        let b = ComplexBig::from_gaussian(&GaussianRational::new(rat(1, 9), rat(4, 3)), prec);
        let q = a.mul(&b).checked_div(&b).unwrap();
        assert!(q.sub(&a).log2_abs().map_or(true, |l| l < -150.0));
        assert!(a.checked_div(&ComplexBig::zero(prec)).is_none());
    }

    #[test]
    fn f64_conversion_is_exact() {
        let x = BigFloat::from_f64(-0.375);
        assert_eq!(x, BigFloat::from_i64(-3).mul_pow2(-3));
        assert_eq!(x.to_f64(), -0.375);
    }
}
