use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

/// Exponent vector of a monomial `z^Q`.
pub type MultiIndex = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("phase vector must have at least one entry")]
    Empty,
    #[error("entries use different symbol bases")]
    BasisMismatch,
    #[error("precision {0} bits is below the 64-bit minimum")]
    PrecisionTooLow(u32),
}

/// Ordered list of distinct symbol names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolBasis {
    names: Vec<String>,
}

impl SymbolBasis {
    pub fn new<I, S>(names: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if out.contains(&name) {
                return Err(ExactError::DuplicateSymbol(name));
            }
            out.push(name);
        }
        Ok(Self { names: out })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }
}

/// An element `c + Σ a_s·s` of `ℚ ⊕ ℚ^symbols`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Combination {
    constant: Rational,
    coeffs: BTreeMap<usize, Rational>,
}

impl Combination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            constant: value,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn symbol(index: usize, coeff: Rational) -> Self {
        let mut out = Self::zero();
        out.add_symbol(index, &coeff);
        out
    }

    pub fn from_parts(constant: Rational, coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut out = Self::constant(constant);
        for (s, c) in coeffs {
            out.add_symbol(s, &c);
        }
        out
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, symbol: usize) -> Rational {
        self.coeffs.get(&symbol).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn symbol_part(&self) -> Combination {
        Self {
            constant: Rational::zero(),
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn add_symbol(&mut self, symbol: usize, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(symbol).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&symbol);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_integer()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            constant: &self.constant * factor,
            coeffs: self.coeffs.iter().map(|(&s, c)| (s, c * factor)).collect(),
        }
    }

    pub fn scale_int(&self, factor: &BigInt) -> Self {
        self.scale(&Rational::from_integer(factor.clone()))
    }

    /// Same symbol part, constant reduced into `[0,1)`.
    pub fn mod_one(&self) -> Self {
        Self {
            constant: frac(&self.constant),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Largest symbol index used, if any.
    pub fn max_symbol(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn display(&self, basis: &SymbolBasis) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            parts.push((self.constant.is_negative(), self.constant.abs().to_string()));
        }
        for (s, c) in &self.coeffs {
            let name = basis.names.get(*s).map(String::as_str).unwrap_or("?");
            let mag = c.abs();
            let body = if mag.is_one() {
                name.to_string()
            } else {
                format!("{mag}*{name}")
            };
            parts.push((c.is_negative(), body));
        }
        let mut out = String::new();
        for (k, (neg, body)) in parts.into_iter().enumerate() {
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

/// Fractional part in `[0,1)`.
pub(crate) fn frac(value: &Rational) -> Rational {
    value - value.floor()
}

impl<'a> Add<&'a Combination> for &'a Combination {
    type Output = Combination;
    fn add(self, rhs: &'a Combination) -> Combination {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Combination> for &'a Combination {
    type Output = Combination;
    fn sub(self, rhs: &'a Combination) -> Combination {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> AddAssign<&'a Combination> for Combination {
    fn add_assign(&mut self, rhs: &'a Combination) {
        self.constant += &rhs.constant;
        for (s, c) in &rhs.coeffs {
            self.add_symbol(*s, c);
        }
    }
}

impl<'a> SubAssign<&'a Combination> for Combination {
    fn sub_assign(&mut self, rhs: &'a Combination) {
        self.constant -= &rhs.constant;
        for (s, c) in &rhs.coeffs {
            self.add_symbol(*s, &-c);
        }
    }
}

impl Neg for &Combination {
    type Output = Combination;
    fn neg(self) -> Combination {
        self.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a Rational> for &'a Combination {
    type Output = Combination;
    fn mul(self, rhs: &'a Rational) -> Combination {
        self.scale(rhs)
    }
}

/// One phase class `[φ_j] ∈ ℂ/ℤ`.
///
/// Invariant: the rational part lies in `[0,1)`, so equality of classes is
/// structural equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PhaseScalar {
    value: Combination,
}

impl PhaseScalar {
    pub fn new(value: Combination) -> Self {
        Self {
            value: value.mod_one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational_part(&self) -> &Rational {
        &self.value.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.value.coeffs
    }

    pub fn as_combination(&self) -> &Combination {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, other: &PhaseScalar) -> PhaseScalar {
        PhaseScalar::new(&self.value + &other.value)
    }

    pub fn sub(&self, other: &PhaseScalar) -> PhaseScalar {
        PhaseScalar::new(&self.value - &other.value)
    }

    pub fn scale_int(&self, factor: &BigInt) -> PhaseScalar {
        PhaseScalar::new(self.value.scale_int(factor))
    }
}

/// Sums like terms of `Σ c·symbol` (or `c` alone) and reduces the rational part into `[0,1)`.
pub fn phase_from_terms(
    basis: &SymbolBasis,
    terms: &[(Rational, Option<&str>)],
) -> Result<PhaseScalar, ExactError> {
    let mut value = Combination::zero();
    for (c, sym) in terms {
        match sym {
            None => value.constant += c,
            Some(name) => {
                let idx = basis
                    .index_of(name)
                    .ok_or_else(|| ExactError::UnknownSymbol((*name).to_string()))?;
                value.add_symbol(idx, c);
            }
        }
    }
    Ok(PhaseScalar::new(value))
}

/// The class `[φ] ∈ (ℂ/ℤ)ⁿ` over a fixed symbol basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseVector {
    basis: SymbolBasis,
    entries: Vec<PhaseScalar>,
}

impl PhaseVector {
    pub fn new(basis: SymbolBasis, entries: Vec<PhaseScalar>) -> Result<Self, ExactError> {
        if entries.is_empty() {
            return Err(ExactError::Empty);
        }
        for e in &entries {
            if let Some(s) = e.value.max_symbol() {
                if s >= basis.len() {
                    return Err(ExactError::BasisMismatch);
                }
            }
        }
        Ok(Self { basis, entries })
    }

    pub fn from_combinations(basis: SymbolBasis, values: Vec<Combination>) -> Result<Self, ExactError> {
        Self::new(basis, values.into_iter().map(PhaseScalar::new).collect())
    }

    /// `[0]ⁿ` over the given basis.
    pub fn zeros(basis: SymbolBasis, n: usize) -> Result<Self, ExactError> {
        Self::new(basis, vec![PhaseScalar::zero(); n])
    }

    pub fn basis(&self) -> &SymbolBasis {
        &self.basis
    }

    pub fn entries(&self) -> &[PhaseScalar] {
        &self.entries
    }

    pub fn entry(&self, j: usize) -> &PhaseScalar {
        &self.entries[j]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `⟨Q, φ⟩` evaluated on the `[0,1)` representatives.
    pub fn pairing(&self, q: &[u32]) -> Result<Combination, ExactError> {
        if q.len() != self.dim() {
            return Err(ExactError::DimensionMismatch {
                expected: self.dim(),
                found: q.len(),
            });
        }
        let mut out = Combination::zero();
        for (qh, e) in q.iter().zip(&self.entries) {
            if *qh != 0 {
                out += &e.value.scale_int(&BigInt::from(*qh));
            }
        }
        Ok(out)
    }

    /// `⟨v, φ⟩` for an integer vector.
    pub fn pairing_int(&self, v: &[BigInt]) -> Combination {
        let mut out = Combination::zero();
        for (vh, e) in v.iter().zip(&self.entries) {
            if !vh.is_zero() {
                out += &e.value.scale_int(vh);
            }
        }
        out
    }

    /// Whether `[φ_j] = [φ_h]`.
    pub fn same_class(&self, j: usize, h: usize) -> bool {
        self.entries[j] == self.entries[h]
    }

    /// The vector of rational parts.
    pub fn rational_vector(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.value.constant.clone()).collect()
    }

    /// The coefficient vector of one symbol across coordinates.
    pub fn symbol_vector(&self, symbol: usize) -> Vec<Rational> {
        self.entries.iter().map(|e| e.value.coeff(symbol)).collect()
    }

    /// Lowest common denominator of all rational parts.
    pub fn rational_denominator(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.value.constant.denom()))
    }
}

/// Decides `⟨Q,φ⟩ − φ_j ∈ ℤ` exactly: every symbol coefficient vanishes and the
/// rational part is an integer.
pub fn is_integral_combination(phi: &PhaseVector, q: &[u32], j: usize) -> Result<bool, ExactError> {
    if j >= phi.dim() {
        return Err(ExactError::CoordinateOutOfRange {
            index: j,
            dim: phi.dim(),
        });
    }
    let mut value = phi.pairing(q)?;
    value -= &phi.entries[j].value;
    Ok(value.is_integer())
}

impl fmt::Display for PhaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| e.value.display(&self.basis))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
