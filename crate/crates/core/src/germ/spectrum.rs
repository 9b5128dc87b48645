use num_bigint::BigInt;
use num_traits::Signed;

use super::jet::JetMap;
use super::poly::{Monomial, Poly};
use super::scalar::Scalar;
use super::GermError;
use crate::exact::{is_integral_combination, BigFloat, ComplexBig, GaussianRational, PhaseVector, Precision, SymbolBasis};

/// Numeric value of a declared symbol, used only for divisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolValue {
    ImaginaryUnit,
    Sqrt(BigInt),
    Exact(GaussianRational),
}

impl SymbolValue {
    /// `i`/`I` and `sqrtN` for a positive integer `N`.
    pub fn recognize(name: &str) -> Option<Self> {
        if name == "i" || name == "I" {
            return Some(Self::ImaginaryUnit);
        }
        let digits = name.strip_prefix("sqrt")?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        n.is_positive().then_some(Self::Sqrt(n))
    }

    pub fn evaluate(&self, prec: Precision) -> ComplexBig {
        match self {
            Self::ImaginaryUnit => ComplexBig::i(prec),
            Self::Sqrt(n) => {
                let w = prec.extend(8);
                let r = BigFloat::from_int(n.clone()).sqrt(w).expect("positive radicand");
                ComplexBig::from_real(r, prec)
            }
            Self::Exact(g) => ComplexBig::from_gaussian(g, prec),
        }
    }
}

/// Values for every symbol of `basis`, recognized from the names.
pub fn recognize_symbol_values(basis: &SymbolBasis) -> Result<Vec<SymbolValue>, GermError> {
    basis
        .names()
        .iter()
        .map(|s| SymbolValue::recognize(s).ok_or_else(|| GermError::UnknownSymbolValue(s.clone())))
        .collect()
}

/// Eigenvalues of the linear part.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    /// Gaussian-rational eigenvalues; resonance is exact equality `λ^Q = λ_j`.
    Exact(Vec<GaussianRational>),
    /// `λ_j = e^{2πiφ_j}`; resonance is decided on the phases.
    Phase { phases: PhaseVector, values: Vec<SymbolValue> },
}

impl Spectrum {
    pub fn len(&self) -> usize {
        match self {
            Self::Exact(l) => l.len(),
            Self::Phase { phases, .. } => phases.dim(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn equal(&self, a: usize, b: usize) -> bool {
        match self {
            Self::Exact(l) => l[a] == l[b],
            Self::Phase { phases, .. } => phases.same_class(a, b),
        }
    }

    /// Numeric `λ_j` at precision `prec`.
    pub fn numeric(&self, prec: Precision) -> Vec<ComplexBig> {
        match self {
            Self::Exact(l) => l.iter().map(|x| ComplexBig::from_gaussian(x, prec)).collect(),
            Self::Phase { phases, values } => {
                let w = prec.extend(32);
                let sym: Vec<ComplexBig> = values.iter().map(|v| v.evaluate(w)).collect();
                let two_pi_i = ComplexBig::new(BigFloat::zero(), BigFloat::pi(w).mul_pow2(1), w);
                phases
                    .entries()
                    .iter()
                    .map(|e| {
                        let mut v = ComplexBig::from_rational(e.rational_part(), w);
                        for (s, c) in e.coeffs() {
                            v = v.add(&sym[*s].mul(&ComplexBig::from_rational(c, w)));
                        }
                        two_pi_i.mul(&v).exp().with_precision(prec)
                    })
                    .collect()
            }
        }
    }
}

/// A germ with linear part in Jordan form,
/// `f_j = λ_j z_j + ε_j z_{j−1} + Σ_{2≤|Q|≤D} f_{Q,j} z^Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Germ {
    degree: u32,
    spectrum: Spectrum,
    eps: Vec<bool>,
    terms: Vec<Poly<GaussianRational>>,
}

impl Germ {
    pub fn new(
        degree: u32,
        spectrum: Spectrum,
        eps: Vec<bool>,
        terms: Vec<Poly<GaussianRational>>,
    ) -> Result<Self, GermError> {
        let n = spectrum.len();
        if n == 0 || degree == 0 {
            return Err(GermError::InvalidJet("dimension and degree must be at least 1".into()));
        }
        if eps.len() != n || terms.len() != n {
            return Err(GermError::DimensionMismatch {
                expected: n,
                found: if eps.len() != n { eps.len() } else { terms.len() },
            });
        }
        if let Spectrum::Exact(l) = &spectrum {
            if let Some(j) = l.iter().position(GaussianRational::is_zero) {
                return Err(GermError::NotJordan(format!("eigenvalue {} is zero", j + 1)));
            }
        }
        if let Spectrum::Phase { phases, values } = &spectrum {
            if values.len() != phases.basis().len() {
                return Err(GermError::InvalidJet("one numeric value per symbol is required".into()));
            }
        }
        if eps[0] {
            return Err(GermError::NotJordan("the first coordinate cannot carry a nilpotent entry".into()));
        }
        for j in 1..n {
            if eps[j] && !spectrum.equal(j, j - 1) {
                return Err(GermError::NotJordan(format!(
                    "nilpotent entry at coordinate {} joins unequal eigenvalues",
                    j + 1
                )));
            }
        }
        for p in &terms {
            if p.nvars() != n {
                return Err(GermError::DimensionMismatch { expected: n, found: p.nvars() });
            }
            if p.min_degree().is_some_and(|d| d < 2) || p.max_degree().is_some_and(|d| d > degree) {
                return Err(GermError::InvalidJet(format!("term degrees must lie in [2, {degree}]")));
            }
        }
        Ok(Self {
            degree,
            spectrum,
            eps,
            terms,
        })
    }

    /// A germ with `λ_j = e^{2πiφ_j}`, symbol values recognized from their names.
    pub fn phase_linked(
        degree: u32,
        phases: PhaseVector,
        eps: Vec<bool>,
        terms: Vec<Poly<GaussianRational>>,
    ) -> Result<Self, GermError> {
        let values = recognize_symbol_values(phases.basis())?;
        Self::new(degree, Spectrum::Phase { phases, values }, eps, terms)
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eps(&self) -> &[bool] {
        &self.eps
    }

    pub fn terms(&self) -> &[Poly<GaussianRational>] {
        &self.terms
    }

    /// Same linear part with new higher-order terms.
    pub fn with_terms(&self, terms: Vec<Poly<GaussianRational>>) -> Result<Self, GermError> {
        Self::new(self.degree, self.spectrum.clone(), self.eps.clone(), terms)
    }

    /// Whether `λ^Q = λ_j`, decided exactly.
    pub fn is_resonant(&self, q: &[u32], j: usize) -> Result<bool, GermError> {
        match &self.spectrum {
            Spectrum::Exact(l) => {
                if q.len() != l.len() || j >= l.len() {
                    return Err(GermError::DimensionMismatch { expected: l.len(), found: q.len() });
                }
                let mut p = GaussianRational::one();
                for (x, &e) in l.iter().zip(q) {
                    p = &p * &x.pow(e);
                }
                Ok(p == l[j])
            }
            Spectrum::Phase { phases, .. } => Ok(is_integral_combination(phases, q, j)?),
        }
    }

    fn linear_entries<S: Scalar>(&self, lambda: &[S], ctx: S::Ctx) -> Vec<Poly<S>> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut p = Poly::monomial(n, Monomial::unit(n, j).0, lambda[j].clone());
                if self.eps[j] {
                    p.add_term(Monomial::unit(n, j - 1), S::one_in(ctx));
                }
                p
            })
            .collect()
    }

    /// The jet over ℚ(i); `None` in phase mode.
    pub fn exact_jet(&self) -> Option<JetMap<GaussianRational>> {
        let Spectrum::Exact(l) = &self.spectrum else {
            return None;
        };
        let comps = self
            .linear_entries(l, ())
            .into_iter()
            .zip(&self.terms)
            .map(|(a, b)| a.add(b))
            .collect();
        Some(JetMap::from_trusted(self.dim(), self.degree, (), comps))
    }

    pub fn numeric_jet(&self, prec: Precision) -> JetMap<ComplexBig> {
        let lambda = self.spectrum.numeric(prec);
        let comps = self
            .linear_entries(&lambda, prec)
            .into_iter()
            .zip(&self.terms)
            .map(|(a, b)| a.add(&b.map(prec, |c| ComplexBig::from_gaussian(c, prec))))
            .collect();
        JetMap::from_trusted(self.dim(), self.degree, prec, comps)
    }
}
