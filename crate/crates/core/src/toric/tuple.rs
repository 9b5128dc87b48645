use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ToricError;
use crate::exact::{Combination, PhaseVector, Rational, SymbolBasis};
use crate::lattice::{
    dot, integer_kernel, saturated_basis, solve_integer_linear, solve_rational_system, IntMatrix,
};

/// Integer vectors `θ⁽ᵏ⁾` with complex coefficients `α_k` such that
/// `Σ α_k θ⁽ᵏ⁾ ≡ φ (mod ℤⁿ)`.
///
/// A reduced tuple has first coefficient `1/m` with `m ≥ 2`,
/// `gcd(m, θ⁽¹⁾) = 1`, and no rational part on the other coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricTuple {
    basis: SymbolBasis,
    n: usize,
    vectors: Vec<Vec<BigInt>>,
    coefficients: Vec<Combination>,
    reduced: bool,
    m: Option<BigInt>,
}

/// `m`, the generator `q ≥ 0` of `S = qℤ`, and `τ = m / gcd(m, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionReport {
    pub m: BigInt,
    pub q: BigInt,
    pub tau: BigInt,
}

impl TorsionReport {
    pub fn torsion_free() -> Self {
        Self {
            m: BigInt::one(),
            q: BigInt::zero(),
            tau: BigInt::one(),
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.tau.is_one()
    }
}

/// Output of [`toric_analysis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricAnalysis {
    pub degree: usize,
    /// A tuple of `degree` vectors; reduced exactly when the torsion exceeds 1.
    pub tuple: ToricTuple,
    /// The reduced candidate `(1/m)η + Σ α_k θ⁽ᵏ⁾`, present whenever `φ` has a
    /// nonzero rational part modulo the symbol lattice.
    pub candidate: Option<ToricTuple>,
    pub torsion: TorsionReport,
}

pub(crate) fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn coefficient_rows(coefficients: &[Combination], symbols: usize) -> Vec<Vec<Rational>> {
    coefficients
        .iter()
        .map(|c| {
            let mut row = vec![c.constant_part().clone()];
            row.extend((0..symbols).map(|s| c.coeff(s)));
            row
        })
        .collect()
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

impl ToricTuple {
    /// Checks dimensions, linear independence of the vectors and of the
    /// coefficients, and detects the reduced form.
    pub fn new(
        basis: SymbolBasis,
        n: usize,
        vectors: Vec<Vec<BigInt>>,
        coefficients: Vec<Combination>,
    ) -> Result<Self, ToricError> {
        if vectors.len() != coefficients.len() {
            return Err(ToricError::InvalidTuple("vector and coefficient counts differ".into()));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(ToricError::InvalidTuple("vector of wrong length".into()));
        }
        if coefficients
            .iter()
            .any(|c| c.max_symbol().is_some_and(|s| s >= basis.len()))
        {
            return Err(ToricError::InvalidTuple("coefficient uses an undeclared symbol".into()));
        }
        let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| to_rational(v)).collect();
        if rational_rank(&rows) != vectors.len() {
            return Err(ToricError::InvalidTuple("vectors are linearly dependent".into()));
        }
        if rational_rank(&coefficient_rows(&coefficients, basis.len())) != coefficients.len() {
            return Err(ToricError::InvalidTuple("coefficients are rationally dependent".into()));
        }
        let mut t = Self {
            basis,
            n,
            vectors,
            coefficients,
            reduced: false,
            m: None,
        };
        t.detect_reduced();
        Ok(t)
    }

    pub(crate) fn from_parts(
        basis: SymbolBasis,
        n: usize,
        vectors: Vec<Vec<BigInt>>,
        coefficients: Vec<Combination>,
    ) -> Self {
        let mut t = Self {
            basis,
            n,
            vectors,
            coefficients,
            reduced: false,
            m: None,
        };
        t.detect_reduced();
        t
    }

    fn detect_reduced(&mut self) {
        self.reduced = false;
        self.m = None;
        let Some(first) = self.coefficients.first() else {
            return;
        };
        if !first.is_rational() {
            return;
        }
        let c = first.constant_part();
        if !c.numer().is_one() || c.denom() < &BigInt::from(2) {
            return;
        }
        let m = c.denom().clone();
        if !gcd_all(&self.vectors[0]).gcd(&m).is_one() {
            return;
        }
        if self.coefficients[1..].iter().any(|b| !b.constant_part().is_zero()) {
            return;
        }
        self.reduced = true;
        self.m = Some(m);
    }

    /// The tuple of degree 0 representing `[0]ⁿ`.
    pub fn empty(basis: SymbolBasis, n: usize) -> Self {
        Self::from_parts(basis, n, Vec::new(), Vec::new())
    }

    pub fn basis(&self) -> &SymbolBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn coefficients(&self) -> &[Combination] {
        &self.coefficients
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn m(&self) -> Option<&BigInt> {
        self.m.as_ref()
    }

    /// The `n × r` matrix whose columns are the vectors.
    pub fn weight_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.vectors, self.n).expect("vectors of length n")
    }

    /// `Σ α_k θ⁽ᵏ⁾` as a phase vector.
    pub fn recombine(&self) -> PhaseVector {
        let values: Vec<Combination> = (0..self.n)
            .map(|j| {
                let mut acc = Combination::zero();
                for (v, c) in self.vectors.iter().zip(&self.coefficients) {
                    acc += &c.scale_int(&v[j]);
                }
                acc
            })
            .collect();
        PhaseVector::from_combinations(self.basis.clone(), values).expect("coefficients use the basis")
    }

    /// Whether the tuple recombines to `φ` modulo ℤⁿ.
    pub fn represents(&self, phi: &PhaseVector) -> bool {
        phi.dim() == self.n && phi.basis() == &self.basis && self.recombine() == *phi
    }

    /// Divides each vector by the gcd of its entries (scaling the coefficient
    /// up) and makes its first nonzero entry positive.
    pub fn normalized(&self) -> Self {
        let mut vectors = Vec::with_capacity(self.len());
        let mut coefficients = Vec::with_capacity(self.len());
        for (v, c) in self.vectors.iter().zip(&self.coefficients) {
            let mut g = gcd_all(v);
            if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
                g = -g;
            }
            vectors.push(v.iter().map(|x| x / &g).collect());
            coefficients.push(c.scale_int(&g));
        }
        Self::from_parts(self.basis.clone(), self.n, vectors, coefficients)
    }

    /// Same tuple with every coefficient's rational part reduced into `[0,1)`.
    fn with_reduced_constants(mut self) -> Self {
        for c in &mut self.coefficients {
            *c = c.mod_one();
        }
        self.detect_reduced();
        self
    }
}

/// Saturated basis `θ` of the span of the symbol-coefficient vectors and the
/// symbol-only coefficients `α` with `Σ_σ c_σ·σ = Σ_k α_k θ⁽ᵏ⁾`.
pub(crate) fn symbol_decomposition(phi: &PhaseVector) -> (Vec<Vec<BigInt>>, Vec<Combination>) {
    let n = phi.dim();
    let s = phi.basis().len();
    let columns: Vec<Vec<Rational>> = (0..s)
        .map(|sym| phi.symbol_vector(sym))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    if columns.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let theta = saturated_basis(&columns, n);
    let t = theta.len();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|l| theta.iter().map(|v| Rational::from_integer(v[l].clone())).collect())
        .collect();
    let mut alpha = vec![Combination::zero(); t];
    for sym in 0..s {
        let c = phi.symbol_vector(sym);
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let a = solve_rational_system(&rows, &c, t).expect("symbol vector lies in its own span");
        for (k, ak) in a.iter().enumerate() {
            alpha[k].add_symbol(sym, ak);
        }
    }
    (theta, alpha)
}

/// `q = gcd⟨b, η⟩` over a kernel basis of the rows `others`, and `τ = m/gcd(m,q)`.
pub(crate) fn torsion_of(eta: &[BigInt], m: &BigInt, others: &[Vec<BigInt>]) -> TorsionReport {
    let n = eta.len();
    let kernel = if others.is_empty() {
        IntMatrix::identity(n).to_rows()
    } else {
        integer_kernel(&IntMatrix::from_rows(others.to_vec(), n).expect("rows of length n"))
            .vectors()
            .to_vec()
    };
    let q = kernel.iter().fold(BigInt::zero(), |acc, b| acc.gcd(&dot(b, eta)));
    let tau = m / m.gcd(&q);
    TorsionReport {
        m: m.clone(),
        q,
        tau,
    }
}

/// Toric degree, a valid tuple, and the torsion of `φ`.
pub fn toric_analysis(phi: &PhaseVector) -> Result<ToricAnalysis, ToricError> {
    let n = phi.dim();
    let basis = phi.basis().clone();
    let (theta, alpha) = symbol_decomposition(phi);
    let t = theta.len();
    let r = phi.rational_vector();
    if r.iter().all(Zero::is_zero) {
        let tuple = ToricTuple::from_parts(basis, n, theta, alpha);
        return Ok(ToricAnalysis {
            degree: t,
            tuple,
            candidate: None,
            torsion: TorsionReport::torsion_free(),
        });
    }
    let m = phi.rational_denominator();
    let eta: Vec<BigInt> = r
        .iter()
        .map(|x| (x * Rational::from_integer(m.clone())).to_integer())
        .collect();
    let torsion = torsion_of(&eta, &m, &theta);
    let mut vectors = vec![eta];
    vectors.extend(theta);
    let mut coefficients = vec![Combination::constant(Rational::new(BigInt::one(), m.clone()))];
    coefficients.extend(alpha);
    let candidate = ToricTuple::from_parts(basis, n, vectors, coefficients);
    if torsion.is_torsion_free() {
        let tuple = eliminate_rational_coefficient(&candidate)?;
        Ok(ToricAnalysis {
            degree: t,
            tuple,
            candidate: Some(candidate),
            torsion,
        })
    } else {
        Ok(ToricAnalysis {
            degree: t + 1,
            tuple: candidate.clone(),
            candidate: Some(candidate),
            torsion,
        })
    }
}

pub fn torsion(phi: &PhaseVector) -> Result<TorsionReport, ToricError> {
    Ok(toric_analysis(phi)?.torsion)
}

/// Replaces `η_j` by `η_h` whenever `[φ_j] = [φ_h]` with `h < j` smallest.
fn make_compatible(tuple: &ToricTuple, phi: &PhaseVector) -> ToricTuple {
    let mut t = tuple.clone();
    for j in 0..t.n {
        if let Some(h) = (0..j).find(|&h| phi.same_class(h, j)) {
            let v = t.vectors[0][h].clone();
            t.vectors[0][j] = v;
        }
    }
    t.detect_reduced();
    t
}

/// A reduced tuple representing the same phase class.
///
/// An input that is already reduced after gcd normalization is returned as
/// is; otherwise the canonical reduced tuple of its recombination is built.
/// With `compatible`, `η⁽¹⁾` is made constant on classes of equal phases.
pub fn reduce_tuple(tuple: &ToricTuple, compatible: bool) -> Result<ToricTuple, ToricError> {
    let phi = tuple.recombine();
    let norm = tuple.normalized();
    let out = if norm.reduced {
        let m = norm.m.clone().expect("reduced tuples carry m");
        let rep = torsion_of(&norm.vectors[0], &m, &norm.vectors[1..]);
        if rep.is_torsion_free() {
            return Err(ToricError::TorsionFree);
        }
        norm
    } else {
        let analysis = toric_analysis(&phi)?;
        if analysis.torsion.is_torsion_free() {
            return Err(ToricError::TorsionFree);
        }
        analysis.tuple
    };
    Ok(if compatible { make_compatible(&out, &phi) } else { out })
}

/// Removes a rational first coefficient when the torsion is 1.
///
/// With `c·v = η/m` the first term, solves `Σ y_i Θ_i + m z = η` over ℤ
/// for a saturated basis `Θ` of the span of the remaining vectors `N`, then
/// rewrites `Σ y_i Θ_i / m` in `N`-coordinates and adds it to the remaining
/// coefficients.
pub fn eliminate_rational_coefficient(tuple: &ToricTuple) -> Result<ToricTuple, ToricError> {
    let n = tuple.n;
    let first = tuple
        .coefficients
        .first()
        .filter(|c| c.is_rational())
        .ok_or_else(|| ToricError::InvalidTuple("first coefficient must be rational".into()))?;
    let c = first.constant_part();
    let m = c.denom().clone();
    let eta: Vec<BigInt> = tuple.vectors[0].iter().map(|x| x * c.numer()).collect();
    let others = &tuple.vectors[1..];
    let rest = || {
        ToricTuple::from_parts(
            tuple.basis.clone(),
            n,
            others.to_vec(),
            tuple.coefficients[1..].to_vec(),
        )
    };
    if eta.iter().all(|x| x.is_multiple_of(&m)) {
        return Ok(rest().with_reduced_constants());
    }
    let span: Vec<Vec<Rational>> = others.iter().map(|v| to_rational(v)).collect();
    let theta = if span.is_empty() { Vec::new() } else { saturated_basis(&span, n) };
    let mut cols: Vec<Vec<BigInt>> = theta.clone();
    for l in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[l] = m.clone();
        cols.push(e);
    }
    let a = IntMatrix::from_columns(&cols, n).expect("columns of length n");
    let (sol, _) = solve_integer_linear(&a, &eta).ok_or_else(|| {
        let rep = torsion_of(&eta, &m, others);
        ToricError::NotEliminable { tau: rep.tau }
    })?;
    let mq = Rational::from_integer(m);
    let target: Vec<Rational> = (0..n)
        .map(|l| {
            theta
                .iter()
                .zip(&sol)
                .map(|(v, y)| Rational::from_integer(&v[l] * y))
                .sum::<Rational>()
                / &mq
        })
        .collect();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|l| others.iter().map(|v| Rational::from_integer(v[l].clone())).collect())
        .collect();
    let rho = solve_rational_system(&rows, &target, others.len()).expect("target lies in the span of N");
    let coefficients: Vec<Combination> = tuple.coefficients[1..]
        .iter()
        .zip(&rho)
        .map(|(b, p)| b + &Combination::constant(p.clone()))
        .collect();
    let out = ToricTuple::from_parts(tuple.basis.clone(), n, others.to_vec(), coefficients).with_reduced_constants();
    debug_assert_eq!(out.recombine(), tuple.recombine());
    Ok(out)
}
