use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::scalar::Scalar;
use crate::exact::MultiIndex;
use crate::lattice::grlex_cmp_u32;

/// A multi-index ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub MultiIndex);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut q = vec![0; n];
        q[k] = 1;
        Monomial(q)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp_u32(&self.0, &other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All multi-indices of total degree `d` in `n` variables, graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// A polynomial in `n` variables with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    n: usize,
    ctx: S::Ctx,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(n: usize, ctx: S::Ctx) -> Self {
        Self {
            n,
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// The coordinate function `z_k`.
    pub fn variable(n: usize, k: usize, ctx: S::Ctx) -> Self {
        let mut p = Self::zero(n, ctx);
        p.add_term(Monomial::unit(n, k), S::one_in(ctx));
        p
    }

    pub fn monomial(n: usize, q: MultiIndex, c: S) -> Self {
        let mut p = Self::zero(n, c.ctx());
        p.add_term(Monomial(q), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q: &[u32]) -> Option<&S> {
        self.terms.get(&Monomial(q.to_vec()))
    }

    pub fn coeff_or_zero(&self, q: &[u32]) -> S {
        self.coeff(q).cloned().unwrap_or_else(|| S::zero_in(self.ctx))
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Adds `c·z^Q`, dropping the entry if it cancels exactly.
    pub fn add_term(&mut self, q: Monomial, c: S) {
        debug_assert_eq!(q.0.len(), self.n);
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&q) {
            Some(old) => {
                let s = old.plus(&c);
                if s.vanishes() {
                    self.terms.remove(&q);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(q, c);
            }
        }
    }

    pub fn set_term(&mut self, q: Monomial, c: S) {
        if c.vanishes() {
            self.terms.remove(&q);
        } else {
            self.terms.insert(q, c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &other.terms {
            out.add_term(q.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &other.terms {
            out.add_term(q.clone(), c.negate());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        for (q, a) in &self.terms {
            out.add_term(q.clone(), a.times(c));
        }
        out
    }

    /// Product with every term of degree above `max_degree` dropped.
    pub fn mul_trunc(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        for (p, a) in &self.terms {
            let dp = p.degree();
            if dp > max_degree {
                break;
            }
            for (q, b) in &other.terms {
                if dp + q.degree() > max_degree {
                    break;
                }
                let r: MultiIndex = p.0.iter().zip(&q.0).map(|(x, y)| x + y).collect();
                out.add_term(Monomial(r), a.times(b));
            }
        }
        out
    }

    /// Terms of degree at most `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        out.terms = self
            .terms
            .iter()
            .filter(|(q, _)| q.degree() <= max_degree)
            .map(|(q, c)| (q.clone(), c.clone()))
            .collect();
        out
    }

    /// Terms of degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        out.terms = self
            .terms
            .iter()
            .filter(|(q, _)| q.degree() == d)
            .map(|(q, c)| (q.clone(), c.clone()))
            .collect();
        out
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        for (q, c) in &self.terms {
            let e = q.0[k];
            if e == 0 {
                continue;
            }
            let mut r = q.0.clone();
            r[k] -= 1;
            let factor = S::from_rational_in(&crate::exact::int(i64::from(e)), self.ctx);
            out.add_term(Monomial(r), c.times(&factor));
        }
        out
    }

    /// `p(args₁, …, argsₙ)` truncated at `max_degree`; the arguments must
    /// have no constant term.
    pub fn compose(&self, args: &[Poly<S>], max_degree: u32) -> Self {
        debug_assert_eq!(args.len(), self.n);
        let m = args.first().map_or(self.n, Poly::nvars);
        let mut powers: Vec<Vec<Poly<S>>> = args
            .iter()
            .map(|_| vec![Poly::<S>::constant(m, S::one_in(self.ctx))])
            .collect();
        let mut out = Self::zero(m, self.ctx);
        for (q, c) in &self.terms {
            if q.degree() > max_degree {
                break;
            }
            let mut acc = Poly::<S>::constant(m, c.clone());
            for (k, &e) in q.0.iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().expect("seeded").mul_trunc(&args[k], max_degree);
                    powers[k].push(next);
                }
                if e > 0 {
                    acc = acc.mul_trunc(&powers[k][e as usize], max_degree);
                }
                if acc.is_zero() {
                    break;
                }
            }
            for (r, a) in acc.terms {
                out.add_term(r, a);
            }
        }
        out
    }

    fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n, c.ctx());
        p.add_term(Monomial(vec![0; n]), c);
        p
    }

    /// Largest `log2 |c|` over all coefficients.
    pub fn max_log2(&self) -> Option<f64> {
        self.terms
            .values()
            .filter_map(Scalar::log2_magnitude)
            .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.max(l))))
    }

    /// Drops coefficients that are negligible against `reference_log2`.
    pub fn prune(&self, reference_log2: Option<f64>) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        out.terms = self
            .terms
            .iter()
            .filter(|(_, c)| !c.is_negligible(reference_log2))
            .map(|(q, c)| (q.clone(), c.clone()))
            .collect();
        out
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::<T>::zero(self.n, ctx);
        for (q, c) in &self.terms {
            out.add_term(q.clone(), f(c));
        }
        out
    }
}
