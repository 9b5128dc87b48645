use super::poly::{Monomial, Poly};
use super::scalar::Scalar;
use super::GermError;
use crate::exact::MultiIndex;

fn check_components<S: Scalar>(n: usize, degree: u32, components: &[Poly<S>]) -> Result<(), GermError> {
    if n == 0 {
        return Err(GermError::InvalidJet("dimension must be at least 1".into()));
    }
    if degree == 0 {
        return Err(GermError::InvalidJet("truncation degree must be at least 1".into()));
    }
    if components.len() != n {
        return Err(GermError::DimensionMismatch {
            expected: n,
            found: components.len(),
        });
    }
    for p in components {
        if p.nvars() != n {
            return Err(GermError::DimensionMismatch {
                expected: n,
                found: p.nvars(),
            });
        }
        if p.min_degree() == Some(0) {
            return Err(GermError::NotSingular);
        }
        if p.max_degree().is_some_and(|d| d > degree) {
            return Err(GermError::InvalidJet(format!("a term exceeds the truncation degree {degree}")));
        }
    }
    Ok(())
}

fn support_of<S: Scalar>(components: &[Poly<S>]) -> Vec<(MultiIndex, usize)> {
    components
        .iter()
        .enumerate()
        .flat_map(|(j, p)| p.terms().map(move |(q, _)| (q.0.clone(), j)))
        .collect()
}

fn max_log2_of<S: Scalar>(components: &[Poly<S>]) -> Option<f64> {
    components
        .iter()
        .filter_map(Poly::max_log2)
        .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.max(l))))
}

fn linear_matrix_of<S: Scalar>(n: usize, ctx: S::Ctx, components: &[Poly<S>]) -> Vec<Vec<S>> {
    components
        .iter()
        .map(|p| {
            (0..n)
                .map(|h| p.coeff(&Monomial::unit(n, h).0).cloned().unwrap_or_else(|| S::zero_in(ctx)))
                .collect()
        })
        .collect()
}

fn linear_components<S: Scalar>(n: usize, ctx: S::Ctx, matrix: &[Vec<S>]) -> Vec<Poly<S>> {
    matrix
        .iter()
        .map(|row| {
            let mut p = Poly::zero(n, ctx);
            for (h, c) in row.iter().enumerate() {
                p.add_term(Monomial::unit(n, h), c.clone());
            }
            p
        })
        .collect()
}

/// The `D`-jet of a map `(ℂⁿ,0) → (ℂⁿ,0)`: component `j` is `f_j` truncated
/// at total degree `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetMap<S: Scalar> {
    n: usize,
    degree: u32,
    ctx: S::Ctx,
    components: Vec<Poly<S>>,
}

impl<S: Scalar> JetMap<S> {
    pub fn new(n: usize, degree: u32, ctx: S::Ctx, components: Vec<Poly<S>>) -> Result<Self, GermError> {
        check_components(n, degree, &components)?;
        Ok(Self {
            n,
            degree,
            ctx,
            components,
        })
    }

    pub fn identity(n: usize, degree: u32, ctx: S::Ctx) -> Self {
        Self {
            n,
            degree,
            ctx,
            components: (0..n).map(|k| Poly::variable(n, k, ctx)).collect(),
        }
    }

    /// The linear map `z ↦ M z` (rows of `M` are components).
    pub fn linear(n: usize, degree: u32, ctx: S::Ctx, matrix: &[Vec<S>]) -> Result<Self, GermError> {
        Self::new(n, degree, ctx, linear_components(n, ctx, matrix))
    }

    pub fn diagonal(degree: u32, ctx: S::Ctx, values: &[S]) -> Result<Self, GermError> {
        let n = values.len();
        let comps = values
            .iter()
            .enumerate()
            .map(|(k, v)| Poly::monomial(n, Monomial::unit(n, k).0, v.clone()))
            .collect();
        Self::new(n, degree, ctx, comps)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn components(&self) -> &[Poly<S>] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &Poly<S> {
        &self.components[j]
    }

    pub fn coeff(&self, q: &[u32], j: usize) -> S {
        self.components[j].coeff_or_zero(q)
    }

    fn check_same(&self, n: usize, degree: u32) -> Result<(), GermError> {
        if n != self.n {
            return Err(GermError::DimensionMismatch { expected: self.n, found: n });
        }
        if degree != self.degree {
            return Err(GermError::DegreeMismatch {
                expected: self.degree,
                found: degree,
            });
        }
        Ok(())
    }

    /// The jet of `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Result<Self, GermError> {
        self.check_same(g.n, g.degree)?;
        Ok(Self {
            n: self.n,
            degree: self.degree,
            ctx: self.ctx,
            components: self
                .components
                .iter()
                .map(|p| p.compose(&g.components, self.degree))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GermError> {
        self.check_same(other.n, other.degree)?;
        Ok(self.zip_with(other, Poly::sub))
    }

    pub fn add(&self, other: &Self) -> Result<Self, GermError> {
        self.check_same(other.n, other.degree)?;
        Ok(self.zip_with(other, Poly::add))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Poly<S>, &Poly<S>) -> Poly<S>) -> Self {
        Self {
            n: self.n,
            degree: self.degree,
            ctx: self.ctx,
            components: self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Rows are components: entry `(j, h)` is the coefficient of `z_h` in `f_j`.
    pub fn linear_matrix(&self) -> Vec<Vec<S>> {
        linear_matrix_of(self.n, self.ctx, &self.components)
    }

    pub fn linear_part(&self) -> Self {
        self.restrict(|d| d == 1)
    }

    pub fn nonlinear_part(&self) -> Self {
        self.restrict(|d| d >= 2)
    }

    pub fn homogeneous(&self, d: u32) -> Self {
        self.restrict(|e| e == d)
    }

    fn restrict(&self, keep: impl Fn(u32) -> bool) -> Self {
        let components = self
            .components
            .iter()
            .map(|p| {
                let mut out = Poly::zero(self.n, self.ctx);
                for (q, c) in p.terms() {
                    if keep(q.degree()) {
                        out.add_term(q.clone(), c.clone());
                    }
                }
                out
            })
            .collect();
        Self { components, ..self.clone() }
    }

    /// Same jet at a lower truncation degree.
    pub fn truncate(&self, degree: u32) -> Self {
        Self {
            n: self.n,
            degree,
            ctx: self.ctx,
            components: self.components.iter().map(|p| p.truncate(degree)).collect(),
        }
    }

    /// Positions `(Q, j)` of the stored coefficients, by component then graded-lex.
    pub fn support(&self) -> Vec<(MultiIndex, usize)> {
        support_of(&self.components)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn max_log2(&self) -> Option<f64> {
        max_log2_of(&self.components)
    }

    /// Positions whose coefficient is not negligible against `reference_log2`.
    pub fn significant_support(&self, reference_log2: Option<f64>) -> Vec<(MultiIndex, usize)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(j, p)| {
                p.terms()
                    .filter(|(_, c)| !c.is_negligible(reference_log2))
                    .map(move |(q, _)| (q.0.clone(), j))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> JetMap<T> {
        JetMap {
            n: self.n,
            degree: self.degree,
            ctx,
            components: self.components.iter().map(|p| p.map(ctx, &f)).collect(),
        }
    }

    pub(crate) fn from_trusted(n: usize, degree: u32, ctx: S::Ctx, components: Vec<Poly<S>>) -> Self {
        Self {
            n,
            degree,
            ctx,
            components,
        }
    }
}

/// The `D`-jet of a holomorphic vector field `Σ X_j ∂_j` vanishing at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVectorField<S: Scalar> {
    n: usize,
    degree: u32,
    ctx: S::Ctx,
    components: Vec<Poly<S>>,
}

impl<S: Scalar> JetVectorField<S> {
    pub fn new(n: usize, degree: u32, ctx: S::Ctx, components: Vec<Poly<S>>) -> Result<Self, GermError> {
        check_components(n, degree, &components)?;
        Ok(Self {
            n,
            degree,
            ctx,
            components,
        })
    }

    pub fn zero(n: usize, degree: u32, ctx: S::Ctx) -> Self {
        Self {
            n,
            degree,
            ctx,
            components: (0..n).map(|_| Poly::zero(n, ctx)).collect(),
        }
    }

    /// `Σ φ_j z_j ∂_j`.
    pub fn diagonal(degree: u32, ctx: S::Ctx, phi: &[S]) -> Result<Self, GermError> {
        let n = phi.len();
        let comps = phi
            .iter()
            .enumerate()
            .map(|(k, v)| Poly::monomial(n, Monomial::unit(n, k).0, v.clone()))
            .collect();
        Self::new(n, degree, ctx, comps)
    }

    /// `Σ_j (M z)_j ∂_j`.
    pub fn linear(n: usize, degree: u32, ctx: S::Ctx, matrix: &[Vec<S>]) -> Result<Self, GermError> {
        Self::new(n, degree, ctx, linear_components(n, ctx, matrix))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn components(&self) -> &[Poly<S>] {
        &self.components
    }

    pub fn coeff(&self, q: &[u32], j: usize) -> S {
        self.components[j].coeff_or_zero(q)
    }

    /// Adds `c·z^Q ∂_j`.
    pub fn add_term(&mut self, q: MultiIndex, j: usize, c: S) -> Result<(), GermError> {
        let d: u32 = q.iter().sum();
        if q.len() != self.n || j >= self.n {
            return Err(GermError::DimensionMismatch { expected: self.n, found: q.len() });
        }
        if d == 0 {
            return Err(GermError::NotSingular);
        }
        if d > self.degree {
            return Err(GermError::InvalidJet(format!("a term exceeds the truncation degree {}", self.degree)));
        }
        self.components[j].add_term(Monomial(q), c);
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<(), GermError> {
        if other.n != self.n {
            return Err(GermError::DimensionMismatch { expected: self.n, found: other.n });
        }
        if other.degree != self.degree {
            return Err(GermError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// The derivation `X(g) = Σ X_i ∂_i g`, truncated at `D`.
    pub fn apply(&self, g: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero(self.n, self.ctx);
        for (i, xi) in self.components.iter().enumerate() {
            let dg = g.derivative(i);
            if !dg.is_zero() && !xi.is_zero() {
                out = out.add(&xi.mul_trunc(&dg, self.degree));
            }
        }
        out
    }

    pub fn lie_bracket(&self, other: &Self) -> Result<Self, GermError> {
        self.check_same(other)?;
        let components = (0..self.n)
            .map(|j| self.apply(&other.components[j]).sub(&other.apply(&self.components[j])))
            .collect();
        Ok(Self {
            components,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, GermError> {
        self.check_same(other)?;
        Ok(Self {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GermError> {
        self.check_same(other)?;
        Ok(Self {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// Coefficient of `z_j ∂_j` for each `j`.
    pub fn diagonal_values(&self) -> Vec<S> {
        (0..self.n)
            .map(|j| self.components[j].coeff_or_zero(&Monomial::unit(self.n, j).0))
            .collect()
    }

    /// `X^dia`.
    pub fn diagonal_part(&self) -> Self {
        Self::diagonal(self.degree, self.ctx, &self.diagonal_values()).expect("same shape")
    }

    /// `X − X^dia`: the off-diagonal linear part plus all higher terms.
    pub fn off_diagonal_part(&self) -> Self {
        self.sub(&self.diagonal_part()).expect("same shape")
    }

    pub fn linear_matrix(&self) -> Vec<Vec<S>> {
        linear_matrix_of(self.n, self.ctx, &self.components)
    }

    pub fn support(&self) -> Vec<(MultiIndex, usize)> {
        support_of(&self.components)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn max_log2(&self) -> Option<f64> {
        max_log2_of(&self.components)
    }

    pub fn significant_support(&self, reference_log2: Option<f64>) -> Vec<(MultiIndex, usize)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(j, p)| {
                p.terms()
                    .filter(|(_, c)| !c.is_negligible(reference_log2))
                    .map(move |(q, _)| (q.0.clone(), j))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> JetVectorField<T> {
        JetVectorField {
            n: self.n,
            degree: self.degree,
            ctx,
            components: self.components.iter().map(|p| p.map(ctx, &f)).collect(),
        }
    }
}

/// `[X, Y]` truncated at the common degree.
pub fn lie_bracket<S: Scalar>(x: &JetVectorField<S>, y: &JetVectorField<S>) -> Result<JetVectorField<S>, GermError> {
    x.lie_bracket(y)
}

/// Jet of `f ∘ g`.
pub fn compose<S: Scalar>(f: &JetMap<S>, g: &JetMap<S>) -> Result<JetMap<S>, GermError> {
    f.compose(g)
}
