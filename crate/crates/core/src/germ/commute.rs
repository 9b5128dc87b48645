use super::jet::{JetMap, JetVectorField};
use super::poly::Poly;
use super::scalar::Scalar;
use super::GermError;
use crate::exact::{ComplexBig, MultiIndex, Precision, Rational};
use crate::lattice::IntMatrix;
use crate::toric::theta_resonant;

/// Outcome of a commutation test; `witnesses` lists offending `(Q, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    pub commutes: bool,
    pub witnesses: Vec<(MultiIndex, usize)>,
    /// Largest `log2` of a defect coefficient, `None` when exactly zero.
    pub max_deviation_log2: Option<f64>,
}

/// Whether `f` commutes with the torus action of weight matrix `Θ` (`n × r`):
/// every stored coefficient, linear ones included, must sit on a
/// Θ-resonant monomial.
pub fn commutation_check<S: Scalar>(f: &JetMap<S>, theta: &IntMatrix) -> Result<CommutationReport, GermError> {
    if theta.rows() != f.dim() {
        return Err(GermError::DimensionMismatch {
            expected: f.dim(),
            found: theta.rows(),
        });
    }
    let witnesses: Vec<(MultiIndex, usize)> = f
        .support()
        .into_iter()
        .filter(|(q, j)| !theta_resonant(q, *j, theta))
        .collect();
    Ok(CommutationReport {
        commutes: witnesses.is_empty(),
        witnesses,
        max_deviation_log2: None,
    })
}

/// `max |f(A z) − A f(z)|` over jet coefficients, with
/// `A = diag(e^{2πi (Θx)_j})`; `None` when it vanishes.
pub fn commutation_spot_check(
    f: &JetMap<ComplexBig>,
    theta: &IntMatrix,
    x: &[Rational],
    prec: Precision,
) -> Result<Option<f64>, GermError> {
    if theta.rows() != f.dim() || theta.cols() != x.len() {
        return Err(GermError::DimensionMismatch {
            expected: f.dim(),
            found: theta.rows(),
        });
    }
    let angles: Vec<Rational> = (0..f.dim())
        .map(|j| {
            theta
                .row(j)
                .iter()
                .zip(x)
                .map(|(t, xk)| xk * Rational::from_integer(t.clone()))
                .sum()
        })
        .collect();
    let a: Vec<ComplexBig> = angles.iter().map(|t| ComplexBig::exp_two_pi_i(t, prec)).collect();
    let action = JetMap::diagonal(f.degree(), prec, &a)?;
    let lhs = f.compose(&action)?;
    let rhs = action.compose(f)?;
    Ok(lhs.sub(&rhs)?.max_log2())
}

/// `df · X − X ∘ f` truncated at `D`.
pub fn field_defect<S: Scalar>(f: &JetMap<S>, x: &JetVectorField<S>) -> Result<JetMap<S>, GermError> {
    if f.dim() != x.dim() {
        return Err(GermError::DimensionMismatch {
            expected: f.dim(),
            found: x.dim(),
        });
    }
    if f.degree() != x.degree() {
        return Err(GermError::DegreeMismatch {
            expected: f.degree(),
            found: x.degree(),
        });
    }
    let d = f.degree();
    let comps: Vec<Poly<S>> = (0..f.dim())
        .map(|j| {
            let push = x.apply(f.component(j));
            let pull = x.components()[j].compose(f.components(), d);
            push.sub(&pull)
        })
        .collect();
    JetMap::new(f.dim(), d, f.ctx(), comps)
}

/// Whether `df(X) = X ∘ f` modulo degree `D+1`, exactly or to working precision.
pub fn commutes_with_field<S: Scalar>(f: &JetMap<S>, x: &JetVectorField<S>) -> Result<CommutationReport, GermError> {
    let defect = field_defect(f, x)?;
    let reference = match (f.max_log2(), x.max_log2()) {
        (Some(a), Some(b)) => Some(a + b.max(0.0)),
        (a, b) => a.or(b),
    };
    let witnesses = defect.significant_support(reference);
    Ok(CommutationReport {
        commutes: witnesses.is_empty(),
        witnesses,
        max_deviation_log2: defect.max_log2(),
    })
}
