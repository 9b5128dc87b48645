use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::jet::{JetMap, JetVectorField};
use super::poly::{Monomial, Poly};
use super::scalar::Scalar;
use super::GermError;
use crate::exact::{ComplexBig, Combination, GaussianRational, MultiIndex, Rational, SymbolBasis};
use crate::lattice::solve_rational_system;
use crate::toric::rational_rank;

const MAX_SERIES_TERMS: usize = 100_000;

fn matrix_is_nilpotent<S: Scalar>(m: &[Vec<S>], ctx: S::Ctx) -> bool {
    let n = m.len();
    let mul = |a: &[Vec<S>], b: &[Vec<S>]| -> Vec<Vec<S>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(S::zero_in(ctx), |acc, k| acc.plus(&a[i][k].times(&b[k][j]))))
                    .collect()
            })
            .collect()
    };
    let mut p = m.to_vec();
    for _ in 1..n {
        p = mul(&p, m);
    }
    p.iter().flatten().all(Scalar::vanishes)
}

/// `Σ_k t^k/k! Y^k(z_j)` for each `j`. Stops once a term vanishes identically
/// or, after the nilpotent transient, once terms drop below the resolution.
fn lie_series<S: Scalar>(y: &JetVectorField<S>, t: &S) -> Result<JetMap<S>, GermError> {
    let n = y.dim();
    let d = y.degree();
    let ctx = y.ctx();
    let growth = match (y.max_log2(), t.log2_magnitude()) {
        (Some(a), Some(b)) => (a + b).exp2(),
        _ => 0.0,
    };
    let transient = n * d as usize + 2 + (2.0 * growth).ceil() as usize;
    let mut comps = Vec::with_capacity(n);
    for j in 0..n {
        let mut term = Poly::variable(n, j, ctx);
        let mut sum = term.clone();
        let mut k = 1usize;
        loop {
            let factor = t.times(&S::from_rational_in(&Rational::new(BigInt::one(), BigInt::from(k)), ctx));
            term = y.apply(&term).scale(&factor);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
            if k > transient {
                let bits = f64::from(t.resolution_bits().unwrap_or(0)) + 8.0;
                let floor = sum.max_log2().unwrap_or(0.0).max(0.0) - bits;
                if term.max_log2().is_none_or(|l| l < floor) {
                    break;
                }
            }
            k += 1;
            if k > MAX_SERIES_TERMS {
                return Err(GermError::NoConvergence);
            }
        }
        comps.push(sum);
    }
    Ok(JetMap::from_trusted(n, d, ctx, comps))
}

/// First `(Q, j)` where `[X^dia, X − X^dia]` is nonzero, if any.
pub fn normal_form_witness<S: Scalar>(x: &JetVectorField<S>) -> Option<(MultiIndex, usize)> {
    let dia = x.diagonal_part();
    let rest = x.off_diagonal_part();
    let bracket = dia.lie_bracket(&rest).expect("same shape");
    let reference = match (dia.max_log2(), rest.max_log2()) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    bracket.significant_support(reference).into_iter().next()
}

/// Exact time-`t` flow of a field whose linear part is nilpotent.
pub fn flow_exact(x: &JetVectorField<GaussianRational>, t: &Rational) -> Result<JetMap<GaussianRational>, GermError> {
    if !matrix_is_nilpotent(&x.linear_matrix(), ()) {
        return Err(GermError::NonNilpotentLinear);
    }
    lie_series(x, &GaussianRational::from_rational(t.clone()))
}

/// Time-`t` flow in floating point. When `[X^dia, X − X^dia] = 0` the flow
/// is `exp(t X^dia) ∘ exp(t (X − X^dia))`; otherwise the Lie series of `X`.
pub fn flow_numeric(x: &JetVectorField<ComplexBig>, t: &ComplexBig) -> Result<JetMap<ComplexBig>, GermError> {
    if normal_form_witness(x).is_some() {
        return lie_series(x, t);
    }
    let diag: Vec<ComplexBig> = x.diagonal_values().iter().map(|p| p.mul(t).exp()).collect();
    let e = JetMap::diagonal(x.degree(), x.ctx(), &diag)?;
    e.compose(&lie_series(&x.off_diagonal_part(), t)?)
}

/// Time-`t` flow by the Lie series alone.
pub fn flow_series(x: &JetVectorField<ComplexBig>, t: &ComplexBig) -> Result<JetMap<ComplexBig>, GermError> {
    lie_series(x, t)
}

/// Outcome of [`flow_normal_form_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowCheck {
    pub passed: bool,
    /// `[X^dia, X − X^dia] = 0` to working precision.
    pub normal_form: bool,
    pub witness: Option<(MultiIndex, usize)>,
    /// `log2` of the largest coefficient of `F ∘ E − E ∘ F`.
    pub deviation_log2: Option<f64>,
}

/// Checks that the time-1 flow `F` of a normal-form field has lower
/// triangular linear part with diagonal `e^{φ_j}` and commutes with
/// `E = exp(X^dia)`. A field failing the normal-form test fails here with
/// the offending bracket term as witness.
pub fn flow_normal_form_check(x: &JetVectorField<ComplexBig>) -> Result<FlowCheck, GermError> {
    if let Some(w) = normal_form_witness(x) {
        return Ok(FlowCheck {
            passed: false,
            normal_form: false,
            witness: Some(w),
            deviation_log2: None,
        });
    }
    let prec = x.ctx();
    let n = x.dim();
    let f = lie_series(x, &ComplexBig::one(prec))?;
    let diag: Vec<ComplexBig> = x.diagonal_values().iter().map(ComplexBig::exp).collect();
    let lin = f.linear_matrix();
    let reference = f.max_log2();
    for j in 0..n {
        for h in 0..n {
            let bad = if h == j {
                !lin[j][j].sub(&diag[j]).is_negligible(reference)
            } else {
                h > j && !lin[j][h].is_negligible(reference)
            };
            if bad {
                return Ok(FlowCheck {
                    passed: false,
                    normal_form: true,
                    witness: Some((Monomial::unit(n, h).0, j)),
                    deviation_log2: None,
                });
            }
        }
    }
    let e = JetMap::diagonal(x.degree(), prec, &diag)?;
    let defect = f.compose(&e)?.sub(&e.compose(&f)?)?;
    let witness = defect.significant_support(reference).into_iter().next();
    Ok(FlowCheck {
        passed: witness.is_none(),
        normal_form: true,
        witness,
        deviation_log2: defect.max_log2(),
    })
}

/// Additive toric data of a diagonal field: `φ = Σ_{k≤r} α_k ρ⁽ᵏ⁾` in ℂⁿ with
/// integer `ρ⁽ᵏ⁾` and rationally independent `α_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VfToricDegree {
    pub r: usize,
    pub vectors: Vec<Vec<BigInt>>,
    pub coefficients: Vec<Combination>,
}

impl VfToricDegree {
    /// `Σ α_k ρ⁽ᵏ⁾`, coordinate by coordinate.
    pub fn recombine(&self, n: usize) -> Vec<Combination> {
        (0..n)
            .map(|j| {
                let mut acc = Combination::zero();
                for (v, c) in self.vectors.iter().zip(&self.coefficients) {
                    acc += &c.scale_int(&v[j]);
                }
                acc
            })
            .collect()
    }
}

fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.iter().map(|x| x / &g * &sign).collect()
}

/// Toric degree of `X^dia = Σ φ_j z_j ∂_j` with exact entries over `basis`.
///
/// The vectors are the first independent rows among the rational part and
/// the per-symbol coefficient vectors, scaled to primitive integer vectors.
pub fn vf_toric_degree(dia: &[Combination], basis: &SymbolBasis) -> Result<VfToricDegree, GermError> {
    let n = dia.len();
    if dia.iter().any(|c| c.max_symbol().is_some_and(|s| s >= basis.len())) {
        return Err(GermError::InvalidJet("diagonal entry uses an undeclared symbol".into()));
    }
    let mut sources: Vec<(Option<usize>, Vec<Rational>)> =
        vec![(None, dia.iter().map(|c| c.constant_part().clone()).collect())];
    sources.extend((0..basis.len()).map(|s| (Some(s), dia.iter().map(|c| c.coeff(s)).collect())));
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    for (_, v) in &sources {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if rational_rank(&trial) == trial.len() {
            chosen = trial;
        }
    }
    let vectors: Vec<Vec<BigInt>> = chosen.iter().map(|v| primitive(v)).collect();
    let r = vectors.len();
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|j| vectors.iter().map(|v| Rational::from_integer(v[j].clone())).collect())
        .collect();
    let mut coefficients = vec![Combination::zero(); r];
    for (sym, v) in &sources {
        let c = solve_rational_system(&a, v, r).expect("row lies in the chosen span");
        for (k, ck) in c.iter().enumerate() {
            let part = match sym {
                None => Combination::constant(ck.clone()),
                Some(s) => Combination::symbol(*s, ck.clone()),
            };
            coefficients[k] += &part;
        }
    }
    Ok(VfToricDegree {
        r,
        vectors,
        coefficients,
    })
}

/// The diagonal of an exact field as combinations over the basis `{i}`.
pub fn exact_diagonal(x: &JetVectorField<GaussianRational>) -> (SymbolBasis, Vec<Combination>) {
    let basis = SymbolBasis::new(["i"]).expect("single symbol");
    let dia = x
        .diagonal_values()
        .iter()
        .map(|v| Combination::from_parts(v.re.clone(), [(0, v.im.clone())]))
        .collect();
    (basis, dia)
}
