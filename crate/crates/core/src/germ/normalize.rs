use super::jet::JetMap;
use super::poly::{monomials_of_degree, Monomial, Poly};
use super::scalar::Scalar;
use super::spectrum::{Germ, Spectrum};
use super::GermError;
use crate::exact::{ComplexBig, GaussianRational, MultiIndex, Precision};
use crate::toric::resonance_descriptor;

/// `f ∘ ψ = ψ ∘ g` modulo degree `D+1`, with `ψ` tangent to the identity and
/// `g` carrying only resonant monomials beyond the linear part.
#[derive(Debug, Clone, PartialEq)]
pub struct PdNormalization<S: Scalar> {
    pub psi: JetMap<S>,
    pub g: JetMap<S>,
    /// `f ∘ ψ − ψ ∘ g`.
    pub residual: JetMap<S>,
    /// Largest `log2 |f_{Q,j}|`.
    pub reference_log2: Option<f64>,
    /// Largest coefficient `log2` of `f ∘ ψ` and `ψ ∘ g`, the two sides
    /// whose difference is the residual.
    pub scale_log2: Option<f64>,
}

impl<S: Scalar> PdNormalization<S> {
    /// `None` when the residual vanishes identically.
    pub fn residual_log2(&self) -> Option<f64> {
        self.residual.max_log2()
    }

    /// Residual magnitude relative to the sides of the conjugacy identity.
    pub fn relative_residual_log2(&self) -> Option<f64> {
        self.residual_log2().map(|r| r - self.scale_log2.unwrap_or(0.0).max(0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Normalization {
    Exact(PdNormalization<GaussianRational>),
    Numeric(PdNormalization<ComplexBig>),
}

impl Normalization {
    pub fn residual_log2(&self) -> Option<f64> {
        match self {
            Self::Exact(r) => r.residual_log2(),
            Self::Numeric(r) => r.residual_log2(),
        }
    }

    pub fn relative_residual_log2(&self) -> Option<f64> {
        match self {
            Self::Exact(r) => r.relative_residual_log2(),
            Self::Numeric(r) => r.relative_residual_log2(),
        }
    }
}

fn power_product<S: Scalar>(lambda: &[S], q: &[u32], ctx: S::Ctx) -> S {
    let mut p = S::one_in(ctx);
    for (l, &e) in lambda.iter().zip(q) {
        for _ in 0..e {
            p = p.times(l);
        }
    }
    p
}

struct Slot<S> {
    q: MultiIndex,
    j: usize,
    divisor: Option<S>,
}

/// `h ∘ L − L h` on homogeneous components.
fn homological<S: Scalar>(h: &[Poly<S>], linear: &[Poly<S>], lambda: &[S], eps: &[bool], d: u32) -> Vec<Poly<S>> {
    (0..h.len())
        .map(|j| {
            let mut t = h[j].compose(linear, d).sub(&h[j].scale(&lambda[j]));
            if eps[j] {
                t = t.sub(&h[j - 1]);
            }
            t
        })
        .collect()
}

/// Degree-by-degree Poincaré–Dulac elimination on a jet with Jordan linear
/// part `diag(λ) + (ε_j z_{j−1})`. Resonant positions of `ψ` are left zero.
pub(crate) fn normalize_jet<S: Scalar>(
    f: &JetMap<S>,
    lambda: &[S],
    eps: &[bool],
    resonant: &mut dyn FnMut(&[u32], usize) -> Result<bool, GermError>,
    guard: &dyn Fn(&S, &[u32], usize) -> Result<(), GermError>,
) -> Result<PdNormalization<S>, GermError> {
    let n = f.dim();
    let big_d = f.degree();
    let ctx = f.ctx();
    let reference = f.max_log2();
    let linear = f.linear_part();
    let mut psi = JetMap::identity(n, big_d, ctx);
    let mut g = linear.clone();
    for d in 2..=big_d {
        let lhs = f.truncate(d).compose(&psi.truncate(d))?;
        let rhs = psi.truncate(d).compose(&g.truncate(d))?;
        let r = lhs.sub(&rhs)?.homogeneous(d);
        let mut slots = Vec::new();
        for j in 0..n {
            for q in monomials_of_degree(n, d) {
                let divisor = if resonant(&q, j)? {
                    None
                } else {
                    let div = power_product(lambda, &q, ctx).minus(&lambda[j]);
                    guard(&div, &q, j)?;
                    Some(div)
                };
                slots.push(Slot { q, j, divisor });
            }
        }
        let mut h: Vec<Poly<S>> = (0..n).map(|_| Poly::zero(n, ctx)).collect();
        let cap = d as usize * n + n + 2;
        let mut th = homological(&h, linear.components(), lambda, eps, d);
        for _ in 0..cap {
            let mut settled = true;
            for s in &slots {
                let Some(div) = &s.divisor else { continue };
                let rest = r.component(s.j).coeff_or_zero(&s.q).minus(&th[s.j].coeff_or_zero(&s.q));
                if rest.is_negligible(reference) {
                    continue;
                }
                settled = false;
                let step = rest.try_div(div).ok_or_else(|| GermError::ZeroDivisor {
                    index: s.q.clone(),
                    coordinate: s.j,
                })?;
                h[s.j].add_term(Monomial(s.q.clone()), step);
            }
            if settled {
                break;
            }
            th = homological(&h, linear.components(), lambda, eps, d);
        }
        let mut new_psi = psi.components().to_vec();
        let mut new_g = g.components().to_vec();
        for (j, hj) in h.into_iter().enumerate() {
            new_psi[j] = new_psi[j].add(&hj);
        }
        for s in slots.iter().filter(|s| s.divisor.is_none()) {
            let c = r.component(s.j).coeff_or_zero(&s.q).minus(&th[s.j].coeff_or_zero(&s.q));
            new_g[s.j].add_term(Monomial(s.q.clone()), c);
        }
        psi = JetMap::from_trusted(n, big_d, ctx, new_psi);
        g = JetMap::from_trusted(n, big_d, ctx, new_g);
    }
    let lhs = f.compose(&psi)?;
    let rhs = psi.compose(&g)?;
    let scale = match (lhs.max_log2(), rhs.max_log2()) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let residual = lhs.sub(&rhs)?;
    Ok(PdNormalization {
        psi,
        g,
        residual,
        reference_log2: reference,
        scale_log2: scale,
    })
}

/// Bits by which the relative conjugacy residual of a numeric normalization
/// may fall short of the requested precision.
pub const RESIDUAL_SLACK_BITS: u32 = 16;

const MAX_PRECISION_RETRIES: usize = 4;

/// Poincaré–Dulac normal form of a germ up to its truncation degree.
///
/// Exact spectra are normalized over ℚ(i). Phase-linked spectra decide
/// resonance on the lattice descriptors of the phases and divide in floats
/// of at least `prec` bits; a divisor below `2^(−P/2)` is a precision
/// failure, and so is a residual that stays above `2^(RESIDUAL_SLACK_BITS − P)`
/// relative after the working precision has been raised.
pub fn pd_normalize(germ: &Germ, prec: Precision) -> Result<Normalization, GermError> {
    match germ.spectrum() {
        Spectrum::Exact(lambda) => {
            let f = germ.exact_jet().expect("exact spectrum");
            let mut resonant = |q: &[u32], j: usize| germ.is_resonant(q, j);
            let guard = |div: &GaussianRational, q: &[u32], j: usize| {
                if div.vanishes() {
                    Err(GermError::ZeroDivisor {
                        index: q.to_vec(),
                        coordinate: j,
                    })
                } else {
                    Ok(())
                }
            };
            normalize_jet(&f, lambda, germ.eps(), &mut resonant, &guard).map(Normalization::Exact)
        }
        Spectrum::Phase { phases, .. } => {
            let descriptors = (0..germ.dim())
                .map(|j| resonance_descriptor(phases, j))
                .collect::<Result<Vec<_>, _>>()?;
            let mut resonant = |q: &[u32], j: usize| Ok(descriptors[j].contains(q));
            let floor = -f64::from(prec.bits()) / 2.0;
            let guard = |div: &ComplexBig, q: &[u32], j: usize| match div.log2_abs() {
                Some(l) if l > floor => Ok(()),
                _ => Err(GermError::Precision {
                    index: q.to_vec(),
                    coordinate: j,
                    bits: prec.bits(),
                }),
            };
            // Small divisors make both sides of the conjugacy cancel from far
            // larger terms; the working precision grows by the bits lost
            // until the residual sits within `RESIDUAL_SLACK_BITS` of `prec`.
            let target = -f64::from(prec.bits() - RESIDUAL_SLACK_BITS);
            let mut work = prec;
            for _ in 0..MAX_PRECISION_RETRIES {
                let f = germ.numeric_jet(work);
                let lambda = germ.spectrum().numeric(work);
                let out = normalize_jet(&f, &lambda, germ.eps(), &mut resonant, &guard)?;
                let rel = out.relative_residual_log2().unwrap_or(f64::NEG_INFINITY);
                if rel <= target {
                    return Ok(Normalization::Numeric(out));
                }
                work = work.extend((rel - target).ceil() as u32 + 32);
            }
            Err(GermError::Precision {
                index: Vec::new(),
                coordinate: 0,
                bits: work.bits(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn g(num: i64, den: i64) -> GaussianRational {
        GaussianRational::from_rational(rat(num, den))
    }

    fn terms(n: usize, list: &[(&[u32], usize, GaussianRational)]) -> Vec<Poly<GaussianRational>> {
        let mut out: Vec<Poly<GaussianRational>> = (0..n).map(|_| Poly::zero(n, ())).collect();
        for (q, j, c) in list {
            out[*j].add_term(Monomial(q.to_vec()), c.clone());
        }
        out
    }

    #[test]
    fn hand_solved_quadratic_example() {
        let germ = Germ::new(
            2,
            Spectrum::Exact(vec![g(1, 4), g(1, 2)]),
            vec![false, false],
            terms(2, &[(&[0, 2], 0, g(1, 1)), (&[1, 1], 0, g(1, 1))]),
        )
        .unwrap();
        let Normalization::Exact(out) = pd_normalize(&germ, Precision::default()).unwrap() else {
            panic!("exact mode expected");
        };
        assert!(out.residual.is_zero());
        assert_eq!(out.psi.coeff(&[1, 1], 0), g(-8, 1));
        assert_eq!(out.psi.coeff(&[0, 2], 0), g(0, 1));
        assert_eq!(out.g.coeff(&[0, 2], 0), g(1, 1));
        assert_eq!(out.g.coeff(&[1, 1], 0), g(0, 1));
        assert_eq!(out.g.linear_part(), germ.exact_jet().unwrap().linear_part());
    }

    #[test]
    fn linear_germ_is_its_own_normal_form() {
        let germ = Germ::new(4, Spectrum::Exact(vec![g(2, 1), g(3, 1)]), vec![false, false], terms(2, &[])).unwrap();
        let Normalization::Exact(out) = pd_normalize(&germ, Precision::default()).unwrap() else {
            panic!("exact mode expected");
        };
        assert_eq!(out.psi, JetMap::identity(2, 4, ()));
        assert_eq!(out.g, germ.exact_jet().unwrap());
    }

    #[test]
    fn jordan_block_is_triangularized() {
        // λ = (2, 2) with a nilpotent entry; z1^2 e2 and z1 z2 e2 are non-resonant
        let germ = Germ::new(
            3,
            Spectrum::Exact(vec![g(2, 1), g(2, 1)]),
            vec![false, true],
            terms(2, &[(&[2, 0], 1, g(1, 1)), (&[1, 1], 1, g(3, 1)), (&[0, 2], 0, g(1, 1)), (&[0, 3], 1, g(5, 1))]),
        )
        .unwrap();
        let Normalization::Exact(out) = pd_normalize(&germ, Precision::default()).unwrap() else {
            panic!("exact mode expected");
        };
        assert!(out.residual.is_zero());
        for (q, j) in out.g.nonlinear_part().support() {
            assert!(germ.is_resonant(&q, j).unwrap(), "{q:?} {j}");
        }
    }

    #[test]
    fn resonant_jet_is_a_fixed_point() {
        // λ = (1/2, 1/4): z1^2 e2 resonant
        let germ = Germ::new(
            3,
            Spectrum::Exact(vec![g(1, 2), g(1, 4)]),
            vec![false, false],
            terms(2, &[(&[2, 0], 1, GaussianRational::new(int(1), int(2)))]),
        )
        .unwrap();
        let Normalization::Exact(out) = pd_normalize(&germ, Precision::default()).unwrap() else {
            panic!("exact mode expected");
        };
        assert_eq!(out.psi, JetMap::identity(2, 3, ()));
        assert_eq!(out.g, germ.exact_jet().unwrap());
    }
}
