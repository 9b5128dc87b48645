use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::resonance::{descriptor_from_analysis, rows_constant_on_classes, ResonanceDescriptor};
use super::tuple::{toric_analysis, ToricAnalysis, ToricTuple};
use super::ToricError;
use crate::exact::PhaseVector;
use crate::lattice::{degree, dot, hilbert_basis, solve_integer_linear, IntMatrix};

/// Verification depth used when none is given.
pub const DEFAULT_VERIFY_DEGREE: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassificationKind {
    TorsionFree,
    ImpureTorsion,
    PureTorsionSimplifiable,
    PureTorsionNotSimplified,
}

impl ClassificationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TorsionFree => "torsion_free",
            Self::ImpureTorsion => "impure_torsion",
            Self::PureTorsionSimplifiable => "pure_torsion_simplifiable",
            Self::PureTorsionNotSimplified => "pure_torsion_not_simplified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Enumeration depth for cross-checking a found simple tuple.
    pub max_degree: u64,
    /// Raise the depth to twice the largest generator degree.
    pub strict: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_VERIFY_DEGREE,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplification {
    pub h: Vec<BigInt>,
    pub tuple: ToricTuple,
    pub verified_up_to: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFoundReason {
    /// The integer system for `H` has no solution.
    Infeasible,
    /// A solution was found but bounded enumeration disagreed.
    VerificationFailed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplifyOutcome {
    Simplified(Simplification),
    NotFound {
        reason: NotFoundReason,
        system_rows: usize,
        search_bound: u64,
        certified: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: ClassificationKind,
    pub analysis: ToricAnalysis,
    /// Per coordinate: `Res_j([φ]) = ⋂_{k≥2} Res_j⁺(η⁽ᵏ⁾)`. Empty when torsion-free.
    pub impure_coordinates: Vec<bool>,
    pub simplification: Option<SimplifyOutcome>,
}

fn unit(n: usize, j: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[j] = BigInt::from(1);
    e
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn reduced_parts(tuple: &ToricTuple) -> Result<(&[BigInt], &BigInt, &[Vec<BigInt>]), ToricError> {
    let m = tuple
        .m()
        .filter(|_| tuple.is_reduced())
        .ok_or_else(|| ToricError::InvalidTuple("a reduced tuple is required".into()))?;
    Ok((&tuple.vectors()[0], m, &tuple.vectors()[1..]))
}

/// Per coordinate, whether every member `Q` of `⋂_{k≥2} Res_j⁺(η⁽ᵏ⁾)`
/// satisfies `⟨Q − e_j, η⁽¹⁾⟩ ∈ mℤ`; checked on generators and minimal
/// solutions since the condition is additive.
pub fn impure_coordinates(tuple: &ToricTuple) -> Result<Vec<bool>, ToricError> {
    let (eta, m, others) = reduced_parts(tuple)?;
    let n = tuple.dim();
    (0..n)
        .map(|j| {
            let d = ResonanceDescriptor::additive(n, j, others, None)?;
            let ps = d.effective_particular();
            if ps.is_empty() {
                return Ok(true);
            }
            let gens_ok = d.homogeneous().iter().all(|g| dot(g, eta).is_multiple_of(m));
            let ej = unit(n, j);
            let parts_ok = ps.iter().all(|p| dot(&sub(p, &ej), eta).is_multiple_of(m));
            Ok(gens_ok && parts_ok)
        })
        .collect()
}

/// Whether `Res_j([φ])` equals `⋂_k Res_j⁺` of all tuple vectors for every
/// `j`, compared on `|Q| ≤ max_degree`, and the tuple is a reduced
/// representation of `φ`.
pub fn validate_simple_tuple(phi: &PhaseVector, tuple: &ToricTuple, max_degree: u64) -> Result<bool, ToricError> {
    if !tuple.is_reduced() || !tuple.represents(phi) {
        return Ok(false);
    }
    let analysis = toric_analysis(phi)?;
    if analysis.degree != tuple.len() {
        return Ok(false);
    }
    for j in 0..phi.dim() {
        let res = descriptor_from_analysis(phi, &analysis, j)?.enumerate(max_degree);
        let full = ResonanceDescriptor::additive(phi.dim(), j, tuple.vectors(), None)?.enumerate(max_degree);
        if res != full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Looks for `H ∈ ℤⁿ` with `ξ⁽¹⁾ = η⁽¹⁾ − mH` making the tuple simple.
///
/// Rows of the integer system are the generators `G` of
/// `{P ∈ ℕⁿ : ⟨P,η⁽ᵏ⁾⟩ = 0 (k ≥ 2), ⟨P,η⁽¹⁾⟩ ≡ 0 mod m}` with right-hand side
/// `⟨η⁽¹⁾,G⟩/m`, and `P − e_j` for every minimal solution `P` of `Res_j([φ])`
/// with right-hand side `⟨η⁽¹⁾, P − e_j⟩/m`.
pub fn simplify_search(phi: &PhaseVector, tuple: &ToricTuple, opts: &SearchOptions) -> Result<SimplifyOutcome, ToricError> {
    let (eta, m, others) = reduced_parts(tuple)?;
    if !tuple.represents(phi) {
        return Err(ToricError::Mismatch);
    }
    if toric_analysis(phi)?.degree != tuple.len() {
        return Err(ToricError::InvalidTuple("tuple length differs from the toric degree".into()));
    }
    let flags = impure_coordinates(tuple)?;
    if flags.iter().all(|&f| f) {
        return Err(ToricError::NotPure);
    }
    let n = tuple.dim();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut rhs: Vec<BigInt> = Vec::new();
    let mut max_gen = BigInt::zero();
    for j in 0..n {
        let d = ResonanceDescriptor::additive(n, j, others, Some((eta, m)))?;
        let ej = unit(n, j);
        for p in d.effective_particular() {
            max_gen = max_gen.max(degree(&p));
            let row = sub(&p, &ej);
            rhs.push(dot(&row, eta) / m);
            rows.push(row);
        }
    }
    if !rows.is_empty() {
        let eq = IntMatrix::from_rows(others.to_vec(), n)?;
        let hb = hilbert_basis(&eq, &[(eta.to_vec(), m.clone())])?;
        for g in hb.homogeneous {
            max_gen = max_gen.max(degree(&g));
            rhs.push(dot(&g, eta) / m);
            rows.push(g);
        }
    }
    let bound = if opts.strict {
        let twice = u64::try_from(max_gen * 2).unwrap_or(u64::MAX);
        opts.max_degree.max(twice)
    } else {
        opts.max_degree
    };
    let system_rows = rows.len();
    let h = if rhs.iter().all(Zero::is_zero) {
        vec![BigInt::zero(); n]
    } else {
        let a = IntMatrix::from_rows(rows, n)?;
        match solve_integer_linear(&a, &rhs) {
            Some((h, _)) => h,
            None => {
                return Ok(SimplifyOutcome::NotFound {
                    reason: NotFoundReason::Infeasible,
                    system_rows,
                    search_bound: bound,
                    certified: false,
                })
            }
        }
    };
    let xi: Vec<BigInt> = eta.iter().zip(&h).map(|(e, x)| e - m * x).collect();
    let mut vectors = vec![xi];
    vectors.extend(others.iter().cloned());
    let simple = ToricTuple::from_parts(tuple.basis().clone(), n, vectors, tuple.coefficients().to_vec());
    if !validate_simple_tuple(phi, &simple, bound)? {
        return Ok(SimplifyOutcome::NotFound {
            reason: NotFoundReason::VerificationFailed,
            system_rows,
            search_bound: bound,
            certified: false,
        });
    }
    Ok(SimplifyOutcome::Simplified(Simplification {
        h,
        tuple: simple,
        verified_up_to: bound,
    }))
}

pub fn classify(phi: &PhaseVector) -> Result<Classification, ToricError> {
    classify_with(phi, &SearchOptions::default())
}

pub fn classify_with(phi: &PhaseVector, opts: &SearchOptions) -> Result<Classification, ToricError> {
    let analysis = toric_analysis(phi)?;
    if analysis.torsion.is_torsion_free() {
        return Ok(Classification {
            kind: ClassificationKind::TorsionFree,
            analysis,
            impure_coordinates: Vec::new(),
            simplification: None,
        });
    }
    let flags = impure_coordinates(&analysis.tuple)?;
    if flags.iter().all(|&f| f) {
        return Ok(Classification {
            kind: ClassificationKind::ImpureTorsion,
            analysis,
            impure_coordinates: flags,
            simplification: None,
        });
    }
    let outcome = simplify_search(phi, &analysis.tuple, opts)?;
    let kind = match outcome {
        SimplifyOutcome::Simplified(_) => ClassificationKind::PureTorsionSimplifiable,
        SimplifyOutcome::NotFound { .. } => ClassificationKind::PureTorsionNotSimplified,
    };
    Ok(Classification {
        kind,
        analysis,
        impure_coordinates: flags,
        simplification: Some(outcome),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Iff,
    Sufficient,
    /// Non-diagonalizable linear part without a compatible simple tuple.
    Undetermined,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Iff => "iff",
            Self::Sufficient => "sufficient",
            Self::Undetermined => "undetermined",
        }
    }
}

/// Which torus actions decide holomorphic normalizability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationVerdict {
    pub kind: ClassificationKind,
    pub torus_dimension: usize,
    /// Columns of the weight matrix.
    pub weight_matrix: Vec<Vec<BigInt>>,
    pub criterion: Criterion,
    pub compatibility_required: bool,
    /// The weight matrix has equal rows on every class of equal phases.
    pub compatible: bool,
    pub certified: bool,
}

pub fn normalization_verdict(phi: &PhaseVector, diagonalizable: bool) -> Result<NormalizationVerdict, ToricError> {
    let c = classify(phi)?;
    verdict_from_classification(phi, &c, diagonalizable)
}

fn compatible_first(phi: &PhaseVector, tuple: &ToricTuple) -> ToricTuple {
    let mut vectors = tuple.vectors().to_vec();
    for j in 0..phi.dim() {
        if let Some(h) = (0..j).find(|&h| phi.same_class(h, j)) {
            vectors[0][j] = vectors[0][h].clone();
        }
    }
    ToricTuple::from_parts(tuple.basis().clone(), tuple.dim(), vectors, tuple.coefficients().to_vec())
}

pub fn verdict_from_classification(
    phi: &PhaseVector,
    c: &Classification,
    diagonalizable: bool,
) -> Result<NormalizationVerdict, ToricError> {
    let tuple = &c.analysis.tuple;
    let r = c.analysis.degree;
    let base = |dim: usize, matrix: Vec<Vec<BigInt>>, criterion: Criterion, certified: bool| {
        let compatible = rows_constant_on_classes(phi, &matrix);
        NormalizationVerdict {
            kind: c.kind,
            torus_dimension: dim,
            weight_matrix: matrix,
            criterion,
            compatibility_required: !diagonalizable,
            compatible,
            certified,
        }
    };
    Ok(match c.kind {
        ClassificationKind::TorsionFree => base(r, tuple.vectors().to_vec(), Criterion::Iff, true),
        ClassificationKind::ImpureTorsion => base(r - 1, tuple.vectors()[1..].to_vec(), Criterion::Iff, true),
        ClassificationKind::PureTorsionSimplifiable => {
            let Some(SimplifyOutcome::Simplified(s)) = &c.simplification else {
                unreachable!("simplifiable classification carries its tuple");
            };
            let mut chosen = s.tuple.clone();
            if !diagonalizable && !rows_constant_on_classes(phi, chosen.vectors()) {
                let adjusted = compatible_first(phi, &chosen);
                if validate_simple_tuple(phi, &adjusted, s.verified_up_to)? {
                    chosen = adjusted;
                }
            }
            let mut v = base(r, chosen.vectors().to_vec(), Criterion::Iff, true);
            if !diagonalizable && !v.compatible {
                v.criterion = Criterion::Undetermined;
            }
            v
        }
        ClassificationKind::PureTorsionNotSimplified => {
            let chosen = if diagonalizable { tuple.clone() } else { compatible_first(phi, tuple) };
            let mut v = base(r, chosen.vectors().to_vec(), Criterion::Sufficient, false);
            v.compatible = v.compatible || diagonalizable;
            v
        }
    })
}
