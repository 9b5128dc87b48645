use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::tuple::{toric_analysis, ToricAnalysis};
use super::ToricError;
use crate::exact::{is_integral_combination, MultiIndex, PhaseVector};
use crate::lattice::{dot, solve_affine_monoid, AffineMonoidDescription, Congruence, IntMatrix};

/// Certified description of a resonance set at coordinate `j`:
/// `{Q ∈ ℕⁿ : |Q| ≥ 2, ⟨Q,ρ⟩ = ρ_j for every equation row ρ,
/// ⟨Q,η⟩ ≡ η_j (mod m) when a congruence is present}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceDescriptor {
    coordinate: usize,
    dim: usize,
    equations: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    congruence: Option<Congruence>,
    monoid: AffineMonoidDescription,
    equal_phase: Vec<usize>,
}

fn to_big(q: &[u32]) -> Vec<BigInt> {
    q.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_index(v: &[BigInt]) -> MultiIndex {
    v.iter().map(|x| x.to_u32().expect("small exponent")).collect()
}

impl ResonanceDescriptor {
    /// Builds the descriptor for rows `ρ⁽ᵏ⁾` with right-hand sides `ρ⁽ᵏ⁾_j`
    /// and an optional congruence `⟨Q,η⟩ ≡ η_j (mod m)`.
    pub fn additive(
        n: usize,
        j: usize,
        rows: &[Vec<BigInt>],
        congruence: Option<(&[BigInt], &BigInt)>,
    ) -> Result<Self, ToricError> {
        if j >= n {
            return Err(ToricError::CoordinateOutOfRange { index: j, dim: n });
        }
        let rhs: Vec<BigInt> = rows.iter().map(|r| r[j].clone()).collect();
        let eq = IntMatrix::from_rows(rows.to_vec(), n)?;
        let congruence = congruence
            .map(|(eta, m)| Congruence::new(eta.to_vec(), eta[j].clone(), m.clone()))
            .transpose()?;
        let cs: Vec<Congruence> = congruence.iter().cloned().collect();
        let monoid = solve_affine_monoid(&eq, Some(&rhs), &cs)?;
        Ok(Self {
            coordinate: j,
            dim: n,
            equations: rows.to_vec(),
            rhs,
            congruence,
            monoid,
            equal_phase: Vec::new(),
        })
    }

    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn rhs(&self) -> &[BigInt] {
        &self.rhs
    }

    pub fn congruence(&self) -> Option<&Congruence> {
        self.congruence.as_ref()
    }

    pub fn monoid(&self) -> &AffineMonoidDescription {
        &self.monoid
    }

    pub fn homogeneous(&self) -> &[Vec<BigInt>] {
        &self.monoid.homogeneous
    }

    pub fn particular(&self) -> &[Vec<BigInt>] {
        &self.monoid.particular
    }

    /// Coordinates `h ≠ j` with `[φ_h] = [φ_j]`, i.e. resonant `z_h e_j`.
    pub fn equal_phase(&self) -> &[usize] {
        &self.equal_phase
    }

    /// Membership, decided directly on the defining conditions.
    pub fn contains(&self, q: &[u32]) -> bool {
        if q.len() != self.dim || q.iter().map(|&x| x as u64).sum::<u64>() < 2 {
            return false;
        }
        let qb = to_big(q);
        self.equations
            .iter()
            .zip(&self.rhs)
            .all(|(row, b)| dot(row, &qb) == *b)
            && self.congruence.as_ref().is_none_or(|c| c.holds(&qb))
    }

    /// Minimal solutions that lead to members of degree at least 2.
    pub fn effective_particular(&self) -> Vec<Vec<BigInt>> {
        let has_gens = !self.monoid.homogeneous.is_empty();
        self.monoid
            .particular
            .iter()
            .filter(|p| has_gens || p.iter().sum::<BigInt>() >= BigInt::from(2))
            .cloned()
            .collect()
    }

    /// Whether the set has no member (of degree at least 2).
    pub fn is_empty(&self) -> bool {
        self.effective_particular().is_empty()
    }

    /// Members with `|Q| ≤ max_degree`, in graded-lex order.
    pub fn enumerate(&self, max_degree: u64) -> Vec<MultiIndex> {
        self.monoid
            .elements_up_to(max_degree)
            .into_iter()
            .filter(|q| q.iter().sum::<BigInt>() >= BigInt::from(2))
            .map(|q| to_index(&q))
            .collect()
    }
}

/// Descriptor of `Res_j([φ])` built from a precomputed analysis.
pub(crate) fn descriptor_from_analysis(
    phi: &PhaseVector,
    analysis: &ToricAnalysis,
    j: usize,
) -> Result<ResonanceDescriptor, ToricError> {
    let n = phi.dim();
    let t = &analysis.tuple;
    let mut d = if t.is_reduced() && !analysis.torsion.is_torsion_free() {
        let m = t.m().expect("reduced tuple has m");
        ResonanceDescriptor::additive(n, j, &t.vectors()[1..], Some((&t.vectors()[0], m)))?
    } else {
        ResonanceDescriptor::additive(n, j, t.vectors(), None)?
    };
    d.equal_phase = (0..n).filter(|&h| h != j && phi.same_class(h, j)).collect();
    Ok(d)
}

/// Certified description of `Res_j([φ])`.
pub fn resonance_descriptor(phi: &PhaseVector, j: usize) -> Result<ResonanceDescriptor, ToricError> {
    if j >= phi.dim() {
        return Err(ToricError::CoordinateOutOfRange { index: j, dim: phi.dim() });
    }
    let analysis = toric_analysis(phi)?;
    descriptor_from_analysis(phi, &analysis, j)
}

/// All `Q ∈ Res_j([φ])` with `2 ≤ |Q| ≤ max_degree`, each confirmed by the
/// exact oracle, in graded-lex order.
pub fn enumerate_resonances(phi: &PhaseVector, j: usize, max_degree: u64) -> Result<Vec<MultiIndex>, ToricError> {
    let d = resonance_descriptor(phi, j)?;
    let out = d.enumerate(max_degree);
    for q in &out {
        if !is_integral_combination(phi, q, j)? {
            return Err(ToricError::OracleMismatch { index: q.clone(), coordinate: j });
        }
    }
    Ok(out)
}

/// Whether `z^Q e_j` is resonant for the weight matrix `Θ` (`n × r`).
pub fn theta_resonant(q: &[u32], j: usize, theta: &IntMatrix) -> bool {
    let n = theta.rows();
    if q.len() != n || j >= n {
        return false;
    }
    let deg: u64 = q.iter().map(|&x| x as u64).sum();
    match deg {
        0 => false,
        1 => {
            let h = q.iter().position(|&x| x == 1).expect("degree one");
            theta.row(h) == theta.row(j)
        }
        _ => {
            let qb = to_big(q);
            (0..theta.cols()).all(|k| dot(&theta.column(k), &qb) == *theta.get(j, k))
        }
    }
}

/// Whether `Θ` is compatible with a Jordan structure given as
/// `(label, block size)` pairs: rows coincide along every block.
pub fn compatible<L>(theta: &IntMatrix, jordan: &[(L, usize)]) -> bool {
    let mut start = 0;
    for (_, size) in jordan {
        for j in start + 1..start + size {
            if j >= theta.rows() || theta.row(j - 1) != theta.row(j) {
                return false;
            }
        }
        start += size;
    }
    true
}

/// Whether every row is constant on phase classes.
pub(crate) fn rows_constant_on_classes(phi: &PhaseVector, rows: &[Vec<BigInt>]) -> bool {
    let n = phi.dim();
    rows.iter()
        .all(|v| (0..n).all(|j| (0..j).all(|h| !phi.same_class(h, j) || v[j] == v[h])))
}
