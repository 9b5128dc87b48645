use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::cone::lattice_hilbert_basis;
use super::{degree, dominates, grlex_cmp, integer_kernel, IntMatrix, LatticeError};

/// Budget of parallelepiped points visited by one monoid search.
pub const SEARCH_NODE_LIMIT: usize = 4_000_000;

/// `⟨vector, x⟩ ≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    pub vector: Vec<BigInt>,
    pub residue: BigInt,
    pub modulus: BigInt,
}

impl Congruence {
    pub fn new(vector: Vec<BigInt>, residue: BigInt, modulus: BigInt) -> Result<Self, LatticeError> {
        if modulus < BigInt::from(2) {
            return Err(LatticeError::BadModulus);
        }
        let residue = residue.mod_floor(&modulus);
        Ok(Self {
            vector,
            residue,
            modulus,
        })
    }

    pub fn homogeneous(vector: Vec<BigInt>, modulus: BigInt) -> Result<Self, LatticeError> {
        Self::new(vector, BigInt::zero(), modulus)
    }

    pub fn holds(&self, x: &[BigInt]) -> bool {
        let s: BigInt = self.vector.iter().zip(x).map(|(a, b)| a * b).sum();
        (s - &self.residue).mod_floor(&self.modulus).is_zero()
    }
}

/// Finite description of the ℕ-solutions of a linear system: every solution
/// is one of `particular` plus an ℕ-combination of `homogeneous`.
///
/// For a homogeneous system `particular` is empty and the solutions are the
/// ℕ-combinations of `homogeneous` alone.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffineMonoidDescription {
    pub dim: usize,
    pub homogeneous: Vec<Vec<BigInt>>,
    pub particular: Vec<Vec<BigInt>>,
    pub inhomogeneous: bool,
}

impl AffineMonoidDescription {
    pub fn max_generator_degree(&self) -> BigInt {
        self.homogeneous
            .iter()
            .chain(&self.particular)
            .map(|v| degree(v))
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// All described solutions of total degree at most `max_degree`, in graded-lex order.
    pub fn elements_up_to(&self, max_degree: u64) -> Vec<Vec<BigInt>> {
        let bound = BigInt::from(max_degree);
        let starts: Vec<Vec<BigInt>> = if self.inhomogeneous {
            self.particular.clone()
        } else {
            vec![vec![BigInt::zero(); self.dim]]
        };
        let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut stack: Vec<Vec<BigInt>> = Vec::new();
        for s in starts {
            if degree(&s) <= bound && seen.insert(s.clone()) {
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for g in &self.homogeneous {
                let y: Vec<BigInt> = x.iter().zip(g).map(|(a, b)| a + b).collect();
                if degree(&y) <= bound && seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<Vec<BigInt>> = seen.into_iter().collect();
        out.sort_by(|a, b| grlex_cmp(a, b));
        out
    }
}

fn keep_minimal(mut vs: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    vs.sort_by(|a, b| grlex_cmp(a, b));
    vs.dedup();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for v in vs {
        if !out.iter().any(|m| dominates(&v, m)) {
            out.push(v);
        }
    }
    out
}

/// Describes `{x ∈ ℕⁿ : A x = rhs, every congruence holds}`.
///
/// The right-hand side becomes a homogenizing coordinate `t` and each
/// congruence a free slack column, so the solutions with `t = 0` and
/// `t = 1` are the homogeneous and particular parts of the Hilbert basis of
/// one lattice cone.
pub fn solve_affine_monoid(
    equations: &IntMatrix,
    rhs: Option<&[BigInt]>,
    congruences: &[Congruence],
) -> Result<AffineMonoidDescription, LatticeError> {
    let n = equations.cols();
    if let Some(b) = rhs {
        if b.len() != equations.rows() {
            return Err(LatticeError::DimensionMismatch {
                expected: equations.rows(),
                found: b.len(),
            });
        }
    }
    for c in congruences {
        if c.vector.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: c.vector.len(),
            });
        }
        if c.modulus < BigInt::from(2) {
            return Err(LatticeError::BadModulus);
        }
    }
    let inhomogeneous =
        rhs.is_some_and(|b| b.iter().any(|v| !v.is_zero())) || congruences.iter().any(|c| !c.residue.is_zero());
    let with_rhs = rhs.is_some() || inhomogeneous;
    let d = n + usize::from(with_rhs);
    let cols = d + congruences.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..equations.rows() {
        let mut row = vec![BigInt::zero(); cols];
        for j in 0..n {
            row[j] = equations.get(i, j).clone();
        }
        if with_rhs {
            row[n] = -rhs.map_or_else(BigInt::zero, |b| b[i].clone());
        }
        rows.push(row);
    }
    for (l, c) in congruences.iter().enumerate() {
        let mut row = vec![BigInt::zero(); cols];
        for j in 0..n {
            row[j] = c.vector[j].mod_floor(&c.modulus);
        }
        if with_rhs {
            row[n] = -c.residue.mod_floor(&c.modulus);
        }
        row[d + l] = -c.modulus.clone();
        rows.push(row);
    }
    let kernel = integer_kernel(&IntMatrix::from_rows(rows, cols)?);
    let basis: Vec<Vec<BigInt>> = kernel.vectors().iter().map(|v| v[..d].to_vec()).collect();
    let sols = lattice_hilbert_basis(&basis, d, SEARCH_NODE_LIMIT)?;
    let mut hom = Vec::new();
    let mut part = Vec::new();
    for s in sols {
        let p: Vec<BigInt> = s[..n].to_vec();
        if !with_rhs || s[n].is_zero() {
            if p.iter().any(|v| !v.is_zero()) {
                hom.push(p);
            }
        } else if s[n] == BigInt::from(1) {
            part.push(p);
        }
    }
    let homogeneous = keep_minimal(hom);
    let particular: Vec<Vec<BigInt>> = keep_minimal(part)
        .into_iter()
        .filter(|p| !homogeneous.iter().any(|g| dominates(p, g)))
        .collect();
    Ok(AffineMonoidDescription {
        dim: n,
        homogeneous,
        particular: if with_rhs { particular } else { Vec::new() },
        inhomogeneous: with_rhs,
    })
}

/// Componentwise-minimal generators of `{x ∈ ℕⁿ : A x = 0, ⟨v,x⟩ ≡ 0 mod m}`.
pub fn hilbert_basis(
    equations: &IntMatrix,
    congruences: &[(Vec<BigInt>, BigInt)],
) -> Result<AffineMonoidDescription, LatticeError> {
    let cs = congruences
        .iter()
        .map(|(v, m)| Congruence::homogeneous(v.clone(), m.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    solve_affine_monoid(equations, None, &cs)
}

/// Minimal ℕ-solutions of `A x = rhs` together with the homogeneous generators.
pub fn minimal_inhomogeneous(equations: &IntMatrix, rhs: &[BigInt]) -> Result<AffineMonoidDescription, LatticeError> {
    solve_affine_monoid(equations, Some(rhs), &[])
}
