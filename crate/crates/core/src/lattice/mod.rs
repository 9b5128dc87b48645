//! Integer linear algebra and affine-monoid combinatorics.
//!
//! Hermite forms use column operations (`H = M·U`), so the trailing columns
//! of `U` span the integer kernel. Hilbert bases are read off the lattice
//! points of half-open parallelepipeds spanned by extreme rays; the
//! enumeration is exhaustive, so its output is certified rather than bounded.

mod cone;
mod hnf;
mod minimal;
mod monoid;
mod simplex;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use hnf::{
    canonical_basis, hermite_form, integer_kernel, rank, saturated_basis, solve_integer_linear,
    solve_rational_system,
};
pub use minimal::{
    cominimal_elements, decompose, default_cominimal_bound, delta_bound, paper_minimal_elements,
    reduce_pair, CominimalSet, Decomposition, PaperMinimals,
};
pub use monoid::{
    hilbert_basis, minimal_inhomogeneous, solve_affine_monoid, AffineMonoidDescription,
    Congruence, SEARCH_NODE_LIMIT,
};
pub use simplex::{maximize, LpOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("rows have inconsistent lengths")]
    Ragged,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis vectors are linearly dependent")]
    Dependent,
    #[error("congruence modulus must be at least 2")]
    BadModulus,
    #[error("entry too large for the monoid search")]
    Overflow,
    #[error("monoid search exceeded {0} nodes")]
    SearchLimit(usize),
    #[error("vector is not in the monoid")]
    NotInMonoid,
    #[error("remainder {0:?} is cominimal but missing from the supplied set")]
    MissingCominimal(Vec<BigInt>),
    #[error("zero vector not allowed here")]
    ZeroVector,
    #[error("empty minimal set")]
    NoMinimals,
}

/// Dense integer matrix in row-major order; zero rows or columns are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, LatticeError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LatticeError::Ragged);
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols, data })
    }

    /// Rows of small integers; panics if the rows are ragged.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("rows must have equal length")
    }

    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Result<Self, LatticeError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LatticeError::Ragged);
            }
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A ℤ-basis of a sublattice of ℤⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(dim: usize, vectors: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        for v in &vectors {
            if v.len() != dim {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let m = IntMatrix::from_rows(vectors.clone(), dim)?;
        if rank(&m) != vectors.len() {
            return Err(LatticeError::Dependent);
        }
        Ok(Self { dim, vectors })
    }

    pub fn from_i64<R: AsRef<[i64]>>(dim: usize, vectors: &[R]) -> Result<Self, LatticeError> {
        let vs = vectors
            .iter()
            .map(|v| v.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(dim, vs)
    }

    /// The full lattice ℤⁿ.
    pub fn standard(dim: usize) -> Self {
        Self {
            dim,
            vectors: IntMatrix::identity(dim).to_rows(),
        }
    }

    pub(crate) fn from_trusted(dim: usize, vectors: Vec<Vec<BigInt>>) -> Self {
        Self { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    /// Whether `x` is an integer combination of the basis.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        if self.vectors.is_empty() {
            return x.iter().all(Zero::is_zero);
        }
        let m = IntMatrix::from_columns(&self.vectors, self.dim).expect("consistent basis");
        solve_integer_linear(&m, x).is_some()
    }

    /// Integer equations whose common kernel is the rational span of the basis.
    pub fn orthogonal_equations(&self) -> IntMatrix {
        let m = IntMatrix::from_rows(self.vectors.clone(), self.dim).expect("consistent basis");
        let k = integer_kernel(&m);
        IntMatrix::from_rows(k.vectors, self.dim).expect("consistent kernel")
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn degree(v: &[BigInt]) -> BigInt {
    v.iter().sum()
}

pub fn is_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

/// `a ≥ b` componentwise.
pub fn dominates(a: &[BigInt], b: &[BigInt]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Total degree first, then lexicographically larger vectors first.
pub fn grlex_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| b.cmp(a))
}

/// Same ordering for multi-indices.
pub fn grlex_cmp_u32(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}
