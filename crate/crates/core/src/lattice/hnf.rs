use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LatticeBasis};
use crate::exact::Rational;

struct Hermite {
    /// Columns of `H = M·U`.
    h: Vec<Vec<BigInt>>,
    /// Columns of `U`.
    u: Vec<Vec<BigInt>>,
    /// Row of each pivot, for pivot columns `0..rank`.
    pivot_rows: Vec<usize>,
}

fn combine(cols: &mut [Vec<BigInt>], a: usize, b: usize, x: &BigInt, y: &BigInt, p: &BigInt, q: &BigInt) {
    let ca = std::mem::take(&mut cols[a]);
    let cb = std::mem::take(&mut cols[b]);
    let na = ca.iter().zip(&cb).map(|(s, t)| x * s + y * t).collect();
    let nb = ca.iter().zip(&cb).map(|(s, t)| p * s + q * t).collect();
    cols[a] = na;
    cols[b] = nb;
}

fn axpy(cols: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    let src = cols[source].clone();
    for (t, s) in cols[target].iter_mut().zip(&src) {
        *t -= factor * s;
    }
}

fn hermite(m: &IntMatrix) -> Hermite {
    let (r, c) = (m.rows(), m.cols());
    let mut h: Vec<Vec<BigInt>> = (0..c).map(|j| m.column(j)).collect();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(c).to_columns();
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for i in 0..r {
        if pc == c {
            break;
        }
        for j in pc + 1..c {
            if h[j][i].is_zero() {
                continue;
            }
            let a = h[pc][i].clone();
            let b = h[j][i].clone();
            let e = a.extended_gcd(&b);
            let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
            if g.is_negative() {
                g = -g;
                x = -x;
                y = -y;
            }
            let p = -&b / &g;
            let q = &a / &g;
            combine(&mut h, pc, j, &x, &y, &p, &q);
            combine(&mut u, pc, j, &x, &y, &p, &q);
        }
        if h[pc][i].is_zero() {
            continue;
        }
        if h[pc][i].is_negative() {
            for v in h[pc].iter_mut().chain(u[pc].iter_mut()) {
                *v = -&*v;
            }
        }
        for k in 0..pc {
            let f = h[k][i].div_floor(&h[pc][i]);
            if !f.is_zero() {
                axpy(&mut h, k, pc, &f);
                axpy(&mut u, k, pc, &f);
            }
        }
        pivot_rows.push(i);
        pc += 1;
    }
    Hermite { h, u, pivot_rows }
}

/// Column-style Hermite normal form: returns `(H, U)` with `H = M·U`, `U`
/// unimodular, `H` lower echelon with positive pivots and the entries left of
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let hf = hermite(m);
    let h = IntMatrix::from_columns(&hf.h, m.rows()).expect("columns have row length");
    let u = IntMatrix::from_columns(&hf.u, m.cols()).expect("columns have col length");
    (h, u)
}

pub fn rank(m: &IntMatrix) -> usize {
    hermite(m).pivot_rows.len()
}

/// Row-style Hermite basis of the lattice spanned by `vectors` in ℤⁿ; zero rows dropped.
pub fn canonical_basis(vectors: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let t = IntMatrix::from_columns(vectors, n).expect("vectors of length n");
    let hf = hermite(&t);
    let rk = hf.pivot_rows.len();
    hf.h.into_iter().take(rk).collect()
}

/// A ℤ-basis of `{x ∈ ℤⁿ : M x = 0}` in row-style Hermite form.
pub fn integer_kernel(m: &IntMatrix) -> LatticeBasis {
    let hf = hermite(m);
    let rk = hf.pivot_rows.len();
    let raw: Vec<Vec<BigInt>> = hf.u.into_iter().skip(rk).collect();
    LatticeBasis::from_trusted(m.cols(), canonical_basis(&raw, m.cols()))
}

/// An integer solution of `A x = b` with the kernel basis, or `None` when
/// no integer solution exists.
pub fn solve_integer_linear(a: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigInt>, LatticeBasis)> {
    if b.len() != a.rows() {
        return None;
    }
    let hf = hermite(a);
    let rk = hf.pivot_rows.len();
    let mut y = vec![BigInt::zero(); a.cols()];
    let mut next = 0;
    for i in 0..a.rows() {
        let s: BigInt = (0..next).map(|k| &hf.h[k][i] * &y[k]).sum();
        let residual = &b[i] - s;
        if next < rk && hf.pivot_rows[next] == i {
            let (q, rem) = residual.div_rem(&hf.h[next][i]);
            if !rem.is_zero() {
                return None;
            }
            y[next] = q;
            next += 1;
        } else if !residual.is_zero() {
            return None;
        }
    }
    let x: Vec<BigInt> = (0..a.cols())
        .map(|row| (0..rk).map(|k| &hf.u[k][row] * &y[k]).sum())
        .collect();
    let raw: Vec<Vec<BigInt>> = hf.u.into_iter().skip(rk).collect();
    let kernel = LatticeBasis::from_trusted(a.cols(), canonical_basis(&raw, a.cols()));
    Some((x, kernel))
}

/// A ℤ-basis of `span_ℚ(vectors) ∩ ℤⁿ`, in row-style Hermite form.
pub fn saturated_basis(vectors: &[Vec<Rational>], n: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect()
        })
        .collect();
    let c = IntMatrix::from_rows(rows, n).expect("vectors of length n");
    let k = integer_kernel(&c);
    let kk = IntMatrix::from_rows(k.vectors().to_vec(), n).expect("kernel rows of length n");
    integer_kernel(&kk).vectors().to_vec()
}

/// A rational solution of `A x = b` (rows of `A` given), if one exists.
pub fn solve_rational_system(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..cols {
        let Some(p) = (pr..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pr, p);
        let inv = Rational::one() / &m[pr][col];
        for v in m[pr].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != pr && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[pr].clone();
                for (t, s) in m[i].iter_mut().zip(&pivot_row) {
                    *t -= &f * s;
                }
            }
        }
        pivots.push(col);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    if m[pr..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][cols].clone();
    }
    Some(x)
}
