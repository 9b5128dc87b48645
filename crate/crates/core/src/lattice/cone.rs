//! Hilbert bases of `L ∩ ℕᵈ` for a sublattice `L ⊆ ℤᵈ`.
//!
//! The cone is triangulated by pulling extreme rays. Every irreducible
//! element is a ray or lies in the half-open parallelepiped of some simplex,
//! so the candidates are the lattice points of those parallelepipeds and the
//! basis is their componentwise-minimal part.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{grlex_cmp, hermite_form, integer_kernel, maximize, IntMatrix, LatticeError, LpOutcome};
use crate::exact::Rational;

fn to_i128(v: &BigInt) -> Result<i128, LatticeError> {
    v.to_i128().filter(|x| x.unsigned_abs() < (1u128 << 100)).ok_or(LatticeError::Overflow)
}

fn mat_vec(m: &[Vec<i128>], v: &[i128]) -> Result<Vec<i128>, LatticeError> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).try_fold(0i128, |acc, (a, b)| {
                a.checked_mul(*b).and_then(|p| acc.checked_add(p)).ok_or(LatticeError::Overflow)
            })
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Coordinates that are zero on every nonnegative point of `span(L)`.
fn forced_zero(basis: &[Vec<BigInt>], d: usize) -> Vec<bool> {
    let rows = IntMatrix::from_rows(basis.to_vec(), d).expect("basis rows of length d");
    let orth = integer_kernel(&rows);
    let q = |x: &BigInt| Rational::from_integer(x.clone());
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    for v in orth.vectors() {
        a.push(v.iter().map(q).collect());
        a.push(v.iter().map(|x| -q(x)).collect());
        b.push(Rational::zero());
        b.push(Rational::zero());
    }
    a.push(vec![Rational::one(); d]);
    b.push(Rational::one());
    let mut positive = vec![false; d];
    for l in 0..d {
        if positive[l] {
            continue;
        }
        let mut c = vec![Rational::zero(); d];
        c[l] = Rational::one();
        if let Some(LpOutcome::Optimal { value, point }) = maximize(&a, &b, &c) {
            if value.is_positive() {
                for (p, x) in positive.iter_mut().zip(&point) {
                    *p |= x.is_positive();
                }
            }
        }
    }
    positive.into_iter().map(|p| !p).collect()
}

/// Inverse of a nonsingular integer matrix, scaled by its determinant:
/// returns `(adj, det)` with `det > 0` and `adj · w = det · I`.
fn scaled_inverse(w: &[Vec<BigInt>]) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let r = w.len();
    let mut m: Vec<Vec<Rational>> = w
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut out: Vec<Rational> = row.iter().map(|x| Rational::from_integer(x.clone())).collect();
            out.extend((0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            out
        })
        .collect();
    for c in 0..r {
        let p = (c..r).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &pivot;
        }
        let prow = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    let den = m
        .iter()
        .flat_map(|row| row[r..].iter())
        .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let adj = m
        .iter()
        .map(|row| {
            row[r..]
                .iter()
                .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    Some((adj, den))
}

fn rank(vectors: &[Vec<BigInt>], r: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = IntMatrix::from_rows(vectors.to_vec(), r).expect("vectors of length r");
    r - integer_kernel(&m).rank()
}

fn abs_det(w: &[Vec<BigInt>]) -> BigInt {
    let mut m: Vec<Vec<Rational>> = w
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let r = m.len();
    let mut det = Rational::one();
    for c in 0..r {
        let Some(p) = (c..r).find(|&i| !m[i][c].is_zero()) else {
            return BigInt::zero();
        };
        m.swap(c, p);
        det *= &m[c][c];
        let prow = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &prow[c];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    det.to_integer().abs()
}

/// Pulling triangulation of the pointed cone spanned by `face` (indices
/// into `rays`, of dimension `k`); faces are cut out by the vanishing of
/// active coordinates, recorded per ray in `values`.
fn pulling(
    face: &[usize],
    k: usize,
    order: &[usize],
    rays: &[Vec<BigInt>],
    values: &[Vec<BigInt>],
    active: &[usize],
) -> Vec<Vec<usize>> {
    if face.len() == k {
        return vec![face.to_vec()];
    }
    let v = *order.iter().find(|i| face.contains(i)).expect("face is nonempty");
    let r = rays[0].len();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for &l in active {
        let z: Vec<usize> = face.iter().copied().filter(|&i| values[i][l].is_zero()).collect();
        if z.len() < k - 1 || z.len() == face.len() || z.contains(&v) || facets.contains(&z) {
            continue;
        }
        let vs: Vec<Vec<BigInt>> = z.iter().map(|&i| rays[i].clone()).collect();
        if rank(&vs, r) == k - 1 {
            facets.push(z);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut simplex in pulling(&f, k - 1, order, rays, values, active) {
            simplex.push(v);
            out.push(simplex);
        }
    }
    out
}

/// Componentwise-minimal nonzero elements of `L ∩ ℕᵈ`, `L` spanned by the
/// rows of `basis`. At most `limit` parallelepiped points are visited.
pub(crate) fn lattice_hilbert_basis(
    basis: &[Vec<BigInt>],
    d: usize,
    limit: usize,
) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let zero_coords = forced_zero(basis, d);
    // Restrict L to the face where the forced coordinates vanish.
    let b_rows: Vec<Vec<BigInt>> = (0..d)
        .map(|l| basis.iter().map(|v| v[l].clone()).collect())
        .collect();
    let r0 = basis.len();
    let forced_rows: Vec<Vec<BigInt>> = (0..d).filter(|&l| zero_coords[l]).map(|l| b_rows[l].clone()).collect();
    let sub = integer_kernel(&IntMatrix::from_rows(forced_rows, r0)?);
    let k = sub.vectors();
    if k.is_empty() {
        return Ok(Vec::new());
    }
    let r = k.len();
    // `rows[l]` maps face coordinates `y ∈ ℤʳ` to `x_l`.
    let rows: Vec<Vec<BigInt>> = b_rows
        .iter()
        .map(|row| k.iter().map(|kv| kv.iter().zip(row).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let active: Vec<usize> = (0..d).filter(|&l| !zero_coords[l]).collect();

    let eval = |y: &[BigInt]| -> Vec<BigInt> {
        rows.iter().map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    };
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for t in combinations(active.len(), r - 1) {
        let sel: Vec<Vec<BigInt>> = t.iter().map(|&i| rows[active[i]].clone()).collect();
        let ker = integer_kernel(&IntMatrix::from_rows(sel, r)?);
        if ker.rank() != 1 {
            continue;
        }
        let dir = ker.vectors()[0].clone();
        let x = eval(&dir);
        let y = if x.iter().all(|v| !v.is_negative()) {
            dir
        } else if x.iter().all(|v| !v.is_positive()) {
            dir.into_iter().map(|v| -v).collect()
        } else {
            continue;
        };
        if !rays.contains(&y) {
            rays.push(y);
        }
    }

    let rows_i: Vec<Vec<i128>> = rows
        .iter()
        .map(|row| row.iter().map(to_i128).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    // Candidate points, stored flat with stride `d`.
    let mut flat: Vec<i128> = Vec::new();
    let mut ray_points: Vec<Vec<i128>> = Vec::new();
    for ray in &rays {
        let y: Vec<i128> = ray.iter().map(to_i128).collect::<Result<_, _>>()?;
        let x = mat_vec(&rows_i, &y)?;
        flat.extend_from_slice(&x);
        ray_points.push(x);
    }
    // `x − ray ∈ L ∩ ℕᵈ` whenever `x` strictly dominates a ray point.
    let reducible = |x: &[i128]| {
        ray_points
            .iter()
            .any(|rp| rp.as_slice() != x && x.iter().zip(rp).all(|(a, b)| a >= b))
    };
    let mut visited = 0usize;
    // Of the pulling triangulations started at each ray, the one with the
    // fewest parallelepiped points.
    let values: Vec<Vec<BigInt>> = rays.iter().map(|y| eval(y)).collect();
    let all: Vec<usize> = (0..rays.len()).collect();
    let mut best: Option<(BigInt, Vec<Vec<usize>>)> = None;
    for first in 0..rays.len() {
        let order: Vec<usize> = (first..rays.len()).chain(0..first).collect();
        let simplices = pulling(&all, r, &order, &rays, &values, &active);
        let cost: BigInt = simplices
            .iter()
            .map(|s| abs_det(&(0..r).map(|i| s.iter().map(|&c| rays[c][i].clone()).collect()).collect::<Vec<_>>()))
            .sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, simplices));
        }
    }
    let simplices = best.map(|(_, s)| s).unwrap_or_default();
    let mut x = vec![0i128; d];
    for s in simplices {
        // Columns of `w` are the chosen rays.
        let w: Vec<Vec<BigInt>> = (0..r).map(|i| s.iter().map(|&c| rays[c][i].clone()).collect()).collect();
        let Some((adj, det)) = scaled_inverse(&w) else {
            continue;
        };
        let (h, _) = hermite_form(&IntMatrix::from_rows(w.clone(), r)?);
        let diag: Vec<i128> = (0..r).map(|i| to_i128(&h.get(i, i).abs())).collect::<Result<_, _>>()?;
        let count = diag.iter().try_fold(1i128, |acc, &x| acc.checked_mul(x)).ok_or(LatticeError::Overflow)?;
        let count = usize::try_from(count).map_err(|_| LatticeError::SearchLimit(limit))?;
        visited = visited.saturating_add(count);
        if visited > limit {
            return Err(LatticeError::SearchLimit(limit));
        }
        let det_i = to_i128(&det)?;
        // Columns of `adj`, reduced mod det, step the coefficients `μ = adj·y`.
        let adj_cols: Vec<Vec<i128>> = (0..r)
            .map(|i| (0..r).map(|k| to_i128(&adj[k][i]).map(|v| v.rem_euclid(det_i))).collect())
            .collect::<Result<_, _>>()?;
        // `xw[l][i]` is coordinate `l` of ray `s[i]`; bounded so that sums of
        // `r` products with `μ < det` fit.
        let xw: Vec<Vec<i128>> = (0..d)
            .map(|l| s.iter().map(|&c| to_i128(&values[c][l])).collect())
            .collect::<Result<_, _>>()?;
        let bound = xw.iter().flatten().fold(0u128, |m, v| m.max(v.unsigned_abs()));
        if bound.checked_mul(det_i as u128).and_then(|v| v.checked_mul(r as u128)).is_none_or(|v| v >= 1u128 << 120) {
            return Err(LatticeError::Overflow);
        }
        let mut y = vec![0i128; r];
        let mut mu = vec![0i128; r];
        loop {
            if mu.iter().any(|&v| v != 0) {
                for (xl, row) in x.iter_mut().zip(&xw) {
                    *xl = row.iter().zip(&mu).map(|(a, b)| a * b).sum::<i128>() / det_i;
                }
                if !reducible(&x) {
                    flat.extend_from_slice(&x);
                }
            }
            // Coset representatives of ℤʳ / Wℤʳ: 0 ≤ y_i < H_ii.
            let mut i = 0;
            while i < r && y[i] + 1 >= diag[i] {
                for (m, a) in mu.iter_mut().zip(&adj_cols[i]) {
                    *m = (*m - a * y[i]).rem_euclid(det_i);
                }
                y[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
            y[i] += 1;
            for (m, a) in mu.iter_mut().zip(&adj_cols[i]) {
                *m += a;
                if *m >= det_i {
                    *m -= det_i;
                }
            }
        }
    }

    let point = |k: usize| &flat[k * d..(k + 1) * d];
    let degrees: Vec<i128> = (0..flat.len() / d).map(|k| point(k).iter().sum()).collect();
    let mut order: Vec<usize> = (0..degrees.len()).collect();
    order.sort_unstable_by(|&a, &b| degrees[a].cmp(&degrees[b]).then_with(|| point(a).cmp(point(b))));
    order.dedup_by(|a, b| point(*a) == point(*b));
    let mut kept: Vec<&[i128]> = Vec::new();
    for k in order {
        let c = point(k);
        if !kept.iter().any(|m| c.iter().zip(m.iter()).all(|(a, b)| a >= b)) {
            kept.push(c);
        }
    }
    let mut out: Vec<Vec<BigInt>> = kept
        .into_iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    out.sort_by(|a, b| grlex_cmp(a, b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    #[test]
    fn ray_of_a_line() {
        let hb = lattice_hilbert_basis(&[to_big(&[6, 1])], 2, 1000).unwrap();
        assert_eq!(hb, vec![to_big(&[6, 1])]);
    }

    #[test]
    fn two_dimensional_cone_needs_interior_points() {
        // kernel of x − 2y + z: generators (1,1,1), (2,1,0), (0,1,2), (1,0,−1)… restricted to ℕ³
        let k = integer_kernel(&IntMatrix::from_i64(&[[1, -2, 1]]));
        let mut hb = lattice_hilbert_basis(k.vectors(), 3, 1000).unwrap();
        hb.sort();
        let mut want = vec![to_big(&[0, 1, 2]), to_big(&[1, 1, 1]), to_big(&[2, 1, 0])];
        want.sort();
        assert_eq!(hb, want);
    }

    #[test]
    fn forced_zero_coordinates_are_dropped() {
        // x1 − x2 = 0 and x3 + x4 = 0 force x3 = x4 = 0
        let k = integer_kernel(&IntMatrix::from_i64(&[[1, -1, 0, 0], [0, 0, 1, 1]]));
        let hb = lattice_hilbert_basis(k.vectors(), 4, 1000).unwrap();
        assert_eq!(hb, vec![to_big(&[1, 1, 0, 0])]);
    }

    #[test]
    fn pointless_cone() {
        let k = integer_kernel(&IntMatrix::from_i64(&[[1, 1]]));
        assert!(lattice_hilbert_basis(k.vectors(), 2, 1000).unwrap().is_empty());
    }
}
