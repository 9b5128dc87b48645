use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::simplex::{maximize, LpOutcome};
use super::{degree, dominates, dot, grlex_cmp, integer_kernel, is_nonnegative, IntMatrix, LatticeBasis, LatticeError};
use crate::exact::Rational;

/// The support-minimal elements of `𝒜⁺ = 𝒜 ∩ ℕⁿ`, one per inclusion-minimal support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperMinimals {
    lattice: LatticeBasis,
    elements: Vec<Vec<BigInt>>,
    supports: Vec<Vec<usize>>,
}

impl PaperMinimals {
    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn elements(&self) -> &[Vec<BigInt>] {
        &self.elements
    }

    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_degree(&self) -> BigInt {
        self.elements.iter().map(|m| degree(m)).max().unwrap_or_else(BigInt::zero)
    }
}

/// Nonzero elements of `𝒜⁺` dominating no minimal element, up to a degree bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CominimalSet {
    pub elements: Vec<Vec<BigInt>>,
    pub search_bound: u64,
    /// Largest total degree a cominimal element can have, when the
    /// relaxation is bounded.
    pub degree_cap: Option<BigInt>,
    /// `search_bound ≥ degree_cap`, so the list is complete.
    pub certified: bool,
}

/// `x = C + Σ l_i M_i`, with `C` absent when the remainder is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub cominimal: Option<usize>,
    pub multiplicities: Vec<BigInt>,
}

fn support(v: &[BigInt]) -> Vec<usize> {
    (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
}

fn lattice_support(a: &LatticeBasis) -> Vec<usize> {
    (0..a.dim())
        .filter(|&l| a.vectors().iter().any(|v| !v[l].is_zero()))
        .collect()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// For each support `S`, the elements of `𝒜` supported in `S` form a
/// sublattice; a minimal element with support exactly `S` exists iff that
/// sublattice has rank one and its generator has support `S` and one sign.
pub fn paper_minimal_elements(a: &LatticeBasis) -> PaperMinimals {
    let n = a.dim();
    let r = a.rank();
    let active = lattice_support(a);
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    if r > 0 {
        for mask in 1u64..(1u64 << active.len()) {
            let in_s: Vec<bool> = {
                let mut v = vec![false; n];
                for (b, &l) in active.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        v[l] = true;
                    }
                }
                v
            };
            let rows: Vec<Vec<BigInt>> = (0..n)
                .filter(|&l| !in_s[l])
                .map(|l| a.vectors().iter().map(|v| v[l].clone()).collect())
                .collect();
            let m = IntMatrix::from_rows(rows, r).expect("rows of length rank");
            let k = integer_kernel(&m);
            if k.rank() != 1 {
                continue;
            }
            let c = &k.vectors()[0];
            let mut w: Vec<BigInt> = (0..n)
                .map(|l| (0..r).map(|i| &c[i] * &a.vectors()[i][l]).sum())
                .collect();
            if (0..n).any(|l| w[l].is_zero() == in_s[l]) {
                continue;
            }
            if w.iter().all(|x| !x.is_positive()) {
                w = w.into_iter().map(|x| -x).collect();
            }
            if is_nonnegative(&w) {
                found.push(w);
            }
        }
    }
    found.sort_by(|x, y| grlex_cmp(x, y));
    let supports = found.iter().map(|m| support(m)).collect();
    PaperMinimals {
        lattice: a.clone(),
        elements: found,
        supports,
    }
}

/// `red(qA − pB)` with `p/q = min_{j ∈ supp B} a_j/b_j`.
pub fn reduce_pair(a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    if a.len() != b.len() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let ratio = (0..b.len())
        .filter(|&j| !b[j].is_zero())
        .map(|j| Rational::new(a[j].clone(), b[j].clone()))
        .min()
        .ok_or(LatticeError::ZeroVector)?;
    let (p, q) = (ratio.numer(), ratio.denom());
    Ok(primitive(a.iter().zip(b).map(|(x, y)| q * x - p * y).collect()))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Fraction-free Gaussian elimination.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| !m[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let v = (&m[c][c] * &m[i][j] - &m[i][c] * &m[c][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    sign * &m[k - 1][k - 1]
}

/// lcm of `|det|` over all maximal-rank square minors of the matrix whose
/// columns are the minimal elements.
pub fn delta_bound(minimals: &PaperMinimals) -> Result<BigInt, LatticeError> {
    if minimals.is_empty() {
        return Err(LatticeError::NoMinimals);
    }
    let n = minimals.lattice.dim();
    let cols = minimals.elements.len();
    let m = IntMatrix::from_columns(&minimals.elements, n)?;
    let rk = super::rank(&m);
    let mut acc = BigInt::one();
    for rows in combinations(n, rk) {
        for cs in combinations(cols, rk) {
            let sub: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                .collect();
            let d = determinant(sub).abs();
            if !d.is_zero() {
                acc = acc.lcm(&d);
            }
        }
    }
    Ok(acc)
}

/// `(n+1)·δ·(largest minimal degree)`, or `n+1` when there are no minimals.
pub fn default_cominimal_bound(minimals: &PaperMinimals) -> u64 {
    let n = minimals.lattice.dim() as u64 + 1;
    match delta_bound(minimals) {
        Ok(delta) => (BigInt::from(n) * delta * minimals.max_degree())
            .to_u64()
            .unwrap_or(u64::MAX),
        Err(_) => n,
    }
}

fn is_hitting(set: &[usize], supports: &[Vec<usize>]) -> bool {
    supports.iter().all(|s| s.iter().any(|l| set.contains(l)))
}

/// Largest total degree of a cominimal element, from one linear program per
/// minimal hitting set `L` of the minimal supports: a cominimal `x` has some
/// such `L` with `x_l < max_i M_{i,l}` for every `l ∈ L`.
fn cominimal_degree_cap(a: &LatticeBasis, minimals: &PaperMinimals) -> Option<BigInt> {
    let n = a.dim();
    if minimals.is_empty() {
        return Some(BigInt::zero());
    }
    let eq = a.orthogonal_equations();
    let to_q = |v: &BigInt| Rational::from_integer(v.clone());
    let mut base_rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..eq.rows() {
        base_rows.push(eq.row(i).iter().map(to_q).collect());
        base_rows.push(eq.row(i).iter().map(|v| -to_q(v)).collect());
    }
    let coords: Vec<usize> = minimals.supports.iter().flatten().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let mut cap = BigInt::zero();
    for mask in 1u64..(1u64 << coords.len()) {
        let set: Vec<usize> = (0..coords.len()).filter(|b| mask >> b & 1 == 1).map(|b| coords[b]).collect();
        if !is_hitting(&set, &minimals.supports) {
            continue;
        }
        if set.iter().any(|&l| {
            let smaller: Vec<usize> = set.iter().copied().filter(|&x| x != l).collect();
            is_hitting(&smaller, &minimals.supports)
        }) {
            continue;
        }
        let mut rows = base_rows.clone();
        let mut rhs = vec![Rational::zero(); rows.len()];
        for &l in &set {
            let top = minimals
                .elements
                .iter()
                .map(|m| m[l].clone())
                .max()
                .expect("minimals nonempty");
            let mut row = vec![Rational::zero(); n];
            row[l] = Rational::one();
            rows.push(row);
            rhs.push(Rational::from_integer(top - 1));
        }
        let obj = vec![Rational::one(); n];
        match maximize(&rows, &rhs, &obj)? {
            LpOutcome::Optimal { value, .. } => cap = cap.max(value.floor().to_integer()),
            LpOutcome::Unbounded => return None,
        }
    }
    Some(cap)
}

/// Enumerates cominimal elements of total degree at most `bound`.
pub fn cominimal_elements(a: &LatticeBasis, minimals: &PaperMinimals, bound: u64) -> CominimalSet {
    let degree_cap = cominimal_degree_cap(a, minimals);
    let certified = degree_cap
        .as_ref()
        .is_some_and(|c| BigInt::from(bound) >= *c);
    let mut elements = Vec::new();
    if !minimals.is_empty() {
        let active = lattice_support(a);
        let eq = a.orthogonal_equations();
        let mut x = vec![BigInt::zero(); a.dim()];
        let mut search = Search {
            a,
            eq: &eq,
            minimals: &minimals.elements,
            active: &active,
            out: &mut elements,
        };
        search.walk(0, bound, &mut x);
    }
    elements.sort_by(|p, q| grlex_cmp(p, q));
    CominimalSet {
        elements,
        search_bound: bound,
        degree_cap,
        certified,
    }
}

struct Search<'a> {
    a: &'a LatticeBasis,
    eq: &'a IntMatrix,
    minimals: &'a [Vec<BigInt>],
    active: &'a [usize],
    out: &'a mut Vec<Vec<BigInt>>,
}

impl Search<'_> {
    fn walk(&mut self, pos: usize, budget: u64, x: &mut Vec<BigInt>) {
        if pos == self.active.len() {
            if x.iter().all(Zero::is_zero) {
                return;
            }
            if (0..self.eq.rows()).all(|i| dot(self.eq.row(i), x).is_zero()) && self.a.contains(x) {
                self.out.push(x.clone());
            }
            return;
        }
        let l = self.active[pos];
        for v in 0..=budget {
            x[l] = BigInt::from(v);
            if self.minimals.iter().any(|m| dominates(x, m)) {
                break;
            }
            self.walk(pos + 1, budget - v, x);
        }
        x[l] = BigInt::zero();
    }
}

/// Greedy decomposition: repeatedly remove the lowest-index minimal element
/// that `x` dominates; whatever is left is zero or cominimal.
pub fn decompose(
    x: &[BigInt],
    minimals: &PaperMinimals,
    cominimals: &CominimalSet,
) -> Result<Decomposition, LatticeError> {
    if x.len() != minimals.lattice.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: minimals.lattice.dim(),
            found: x.len(),
        });
    }
    if !is_nonnegative(x) || !minimals.lattice.contains(x) {
        return Err(LatticeError::NotInMonoid);
    }
    let mut rest = x.to_vec();
    let mut mult = vec![BigInt::zero(); minimals.len()];
    while let Some(i) = minimals.elements.iter().position(|m| dominates(&rest, m)) {
        let m = &minimals.elements[i];
        let k = (0..rest.len())
            .filter(|&l| !m[l].is_zero())
            .map(|l| &rest[l] / &m[l])
            .min()
            .expect("minimal elements are nonzero");
        for (r, v) in rest.iter_mut().zip(m) {
            *r -= &k * v;
        }
        mult[i] += k;
    }
    if rest.iter().all(Zero::is_zero) {
        return Ok(Decomposition {
            cominimal: None,
            multiplicities: mult,
        });
    }
    match cominimals.elements.iter().position(|c| *c == rest) {
        Some(h) => Ok(Decomposition {
            cominimal: Some(h),
            multiplicities: mult,
        }),
        None => Err(LatticeError::MissingCominimal(rest)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    fn square_lattice() -> LatticeBasis {
        integer_kernel(&IntMatrix::from_i64(&[[1, -1, -1, 1]]))
    }

    #[test]
    fn four_minimals_without_cominimals() {
        let a = square_lattice();
        let mins = paper_minimal_elements(&a);
        let mut got = mins.elements().to_vec();
        got.sort();
        let mut want = vec![
            to_big(&[1, 1, 0, 0]),
            to_big(&[0, 1, 0, 1]),
            to_big(&[1, 0, 1, 0]),
            to_big(&[0, 0, 1, 1]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(delta_bound(&mins).unwrap(), BigInt::from(1));
        let bound = default_cominimal_bound(&mins);
        assert_eq!(bound, 10);
        let com = cominimal_elements(&a, &mins, bound);
        assert!(com.elements.is_empty());
        assert!(com.certified);
    }

    #[test]
    fn line_without_positive_points() {
        let a = LatticeBasis::from_i64(3, &[[1, -1, 1]]).unwrap();
        let mins = paper_minimal_elements(&a);
        assert!(mins.is_empty());
        assert_eq!(delta_bound(&mins).unwrap_err(), LatticeError::NoMinimals);
        let com = cominimal_elements(&a, &mins, default_cominimal_bound(&mins));
        assert!(com.elements.is_empty() && com.certified);
    }

    #[test]
    fn axis_and_diagonal() {
        let a = LatticeBasis::from_i64(3, &[[1, 0, 0]]).unwrap();
        let mins = paper_minimal_elements(&a);
        assert_eq!(mins.elements(), &[to_big(&[1, 0, 0])]);
        assert!(cominimal_elements(&a, &mins, 5).elements.is_empty());
        let d = LatticeBasis::from_i64(2, &[[1, 1]]).unwrap();
        let mins = paper_minimal_elements(&d);
        assert_eq!(mins.elements(), &[to_big(&[1, 1])]);
        let com = cominimal_elements(&d, &mins, 8);
        assert!(com.elements.is_empty() && com.certified);
        let e = LatticeBasis::from_i64(2, &[[1, 0], [0, 1]]).unwrap();
        assert_eq!(delta_bound(&paper_minimal_elements(&e)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn cominimal_in_index_two_lattice() {
        // 𝒜 = {x : x₁ + x₂ even}: minimals (2,0), (0,2); (1,1) is cominimal.
        let a = LatticeBasis::from_i64(2, &[[1, 1], [0, 2]]).unwrap();
        let mins = paper_minimal_elements(&a);
        assert_eq!(mins.elements(), &[to_big(&[2, 0]), to_big(&[0, 2])]);
        let com = cominimal_elements(&a, &mins, default_cominimal_bound(&mins));
        assert_eq!(com.elements, vec![to_big(&[1, 1])]);
        assert!(com.certified);
        let d = decompose(&to_big(&[3, 5]), &mins, &com).unwrap();
        assert_eq!(d.cominimal, Some(0));
        assert_eq!(d.multiplicities, to_big(&[1, 2]));
    }

    #[test]
    fn reduce_pair_cases() {
        assert_eq!(reduce_pair(&to_big(&[2, 2, 0, 0]), &to_big(&[1, 1, 0, 0])).unwrap(), to_big(&[0, 0, 0, 0]));
        assert_eq!(reduce_pair(&to_big(&[2, 1, 1, 0]), &to_big(&[1, 1, 0, 0])).unwrap(), to_big(&[1, 0, 1, 0]));
        // The minimum ratio is 0 on coordinate 4, so A is returned unchanged.
        assert_eq!(reduce_pair(&to_big(&[1, 1, 0, 0]), &to_big(&[0, 1, 0, 1])).unwrap(), to_big(&[1, 1, 0, 0]));
        assert_eq!(reduce_pair(&to_big(&[1, 1]), &to_big(&[0, 0])).unwrap_err(), LatticeError::ZeroVector);
    }

    #[test]
    fn decompositions() {
        let a = square_lattice();
        let mins = paper_minimal_elements(&a);
        let com = cominimal_elements(&a, &mins, 10);
        let d = decompose(&to_big(&[2, 2, 0, 0]), &mins, &com).unwrap();
        let i = mins.elements().iter().position(|m| *m == to_big(&[1, 1, 0, 0])).unwrap();
        let mut want = vec![BigInt::zero(); 4];
        want[i] = BigInt::from(2);
        assert_eq!(d.multiplicities, want);
        assert_eq!(d.cominimal, None);
        let d = decompose(&to_big(&[0, 0, 0, 0]), &mins, &com).unwrap();
        assert!(d.multiplicities.iter().all(Zero::is_zero));
        assert_eq!(decompose(&to_big(&[1, 0, 0, 0]), &mins, &com).unwrap_err(), LatticeError::NotInMonoid);
    }

    #[test]
    fn bareiss_determinant() {
        let m = vec![to_big(&[2, 0, 1]), to_big(&[1, 3, 2]), to_big(&[1, 1, 2])];
        assert_eq!(determinant(m), BigInt::from(6));
        assert_eq!(determinant(vec![to_big(&[0, 1]), to_big(&[1, 0])]), BigInt::from(-1));
    }
}
