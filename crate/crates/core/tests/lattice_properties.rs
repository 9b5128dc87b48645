//! Lattice routines against exhaustive search over small boxes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use toric_core::exact::Rational;
use toric_core::lattice::{
    cominimal_elements, decompose, default_cominimal_bound, dominates, hermite_form, hilbert_basis, integer_kernel,
    minimal_inhomogeneous, paper_minimal_elements, solve_affine_monoid, Congruence, IntMatrix, LatticeBasis,
};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Every point of `[lo, hi]ⁿ`.
fn box_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![lo; n];
    loop {
        out.push(x.clone());
        let mut i = 0;
        while i < n && x[i] == hi {
            x[i] = lo;
            i += 1;
        }
        if i == n {
            return out;
        }
        x[i] += 1;
    }
}

/// Every `x ∈ ℕⁿ` with `|x| ≤ d`.
fn simplex_points(n: usize, d: i64) -> Vec<Vec<i64>> {
    box_points(n, 0, d).into_iter().filter(|x| x.iter().sum::<i64>() <= d).collect()
}

fn apply(rows: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn det(m: &IntMatrix) -> Rational {
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = m.to_rows().into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect();
    let mut d = Rational::from_integer(BigInt::from(1));
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(c, p);
            d = -d;
        }
        d *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_basis_spans_every_small_kernel_point(m in (1usize..=2, 2usize..=4).prop_flat_map(|(r, c)| matrix(r, c, 4))) {
        let n = m[0].len();
        let km = IntMatrix::from_i64(&m);
        let k = integer_kernel(&km);
        for v in k.vectors() {
            prop_assert!(km.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
        for x in box_points(n, -3, 3) {
            if apply(&m, &x).iter().all(|&v| v == 0) {
                prop_assert!(k.contains(&big(&x)), "kernel point {:?} outside the span", x);
            }
        }
    }

    #[test]
    fn hermite_form_is_a_unimodular_column_transform(m in (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c, 6))) {
        let km = IntMatrix::from_i64(&m);
        let (h, u) = hermite_form(&km);
        prop_assert_eq!(km.mul(&u).unwrap(), h.clone());
        prop_assert_eq!(det(&u).abs(), Rational::from_integer(BigInt::from(1)));
        // Lower echelon: pivot rows strictly increase and pivots are positive.
        let mut last: Option<usize> = None;
        for j in 0..h.cols() {
            let col = h.column(j);
            match col.iter().position(|x| !x.is_zero()) {
                None => last = Some(usize::MAX),
                Some(p) => {
                    prop_assert!(last.is_none_or(|l| l != usize::MAX && p > l));
                    prop_assert!(col[p].is_positive());
                    last = Some(p);
                }
            }
        }
    }

    #[test]
    fn hilbert_basis_generates_every_small_solution(
        row in prop::collection::vec(-4i64..=4, 2..=4),
        cong in prop::option::of((prop::collection::vec(0i64..=5, 4), 2i64..=4)),
    ) {
        let n = row.len();
        let cong = cong.map(|(v, m)| (v[..n].to_vec(), m));
        let cs: Vec<(Vec<BigInt>, BigInt)> = cong.iter().map(|(v, m)| (big(v), BigInt::from(*m))).collect();
        let desc = hilbert_basis(&IntMatrix::from_i64(&[row.clone()]), &cs).unwrap();
        let is_solution = |x: &[i64]| {
            apply(&[row.clone()], x)[0] == 0
                && cong.as_ref().is_none_or(|(v, m)| apply(&[v.clone()], x)[0].rem_euclid(*m) == 0)
        };
        let bound = 10;
        let brute: BTreeSet<Vec<BigInt>> = simplex_points(n, bound).into_iter().filter(|x| is_solution(x)).map(|x| big(&x)).collect();
        let generated: BTreeSet<Vec<BigInt>> = desc.elements_up_to(bound as u64).into_iter().collect();
        prop_assert_eq!(&generated, &brute);
        // Generators are irreducible: none dominates another nonzero solution.
        for g in &desc.homogeneous {
            let gi: Vec<i64> = g.iter().map(|x| i64::try_from(x).unwrap()).collect();
            if gi.iter().sum::<i64>() <= bound {
                for s in &brute {
                    prop_assert!(s == g || s.iter().all(|x| x.is_zero()) || !dominates(g, s));
                }
            }
        }
    }

    #[test]
    fn two_equations_in_five_unknowns(m in matrix(2, 5, 3), rhs in prop::collection::vec(-2i64..=2, 2)) {
        let desc = solve_affine_monoid(&IntMatrix::from_i64(&m), Some(&big(&rhs)), &[]).unwrap();
        let bound = 8;
        let brute: BTreeSet<Vec<BigInt>> = simplex_points(5, bound)
            .into_iter()
            .filter(|x| apply(&m, x) == rhs)
            .map(|x| big(&x))
            .collect();
        let generated: BTreeSet<Vec<BigInt>> = desc.elements_up_to(bound as u64).into_iter().collect();
        prop_assert_eq!(generated, brute);
    }

    #[test]
    fn particular_solutions_generate_every_small_solution(
        row in prop::collection::vec(-4i64..=4, 2..=4),
        rhs in -4i64..=4,
    ) {
        let n = row.len();
        let desc = minimal_inhomogeneous(&IntMatrix::from_i64(&[row.clone()]), &[BigInt::from(rhs)]).unwrap();
        let bound = 10;
        let brute: BTreeSet<Vec<BigInt>> = simplex_points(n, bound)
            .into_iter()
            .filter(|x| apply(&[row.clone()], x)[0] == rhs)
            .map(|x| big(&x))
            .collect();
        let generated: BTreeSet<Vec<BigInt>> = desc.elements_up_to(bound as u64).into_iter().collect();
        prop_assert_eq!(generated, brute);
    }

    #[test]
    fn congruence_with_residue_matches_brute_force(
        row in prop::collection::vec(-3i64..=3, 3),
        v in prop::collection::vec(0i64..=6, 3),
        residue in 0i64..=6,
        modulus in 2i64..=7,
    ) {
        let c = Congruence::new(big(&v), BigInt::from(residue), BigInt::from(modulus)).unwrap();
        let desc = solve_affine_monoid(&IntMatrix::from_i64(&[row.clone()]), Some(&[BigInt::from(1)]), &[c]).unwrap();
        let bound = 12;
        let brute: BTreeSet<Vec<BigInt>> = simplex_points(3, bound)
            .into_iter()
            .filter(|x| apply(&[row.clone()], x)[0] == 1 && (apply(&[v.clone()], x)[0] - residue).rem_euclid(modulus) == 0)
            .map(|x| big(&x))
            .collect();
        let generated: BTreeSet<Vec<BigInt>> = desc.elements_up_to(bound as u64).into_iter().collect();
        prop_assert_eq!(generated, brute);
    }

    #[test]
    fn paper_minimals_have_the_minimal_supports(row in prop::collection::vec(-4i64..=4, 2..=5)) {
        let n = row.len();
        let a = integer_kernel(&IntMatrix::from_i64(&[row.clone()]));
        let mins = paper_minimal_elements(&a);
        // For one equation every minimal element has entries at most 4.
        let points: Vec<Vec<i64>> = box_points(n, 0, 4)
            .into_iter()
            .filter(|x| x.iter().any(|&v| v != 0) && apply(&[row.clone()], x)[0] == 0)
            .collect();
        let supp = |x: &[i64]| -> Vec<usize> { (0..n).filter(|&i| x[i] != 0).collect() };
        let supports: BTreeSet<Vec<usize>> = points.iter().map(|x| supp(x)).collect();
        let minimal: BTreeSet<Vec<usize>> = supports
            .iter()
            .filter(|s| !supports.iter().any(|t| t != *s && t.iter().all(|i| s.contains(i))))
            .cloned()
            .collect();
        let mut expected: Vec<Vec<BigInt>> = minimal
            .iter()
            .map(|s| {
                let x = points.iter().filter(|x| &supp(x) == s).min_by_key(|x| x.iter().sum::<i64>()).unwrap();
                big(x)
            })
            .collect();
        let mut got = mins.elements().to_vec();
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn decomposition_reconstructs_every_small_element(row in prop::collection::vec(-3i64..=3, 3..=4)) {
        let n = row.len();
        let a = integer_kernel(&IntMatrix::from_i64(&[row.clone()]));
        prop_assume!(a.rank() > 0);
        let mins = paper_minimal_elements(&a);
        let comin = cominimal_elements(&a, &mins, default_cominimal_bound(&mins));
        for x in simplex_points(n, 8) {
            if apply(&[row.clone()], &x)[0] != 0 {
                continue;
            }
            let xb = big(&x);
            let d = decompose(&xb, &mins, &comin).unwrap();
            let mut sum: Vec<BigInt> = match d.cominimal {
                Some(i) => comin.elements[i].clone(),
                None => vec![BigInt::zero(); n],
            };
            for (l, m) in d.multiplicities.iter().zip(mins.elements()) {
                prop_assert!(!l.is_negative());
                for (s, v) in sum.iter_mut().zip(m) {
                    *s += l * v;
                }
            }
            prop_assert_eq!(sum, xb);
        }
    }
}

/// For `C, M` in the same lattice, `C − M ∈ 𝒜⁺` exactly when `C ≥ M`.
#[test]
fn cominimal_test_is_componentwise_domination() {
    let a = LatticeBasis::from_i64(4, &[[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]).unwrap();
    let members: Vec<Vec<BigInt>> = box_points(4, 0, 3)
        .into_iter()
        .map(|x| big(&x))
        .filter(|x| a.contains(x))
        .collect();
    for c in &members {
        for m in &members {
            let diff: Vec<BigInt> = c.iter().zip(m).map(|(p, q)| p - q).collect();
            let in_monoid = a.contains(&diff) && diff.iter().all(|x| !x.is_negative());
            assert_eq!(in_monoid, dominates(c, m));
        }
    }
}
