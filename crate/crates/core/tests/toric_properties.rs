//! Structural properties of toric tuples, torsion and resonance descriptors.

mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use toric_core::exact::{is_integral_combination, rat, Combination, PhaseVector, Rational};
use toric_core::germ::monomials_of_degree;
use toric_core::toric::{
    classify, impure_coordinates, reduce_tuple, resonance_descriptor, simplify_search, toric_analysis, torsion,
    ClassificationKind, ResonanceDescriptor, SearchOptions, SimplifyOutcome, ToricTuple,
};

type Entry = (i64, i64);

fn entry(zero_weight: u32) -> impl Strategy<Value = Entry> {
    prop_oneof![zero_weight => Just((0, 1)), 3 => (-6i64..=6, 1i64..=6)]
}

/// Random phases in `n ≤ 4` coordinates over `√2` and `√3`.
fn phases() -> impl Strategy<Value = (Vec<Entry>, Vec<Entry>, Vec<Entry>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(entry(1), n),
            prop::collection::vec(entry(1), n),
            prop::collection::vec(entry(2), n),
        )
    })
}

fn build(p: &(Vec<Entry>, Vec<Entry>, Vec<Entry>)) -> PhaseVector {
    phase(&p.0, &[("sqrt2", &p.1), ("sqrt3", &p.2)])
}

fn all_q(n: usize, max: u32) -> Vec<Vec<u32>> {
    (2..=max).flat_map(|d| monomials_of_degree(n, d)).collect()
}

/// Another reduced tuple of the same class: `η⁽¹⁾ ↦ η⁽¹⁾ + m·η⁽²⁾` and
/// `η⁽²⁾ ↦ η⁽²⁾ + η⁽³⁾` with the matching coefficient change.
fn second_reduced_tuple(t: &ToricTuple) -> ToricTuple {
    let m = t.m().expect("reduced").clone();
    let mut vectors = t.vectors().to_vec();
    let mut coefficients = t.coefficients().to_vec();
    if vectors.len() >= 2 {
        vectors[0] = vectors[0].iter().zip(&vectors[1]).map(|(a, b)| a + &m * b).collect();
    }
    if vectors.len() >= 3 {
        vectors[1] = vectors[1].iter().zip(&vectors[2]).map(|(a, b)| a + b).collect();
        let b1 = coefficients[1].clone();
        coefficients[2] = combination_sub(&coefficients[2], &b1);
    }
    ToricTuple::new(t.basis().clone(), t.dim(), vectors, coefficients).unwrap()
}

fn combination_sub(a: &Combination, b: &Combination) -> Combination {
    let minus = b.scale(&rat(-1, 1));
    let mut out = Combination::constant(a.constant_part() + minus.constant_part());
    for (&s, c) in a.coeffs().iter().chain(minus.coeffs()) {
        out.add_symbol(s, c);
    }
    out
}

fn torsion_instances() -> Vec<(&'static str, PhaseVector)> {
    corpus()
        .into_iter()
        .filter(|(_, phi)| !torsion(phi).unwrap().is_torsion_free())
        .collect()
}

#[test]
fn sandwich_holds_on_torsion_corpus() {
    for (name, phi) in torsion_instances() {
        let t = toric_analysis(&phi).unwrap().tuple;
        assert!(t.is_reduced(), "{name}");
        let n = phi.dim();
        for j in 0..n {
            let all = ResonanceDescriptor::additive(n, j, t.vectors(), None).unwrap();
            let rest = ResonanceDescriptor::additive(n, j, &t.vectors()[1..], None).unwrap();
            for q in all_q(n, 10) {
                let res = is_integral_combination(&phi, &q, j).unwrap();
                if all.contains(&q) {
                    assert!(res, "{name}: {q:?} in every Res⁺ but not resonant");
                }
                if res {
                    assert!(rest.contains(&q), "{name}: resonant {q:?} outside the tail Res⁺");
                }
            }
        }
    }
}

#[test]
fn classification_is_independent_of_the_reduced_tuple() {
    for (name, phi) in torsion_instances() {
        let t = toric_analysis(&phi).unwrap().tuple;
        let u = second_reduced_tuple(&t);
        assert!(u.is_reduced() && u.represents(&phi), "{name}");
        assert_eq!(impure_coordinates(&t).unwrap(), impure_coordinates(&u).unwrap(), "{name}");
        let opts = SearchOptions::default();
        let found = |tuple: &ToricTuple| {
            matches!(simplify_search(&phi, tuple, &opts).unwrap(), SimplifyOutcome::Simplified(_))
        };
        if impure_coordinates(&t).unwrap().iter().any(|&x| !x) {
            assert_eq!(found(&t), found(&u), "{name}");
        }
    }
}

#[test]
fn no_integer_solution_example_has_degree_two() {
    let phi = no_integer_solution();
    let a = toric_analysis(&phi).unwrap();
    assert_eq!(a.degree, 2);
    assert!(a.tuple.represents(&phi));
}

#[test]
fn equal_phases_get_equal_weights() {
    // Coordinates 0 and 2 carry the same class; 1 differs.
    let phi = phase(&[(1, 3), (1, 2), (4, 3)], &[("sqrt2", &[(1, 1), (2, 1), (1, 1)]), ("sqrt3", &[(0, 1), (1, 1), (0, 1)])]);
    assert!(phi.same_class(0, 2));
    let t = toric_analysis(&phi).unwrap().tuple;
    if torsion(&phi).unwrap().is_torsion_free() {
        for v in t.vectors() {
            assert_eq!(v[0], v[2]);
        }
    } else {
        let c = reduce_tuple(&t, true).unwrap();
        let m = c.m().unwrap();
        assert!(((&c.vectors()[0][0] - &c.vectors()[0][2]) % m).is_zero());
        for v in &c.vectors()[1..] {
            assert_eq!(v[0], v[2]);
        }
    }
}

#[test]
fn equal_phases_in_torsion_case_are_compatible() {
    let phi = phase(&[(1, 7), (3, 7), (1, 7)], &[("sqrt2", &[(1, 1), (-6, 1), (1, 1)])]);
    let t = toric_analysis(&phi).unwrap().tuple;
    let c = reduce_tuple(&t, true).unwrap();
    assert!(c.represents(&phi));
    let m = c.m().unwrap();
    assert!(((&c.vectors()[0][0] - &c.vectors()[0][2]) % m).is_zero());
    for v in &c.vectors()[1..] {
        assert_eq!(v[0], v[2]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analysis_recombines_and_torsion_divides_m(p in phases()) {
        let phi = build(&p);
        let a = toric_analysis(&phi).unwrap();
        prop_assert!(a.tuple.represents(&phi));
        prop_assert_eq!(a.tuple.len(), a.degree);
        if let Some(c) = &a.candidate {
            prop_assert!(c.represents(&phi));
        }
        if !a.torsion.is_torsion_free() {
            prop_assert!((&a.torsion.m % &a.torsion.tau).is_zero());
            prop_assert!(a.tuple.is_reduced());
        }
        let kind = classify(&phi).unwrap().kind;
        prop_assert_eq!(kind == ClassificationKind::TorsionFree, a.torsion.tau.is_one());
    }

    /// Integer symbol entries in `[−2, 2]` keep every relation-lattice basis
    /// vector (a cross product at worst) inside the search box.
    #[test]
    fn torsion_agrees_with_exhaustive_search(p in (1usize..=3).prop_flat_map(|n| (
        prop::collection::vec(entry(1), n),
        prop::collection::vec((-2i64..=2).prop_map(|x| (x, 1)), n),
        prop::collection::vec((-2i64..=2).prop_map(|x| (x, 1)), n),
    ))) {
        let phi = build(&p);
        let bound = if phi.dim() == 3 { 12 } else { 30 };
        prop_assert_eq!(torsion(&phi).unwrap().tau, torsion_by_search(&phi, bound));
    }

    #[test]
    fn descriptor_matches_oracle(p in phases()) {
        let phi = build(&p);
        let n = phi.dim();
        for j in 0..n {
            let d = resonance_descriptor(&phi, j).unwrap();
            for q in all_q(n, 6) {
                prop_assert_eq!(d.contains(&q), is_integral_combination(&phi, &q, j).unwrap(), "j={} q={:?}", j, q);
            }
        }
    }

    #[test]
    fn integer_shifts_of_rational_parts_change_nothing(p in phases(), shift in prop::collection::vec(-3i64..=3, 4)) {
        let phi = build(&p);
        let n = phi.dim();
        let shifted: Vec<Entry> = p.0.iter().zip(&shift).map(|(&(a, b), &s)| (a + s * b, b)).collect();
        let psi = build(&(shifted, p.1.clone(), p.2.clone()));
        for j in 0..n {
            for q in all_q(n, 4) {
                prop_assert_eq!(is_integral_combination(&phi, &q, j).unwrap(), is_integral_combination(&psi, &q, j).unwrap());
            }
        }
    }

    #[test]
    fn swapping_equal_entries_permutes_resonances(
        a in (entry(1), entry(1), entry(2)),
        b in (entry(1), entry(1), entry(2)),
    ) {
        // Coordinates 0 and 1 are equal; the swap fixes the phase vector.
        let p = (vec![a.0, a.0, b.0], vec![a.1, a.1, b.1], vec![a.2, a.2, b.2]);
        let phi = build(&p);
        let swap = |j: usize| match j { 0 => 1, 1 => 0, x => x };
        for j in 0..3 {
            for q in all_q(3, 5) {
                let qs = vec![q[1], q[0], q[2]];
                prop_assert_eq!(is_integral_combination(&phi, &q, j).unwrap(), is_integral_combination(&phi, &qs, swap(j)).unwrap());
            }
        }
    }

    #[test]
    fn integer_coefficient_shifts_keep_the_class(p in phases(), k in 0usize..4, s in -3i64..=3) {
        let phi = build(&p);
        let t = toric_analysis(&phi).unwrap().tuple;
        prop_assume!(k < t.len());
        let mut coefficients = t.coefficients().to_vec();
        coefficients[k] = combination_sub(&coefficients[k], &Combination::constant(rat(s, 1)));
        let u = ToricTuple::new(t.basis().clone(), t.dim(), t.vectors().to_vec(), coefficients).unwrap();
        prop_assert!(u.represents(&phi));
    }
}

/// The degree is the rank of the irrational part, plus one exactly when the
/// rational part is not absorbed; absorption is checked by integer shifts.
#[test]
fn degree_is_rank_of_symbol_part_plus_rational_defect() {
    let cases: Vec<PhaseVector> = corpus().into_iter().map(|(_, p)| p).collect();
    for phi in cases {
        let n = phi.dim();
        let s = phi.basis().len();
        let sym: Vec<Vec<Rational>> = (0..s).map(|k| phi.symbol_vector(k)).collect();
        let rank = rational_rank(&sym);
        let rho = phi.rational_vector();
        let degree = toric_analysis(&phi).unwrap().degree;
        assert!(degree == rank || degree == rank + 1);
        let mut absorbed = false;
        let mut z = vec![-3i64; n];
        'outer: loop {
            let v: Vec<Rational> = rho.iter().zip(&z).map(|(r, &zi)| r - rat(zi, 1)).collect();
            let mut with = sym.clone();
            with.push(v);
            if rational_rank(&with) == rank {
                absorbed = true;
                break 'outer;
            }
            let mut i = 0;
            while i < n && z[i] == 3 {
                z[i] = -3;
                i += 1;
            }
            if i == n {
                break;
            }
            z[i] += 1;
        }
        if absorbed {
            assert_eq!(degree, rank);
        }
    }
}

fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pr = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}
