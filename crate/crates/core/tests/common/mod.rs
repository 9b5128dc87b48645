//! Phase vectors and germs shared by the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_core::exact::{rat, Combination, GaussianRational, PhaseVector, Rational, SymbolBasis};
use toric_core::germ::{monomials_of_degree, Germ, Monomial, Poly, Spectrum};

/// `φ_j = rational[j] + Σ_s symbols[s].1[j] · symbols[s].0`, all entries `(num, den)`.
pub fn phase(rational: &[(i64, i64)], symbols: &[(&str, &[(i64, i64)])]) -> PhaseVector {
    let names: Vec<&str> = symbols.iter().map(|(s, _)| *s).collect();
    let basis = SymbolBasis::new(names).unwrap();
    let n = rational.len();
    let values = (0..n)
        .map(|j| {
            Combination::from_parts(
                rat(rational[j].0, rational[j].1),
                symbols
                    .iter()
                    .enumerate()
                    .map(|(s, (_, v))| (s, rat(v[j].0, v[j].1))),
            )
        })
        .collect();
    PhaseVector::from_combinations(basis, values).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<(i64, i64)> {
    v.iter().map(|&x| (x, 1)).collect()
}

pub fn over(v: &[i64], d: i64) -> Vec<(i64, i64)> {
    v.iter().map(|&x| (x, d)).collect()
}

pub fn zeros(n: usize) -> Vec<(i64, i64)> {
    vec![(0, 1); n]
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `(√2+i)/6 · (1,2,5)`.
pub fn degree_one() -> PhaseVector {
    let v = over(&[1, 2, 5], 6);
    phase(&zeros(3), &[("sqrt2", &v), ("i", &v)])
}

/// `√2(3,2,−1) + 2i(2,3,1)`.
pub fn two_vectors_torsion_free() -> PhaseVector {
    phase(&zeros(3), &[("sqrt2", &ints(&[3, 2, -1])), ("i", &ints(&[4, 6, 2]))])
}

/// `√2(3,2,−1) + 2i(2,−3,1)`.
pub fn two_vectors_parametric() -> PhaseVector {
    phase(&zeros(3), &[("sqrt2", &ints(&[3, 2, -1])), ("i", &ints(&[4, -6, 2]))])
}

/// `((1+6√2)/6, (1−2√2)/2)`.
pub fn rational_and_root() -> PhaseVector {
    phase(&[(1, 6), (1, 2)], &[("sqrt2", &ints(&[1, -1]))])
}

/// `(1/2, √2, i)`.
pub fn three_independent() -> PhaseVector {
    phase(&[(1, 2), (0, 1), (0, 1)], &[("sqrt2", &ints(&[0, 1, 0])), ("i", &ints(&[0, 0, 1]))])
}

/// `(√2/2, (√2+i)/2, (−2+3√2+i)/2)`.
pub fn companion() -> PhaseVector {
    phase(&[(0, 1), (0, 1), (-1, 1)], &[("sqrt2", &over(&[1, 1, 3], 2)), ("i", &over(&[0, 1, 1], 2))])
}

/// `((2i+1)/3, i, (11+10i)/6)`.
pub fn no_integer_solution() -> PhaseVector {
    phase(&[(1, 3), (0, 1), (11, 6)], &[("i", &[(2, 3), (1, 1), (10, 6)])])
}

/// `(1/6)(1,3) + √2(1,−6)`.
pub fn torsion_two() -> PhaseVector {
    phase(&over(&[1, 3], 6), &[("sqrt2", &ints(&[1, -6]))])
}

/// `(1/7)(1,3) + √2(1,−6)`.
pub fn torsion_seven() -> PhaseVector {
    phase(&over(&[1, 3], 7), &[("sqrt2", &ints(&[1, -6]))])
}

/// `(0,0,1,1)/3 + √2(−12,0,0,1) + √3(0,5,2,0)`.
pub fn impure_four() -> PhaseVector {
    phase(&over(&[0, 0, 1, 1], 3), &[("sqrt2", &ints(&[-12, 0, 0, 1])), ("sqrt3", &ints(&[0, 5, 2, 0]))])
}

/// `(1,1,1,1)/3 + √2(1,6,0,0) + √3(0,0,−1,5)`.
pub fn simplifiable_four() -> PhaseVector {
    phase(&over(&[1, 1, 1, 1], 3), &[("sqrt2", &ints(&[1, 6, 0, 0])), ("sqrt3", &ints(&[0, 0, -1, 5]))])
}

pub fn corpus() -> Vec<(&'static str, PhaseVector)> {
    vec![
        ("degree_one", degree_one()),
        ("two_vectors_torsion_free", two_vectors_torsion_free()),
        ("two_vectors_parametric", two_vectors_parametric()),
        ("rational_and_root", rational_and_root()),
        ("three_independent", three_independent()),
        ("companion", companion()),
        ("no_integer_solution", no_integer_solution()),
        ("torsion_two", torsion_two()),
        ("torsion_seven", torsion_seven()),
        ("impure_four", impure_four()),
        ("simplifiable_four", simplifiable_four()),
    ]
}

fn lcm_all<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()))
}

/// Torsion by exhaustion: scans integer `k ∈ [−bound, bound]ⁿ` whose
/// symbol part `Σ k_j φ_j` vanishes and returns the denominator of the
/// group generated by `1` and the rational parts so found.
pub fn torsion_by_search(phi: &PhaseVector, bound: i64) -> BigInt {
    let n = phi.dim();
    let s = phi.basis().len();
    let rational = phi.rational_vector();
    let l = lcm_all(rational.iter());
    let r: Vec<i64> = rational
        .iter()
        .map(|x| i64::try_from(x.numer() * (&l / x.denom())).unwrap())
        .collect();
    let sym: Vec<Vec<i64>> = (0..s)
        .map(|k| {
            let v = phi.symbol_vector(k);
            let d = lcm_all(v.iter());
            v.iter()
                .map(|x| i64::try_from(x.numer() * (&d / x.denom())).unwrap())
                .collect()
        })
        .collect();
    let mut g: i64 = i64::try_from(l.clone()).unwrap();
    let mut k = vec![-bound; n];
    loop {
        if sym.iter().all(|row| row.iter().zip(&k).map(|(a, b)| a * b).sum::<i64>() == 0) {
            let v: i64 = r.iter().zip(&k).map(|(a, b)| a * b).sum();
            g = g.gcd(&v);
        }
        let mut i = 0;
        while i < n && k[i] == bound {
            k[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
        k[i] += 1;
    }
    l / BigInt::from(g)
}

pub fn gauss(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
}

pub fn small_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    let mut part = || {
        let num = rng.gen_range(-5..=5);
        let den = rng.gen_range(1..=4);
        (num, den)
    };
    gauss(part(), part())
}

/// Dense random higher-order terms in every coordinate up to `degree`.
pub fn dense_terms(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> Vec<Poly<GaussianRational>> {
    (0..n)
        .map(|_| {
            let mut p = Poly::zero(n, ());
            for d in 2..=degree {
                for q in monomials_of_degree(n, d) {
                    p.add_term(Monomial(q), small_gaussian(rng));
                }
            }
            p
        })
        .collect()
}

/// Exact-spectrum germs with many resonances, some with Jordan blocks.
pub fn exact_germs(rng: &mut ChaCha8Rng) -> Vec<(&'static str, Germ)> {
    let r = |a: i64, b: i64| GaussianRational::from_rational(rat(a, b));
    let spectra: Vec<(&'static str, Vec<GaussianRational>, Vec<bool>, u32)> = vec![
        ("quarter_half", vec![r(1, 4), r(1, 2)], vec![false, false], 5),
        ("jordan_two", vec![r(2, 1), r(2, 1)], vec![false, true], 4),
        ("product_resonance", vec![r(1, 2), r(1, 3), r(1, 6)], vec![false, false, false], 4),
        (
            "roots_of_unity",
            vec![GaussianRational::i(), r(-1, 1), gauss((0, 1), (-1, 1))],
            vec![false, false, false],
            4,
        ),
        ("gaussian", vec![gauss((1, 1), (1, 1)), gauss((2, 1), (-1, 1))], vec![false, false], 5),
        ("jordan_three", vec![r(1, 3), r(3, 1), r(3, 1)], vec![false, false, true], 4),
    ];
    spectra
        .into_iter()
        .map(|(name, l, eps, d)| {
            let n = l.len();
            (name, Germ::new(d, Spectrum::Exact(l), eps, dense_terms(n, d, rng)).unwrap())
        })
        .collect()
}

/// Phase-linked germs over the corpus phases.
pub fn phase_germs(rng: &mut ChaCha8Rng) -> Vec<(&'static str, Germ)> {
    let picks: Vec<(&'static str, PhaseVector, u32)> = vec![
        ("degree_one", degree_one(), 4),
        ("two_vectors_torsion_free", two_vectors_torsion_free(), 4),
        ("two_vectors_parametric", two_vectors_parametric(), 4),
        ("rational_and_root", rational_and_root(), 5),
        ("three_independent", three_independent(), 4),
        ("torsion_two", torsion_two(), 5),
        ("torsion_seven", torsion_seven(), 5),
        ("simplifiable_four", simplifiable_four(), 3),
    ];
    picks
        .into_iter()
        .map(|(name, phi, d)| {
            let n = phi.dim();
            (name, Germ::phase_linked(d, phi, vec![false; n], dense_terms(n, d, rng)).unwrap())
        })
        .collect()
}
