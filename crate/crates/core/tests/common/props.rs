use std::collections::BTreeMap;

use cohoma::bigraded::{convert_derivation, convert_polynomial, DEFAULT_MAX_ITER};
use cohoma::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, Monomial, Polynomial};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 256;

fn runner(seed: u8) -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

/// Mixed bidegrees so every sign rule is exercised; `x` and `c` are even and not nilpotent.
fn algebra(conv: Convention) -> Algebra {
    let mut a = Algebra::new(conv);
    for (n, h, v) in [("x", 0, 0), ("a", 1, 0), ("b", 0, 1), ("c", 1, 1), ("e", 1, -1), ("u", 2, 1)] {
        a.add(Generator::new(n, Bidegree::new(h, v))).unwrap();
    }
    a
}

/// Nonzero monomials of length at most 3 whose generators all come from `gens`, by bidegree.
fn monomials(alg: &Algebra, gens: &[GenId]) -> BTreeMap<(i32, i32), Vec<Monomial>> {
    let mut out: BTreeMap<(i32, i32), Vec<Monomial>> = BTreeMap::new();
    let mut words: Vec<Vec<GenId>> = vec![vec![]];
    for _ in 0..3 {
        let next: Vec<Vec<GenId>> = words
            .iter()
            .filter(|w| w.len() == words.last().unwrap().len())
            .flat_map(|w| gens.iter().filter(move |&&g| w.last().is_none_or(|&l| l <= g)).map(move |&g| [w.clone(), vec![g]].concat()))
            .collect();
        words.extend(next);
    }
    for w in words {
        if let Some((_, m)) = alg.normalize(&w) {
            let d = alg.mono_degree(&m);
            let e = out.entry((d.h, d.v)).or_default();
            if !e.contains(&m) {
                e.push(m);
            }
        }
    }
    out
}

fn combination(ms: &[Monomial], coeffs: &[(usize, i64)]) -> Polynomial {
    let mut p = Polynomial::zero();
    if ms.is_empty() {
        return p;
    }
    for &(k, c) in coeffs {
        p.add_term(ms[k % ms.len()].clone(), Coeff::int(c));
    }
    p
}

type Coeffs = Vec<(usize, i64)>;

fn coeffs() -> impl Strategy<Value = Coeffs> {
    prop::collection::vec((0usize..64, -4i64..5), 0..4)
}

/// A homogeneous polynomial: a degree picked by index, then a combination of monomials of that degree.
fn homogeneous(table: &BTreeMap<(i32, i32), Vec<Monomial>>, pick: usize, cs: &[(usize, i64)]) -> (Bidegree, Polynomial) {
    let (d, ms) = table.iter().nth(pick % table.len()).unwrap();
    (Bidegree::new(d.0, d.1), combination(ms, cs))
}

const DEGREES: [(i32, i32); 7] = [(0, 0), (1, 0), (0, 1), (1, -1), (1, 1), (2, 0), (-1, 1)];

/// Arbitrary tables, or triangular ones (image of `g_k` uses only later generators) when `triangular`.
fn derivation(alg: &Algebra, name: &str, deg: Bidegree, images: &[Coeffs], triangular: bool) -> Derivation {
    let ids: Vec<GenId> = alg.ids().collect();
    let mut d = Derivation::new(name, deg, alg.convention());
    for (k, &g) in ids.iter().enumerate() {
        let pool = if triangular { &ids[k + 1..] } else { &ids[..] };
        let table = monomials(alg, pool);
        let want = alg.degree_of(g) + deg;
        let img = match table.get(&(want.h, want.v)) {
            Some(ms) if !pool.is_empty() => combination(ms, &images[k % images.len().max(1)]),
            _ => Polynomial::zero(),
        };
        d.set(g, img);
    }
    d
}

fn der_strategy() -> impl Strategy<Value = (usize, Vec<Coeffs>)> {
    (0..DEGREES.len(), prop::collection::vec(coeffs(), 1..7))
}

fn deg(k: usize) -> Bidegree {
    Bidegree::new(DEGREES[k].0, DEGREES[k].1)
}

fn sign(odd: bool) -> Coeff {
    Coeff::int(if odd { -1 } else { 1 })
}

pub fn leibniz_rule_on_random_products() -> Result<(), String> {
    for (seed, conv) in [(1, Convention::First), (2, Convention::Second)] {
        let alg = algebra(conv);
        let table = monomials(&alg, &alg.ids().collect::<Vec<_>>());
        let s = (der_strategy(), 0usize..64, coeffs(), 0usize..64, coeffs());
        runner(seed)
            .run(&s, |((dk, imgs), pf, cf, pg, cg)| {
                let d = derivation(&alg, "D", deg(dk), &imgs, false);
                let (df, f) = homogeneous(&table, pf, &cf);
                let (_, g) = homogeneous(&table, pg, &cg);
                let lhs = alg.apply(&d, &alg.mul(&f, &g)).unwrap();
                let rhs = alg.mul(&alg.apply(&d, &f).unwrap(), &g)
                    + alg.mul(&f, &alg.apply(&d, &g).unwrap()).scale(&sign(conv.odd(d.degree, df)));
                prop_assert_eq!(alg.render(&lhs), alg.render(&rhs));
                Ok(())
            })
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

pub fn commutator_is_a_derivation_given_by_composition() -> Result<(), String> {
    for (seed, conv) in [(3, Convention::First), (4, Convention::Second)] {
        let alg = algebra(conv);
        let table = monomials(&alg, &alg.ids().collect::<Vec<_>>());
        let s = (der_strategy(), der_strategy(), 0usize..64, coeffs(), 0usize..64, coeffs());
        runner(seed)
            .run(&s, |((dk, di), (ek, ei), pf, cf, pg, cg)| {
                let d = derivation(&alg, "D", deg(dk), &di, false);
                let e = derivation(&alg, "E", deg(ek), &ei, false);
                let c = alg.commutator(&d, &e).unwrap();
                prop_assert_eq!(c.degree, d.degree + e.degree);
                let (df, f) = homogeneous(&table, pf, &cf);
                let (_, g) = homogeneous(&table, pg, &cg);
                let fg = alg.mul(&f, &g);
                let composed = alg.apply(&d, &alg.apply(&e, &fg).unwrap()).unwrap()
                    - alg.apply(&e, &alg.apply(&d, &fg).unwrap()).unwrap().scale(&sign(conv.odd(d.degree, e.degree)));
                prop_assert_eq!(alg.render(&alg.apply(&c, &fg).unwrap()), alg.render(&composed));
                let leib = alg.mul(&alg.apply(&c, &f).unwrap(), &g) + alg.mul(&f, &alg.apply(&c, &g).unwrap()).scale(&sign(conv.odd(c.degree, df)));
                prop_assert_eq!(alg.apply(&c, &fg).unwrap(), leib);
                Ok(())
            })
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

pub fn exp_is_multiplicative_when_the_left_factor_pairs_evenly() -> Result<(), String> {
    for (seed, conv) in [(5, Convention::First), (6, Convention::Second)] {
        let alg = algebra(conv);
        let table = monomials(&alg, &alg.ids().collect::<Vec<_>>());
        let self_even: Vec<usize> = (0..DEGREES.len()).filter(|&k| !conv.odd(deg(k), deg(k))).collect();
        let s = (0usize..64, prop::collection::vec(coeffs(), 1..7), 0usize..64, coeffs(), 0usize..64, coeffs());
        runner(seed)
            .run(&s, |(dk, imgs, pf, cf, pg, cg)| {
                let d = derivation(&alg, "D", deg(self_even[dk % self_even.len()]), &imgs, true);
                let left: BTreeMap<_, _> = table
                    .iter()
                    .filter(|(k, _)| !conv.odd(d.degree, Bidegree::new(k.0, k.1)))
                    .map(|(k, v)| (*k, v.clone()))
                    .collect();
                let (_, f) = homogeneous(&left, pf, &cf);
                let (_, g) = homogeneous(&table, pg, &cg);
                let ex = |p: &Polynomial| alg.exp_apply(&d, p, DEFAULT_MAX_ITER).unwrap();
                prop_assert_eq!(ex(&alg.mul(&f, &g)), alg.mul(&ex(&f), &ex(&g)));
                Ok(())
            })
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

pub fn exp_detects_an_oddly_pairing_left_factor() -> Result<(), String> {
    let alg = algebra(Convention::First);
    let id = |n: &str| alg.id(n).unwrap();
    let mut d = Derivation::new("D", Bidegree::new(1, 1), Convention::First);
    d.set(id("x"), alg.var(id("c")));
    d.set(id("a"), alg.var(id("u")));
    let (a, x) = (alg.var(id("a")), alg.var(id("x")));
    let ex = |p: &Polynomial| alg.exp_apply(&d, p, DEFAULT_MAX_ITER).unwrap();
    assert!(Convention::First.odd(d.degree, alg.degree_of(id("a"))));
    assert_ne!(ex(&alg.mul(&a, &x)), alg.mul(&ex(&a), &ex(&x)));
    assert_eq!(ex(&alg.mul(&x, &a)), alg.mul(&ex(&x), &ex(&a)));
    Ok(())
}

pub fn convention_conversion_round_trips_and_intertwines() -> Result<(), String> {
    let first = algebra(Convention::First);
    let second = algebra(Convention::Second);
    let table = monomials(&first, &first.ids().collect::<Vec<_>>());
    let s = (der_strategy(), 0usize..64, coeffs(), 0usize..64, coeffs());
    runner(9)
        .run(&s, |((dk, imgs), pf, cf, pg, cg)| {
            let d = derivation(&first, "D", deg(dk), &imgs, false);
            let (df, f) = homogeneous(&table, pf, &cf);
            let (dg, g) = homogeneous(&table, pg, &cg);
            let cf_ = convert_polynomial(&first, &f);
            prop_assert_eq!(convert_polynomial(&second, &cf_), f.clone());
            let d2 = convert_derivation(&first, &d);
            prop_assert_eq!(d2.convention, Convention::Second);
            let back = convert_derivation(&second, &d2);
            prop_assert!(first.compare(&back, &d).is_empty());
            prop_assert_eq!(
                convert_polynomial(&first, &first.mul(&f, &g)),
                second.mul(&cf_, &convert_polynomial(&first, &g)).scale(&sign(df.vbit() & dg.hbit() == 1))
            );
            let twist = sign(d.degree.vbit() & df.hbit() == 1);
            prop_assert_eq!(
                second.apply(&d2, &cf_).unwrap(),
                convert_polynomial(&first, &first.apply(&d, &f).unwrap()).scale(&twist)
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}
