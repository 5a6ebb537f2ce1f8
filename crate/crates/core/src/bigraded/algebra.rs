use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::bidegree::{Bidegree, Convention};
use super::coeff::Coeff;
use super::poly::{GenId, Monomial, Polynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GenKind {
    Plain,
    /// A jet coordinate `u_I`; the multi-index is stored in `Generator::jet`.
    Jet,
    /// One component of a Lie-algebra-valued field.
    LieComponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    pub indices: Vec<i64>,
    /// Sorted multi-index of a jet coordinate (empty for order zero).
    pub jet: Vec<u32>,
    pub degree: Bidegree,
    pub kind: GenKind,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: Bidegree) -> Self {
        Generator {
            name: name.into(),
            indices: Vec::new(),
            jet: Vec::new(),
            degree,
            kind: GenKind::Plain,
        }
    }

    pub fn indexed(name: impl Into<String>, indices: Vec<i64>, degree: Bidegree) -> Self {
        Generator {
            indices,
            ..Generator::new(name, degree)
        }
    }

    pub fn with_jet(mut self, mut jet: Vec<u32>) -> Self {
        jet.sort_unstable();
        self.jet = jet;
        self.kind = GenKind::Jet;
        self
    }

    pub fn with_kind(mut self, kind: GenKind) -> Self {
        self.kind = kind;
        self
    }

    /// `name`, `name[i,j]`, or `name[i,j;m1,m2]` for jets.
    pub fn label(&self) -> String {
        label(&self.name, &self.indices, &self.jet)
    }
}

pub fn label(name: &str, indices: &[i64], jet: &[u32]) -> String {
    if indices.is_empty() && jet.is_empty() {
        return name.to_string();
    }
    let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
    if jet.is_empty() {
        format!("{name}[{}]", idx.join(","))
    } else {
        let j: Vec<String> = jet.iter().map(|i| i.to_string()).collect();
        format!("{name}[{};{}]", idx.join(","), j.join(","))
    }
}

/// Homogeneity of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(Bidegree),
    Mixed,
}

impl Degree {
    pub fn bidegree(self) -> Option<Bidegree> {
        match self {
            Degree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }

    /// Whether a polynomial of this homogeneity may stand where degree `d` is expected.
    pub fn fits(self, d: Bidegree) -> bool {
        match self {
            Degree::Zero => true,
            Degree::Homogeneous(e) => e == d,
            Degree::Mixed => false,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Zero => write!(f, "zero"),
            Degree::Homogeneous(d) => write!(f, "{d}"),
            Degree::Mixed => write!(f, "mixed"),
        }
    }
}

/// A free bigraded-commutative algebra on finitely many generators.
#[derive(Debug, Clone)]
pub struct Algebra {
    convention: Convention,
    gens: Vec<Generator>,
    bits: Vec<(u8, u8)>,
    lookup: HashMap<String, GenId>,
}

impl Algebra {
    pub fn new(convention: Convention) -> Self {
        Algebra {
            convention,
            gens: Vec::new(),
            bits: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Same generators, other sign rule.
    pub fn with_convention(&self, convention: Convention) -> Algebra {
        Algebra {
            convention,
            ..self.clone()
        }
    }

    pub fn add(&mut self, g: Generator) -> Result<GenId> {
        let key = g.label();
        if self.lookup.contains_key(&key) {
            return Err(Error::DuplicateGenerator(key));
        }
        let id = self.gens.len() as GenId;
        self.bits.push((g.degree.hbit(), g.degree.vbit()));
        self.gens.push(g);
        self.lookup.insert(key, id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        0..self.gens.len() as GenId
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn degree_of(&self, id: GenId) -> Bidegree {
        self.gens[id as usize].degree
    }

    pub fn label_of(&self, id: GenId) -> String {
        self.gens[id as usize].label()
    }

    pub fn id(&self, label: &str) -> Result<GenId> {
        self.lookup
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn find(&self, name: &str, indices: &[i64], jet: &[u32]) -> Option<GenId> {
        let mut j = jet.to_vec();
        j.sort_unstable();
        self.lookup.get(&label(name, indices, &j)).copied()
    }

    pub fn var(&self, id: GenId) -> Polynomial {
        Polynomial::term(Coeff::one(), Monomial(vec![id]))
    }

    /// The generator with this label as a polynomial.
    pub fn v(&self, label: &str) -> Result<Polynomial> {
        Ok(self.var(self.id(label)?))
    }

    #[inline]
    pub(crate) fn bits(&self, id: GenId) -> (u8, u8) {
        self.bits[id as usize]
    }

    /// Whether swapping generators `a` and `b` costs a sign.
    #[inline]
    pub fn odd_pair(&self, a: GenId, b: GenId) -> bool {
        self.convention.odd_bits(self.bits(a), self.bits(b))
    }

    /// Whether a degree `d` operator passing generator `g` costs a sign.
    #[inline]
    pub fn odd_against(&self, d: Bidegree, g: GenId) -> bool {
        self.convention.odd_bits((d.hbit(), d.vbit()), self.bits(g))
    }

    /// Generators whose square vanishes under the active convention.
    pub fn is_nilpotent_gen(&self, g: GenId) -> bool {
        self.odd_pair(g, g)
    }

    pub fn mono_degree(&self, m: &Monomial) -> Bidegree {
        m.0.iter().fold(Bidegree::ZERO, |acc, &g| acc + self.degree_of(g))
    }

    pub fn degree(&self, f: &Polynomial) -> Degree {
        let mut out = Degree::Zero;
        for (m, _) in f.terms() {
            let d = self.mono_degree(m);
            out = match out {
                Degree::Zero => Degree::Homogeneous(d),
                Degree::Homogeneous(e) if e == d => out,
                _ => return Degree::Mixed,
            };
        }
        out
    }

    /// Product of canonical monomials: `a b = (-1)^neg m`, or `None` when it vanishes.
    pub fn mul_mono(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        if a.0.is_empty() {
            return Some((false, b.clone()));
        }
        if b.0.is_empty() {
            return Some((false, a.clone()));
        }
        let mut neg = false;
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        let mut i = 0;
        for &x in &b.0 {
            while i < a.0.len() && a.0[i] <= x {
                if a.0[i] == x && self.odd_pair(x, x) {
                    return None;
                }
                out.push(a.0[i]);
                i += 1;
            }
            for &y in &a.0[i..] {
                if self.odd_pair(x, y) {
                    neg = !neg;
                }
            }
            out.push(x);
        }
        out.extend_from_slice(&a.0[i..]);
        Some((neg, Monomial(out)))
    }

    /// Canonical form of an ordered word of generators.
    pub fn normalize(&self, word: &[GenId]) -> Option<(bool, Monomial)> {
        let mut acc = (false, Monomial::unit());
        for &g in word {
            let (neg, m) = self.mul_mono(&acc.1, &Monomial(vec![g]))?;
            acc = (acc.0 ^ neg, m);
        }
        Some(acc)
    }

    /// `normalize` for labelled generators, as a polynomial.
    pub fn word(&self, labels: &[&str]) -> Result<Polynomial> {
        let ids = labels.iter().map(|l| self.id(l)).collect::<Result<Vec<_>>>()?;
        Ok(match self.normalize(&ids) {
            None => Polynomial::zero(),
            Some((neg, m)) => Polynomial::term(if neg { Coeff::int(-1) } else { Coeff::one() }, m),
        })
    }

    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in f.terms() {
            for (b, cb) in g.terms() {
                if let Some((neg, m)) = self.mul_mono(a, b) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        let mut acc = Polynomial::one();
        for f in factors {
            acc = self.mul(&acc, f);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn pow(&self, f: &Polynomial, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Graded commutator `fg - (-1)^{..} gf` of homogeneous polynomials.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let (Some(df), Some(dg)) = (self.degree(f).bidegree(), self.degree(g).bidegree()) else {
            return Polynomial::zero();
        };
        let fg = self.mul(f, g);
        let gf = self.mul(g, f);
        if self.convention.odd(df, dg) {
            fg + gf
        } else {
            fg - gf
        }
    }

    fn sort_key(&self, m: &Monomial) -> (usize, Bidegree, Vec<GenId>) {
        (m.len(), self.mono_degree(m), m.0.clone())
    }

    pub fn render_mono(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.0.len() {
            let g = m.0[i];
            let mut k = 1;
            while i + k < m.0.len() && m.0[i + k] == g {
                k += 1;
            }
            let l = self.label_of(g);
            parts.push(if k == 1 { l } else { format!("{l}^{k}") });
            i += k;
        }
        parts.join("*")
    }

    /// Canonical text form; parseable by the DSL.
    pub fn render(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Coeff)> = f.terms().collect();
        terms.sort_by_cached_key(|(m, _)| self.sort_key(m));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = c.split_sign();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_unit() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&self.render_mono(m));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Algebra {
        let mut a = Algebra::new(Convention::First);
        a.add(Generator::new("a", Bidegree::new(1, 0))).unwrap();
        a.add(Generator::new("b", Bidegree::new(0, 1))).unwrap();
        a.add(Generator::new("g", Bidegree::new(1, 0))).unwrap();
        a.add(Generator::new("h", Bidegree::new(1, 0))).unwrap();
        a.add(Generator::new("x", Bidegree::new(0, 0))).unwrap();
        a
    }

    #[test]
    fn normalize_examples() {
        let a = alg();
        let id = |l| a.id(l).unwrap();
        let t = id("b");
        assert!(a.normalize(&[t, t]).is_none());
        assert_eq!(a.normalize(&[id("b"), id("a")]), Some((false, Monomial(vec![id("a"), id("b")]))));
        assert_eq!(a.normalize(&[id("h"), id("g")]), Some((true, Monomial(vec![id("g"), id("h")]))));
        let x = id("x");
        assert_eq!(a.normalize(&[x, x]), Some((false, Monomial(vec![x, x]))));
    }

    #[test]
    fn second_kind_signs() {
        let a = alg().with_convention(Convention::Second);
        assert_eq!(a.word(&["b", "a"]).unwrap(), -a.word(&["a", "b"]).unwrap());
    }

    #[test]
    fn render_is_sorted() {
        let a = alg();
        let p = a.word(&["g", "h"]).unwrap() + a.v("x").unwrap().scale(&Coeff::ratio(-1, 2)) + Polynomial::one();
        assert_eq!(a.render(&p), "1 - 1/2*x + g*h");
        assert_eq!(a.render(&a.pow(&a.v("x").unwrap(), 3)), "x^3");
        assert_eq!(a.render(&Polynomial::zero()), "0");
    }

    #[test]
    fn unknown_generator() {
        assert_eq!(alg().id("zz"), Err(Error::UnknownGenerator("zz".into())));
    }
}
