use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::algebra::{Algebra, Degree};
use super::bidegree::{Bidegree, Convention};
use super::coeff::Coeff;
use super::poly::{GenId, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::report::Witness;

pub const DEFAULT_MAX_ITER: usize = 64;

/// Value of a derivation on one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    Poly(Polynomial),
    /// Needs data beyond the truncation (e.g. a jet of order > J).
    Undefined,
}

/// A graded derivation given by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub name: String,
    pub degree: Bidegree,
    pub convention: Convention,
    action: BTreeMap<GenId, Image>,
}

impl Derivation {
    pub fn new(name: impl Into<String>, degree: Bidegree, convention: Convention) -> Self {
        Derivation {
            name: name.into(),
            degree,
            convention,
            action: BTreeMap::new(),
        }
    }

    pub fn zero(name: impl Into<String>, degree: Bidegree, convention: Convention) -> Self {
        Derivation::new(name, degree, convention)
    }

    pub fn set(&mut self, g: GenId, image: Polynomial) {
        if image.is_zero() {
            self.action.remove(&g);
        } else {
            self.action.insert(g, Image::Poly(image));
        }
    }

    pub fn set_undefined(&mut self, g: GenId) {
        self.action.insert(g, Image::Undefined);
    }

    pub fn image(&self, g: GenId) -> Option<&Image> {
        self.action.get(&g)
    }

    pub fn is_defined_on(&self, g: GenId) -> bool {
        !matches!(self.action.get(&g), Some(Image::Undefined))
    }

    pub fn entries(&self) -> impl Iterator<Item = (GenId, &Image)> {
        self.action.iter().map(|(g, i)| (*g, i))
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.action.is_empty()
    }
}

fn sign(neg: bool, c: Coeff) -> Coeff {
    if neg {
        -c
    } else {
        c
    }
}

impl Algebra {
    fn check_convention(&self, d: &Derivation) -> Result<()> {
        if d.convention != self.convention() {
            return Err(Error::ConventionMismatch(d.name.clone()));
        }
        Ok(())
    }

    /// Checks that every image has degree `deg(g) + deg(D)`.
    pub fn validate_derivation(&self, d: &Derivation) -> Result<()> {
        self.check_convention(d)?;
        for (g, img) in d.entries() {
            if let Image::Poly(p) = img {
                let want = self.degree_of(g) + d.degree;
                let got = self.degree(p);
                if !got.fits(want) {
                    return Err(Error::DegreeMismatch {
                        what: format!("{}({})", d.name, self.label_of(g)),
                        expected: want,
                        found: got.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// `D(g)` for a generator; an error when the image is undefined.
    pub fn apply_gen(&self, d: &Derivation, g: GenId) -> Result<Polynomial> {
        match d.image(g) {
            None => Ok(Polynomial::zero()),
            Some(Image::Poly(p)) => Ok(p.clone()),
            Some(Image::Undefined) => Err(Error::TruncationExceeded(self.label_of(g))),
        }
    }

    /// Extends `D` to `f` by linearity and the graded Leibniz rule.
    pub fn apply(&self, d: &Derivation, f: &Polynomial) -> Result<Polynomial> {
        self.check_convention(d)?;
        let mut out = Polynomial::zero();
        let mut cache: HashMap<GenId, Polynomial> = HashMap::new();
        for (m, c) in f.terms() {
            let mut passed_odd = false;
            for t in 0..m.len() {
                let g = m.0[t];
                let img = match cache.get(&g) {
                    Some(p) => p,
                    None => {
                        let p = self.apply_gen(d, g)?;
                        cache.entry(g).or_insert(p)
                    }
                };
                if !img.is_zero() {
                    let prefix = Monomial(m.0[..t].to_vec());
                    let suffix = Monomial(m.0[t + 1..].to_vec());
                    for (im, ic) in img.terms() {
                        let Some((n1, left)) = self.mul_mono(&prefix, im) else { continue };
                        let Some((n2, full)) = self.mul_mono(&left, &suffix) else { continue };
                        out.add_term(full, sign(passed_odd ^ n1 ^ n2, c * ic));
                    }
                }
                if self.odd_against(d.degree, g) {
                    passed_odd = !passed_odd;
                }
            }
        }
        Ok(out)
    }

    /// `D^k f`.
    pub fn apply_n(&self, d: &Derivation, f: &Polynomial, k: usize) -> Result<Polynomial> {
        let mut acc = f.clone();
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = self.apply(d, &acc)?;
        }
        Ok(acc)
    }

    /// Graded commutator `[D, E] = DE - (-1)^{..} ED`, evaluated on every generator.
    pub fn commutator(&self, d: &Derivation, e: &Derivation) -> Result<Derivation> {
        self.check_convention(d)?;
        self.check_convention(e)?;
        let odd = self.convention().odd(d.degree, e.degree);
        let name = format!("[{},{}]", d.name, e.name);
        let images: Vec<(GenId, Option<Polynomial>)> = self
            .ids()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|g| {
                let de = self.apply_gen(e, g).and_then(|x| self.apply(d, &x));
                let ed = self.apply_gen(d, g).and_then(|x| self.apply(e, &x));
                match (de, ed) {
                    (Ok(a), Ok(b)) => (g, Some(if odd { a + b } else { a - b })),
                    _ => (g, None),
                }
            })
            .collect();
        let mut out = Derivation::new(name, d.degree + e.degree, d.convention);
        for (g, img) in images {
            match img {
                Some(p) => out.set(g, p),
                None => out.set_undefined(g),
            }
        }
        Ok(out)
    }

    /// `D∘D` for an odd derivation (itself a derivation, `½[D,D]`).
    pub fn square(&self, d: &Derivation) -> Result<Derivation> {
        if !self.convention().odd(d.degree, d.degree) {
            return Err(Error::Elaboration(format!(
                "{} has even degree {}; its square is not a derivation",
                d.name, d.degree
            )));
        }
        let mut out = Derivation::new(format!("{}^2", d.name), d.degree * 2, d.convention);
        for g in self.ids() {
            match self.apply_gen(d, g).and_then(|x| self.apply(d, &x)) {
                Ok(p) => out.set(g, p),
                Err(_) => out.set_undefined(g),
            }
        }
        Ok(out)
    }

    /// `Σ c_k D_k` for derivations of one degree.
    pub fn lincomb(&self, name: impl Into<String>, parts: &[(Coeff, &Derivation)]) -> Result<Derivation> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::Elaboration("empty linear combination".into()));
        };
        let mut out = Derivation::new(name, first.degree, self.convention());
        let mut acc: BTreeMap<GenId, Option<Polynomial>> = BTreeMap::new();
        for (c, d) in parts {
            self.check_convention(d)?;
            if d.degree != first.degree {
                return Err(Error::DegreeMismatch {
                    what: format!("linear combination term {}", d.name),
                    expected: first.degree,
                    found: d.degree.to_string(),
                });
            }
            for (g, img) in d.entries() {
                let slot = acc.entry(g).or_insert_with(|| Some(Polynomial::zero()));
                match (slot.as_mut(), img) {
                    (Some(p), Image::Poly(q)) => *p += q.scale(c),
                    (_, Image::Undefined) => *slot = None,
                    (None, _) => {}
                }
            }
        }
        for (g, img) in acc {
            match img {
                Some(p) => out.set(g, p),
                None => out.set_undefined(g),
            }
        }
        Ok(out)
    }

    /// The derivation `g ↦ f·D(g)` of degree `deg f + deg D`, for homogeneous `f`.
    pub fn left_mul(&self, f: &Polynomial, d: &Derivation) -> Result<Derivation> {
        let df = match self.degree(f) {
            Degree::Homogeneous(x) => x,
            Degree::Zero => Bidegree::ZERO,
            Degree::Mixed => {
                return Err(Error::DegreeMismatch {
                    what: "left multiplier".into(),
                    expected: Bidegree::ZERO,
                    found: "mixed".into(),
                })
            }
        };
        let mut out = Derivation::new(format!("({})*{}", self.render(f), d.name), df + d.degree, d.convention);
        for (g, img) in d.entries() {
            match img {
                Image::Poly(p) => out.set(g, self.mul(f, p)),
                Image::Undefined => out.set_undefined(g),
            }
        }
        Ok(out)
    }

    /// `Σ_p D^p f / p!`.
    pub fn exp_apply(&self, d: &Derivation, f: &Polynomial, max_iter: usize) -> Result<Polynomial> {
        Ok(self.exp_terms(d, f, max_iter)?.into_iter().sum())
    }

    /// The individual terms `D^p f / p!` for `p = 0, 1, ...` until zero.
    pub fn exp_terms(&self, d: &Derivation, f: &Polynomial, max_iter: usize) -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        let mut cur = f.clone();
        let mut p = 0usize;
        while !cur.is_zero() {
            if p > max_iter {
                return Err(Error::NotNilpotent {
                    name: d.name.clone(),
                    max_iter,
                });
            }
            out.push(cur.clone());
            p += 1;
            cur = self.apply(d, &cur)?.scale(&Coeff::ratio(1, p as i64));
        }
        Ok(out)
    }

    /// Algebra homomorphism sending each listed generator to its image.
    pub fn substitute(&self, map: &HashMap<GenId, Polynomial>, f: &Polynomial) -> Result<Polynomial> {
        for (g, img) in map {
            let want = self.degree_of(*g);
            if !self.degree(img).fits(want) {
                return Err(Error::DegreeMismatch {
                    what: format!("substitution for {}", self.label_of(*g)),
                    expected: want,
                    found: self.degree(img).to_string(),
                });
            }
        }
        let mut out = Polynomial::zero();
        for (m, c) in f.terms() {
            let mut acc = Polynomial::constant(c.clone());
            for g in &m.0 {
                let x = match map.get(g) {
                    Some(p) => p.clone(),
                    None => self.var(*g),
                };
                acc = self.mul(&acc, &x);
                if acc.is_zero() {
                    break;
                }
            }
            out += acc;
        }
        Ok(out)
    }

    /// Pointwise comparison of two derivations on the given generators.
    pub fn compare_on(&self, d: &Derivation, e: &Derivation, gens: &[GenId]) -> Vec<Witness> {
        gens.par_iter()
            .filter_map(|&g| {
                let (a, b) = (d.image(g), e.image(g));
                let zero = Image::Poly(Polynomial::zero());
                let a = a.unwrap_or(&zero);
                let b = b.unwrap_or(&zero);
                if a == b {
                    return None;
                }
                Some(Witness::new(self.label_of(g), self.render_image(a), self.render_image(b)))
            })
            .collect()
    }

    /// Comparison on every generator where both sides are defined; also returns how many were skipped.
    pub fn compare_defined(&self, d: &Derivation, e: &Derivation) -> (Vec<Witness>, usize) {
        let gens: Vec<GenId> = self
            .ids()
            .filter(|&g| !matches!(d.image(g), Some(Image::Undefined)) && !matches!(e.image(g), Some(Image::Undefined)))
            .collect();
        let skipped = self.len() - gens.len();
        (self.compare_on(d, e, &gens), skipped)
    }

    /// Pointwise comparison on every generator.
    pub fn compare(&self, d: &Derivation, e: &Derivation) -> Vec<Witness> {
        let all: Vec<GenId> = self.ids().collect();
        self.compare_on(d, e, &all)
    }

    /// Generators on which `d` vanishes fails are reported with `rhs = 0`.
    pub fn vanishes_on(&self, d: &Derivation, gens: &[GenId]) -> Vec<Witness> {
        let z = Derivation::new("0", d.degree, d.convention);
        self.compare_on(d, &z, gens)
    }

    pub fn render_image(&self, i: &Image) -> String {
        match i {
            Image::Poly(p) => self.render(p),
            Image::Undefined => "<beyond truncation>".into(),
        }
    }

    /// Human-readable action table.
    pub fn render_derivation(&self, d: &Derivation) -> Vec<String> {
        d.entries()
            .map(|(g, i)| format!("{}({}) = {}", d.name, self.label_of(g), self.render_image(i)))
            .collect()
    }

    /// Derivation `∂/∂g` acting from the left (degree `-deg g`).
    pub fn left_partial(&self, g: GenId) -> Derivation {
        let mut d = Derivation::new(format!("d/d{}", self.label_of(g)), -self.degree_of(g), self.convention());
        d.set(g, Polynomial::one());
        d
    }

    /// Left partial derivative `∂→/∂g f`.
    pub fn partial_left(&self, g: GenId, f: &Polynomial) -> Polynomial {
        self.apply(&self.left_partial(g), f).expect("partial derivatives are always defined")
    }

    /// Right partial derivative `f ∂←/∂g`: `g` is moved to the right end before removal.
    pub fn partial_right(&self, f: &Polynomial, g: GenId) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in f.terms() {
            for t in 0..m.len() {
                if m.0[t] != g {
                    continue;
                }
                let neg = m.0[t + 1..].iter().filter(|&&y| self.odd_pair(g, y)).count() % 2 == 1;
                let mut rest = m.0.clone();
                rest.remove(t);
                out.add_term(Monomial(rest), sign(neg, c.clone()));
            }
        }
        out
    }

    /// Berezin top coefficient with `∫ dχ1…dχk (χ1…χk) = 1`; the remaining generators stay.
    pub fn berezin(&self, odd: &[GenId], f: &Polynomial) -> Polynomial {
        let Some((n0, top)) = self.normalize(odd) else {
            return Polynomial::zero();
        };
        let mut out = Polynomial::zero();
        for (m, c) in f.terms() {
            if !top.0.iter().all(|g| m.contains(*g)) {
                continue;
            }
            let mut rest = m.0.clone();
            for g in &top.0 {
                let pos = rest.iter().position(|x| x == g).expect("contained");
                rest.remove(pos);
            }
            let rest = Monomial(rest);
            let (n1, check) = self.mul_mono(&top, &rest).expect("monomial is nonzero");
            debug_assert_eq!(&check, m);
            out.add_term(rest, sign(n0 ^ n1, c.clone()));
        }
        out
    }
}

/// Sign factor `(-1)^{Σ_{s<t} j_s i_t}` relating the two conventions on a monomial.
fn conversion_odd(alg: &Algebra, m: &Monomial) -> bool {
    let mut js = 0u32;
    let mut odd = false;
    for &g in &m.0 {
        let (i, _) = alg.bits(g);
        if i == 1 && js % 2 == 1 {
            odd = !odd;
        }
        js += alg.bits(g).1 as u32;
    }
    odd
}

/// Rescales monomials so products in one convention map to the other; an involution.
pub fn convert_polynomial(alg: &Algebra, f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        out.add_term(m.clone(), sign(conversion_odd(alg, m), c.clone()));
    }
    out
}

/// `D'(a) = (-1)^{j i_a} D(a)` with images converted; the result uses the other convention.
pub fn convert_derivation(alg: &Algebra, d: &Derivation) -> Derivation {
    let mut out = Derivation::new(d.name.clone(), d.degree, d.convention.other());
    for (g, img) in d.entries() {
        match img {
            Image::Poly(p) => {
                let flip = d.degree.vbit() & alg.bits(g).0 == 1;
                let q = convert_polynomial(alg, p);
                out.set(g, if flip { -q } else { q });
            }
            Image::Undefined => out.set_undefined(g),
        }
    }
    out
}
