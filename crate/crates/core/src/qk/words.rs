use std::collections::BTreeMap;
use std::fmt;

use crate::bigraded::{Bidegree, Coeff, Convention};
use crate::error::{Error, Result};

pub type Letter = u8;
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGenerator {
    pub name: String,
    pub degree: Bidegree,
}

/// Finite linear combination of words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordExpr {
    terms: BTreeMap<Word, Coeff>,
}

impl WordExpr {
    pub fn zero() -> Self {
        WordExpr::default()
    }

    pub fn one() -> Self {
        WordExpr::word(vec![])
    }

    pub fn word(w: Word) -> Self {
        let mut e = WordExpr::zero();
        e.add_term(w, Coeff::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Letter]) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Coeff::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &WordExpr) -> WordExpr {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &WordExpr) -> WordExpr {
        self.add(&o.scale(&Coeff::int(-1)))
    }

    pub fn scale(&self, k: &Coeff) -> WordExpr {
        let mut out = WordExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    /// Concatenation product.
    pub fn mul(&self, o: &WordExpr) -> WordExpr {
        let mut out = WordExpr::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> WordExpr {
        (0..k).fold(WordExpr::one(), |acc, _| acc.mul(self))
    }
}

#[derive(Debug, Clone)]
enum Redex {
    Pair(usize),
    Power,
}

/// Word algebra presented by quadratic rewrite rules `ab -> Σ c w`, optionally with `x^{n+1} = 0`.
#[derive(Debug, Clone)]
pub struct QkAlgebra {
    pub letters: Vec<WordGenerator>,
    rules: BTreeMap<(Letter, Letter), Vec<(Coeff, Word)>>,
    truncation: Option<usize>,
    /// Words that vanish: `K^{n+1}` and its consequences.
    zero_words: Vec<Word>,
}

impl QkAlgebra {
    pub fn new(letters: Vec<WordGenerator>) -> Self {
        QkAlgebra {
            letters,
            rules: BTreeMap::new(),
            truncation: None,
            zero_words: Vec::new(),
        }
    }

    pub fn rule(&mut self, a: &str, b: &str, rhs: &[(i64, &str)]) {
        let (a, b) = (self.letter(a).expect("letter"), self.letter(b).expect("letter"));
        let rhs = rhs
            .iter()
            .map(|(c, w)| (Coeff::int(*c), self.parse_word(w).expect("word")))
            .collect();
        self.rules.insert((a, b), rhs);
    }

    /// `Q`, `K`, `L` with `Q² = L² = 0`, `QK = L - KQ`, `LK = -KL`, `LQ = QL`, and `K^{n+1} = 0` when `n` is given.
    ///
    /// `K^{n+1} = 0` forces `(n+1) K^n L = [Q, K^{n+1}] = 0` and then `K^n QL = ±Q K^n L = 0`, so all three
    /// words vanish; without the last two the rewriting is not confluent.
    pub fn standard(n: Option<usize>) -> Self {
        let mut a = QkAlgebra::new(vec![
            WordGenerator { name: "Q".into(), degree: Bidegree::new(0, 1) },
            WordGenerator { name: "K".into(), degree: Bidegree::new(1, -1) },
            WordGenerator { name: "L".into(), degree: Bidegree::new(1, 0) },
        ]);
        a.rule("Q", "Q", &[]);
        a.rule("L", "L", &[]);
        a.rule("Q", "K", &[(1, "L"), (-1, "KQ")]);
        a.rule("L", "K", &[(-1, "KL")]);
        a.rule("L", "Q", &[(1, "QL")]);
        if let Some(n) = n {
            a.truncation = Some(n);
            a.zero_words = vec![vec![1; n + 1], [vec![1; n], vec![2]].concat(), [vec![1; n], vec![0, 2]].concat()];
        }
        a
    }

    /// Universal enveloping algebra of the abelian superalgebra with `[Q_l,K_l] = [Q_r,K_r] = L`.
    pub fn gl() -> Self {
        let mut a = QkAlgebra::new(vec![
            WordGenerator { name: "Q_l".into(), degree: Bidegree::new(0, 1) },
            WordGenerator { name: "Q_r".into(), degree: Bidegree::new(0, 1) },
            WordGenerator { name: "K_l".into(), degree: Bidegree::new(1, -1) },
            WordGenerator { name: "K_r".into(), degree: Bidegree::new(1, -1) },
            WordGenerator { name: "L".into(), degree: Bidegree::new(1, 0) },
        ]);
        a.rule("K_r", "K_l", &[(1, "K_l K_r")]);
        a.rule("Q_l", "K_l", &[(1, "L"), (-1, "K_l Q_l")]);
        a.rule("Q_r", "K_r", &[(1, "L"), (-1, "K_r Q_r")]);
        a.rule("Q_l", "K_r", &[(-1, "K_r Q_l")]);
        a.rule("Q_r", "K_l", &[(-1, "K_l Q_r")]);
        a.rule("Q_r", "Q_l", &[(-1, "Q_l Q_r")]);
        a.rule("Q_l", "Q_l", &[]);
        a.rule("Q_r", "Q_r", &[]);
        a.rule("L", "L", &[]);
        for x in ["K_l", "K_r"] {
            a.rule("L", x, &[(-1, &format!("{x} L"))]);
        }
        for x in ["Q_l", "Q_r"] {
            a.rule("L", x, &[(1, &format!("{x} L"))]);
        }
        a
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|g| g.name == name).map(|i| i as Letter)
    }

    pub fn gen(&self, name: &str) -> Result<WordExpr> {
        self.letter(name)
            .map(|l| WordExpr::word(vec![l]))
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn degree(&self, w: &[Letter]) -> Bidegree {
        w.iter().fold(Bidegree::ZERO, |acc, &l| acc + self.letters[l as usize].degree)
    }

    /// Bidegree of a homogeneous expression; `None` for zero or mixed.
    pub fn expr_degree(&self, e: &WordExpr) -> Option<Bidegree> {
        let mut ds = e.terms().map(|(w, _)| self.degree(w));
        let first = ds.next()?;
        ds.all(|d| d == first).then_some(first)
    }

    fn zero_at(&self, w: &[Letter], i: usize) -> bool {
        self.zero_words.iter().any(|z| w[i..].starts_with(z))
    }

    fn find_redex(&self, w: &[Letter]) -> Option<Redex> {
        for i in 0..w.len() {
            if self.zero_at(w, i) {
                return Some(Redex::Power);
            }
            if i + 1 < w.len() && self.rules.contains_key(&(w[i], w[i + 1])) {
                return Some(Redex::Pair(i));
            }
        }
        None
    }

    /// Every single-step rewrite of `w`, one per redex position.
    pub fn rewrites(&self, w: &[Letter]) -> Vec<Vec<(Coeff, Word)>> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            if self.zero_at(w, i) {
                out.push(vec![]);
            }
            if i + 1 < w.len() {
                if let Some(r) = self.rewrite_at(w, &Redex::Pair(i)) {
                    out.push(r);
                }
            }
        }
        out
    }

    fn rewrite_at(&self, w: &[Letter], r: &Redex) -> Option<Vec<(Coeff, Word)>> {
        match *r {
            Redex::Power => Some(vec![]),
            Redex::Pair(i) => {
                let rhs = self.rules.get(&(w[i], w[i + 1]))?;
                Some(
                    rhs.iter()
                        .map(|(c, mid)| {
                            let mut nw = w[..i].to_vec();
                            nw.extend_from_slice(mid);
                            nw.extend_from_slice(&w[i + 2..]);
                            (c.clone(), nw)
                        })
                        .collect(),
                )
            }
        }
    }

    /// Rewrites to the irreducible form by repeatedly eliminating the leftmost redex.
    pub fn reduce(&self, e: &WordExpr) -> WordExpr {
        let mut current = e.clone();
        let mut done = WordExpr::zero();
        while !current.is_zero() {
            let mut next = WordExpr::zero();
            for (w, c) in current.terms() {
                match self.find_redex(w) {
                    None => done.add_term(w.clone(), c.clone()),
                    Some(r) => {
                        for (k, nw) in self.rewrite_at(w, &r).expect("redex") {
                            next.add_term(nw, c * &k);
                        }
                    }
                }
            }
            current = next;
        }
        done
    }

    pub fn is_reduced(&self, w: &[Letter]) -> bool {
        self.find_redex(w).is_none()
    }

    /// Graded commutator `ab - (-1)^{⟨a,b⟩} ba` of homogeneous expressions (first-kind signs).
    pub fn commutator(&self, a: &WordExpr, b: &WordExpr) -> WordExpr {
        let (Some(da), Some(db)) = (self.expr_degree(a), self.expr_degree(b)) else {
            return WordExpr::zero();
        };
        let sign = if Convention::First.odd(da, db) { 1 } else { -1 };
        a.mul(b).add(&b.mul(a).scale(&Coeff::int(sign)))
    }

    pub fn render_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.letters[w[i] as usize].name;
            parts.push(if j - i == 1 { name.clone() } else { format!("{}^{}", name, j - i) });
            i = j;
        }
        parts.join(" ")
    }

    pub fn render(&self, e: &WordExpr) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Word, &Coeff)> = e.terms().collect();
        terms.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        let mut out = String::new();
        for (k, (w, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = c.split_sign();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = self.render_word(w);
            if mag == "1" {
                out.push_str(&body);
            } else if w.is_empty() {
                out.push_str(&mag);
            } else {
                out.push_str(&format!("{mag} {body}"));
            }
        }
        out
    }

    /// Parses a single word such as `"KQK"`, `"K^2 Q"` or `"Q_l K_r"`.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let e = self.parse(s)?;
        let mut it = e.terms();
        match (it.next(), it.next()) {
            (Some((w, c)), None) if c.is_one() => Ok(w.clone()),
            _ if s.trim().is_empty() => Ok(vec![]),
            _ => Err(Error::Syntax {
                line: 1,
                col: 1,
                msg: format!("expected a single word, found {s:?}"),
            }),
        }
    }

    /// Parses `Σ ± c w` with rational coefficients, e.g. `"QK + KQ"` or `"K L - K^2 Q"`.
    pub fn parse(&self, s: &str) -> Result<WordExpr> {
        let chars: Vec<char> = s.chars().collect();
        let err = |i: usize, msg: String| Error::Syntax { line: 1, col: i + 1, msg };
        let mut out = WordExpr::zero();
        let mut i = 0;
        let skip = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let number = |i: &mut usize| -> Option<i64> {
            let st = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            (*i > st).then(|| chars[st..*i].iter().collect::<String>().parse().ok()).flatten()
        };
        let mut first = true;
        loop {
            skip(&mut i);
            if i >= chars.len() {
                if first {
                    return Err(err(i, "empty word expression".into()));
                }
                break;
            }
            let mut sign = 1;
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -1;
                }
                i += 1;
                skip(&mut i);
            } else if !first {
                return Err(err(i, format!("expected '+' or '-', found {:?}", chars[i])));
            }
            first = false;
            let mut c = Coeff::int(sign);
            if let Some(p) = number(&mut i) {
                let mut q = 1;
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    q = number(&mut i).ok_or_else(|| err(i, "expected denominator".into()))?;
                    if q == 0 {
                        return Err(err(i, "zero denominator".into()));
                    }
                }
                c = c * Coeff::ratio(p, q);
                skip(&mut i);
                if i < chars.len() && chars[i] == '*' {
                    i += 1;
                }
            }
            let mut w = Word::new();
            loop {
                skip(&mut i);
                if i >= chars.len() || !chars[i].is_ascii_uppercase() {
                    break;
                }
                let st = i;
                i += 1;
                if i + 1 < chars.len() && chars[i] == '_' && chars[i + 1].is_ascii_lowercase() {
                    i += 2;
                } else if i < chars.len() && chars[i].is_ascii_lowercase() {
                    i += 1;
                }
                let raw: String = chars[st..i].iter().collect();
                let name = if raw.len() == 2 { format!("{}_{}", &raw[..1], &raw[1..]) } else { raw.clone() };
                let l = self.letter(&name).ok_or_else(|| err(st, format!("unknown letter {raw:?}")))?;
                let mut k = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    k = number(&mut i).ok_or_else(|| err(i, "expected exponent".into()))? as usize;
                }
                w.extend(std::iter::repeat(l).take(k));
            }
            out.add_term(w, c);
        }
        Ok(out)
    }
}

impl fmt::Display for WordGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.degree)
    }
}
