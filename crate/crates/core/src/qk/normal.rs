use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::words::{QkAlgebra, Word, WordExpr};
use crate::bigraded::Coeff;
use crate::error::{Error, Result};
use crate::report::{Report, Witness};

/// `p0(K) + p1(K) Q + p2(K) L + p3(K) QL`; `p[i][k]` is the coefficient of `K^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub p: [Vec<Coeff>; 4],
    pub truncation: Option<usize>,
}

impl NormalForm {
    /// Reads off the normal form of an expression over the standard alphabet.
    pub fn of(alg: &QkAlgebra, e: &WordExpr) -> Result<NormalForm> {
        let (q, k, l) = (
            alg.letter("Q").ok_or_else(|| Error::MissingStructure("Q".into()))?,
            alg.letter("K").ok_or_else(|| Error::MissingStructure("K".into()))?,
            alg.letter("L").ok_or_else(|| Error::MissingStructure("L".into()))?,
        );
        let red = alg.reduce(e);
        let mut p: [Vec<Coeff>; 4] = Default::default();
        for (w, c) in red.terms() {
            let nk = w.iter().take_while(|&&x| x == k).count();
            let slot = match &w[nk..] {
                [] => 0,
                [x] if *x == q => 1,
                [x] if *x == l => 2,
                [x, y] if *x == q && *y == l => 3,
                _ => return Err(Error::Elaboration(format!("irreducible word {} outside the PBW basis", alg.render_word(w)))),
            };
            if p[slot].len() <= nk {
                p[slot].resize(nk + 1, Coeff::zero());
            }
            p[slot][nk] = c.clone();
        }
        Ok(NormalForm {
            p,
            truncation: alg.truncation(),
        })
    }

    pub fn to_expr(&self, alg: &QkAlgebra) -> WordExpr {
        let (q, k, l) = (alg.letter("Q").unwrap(), alg.letter("K").unwrap(), alg.letter("L").unwrap());
        let tails: [Word; 4] = [vec![], vec![q], vec![l], vec![q, l]];
        let mut out = WordExpr::zero();
        for (slot, coeffs) in self.p.iter().enumerate() {
            for (n, c) in coeffs.iter().enumerate() {
                let mut w = vec![k; n];
                w.extend_from_slice(&tails[slot]);
                out.add_term(w, c.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().all(|v| v.iter().all(Coeff::is_zero))
    }

    /// Four coefficient lists `[p0, p1, p2, p3]`, lowest power first.
    pub fn coefficient_lists(&self) -> Vec<Vec<String>> {
        self.p.iter().map(|v| v.iter().map(|c| c.to_string()).collect()).collect()
    }

    pub fn render(&self) -> String {
        QkAlgebra::standard(self.truncation).render(&self.to_expr(&QkAlgebra::standard(self.truncation)))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for NormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coefficient_lists().serialize(s)
    }
}

/// Normal form of a word expression in the standard algebra (optionally truncated).
pub fn reduce(e: &str, n: Option<usize>) -> Result<NormalForm> {
    let alg = QkAlgebra::standard(n);
    NormalForm::of(&alg, &alg.parse(e)?)
}

/// Every irreducible result reachable by rewriting in any order; a confluence oracle.
pub fn all_reductions(alg: &QkAlgebra, w: &Word, memo: &mut HashMap<Word, Vec<WordExpr>>) -> Vec<WordExpr> {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let steps = alg.rewrites(w);
    let mut out: Vec<WordExpr> = Vec::new();
    if steps.is_empty() {
        out.push(WordExpr::word(w.clone()));
    }
    for step in steps {
        let mut partial = vec![WordExpr::zero()];
        for (c, nw) in step {
            let options = all_reductions(alg, &nw, memo);
            let mut next: Vec<WordExpr> = Vec::new();
            for acc in &partial {
                for opt in &options {
                    let e = acc.add(&opt.scale(&c));
                    if !next.contains(&e) {
                        next.push(e);
                    }
                }
            }
            partial = next;
        }
        for e in partial {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    memo.insert(w.clone(), out.clone());
    out
}

/// `[Q, K^p] = p L K^{p-1}` in normal form.
pub fn check_qpk(p: usize) -> Result<Report> {
    if p == 0 || p > 16 {
        return Err(Error::UnsupportedParameter(format!("p = {p} must lie in 1..=16")));
    }
    let alg = QkAlgebra::standard(None);
    let q = alg.gen("Q")?;
    let kp = alg.gen("K")?.pow(p);
    let lhs = NormalForm::of(&alg, &alg.commutator(&q, &kp))?;
    let rhs = NormalForm::of(&alg, &alg.gen("L")?.mul(&alg.gen("K")?.pow(p - 1)).scale(&Coeff::int(p as i64)))?;
    let mut r = Report::new(format!("[Q,K^{p}]"));
    r.expect(format!("[Q,K^{p}] = {p} L K^{}", p - 1), lhs == rhs, || Witness::new(format!("K^{p}"), lhs.render(), rhs.render()));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_normal_forms() {
        assert_eq!(reduce("QKQ", None).unwrap().render(), "Q L");
        assert_eq!(reduce("KQK", None).unwrap().render(), "K L - K^2 Q");
        assert!(reduce("QQ", None).unwrap().is_zero());
    }

    #[test]
    fn qpk_small() {
        for p in [1, 2, 5] {
            assert!(check_qpk(p).unwrap().passed());
        }
        assert_eq!(reduce("2 L K", None).unwrap().render(), "-2 K L");
    }

    #[test]
    fn rewriting_is_confluent_up_to_length_five() {
        let alg = QkAlgebra::standard(None);
        let mut memo = HashMap::new();
        let mut words: Vec<Word> = vec![vec![]];
        for _ in 0..5 {
            words = words.iter().flat_map(|w| (0..3u8).map(move |l| [w.clone(), vec![l]].concat())).collect();
            for w in &words {
                let r = all_reductions(&alg, w, &mut memo);
                assert_eq!(r.len(), 1, "{}", alg.render_word(w));
                assert_eq!(r[0], alg.reduce(&WordExpr::word(w.clone())));
            }
        }
    }

    #[test]
    fn truncation_kills_high_powers() {
        assert!(reduce("K^3", Some(2)).unwrap().is_zero());
        assert!(reduce("K^2 Q K", Some(2)).unwrap().is_zero());
        assert_eq!(reduce("K Q K", Some(2)).unwrap().render(), "K L - K^2 Q");
        assert!(reduce("K^2 L", Some(2)).unwrap().is_zero());
        assert_eq!(reduce("K Q L", Some(2)).unwrap().render(), "K Q L");
    }
}
