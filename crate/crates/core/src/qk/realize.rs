use std::collections::HashMap;

use super::words::{QkAlgebra, WordExpr};
use crate::bigraded::{Algebra, Bidegree, Convention, Derivation, Generator, Polynomial};
use crate::equivariant::lie::LieAlgebraData;
use crate::equivariant::weil::LModule;
use crate::error::{Error, Result};

/// Applies the operator named by `e` to `f`; each word acts right to left through `ops`.
pub fn realize(words: &QkAlgebra, e: &WordExpr, alg: &Algebra, ops: &HashMap<String, &Derivation>, f: &Polynomial) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for (w, c) in e.terms() {
        let mut g = f.clone();
        for &l in w.iter().rev() {
            let name = &words.letters[l as usize].name;
            let d = ops.get(name).ok_or_else(|| Error::MissingStructure(format!("operator {name} not provided by the preset")))?;
            g = alg.apply(d, &g)?;
            if g.is_zero() {
                break;
            }
        }
        out += g.scale(c);
    }
    Ok(out)
}

/// `T[1]ℝⁿ` with `Q = θ^μ ∂_xμ`, `ι_μ = ∂_θμ`, `Lie_μ = ∂_xμ`: the abelian L-module that the
/// twisted supertranslations `η, υ_i, w_i` generate.
pub fn twisted_l_module(n: usize) -> Result<LModule> {
    let mut alg = Algebra::new(Convention::First);
    let x = (0..n)
        .map(|m| alg.add(Generator::indexed("x", vec![m as i64 + 1], Bidegree::ZERO)))
        .collect::<Result<Vec<_>>>()?;
    let theta = (0..n)
        .map(|m| alg.add(Generator::indexed("theta", vec![m as i64 + 1], Bidegree::new(0, 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut d = Derivation::new("d", Bidegree::new(0, 1), Convention::First);
    let mut iota = Vec::new();
    let mut lie_d = Vec::new();
    for m in 0..n {
        d.set(x[m], alg.var(theta[m]));
        let mut i = Derivation::new(format!("iota[{}]", m + 1), Bidegree::new(0, -1), Convention::First);
        i.set(theta[m], Polynomial::one());
        iota.push(i);
        let mut l = Derivation::new(format!("Lie[{}]", m + 1), Bidegree::ZERO, Convention::First);
        l.set(x[m], Polynomial::one());
        lie_d.push(l);
    }
    Ok(LModule {
        alg,
        lie: LieAlgebraData::abelian(n),
        d,
        iota,
        lie_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_supertranslations_form_l_module() {
        let m = twisted_l_module(4).unwrap();
        let r = m.check().unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn missing_operator_is_reported() {
        let m = twisted_l_module(1).unwrap();
        let words = QkAlgebra::standard(None);
        let ops: HashMap<String, &Derivation> = HashMap::from([("Q".to_string(), &m.d)]);
        let f = m.alg.v("x[1]").unwrap();
        assert!(matches!(realize(&words, &words.parse("QK").unwrap(), &m.alg, &ops, &f), Err(Error::MissingStructure(_))));
        assert_eq!(m.alg.render(&realize(&words, &words.parse("Q").unwrap(), &m.alg, &ops, &f).unwrap()), "theta[1]");
    }
}
