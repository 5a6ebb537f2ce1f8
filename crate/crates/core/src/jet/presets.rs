use std::collections::HashMap;

use super::space::JetSpace;
use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, Polynomial, Tensor};
use crate::error::Result;
use crate::report::Report;

/// The three operators `Q`, `K`, `L` of a QK-structure.
#[derive(Debug, Clone)]
pub struct QkStructure {
    pub q: Derivation,
    pub k: Derivation,
    pub l: Derivation,
}

impl QkStructure {
    pub fn ops(&self) -> HashMap<String, &Derivation> {
        HashMap::from([("Q".to_string(), &self.q), ("K".to_string(), &self.k), ("L".to_string(), &self.l)])
    }

    /// `Q² = 0`, `QK + KQ = L`, `KL + LK = 0`, `QL = LQ`, `L² = 0` wherever both sides are defined.
    pub fn check(&self, alg: &Algebra) -> Result<Report> {
        let mut r = Report::new("QK relations");
        let zero = |deg| Derivation::new("0", deg, alg.convention());
        let mut skipped = 0;
        let mut entry = |label: &str, lhs: Derivation, rhs: &Derivation| {
            let (w, s) = alg.compare_defined(&lhs, rhs);
            skipped = skipped.max(s);
            r.check(label, w);
        };
        entry("Q^2 = 0", alg.square(&self.q)?, &zero(self.q.degree * 2));
        entry("[Q,K] = L", alg.commutator(&self.q, &self.k)?, &self.l);
        entry("[K,L] = 0", alg.commutator(&self.k, &self.l)?, &zero(self.k.degree + self.l.degree));
        entry("[Q,L] = 0", alg.commutator(&self.q, &self.l)?, &zero(self.q.degree + self.l.degree));
        entry("L^2 = 0", alg.square(&self.l)?, &zero(self.l.degree * 2));
        if skipped > 0 {
            r.note(format!("{skipped} generators at the truncation order were skipped"));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetFieldSpec {
    pub name: String,
    pub count: usize,
    pub degree: Bidegree,
}

impl JetFieldSpec {
    pub fn new(name: impl Into<String>, count: usize) -> Self {
        JetFieldSpec {
            name: name.into(),
            count,
            degree: Bidegree::ZERO,
        }
    }
}

/// A field's components `u[j]` and their vertical differentials `du[j]`, as jet bases.
#[derive(Debug, Clone)]
pub struct FieldBases {
    pub name: String,
    pub u: Vec<usize>,
    pub du: Vec<usize>,
}

/// Variational jet algebra with the canonical QK-structure `Q = d_v`, `K(δu_I) = u_{Iμ} dx^μ`, `L = d_h2`.
#[derive(Debug, Clone)]
pub struct JetPreset {
    pub name: String,
    pub space: JetSpace,
    pub qk: QkStructure,
    pub fields: Vec<FieldBases>,
}

pub fn build_jet(name: &str, n: usize, order: usize, fields: &[JetFieldSpec]) -> Result<JetPreset> {
    let mut space = JetSpace::new(n, order, Convention::First)?;
    let mut bases = Vec::new();
    for f in fields {
        let u = space.add_field_family(&f.name, &[f.count], f.degree)?;
        let du = space.add_field_family(&format!("d{}", f.name), &[f.count], f.degree + Bidegree::new(0, 1))?;
        bases.push(FieldBases {
            name: f.name.clone(),
            u,
            du,
        });
    }
    let mut q_img = Vec::new();
    let mut k_img = Vec::new();
    for fb in &bases {
        for (&u, &du) in fb.u.iter().zip(&fb.du) {
            q_img.push((u, space.jet(du, &[])?));
            let mut k = Polynomial::zero();
            for mu in 1..=n {
                k += space.alg.mul(&space.jet(u, &[mu as u32])?, &space.dx(mu));
            }
            k_img.push((du, k));
        }
    }
    let q = space.prolong("Q", Bidegree::new(0, 1), &q_img);
    let k = space.prolong("K", Bidegree::new(1, -1), &k_img);
    let l = space.horizontal()?;
    Ok(JetPreset {
        name: name.to_string(),
        space,
        qk: QkStructure { q, k, l },
        fields: bases,
    })
}

impl JetPreset {
    pub fn alg(&self) -> &Algebra {
        &self.space.alg
    }

    pub fn field(&self, name: &str) -> Option<&FieldBases> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// `u^i`, 0-based component.
    pub fn u(&self, i: usize) -> Polynomial {
        self.space.jet(self.fields[0].u[i], &[]).expect("order zero")
    }

    /// `δu^i`.
    pub fn du(&self, i: usize) -> Polynomial {
        self.space.jet(self.fields[0].du[i], &[]).expect("order zero")
    }

    /// `u^i_μ` (μ 1-based).
    pub fn u_mu(&self, i: usize, mu: usize) -> Polynomial {
        self.space.jet(self.fields[0].u[i], &[mu as u32]).expect("order one")
    }

    /// `d_h u^i = u^i_μ dx^μ`.
    pub fn dh_u(&self, i: usize) -> Polynomial {
        (1..=self.space.n).map(|mu| self.alg().mul(&self.u_mu(i, mu), &self.space.dx(mu))).sum()
    }
}

/// Topological quantum mechanics: `n = 1`, `k` target coordinates.
pub fn tqm(k: usize) -> Result<JetPreset> {
    build_jet("tqm", 1, 2, &[JetFieldSpec::new("u", k)])
}

/// Topological sigma model: `n = 2`, `m` target coordinates.
pub fn sigma(m: usize) -> Result<JetPreset> {
    build_jet("sigma", 2, 2, &[JetFieldSpec::new("u", m)])
}

/// Topological M-theory: `n = 3`, seven target coordinates.
pub fn mtheory() -> Result<JetPreset> {
    build_jet("mtheory", 3, 2, &[JetFieldSpec::new("u", 7)])
}

/// The associative 3-form `e123 + e145 + e167 + e246 - e257 - e347 - e356`.
pub fn g2_form() -> Tensor {
    let mut t = Tensor::zeros(vec![7; 3]);
    for (idx, s) in [
        ([1, 2, 3], 1),
        ([1, 4, 5], 1),
        ([1, 6, 7], 1),
        ([2, 4, 6], 1),
        ([2, 5, 7], -1),
        ([3, 4, 7], -1),
        ([3, 5, 6], -1),
    ] {
        let i: Vec<usize> = idx.iter().map(|x| x - 1).collect();
        t.set_antisymmetric(&i, Coeff::int(s));
    }
    t
}

/// Standard symplectic form `Σ e^{2k-1} ∧ e^{2k}` on `ℝ^m`, `m` even.
pub fn symplectic_form(m: usize) -> Tensor {
    let mut t = Tensor::zeros(vec![m; 2]);
    for k in 0..m / 2 {
        t.set_antisymmetric(&[2 * k, 2 * k + 1], Coeff::one());
    }
    t
}

/// `(T ⊕ T)[(1,1)]ℝⁿ` with `Q = θ^μ ∂_xμ`, `K = η^μ ∂_θμ`, `L = η^μ ∂_xμ`.
#[derive(Debug, Clone)]
pub struct TsmPreset {
    pub alg: Algebra,
    pub x: Vec<GenId>,
    pub eta: Vec<GenId>,
    pub theta: Vec<GenId>,
    pub qk: QkStructure,
}

pub fn flat_tsm(n: usize) -> Result<TsmPreset> {
    let conv = Convention::First;
    let mut alg = Algebra::new(conv);
    let mut add = |name: &str, d: Bidegree| -> Result<Vec<GenId>> {
        (1..=n).map(|m| alg.add(Generator::indexed(name, vec![m as i64], d))).collect()
    };
    let x = add("x", Bidegree::ZERO)?;
    let eta = add("eta", Bidegree::new(1, 0))?;
    let theta = add("theta", Bidegree::new(0, 1))?;
    let mut q = Derivation::new("Q", Bidegree::new(0, 1), conv);
    let mut k = Derivation::new("K", Bidegree::new(1, -1), conv);
    let mut l = Derivation::new("L", Bidegree::new(1, 0), conv);
    for m in 0..n {
        q.set(x[m], alg.var(theta[m]));
        k.set(theta[m], alg.var(eta[m]));
        l.set(x[m], alg.var(eta[m]));
    }
    Ok(TsmPreset {
        alg,
        x,
        eta,
        theta,
        qk: QkStructure { q, k, l },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tqm_actions() {
        let p = tqm(1).unwrap();
        let a = p.alg();
        let l = a.apply(&p.qk.l, &p.du(0)).unwrap();
        assert_eq!(a.render(&l), "dx[1]*du[1;1]");
        let qk = a.commutator(&p.qk.q, &p.qk.k).unwrap();
        assert_eq!(a.apply(&qk, &p.du(0)).unwrap(), l);
        assert!(a.apply(&p.qk.q, &a.apply(&p.qk.q, &p.u(0)).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn canonical_relations() {
        for p in [tqm(2).unwrap(), sigma(2).unwrap()] {
            let r = p.qk.check(p.alg()).unwrap();
            assert!(r.passed(), "{r}");
        }
        let t = flat_tsm(3).unwrap();
        assert!(t.qk.check(&t.alg).unwrap().passed());
    }

    #[test]
    fn forms_are_antisymmetric() {
        assert!(g2_form().antisymmetry_violation().is_none());
        assert!(symplectic_form(4).antisymmetry_violation().is_none());
    }
}
