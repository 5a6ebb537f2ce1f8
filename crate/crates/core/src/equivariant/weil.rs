use std::collections::BTreeMap;

use super::lie::LieAlgebraData;
use crate::bigraded::linalg::{rank, Row};
use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, GenKind, Monomial, Polynomial};
use crate::error::Result;
use crate::report::Report;

/// An algebra carrying `d`, `ι_a`, `Lie_a` for a Lie algebra `g`.
#[derive(Debug, Clone)]
pub struct LModule {
    pub alg: Algebra,
    pub lie: LieAlgebraData,
    pub d: Derivation,
    pub iota: Vec<Derivation>,
    pub lie_d: Vec<Derivation>,
}

#[derive(Debug, Clone)]
pub struct WeilPreset {
    pub module: LModule,
    pub theta: Vec<GenId>,
    pub phi: Vec<GenId>,
}

pub(crate) fn lie_gen(name: &str, a: usize, deg: Bidegree) -> Generator {
    Generator::indexed(name, vec![a as i64 + 1], deg).with_kind(GenKind::LieComponent)
}

/// Adds `θ^a` (0,1) and `φ^a` (0,2) and fills the Weil tables into `d`, `ι`, `Lie`.
pub(crate) fn add_weil_part(
    alg: &mut Algebra,
    lie: &LieAlgebraData,
    theta_name: &str,
    phi_name: &str,
) -> Result<(Vec<GenId>, Vec<GenId>)> {
    let n = lie.dim;
    let theta = (0..n).map(|a| alg.add(lie_gen(theta_name, a, Bidegree::new(0, 1)))).collect::<Result<Vec<_>>>()?;
    let phi = (0..n).map(|a| alg.add(lie_gen(phi_name, a, Bidegree::new(0, 2)))).collect::<Result<Vec<_>>>()?;
    Ok((theta, phi))
}

pub(crate) fn fill_weil_tables(
    alg: &Algebra,
    lie: &LieAlgebraData,
    theta: &[GenId],
    phi: &[GenId],
    d: &mut Derivation,
    iota: &mut [Derivation],
    lie_d: &mut [Derivation],
) {
    let n = lie.dim;
    let th: Vec<Polynomial> = theta.iter().map(|&g| alg.var(g)).collect();
    let ph: Vec<Polynomial> = phi.iter().map(|&g| alg.var(g)).collect();
    let half = Coeff::ratio(1, 2);
    let tt = lie.bracket(alg, &th, &th);
    let pt = lie.bracket(alg, &ph, &th);
    for a in 0..n {
        d.set(theta[a], &ph[a] - &tt[a].scale(&half));
        d.set(phi[a], pt[a].clone());
        iota[a].set(theta[a], Polynomial::one());
        for b in 0..n {
            let mut lt = Polynomial::zero();
            let mut lp = Polynomial::zero();
            for c in 0..n {
                let k = lie.fc(b, a, c);
                if !k.is_zero() {
                    lt += th[c].scale(&-k);
                    lp += ph[c].scale(&-k);
                }
            }
            lie_d[a].set(theta[b], lt);
            lie_d[a].set(phi[b], lp);
        }
    }
}

pub(crate) fn empty_ops(lie: &LieAlgebraData, conv: Convention) -> (Derivation, Vec<Derivation>, Vec<Derivation>) {
    let n = lie.dim;
    let d = Derivation::new("d", Bidegree::new(0, 1), conv);
    let iota = (0..n).map(|a| Derivation::new(format!("iota[{}]", a + 1), Bidegree::new(0, -1), conv)).collect();
    let lie_d = (0..n).map(|a| Derivation::new(format!("Lie[{}]", a + 1), Bidegree::ZERO, conv)).collect();
    (d, iota, lie_d)
}

/// The Weil algebra with its `d`, `ι_a`, `Lie_a`, without validating `f`.
pub fn build_weil_unchecked(lie: &LieAlgebraData) -> WeilPreset {
    let mut alg = Algebra::new(Convention::First);
    let (theta, phi) = add_weil_part(&mut alg, lie, "theta", "phi").expect("fresh algebra");
    let (mut d, mut iota, mut lie_d) = empty_ops(lie, Convention::First);
    fill_weil_tables(&alg, lie, &theta, &phi, &mut d, &mut iota, &mut lie_d);
    WeilPreset {
        module: LModule {
            alg,
            lie: lie.clone(),
            d,
            iota,
            lie_d,
        },
        theta,
        phi,
    }
}

pub fn build_weil(lie: &LieAlgebraData) -> Result<WeilPreset> {
    lie.validate()?;
    Ok(build_weil_unchecked(lie))
}

impl LModule {
    fn lincomb_f(&self, name: String, ops: &[Derivation], a: usize, b: usize, degree: Bidegree) -> Result<Derivation> {
        let parts: Vec<(Coeff, &Derivation)> = (0..self.lie.dim)
            .filter(|&c| !self.lie.fc(c, a, b).is_zero())
            .map(|c| (self.lie.fc(c, a, b).clone(), &ops[c]))
            .collect();
        if parts.is_empty() {
            return Ok(Derivation::new(name, degree, self.alg.convention()));
        }
        Ok(self.alg.lincomb(name, &parts)?)
    }

    /// Verifies all six relation families as derivation identities on every generator.
    pub fn check(&self) -> Result<Report> {
        let alg = &self.alg;
        let n = self.lie.dim;
        let mut r = Report::new(format!("L-module relations for {}", self.lie.name));
        let dd = alg.commutator(&self.d, &self.d)?;
        r.check("{d,d} = 0", alg.vanishes_on(&dd, &alg.ids().collect::<Vec<_>>()));
        let mut w_dl = Vec::new();
        let mut w_ii = Vec::new();
        let mut w_di = Vec::new();
        let mut w_li = Vec::new();
        let mut w_ll = Vec::new();
        let all: Vec<GenId> = alg.ids().collect();
        for a in 0..n {
            w_dl.extend(alg.vanishes_on(&alg.commutator(&self.lie_d[a], &self.d)?, &all));
            w_di.extend(alg.compare(&alg.commutator(&self.d, &self.iota[a])?, &self.lie_d[a]));
            for b in 0..n {
                w_ii.extend(alg.vanishes_on(&alg.commutator(&self.iota[a], &self.iota[b])?, &all));
                let li = alg.commutator(&self.lie_d[a], &self.iota[b])?;
                let rhs = self.lincomb_f(format!("f^c_{{{}{}}} iota[c]", a + 1, b + 1), &self.iota, a, b, Bidegree::new(0, -1))?;
                w_li.extend(alg.compare(&li, &rhs));
                let ll = alg.commutator(&self.lie_d[a], &self.lie_d[b])?;
                let rhs = self.lincomb_f(format!("f^c_{{{}{}}} Lie[c]", a + 1, b + 1), &self.lie_d, a, b, Bidegree::ZERO)?;
                w_ll.extend(alg.compare(&ll, &rhs));
            }
        }
        r.check("{iota_a,iota_b} = 0", w_ii);
        r.check("{d,iota_a} = Lie_a", w_di);
        r.check("[Lie_a,iota_b] = f^c_ab iota_c", w_li);
        r.check("[Lie_a,d] = 0", w_dl);
        r.check("[Lie_a,Lie_b] = f^c_ab Lie_c", w_ll);
        Ok(r)
    }
}

/// Monomials of the given total vertical degree whose generators all have positive vertical degree.
pub fn graded_basis(alg: &Algebra, v: i32) -> Vec<Monomial> {
    let gens: Vec<GenId> = alg.ids().filter(|&g| alg.degree_of(g).v > 0).collect();
    let mut out = Vec::new();
    fn rec(alg: &Algebra, gens: &[GenId], start: usize, left: i32, cur: &mut Vec<GenId>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial(cur.clone()));
            return;
        }
        for k in start..gens.len() {
            let g = gens[k];
            let dv = alg.degree_of(g).v;
            if dv > left {
                continue;
            }
            if cur.last() == Some(&g) && alg.is_nilpotent_gen(g) {
                continue;
            }
            cur.push(g);
            let next = if alg.is_nilpotent_gen(g) { k + 1 } else { k };
            rec(alg, gens, next, left - dv, cur, out);
            cur.pop();
        }
    }
    rec(alg, &gens, 0, v, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the degree-`k` cohomology of `d` on the graded pieces, by exact ranks.
pub fn cohomology_dim(alg: &Algebra, d: &Derivation, k: i32) -> Result<usize> {
    let rank_of = |from: i32| -> Result<usize> {
        if from < 0 {
            return Ok(0);
        }
        let src = graded_basis(alg, from);
        let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
        let mut rows = Vec::new();
        for m in &src {
            let img = alg.apply(d, &Polynomial::term(Coeff::one(), m.clone()))?;
            let mut row = Row::new();
            for (mm, c) in img.terms() {
                let len = index.len();
                let col = *index.entry(mm.clone()).or_insert(len);
                row.insert(col, c.clone());
            }
            rows.push(row);
        }
        Ok(rank(rows))
    };
    let dim_k = graded_basis(alg, k).len();
    let r_out = rank_of(k)?;
    let r_in = rank_of(k - 1)?;
    Ok(dim_k - r_out - r_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_differential_on_theta() {
        let w = build_weil(&LieAlgebraData::su2()).unwrap();
        let a = &w.module.alg;
        let dt = a.apply(&w.module.d, &a.v("theta[1]").unwrap()).unwrap();
        assert_eq!(a.render(&dt), "phi[1] - theta[2]*theta[3]");
        let ip = a.apply(&w.module.iota[0], &a.v("phi[2]").unwrap()).unwrap();
        assert!(ip.is_zero());
    }

    #[test]
    fn abelian_weil() {
        let w = build_weil(&LieAlgebraData::abelian(2)).unwrap();
        let a = &w.module.alg;
        assert_eq!(a.render(&a.apply(&w.module.d, &a.v("theta[2]").unwrap()).unwrap()), "phi[2]");
        assert!(a.apply(&w.module.d, &a.v("phi[1]").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn dphi_forms_agree() {
        let g = LieAlgebraData::su2();
        let w = build_weil(&g).unwrap();
        let a = &w.module.alg;
        let th: Vec<Polynomial> = w.theta.iter().map(|&x| a.var(x)).collect();
        let ph: Vec<Polynomial> = w.phi.iter().map(|&x| a.var(x)).collect();
        let alt = g.bracket(a, &th, &ph);
        for k in 0..3 {
            let dp = a.apply(&w.module.d, &ph[k]).unwrap();
            assert_eq!(dp, -&alt[k]);
        }
    }

    #[test]
    fn weil_su2_is_acyclic_in_low_degrees() {
        let w = build_weil(&LieAlgebraData::su2()).unwrap();
        for k in 1..=4 {
            assert_eq!(cohomology_dim(&w.module.alg, &w.module.d, k).unwrap(), 0, "degree {k}");
        }
    }
}
