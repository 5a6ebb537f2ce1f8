use std::collections::HashMap;

use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, GenKind, Generator, Polynomial};
use crate::equivariant::lie::LieAlgebraData;
use crate::error::Result;
use crate::report::{Report, Witness};

use super::preset::{ladd, lneg, lscale, lsub, LieVec};

/// The free bicomplex on a horizontal and a vertical connection form.
///
/// Generators are `A_h`, `A_v` and their images `LA_h`, `LA_v`, `QA_h`, `QA_v`, `QLA_h`, `QLA_v`;
/// the curvatures `R_h`, `R_v`, `R_m` are polynomials in them.
#[derive(Debug, Clone)]
pub struct CurvatureAlgebraPreset {
    pub alg: Algebra,
    pub lie: LieAlgebraData,
    gens: HashMap<&'static str, Vec<GenId>>,
    pub lambda: Vec<GenId>,
    pub q: Derivation,
    pub k: Derivation,
    pub l: Derivation,
    pub iota: Derivation,
    pub delta: Derivation,
}

const GENS: [(&str, i32, i32); 8] = [
    ("Ah", 1, 0),
    ("Av", 0, 1),
    ("LAh", 2, 0),
    ("LAv", 1, 1),
    ("QAh", 1, 1),
    ("QAv", 0, 2),
    ("QLAh", 2, 1),
    ("QLAv", 1, 2),
];

pub fn build_curvature_algebra(lie: &LieAlgebraData) -> Result<CurvatureAlgebraPreset> {
    lie.validate()?;
    let conv = Convention::First;
    let mut alg = Algebra::new(conv);
    let mut gens = HashMap::new();
    for (name, h, v) in GENS {
        let ids = (0..lie.dim)
            .map(|a| alg.add(Generator::indexed(name, vec![a as i64 + 1], Bidegree::new(h, v)).with_kind(GenKind::LieComponent)))
            .collect::<Result<Vec<_>>>()?;
        gens.insert(name, ids);
    }
    let lambda = (0..lie.dim)
        .map(|a| alg.add(Generator::indexed("lambda", vec![a as i64 + 1], Bidegree::ZERO)))
        .collect::<Result<Vec<_>>>()?;
    let mut p = CurvatureAlgebraPreset {
        alg,
        lie: lie.clone(),
        gens,
        lambda,
        q: Derivation::new("Q", Bidegree::new(0, 1), conv),
        k: Derivation::new("K", Bidegree::new(1, -1), conv),
        l: Derivation::new("L", Bidegree::new(1, 0), conv),
        iota: Derivation::new("iota_lambda", Bidegree::new(0, -1), conv),
        delta: Derivation::new("delta_lambda", Bidegree::ZERO, conv),
    };
    let mut q = p.q.clone();
    let mut l = p.l.clone();
    let mut k = p.k.clone();
    let mut iota = p.iota.clone();
    let lam = p.lam();
    let set = |d: &mut Derivation, name: &str, v: LieVec, p: &CurvatureAlgebraPreset| {
        for (g, img) in p.gens[name].iter().zip(v) {
            d.set(*g, img);
        }
    };
    for (src, dst) in [("Ah", "QAh"), ("Av", "QAv"), ("LAh", "QLAh"), ("LAv", "QLAv")] {
        set(&mut q, src, p.v(dst), &p);
    }
    for (src, dst) in [("Ah", "LAh"), ("Av", "LAv"), ("QAh", "QLAh"), ("QAv", "QLAv")] {
        set(&mut l, src, p.v(dst), &p);
    }
    set(&mut k, "Av", p.v("Ah"), &p);
    set(&mut k, "QAh", p.v("LAh"), &p);
    set(&mut k, "LAv", lneg(&p.v("LAh")), &p);
    set(&mut k, "QAv", lsub(&p.v("LAv"), &p.v("QAh")), &p);
    set(&mut k, "QLAv", p.v("QLAh"), &p);
    set(&mut iota, "Av", lam.clone(), &p);
    for (src, base) in [("QAv", "Av"), ("QAh", "Ah"), ("QLAh", "LAh"), ("QLAv", "LAv")] {
        set(&mut iota, src, lneg(&p.bracket(&lam, &p.v(base))), &p);
    }
    p.alg.validate_derivation(&q)?;
    p.alg.validate_derivation(&l)?;
    p.alg.validate_derivation(&k)?;
    p.alg.validate_derivation(&iota)?;
    p.delta = p.alg.commutator(&q, &iota)?.renamed("delta_lambda");
    p.q = q;
    p.l = l;
    p.k = k;
    p.iota = iota;
    Ok(p)
}

impl CurvatureAlgebraPreset {
    /// Components of a generator family.
    pub fn v(&self, name: &str) -> LieVec {
        self.gens[name].iter().map(|&g| self.alg.var(g)).collect()
    }

    pub fn lam(&self) -> LieVec {
        self.lambda.iter().map(|&g| self.alg.var(g)).collect()
    }

    pub fn bracket(&self, x: &[Polynomial], y: &[Polynomial]) -> LieVec {
        self.lie.bracket(&self.alg, x, y)
    }

    /// `R_h = LA_h + ½[A_h, A_h]`.
    pub fn r_h(&self) -> LieVec {
        ladd(&self.v("LAh"), &lscale(&self.bracket(&self.v("Ah"), &self.v("Ah")), &Coeff::ratio(1, 2)))
    }

    /// `R_v = QA_v + ½[A_v, A_v]`.
    pub fn r_v(&self) -> LieVec {
        ladd(&self.v("QAv"), &lscale(&self.bracket(&self.v("Av"), &self.v("Av")), &Coeff::ratio(1, 2)))
    }

    /// `R_m = LA_v - QA_h + [A_h, A_v]`.
    pub fn r_m(&self) -> LieVec {
        ladd(&lsub(&self.v("LAv"), &self.v("QAh")), &self.bracket(&self.v("Ah"), &self.v("Av")))
    }

    pub fn apply(&self, d: &Derivation, x: &[Polynomial]) -> Result<LieVec> {
        x.iter().map(|f| self.alg.apply(d, f)).collect()
    }

    /// `∇_h X = L X + [A_h, X]`.
    pub fn nabla_h(&self, x: &[Polynomial]) -> Result<LieVec> {
        Ok(ladd(&self.apply(&self.l, x)?, &self.bracket(&self.v("Ah"), x)))
    }

    /// `∇_v X = Q X + [A_v, X]`.
    pub fn nabla_v(&self, x: &[Polynomial]) -> Result<LieVec> {
        Ok(ladd(&self.apply(&self.q, x)?, &self.bracket(&self.v("Av"), x)))
    }

    fn all_ids(&self) -> Vec<GenId> {
        self.alg.ids().collect()
    }
}

fn lie_check(p: &CurvatureAlgebraPreset, r: &mut Report, label: &str, lhs: LieVec, rhs: LieVec) {
    let w: Vec<Witness> = lhs
        .iter()
        .zip(&rhs)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(a, (x, y))| Witness::new(format!("component {}", a + 1), p.alg.render(x), p.alg.render(y)))
        .collect();
    r.check(label, w);
}

/// Relations, Bianchi identities, the Weil-map intertwining computations and `ι_λ R_m = 0`.
pub fn curvature_algebra_checks(lie: &LieAlgebraData) -> Result<Report> {
    let p = build_curvature_algebra(lie)?;
    let alg = &p.alg;
    let mut r = Report::new(format!("curvature algebra for {}", lie.name));
    let ids = p.all_ids();
    let zero = |d: Bidegree| Derivation::new("0", d, alg.convention());
    r.check("Q^2 = 0", alg.compare(&alg.square(&p.q)?, &zero(Bidegree::new(0, 2))));
    r.check("L^2 = 0", alg.compare(&alg.square(&p.l)?, &zero(Bidegree::new(2, 0))));
    r.check("[Q,L] = 0", alg.compare(&alg.commutator(&p.q, &p.l)?, &zero(Bidegree::new(1, 1))));
    r.check("QK + KQ = L", alg.compare(&alg.commutator(&p.q, &p.k)?, &p.l));
    r.check("KL + LK = 0", alg.compare(&alg.commutator(&p.k, &p.l)?, &zero(Bidegree::new(2, -1))));

    let (rh, rv, rm) = (p.r_h(), p.r_v(), p.r_m());
    let z = vec![Polynomial::zero(); lie.dim];
    lie_check(&p, &mut r, "nabla_h R_h = 0", p.nabla_h(&rh)?, z.clone());
    lie_check(&p, &mut r, "nabla_v R_v = 0", p.nabla_v(&rv)?, z.clone());
    lie_check(&p, &mut r, "-nabla_v R_m + nabla_h R_v = 0", lsub(&p.nabla_h(&rv)?, &p.nabla_v(&rm)?), z.clone());
    lie_check(&p, &mut r, "nabla_h R_m + nabla_v R_h = 0", ladd(&p.nabla_h(&rm)?, &p.nabla_v(&rh)?), z.clone());

    let (ah, av) = (p.v("Ah"), p.v("Av"));
    let half = Coeff::ratio(1, 2);
    lie_check(&p, &mut r, "K A_h = 0 = phi_W(K A)", p.apply(&p.k, &ah)?, z.clone());
    lie_check(&p, &mut r, "K A_v = A_h = phi_W(K theta)", p.apply(&p.k, &av)?, ah.clone());
    lie_check(&p, &mut r, "K R_v = R_m", p.apply(&p.k, &rv)?, rm.clone());
    lie_check(&p, &mut r, "K R_m = -2 R_h", p.apply(&p.k, &rm)?, lscale(&rh, &Coeff::int(-2)));
    lie_check(
        &p,
        &mut r,
        "phi_W(Q theta) = R_v - 1/2 [A_v,A_v] = Q A_v",
        lsub(&rv, &lscale(&p.bracket(&av, &av), &half)),
        p.apply(&p.q, &av)?,
    );
    lie_check(&p, &mut r, "phi_W(Q phi) = -[A_v,R_v] = Q R_v", lneg(&p.bracket(&av, &rv)), p.apply(&p.q, &rv)?);
    lie_check(
        &p,
        &mut r,
        "phi_W(Q A) = -R_m + L A_v + [A_h,A_v] = Q A_h",
        ladd(&lsub(&p.v("LAv"), &rm), &p.bracket(&ah, &av)),
        p.apply(&p.q, &ah)?,
    );
    let neg_rm = lneg(&rm);
    lie_check(
        &p,
        &mut r,
        "phi_W(Q upsilon) = [A_v,R_m] - L R_v - [A_h,R_v] = -Q R_m",
        lsub(&lsub(&p.bracket(&av, &rm), &p.apply(&p.l, &rv)?), &p.bracket(&ah, &rv)),
        p.apply(&p.q, &neg_rm)?,
    );

    let lam = p.lam();
    lie_check(&p, &mut r, "iota_lambda A_v = lambda", p.apply(&p.iota, &av)?, lam.clone());
    lie_check(&p, &mut r, "iota_lambda A_h = 0", p.apply(&p.iota, &ah)?, z.clone());
    lie_check(&p, &mut r, "iota_lambda R_v = 0", p.apply(&p.iota, &rv)?, z.clone());
    lie_check(&p, &mut r, "iota_lambda R_m = 0", p.apply(&p.iota, &rm)?, z.clone());
    let il = alg.commutator(&p.iota, &p.l)?;
    let dk = alg.commutator(&p.delta, &p.k)?;
    r.check("[iota_lambda, L] = [delta_lambda, K]", alg.compare_on(&il, &dk, &ids));
    let mut adj = Derivation::new("-ad lambda", Bidegree::ZERO, alg.convention());
    for (name, _, _) in GENS {
        for (g, img) in p.gens[name].iter().zip(lneg(&p.bracket(&lam, &p.v(name)))) {
            adj.set(*g, img);
        }
    }
    r.check("delta_lambda = -ad lambda on generators", alg.compare_on(&p.delta, &adj, &ids));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_curvature_algebra() {
        let r = curvature_algebra_checks(&LieAlgebraData::su2()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn abelian_curvature_algebra() {
        let g = LieAlgebraData::abelian(2);
        let r = curvature_algebra_checks(&g).unwrap();
        assert!(r.passed(), "{r}");
        let p = build_curvature_algebra(&g).unwrap();
        assert_eq!(p.r_v(), p.v("QAv"));
    }
}
