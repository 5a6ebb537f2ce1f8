use super::words::{QkAlgebra, WordExpr};
use crate::bigraded::Coeff;
use crate::error::{Error, Result};
use crate::report::{Report, Witness};

/// `(u, v)` with `u·v = 1`, naming `Q_u = u1 Q_l + u2 Q_r` and `K_v = v1 K_l + v2 K_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlPair {
    pub u: [Coeff; 2],
    pub v: [Coeff; 2],
}

fn pairing(u: &[Coeff; 2], v: &[Coeff; 2]) -> Coeff {
    &u[0] * &v[0] + &u[1] * &v[1]
}

impl GlPair {
    pub fn new(u: [Coeff; 2], v: [Coeff; 2]) -> Result<Self> {
        let d = pairing(&u, &v);
        if !d.is_one() {
            return Err(Error::NormalizationViolated(format!("u.v = {d}, expected 1")));
        }
        Ok(GlPair { u, v })
    }

    /// `g u` and `(g⁻¹)ᵀ v` for `g ∈ SL(2)` given row-major.
    pub fn act(&self, g: [[Coeff; 2]; 2]) -> Result<GlPair> {
        let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        if !det.is_one() {
            return Err(Error::UnsupportedParameter(format!("det g = {det}, expected 1")));
        }
        let u = [&g[0][0] * &self.u[0] + &g[0][1] * &self.u[1], &g[1][0] * &self.u[0] + &g[1][1] * &self.u[1]];
        // (g⁻¹)ᵀ = [[g11, -g10], [-g01, g00]]
        let v = [&g[1][1] * &self.v[0] - &g[1][0] * &self.v[1], -&g[0][1] * &self.v[0] + &g[0][0] * &self.v[1]];
        GlPair::new(u, v)
    }
}

fn combo(alg: &QkAlgebra, a: &str, b: &str, x: &[Coeff; 2]) -> WordExpr {
    alg.gen(a).expect("letter").scale(&x[0]).add(&alg.gen(b).expect("letter").scale(&x[1]))
}

/// `Q_u² = 0`, `Q_u K_v + K_v Q_u = L`, `K_v L + L K_v = 0` in the GL word algebra.
pub fn gl_family_check(u: [Coeff; 2], v: [Coeff; 2]) -> Report {
    gl_family_check_shifted(u, v, &Coeff::zero())
}

/// Same relations for `K_v + s ΔK_u` with `ΔK_u = -u2 K_l + u1 K_r`.
pub fn gl_family_check_shifted(u: [Coeff; 2], v: [Coeff; 2], s: &Coeff) -> Report {
    let alg = QkAlgebra::gl();
    let q = combo(&alg, "Q_l", "Q_r", &u);
    let shift = [-&u[1] * s, &u[0] * s];
    let k = combo(&alg, "K_l", "K_r", &v).add(&combo(&alg, "K_l", "K_r", &shift));
    let l = alg.gen("L").expect("L");
    let mut r = Report::new(format!("GL family u=({},{}) v=({},{})", u[0], u[1], v[0], v[1]));
    let d = pairing(&u, &v);
    if !d.is_one() {
        r.note(format!("u.v = {d} violates the normalization u.v = 1"));
    }
    let mut rel = |label: &str, lhs: WordExpr, rhs: WordExpr| {
        let (a, b) = (alg.reduce(&lhs), alg.reduce(&rhs));
        r.expect(label, a == b, || Witness::new("Q_u, K_v", alg.render(&a), alg.render(&b)));
    };
    rel("Q_u^2 = 0", q.mul(&q), WordExpr::zero());
    rel("Q_u K_v + K_v Q_u = L", q.mul(&k).add(&k.mul(&q)), l.clone());
    rel("K_v L + L K_v = 0", k.mul(&l).add(&l.mul(&k)), WordExpr::zero());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: i64, q: i64) -> Coeff {
        Coeff::ratio(p, q)
    }

    #[test]
    fn worked_pairs() {
        assert!(gl_family_check([c(1, 1), c(0, 1)], [c(1, 1), c(0, 1)]).passed());
        assert!(gl_family_check([c(1, 1), c(1, 1)], [c(1, 2), c(1, 2)]).passed());
        let bad = gl_family_check([c(1, 1), c(0, 1)], [c(0, 1), c(1, 1)]);
        assert!(!bad.passed());
        assert_eq!(bad.failures().count(), 1);
        assert!(matches!(GlPair::new([c(1, 1), c(0, 1)], [c(0, 1), c(1, 1)]), Err(Error::NormalizationViolated(_))));
    }

    #[test]
    fn delta_shift_and_sl2() {
        assert!(gl_family_check_shifted([c(2, 1), c(3, 1)], [c(2, 1), c(-1, 1)], &c(7, 3)).passed());
        let p = GlPair::new([c(2, 1), c(3, 1)], [c(2, 1), c(-1, 1)]).unwrap();
        let g = [[c(1, 1), c(2, 1)], [c(0, 1), c(1, 1)]];
        let q = p.act(g).unwrap();
        assert!(gl_family_check(q.u.clone(), q.v.clone()).passed());
    }
}
