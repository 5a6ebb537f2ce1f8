use super::lie::LieAlgebraData;
use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, GenId, Generator, Monomial, Polynomial};
use crate::error::Result;
use crate::report::{Report, Witness};

/// `g[1] ⊕ g*[2]` with `ω = dθ^a ∧ dφ_a` and its bracket of degree -3.
#[derive(Debug, Clone)]
pub struct SymplecticPreset {
    pub alg: Algebra,
    pub lie: LieAlgebraData,
    pub theta: Vec<GenId>,
    pub phi: Vec<GenId>,
}

pub const BRACKET_DEGREE: i32 = -3;

pub fn build_qkweil(lie: &LieAlgebraData) -> Result<SymplecticPreset> {
    lie.validate()?;
    let mut alg = Algebra::new(Convention::First);
    let theta = (0..lie.dim)
        .map(|a| alg.add(Generator::indexed("theta", vec![a as i64 + 1], Bidegree::new(0, 1))))
        .collect::<Result<Vec<_>>>()?;
    let phi = (0..lie.dim)
        .map(|a| alg.add(Generator::indexed("phi", vec![a as i64 + 1], Bidegree::new(0, 2))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymplecticPreset {
        alg,
        lie: lie.clone(),
        theta,
        phi,
    })
}

impl SymplecticPreset {
    pub fn omega(&self) -> String {
        (1..=self.lie.dim).map(|a| format!("d theta[{a}] ^ d phi[{a}]")).collect::<Vec<_>>().join(" + ")
    }

    /// `{f,g} = Σ_a (f ∂⃖_φa)(∂⃗_θa g) - (f ∂⃖_θa)(∂⃗_φa g)`.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let alg = &self.alg;
        let mut out = Polynomial::zero();
        for (&t, &p) in self.theta.iter().zip(&self.phi) {
            out += alg.mul(&alg.partial_right(f, p), &alg.partial_left(t, g));
            out -= &alg.mul(&alg.partial_right(f, t), &alg.partial_left(p, g));
        }
        out
    }

    fn metric(&self, a: usize, b: usize) -> Coeff {
        match &self.lie.metric {
            Some(m) => m[a][b].clone(),
            None if a == b => Coeff::one(),
            None => Coeff::zero(),
        }
    }

    /// `I_a = φ_a`.
    pub fn i_a(&self, a: usize) -> Polynomial {
        self.alg.var(self.phi[a])
    }

    /// `L_a = -f^b_ac φ_b θ^c`.
    pub fn l_a(&self, a: usize) -> Polynomial {
        let alg = &self.alg;
        let n = self.lie.dim;
        let mut out = Polynomial::zero();
        for b in 0..n {
            for c in 0..n {
                let k = self.lie.fc(b, a, c);
                if !k.is_zero() {
                    out -= &alg.mul(&alg.var(self.phi[b]), &alg.var(self.theta[c])).scale(k);
                }
            }
        }
        out
    }

    /// `S = ½ g^ab φ_a φ_b - ½ f^a_bc φ_a θ^b θ^c`.
    pub fn s(&self) -> Polynomial {
        let alg = &self.alg;
        let n = self.lie.dim;
        let half = Coeff::ratio(1, 2);
        let mut out = Polynomial::zero();
        for a in 0..n {
            for b in 0..n {
                let g = self.metric(a, b);
                if !g.is_zero() {
                    out += alg.mul(&alg.var(self.phi[a]), &alg.var(self.phi[b])).scale(&(&g * &half));
                }
                for c in 0..n {
                    let k = self.lie.fc(a, b, c);
                    if !k.is_zero() {
                        let m = alg.product([&alg.var(self.phi[a]), &alg.var(self.theta[b]), &alg.var(self.theta[c])]);
                        out -= &m.scale(&(k * &half));
                    }
                }
            }
        }
        out
    }

    /// All monomials of total degree between 0 and `max`.
    pub fn monomials(&self, max: i32) -> Vec<Monomial> {
        let gens: Vec<GenId> = self.theta.iter().chain(&self.phi).copied().collect();
        let mut out = Vec::new();
        fn rec(p: &SymplecticPreset, gens: &[GenId], start: usize, left: i32, cur: &mut Vec<GenId>, out: &mut Vec<Monomial>) {
            if let Some((_, m)) = p.alg.normalize(cur) {
                out.push(m);
            }
            for i in start..gens.len() {
                let d = p.alg.degree_of(gens[i]).v;
                let odd = d % 2 != 0;
                if d > left || (odd && cur.last() == Some(&gens[i])) {
                    continue;
                }
                cur.push(gens[i]);
                rec(p, gens, i, left - d, cur, out);
                cur.pop();
            }
        }
        rec(self, &gens, 0, max, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn shifted_parity(&self, f: &Polynomial) -> i32 {
        match self.alg.degree(f).bidegree() {
            Some(d) => (d.v + BRACKET_DEGREE).rem_euclid(2),
            None => 0,
        }
    }

    /// `{f,g} + (-1)^{(|f|-3)(|g|-3)} {g,f}`.
    pub fn antisymmetry_defect(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let s = if self.shifted_parity(f) * self.shifted_parity(g) == 1 { -1 } else { 1 };
        self.bracket(f, g) + self.bracket(g, f).scale(&Coeff::int(s))
    }

    /// `{f,{g,h}} - {{f,g},h} - (-1)^{(|f|-3)(|g|-3)} {g,{f,h}}`.
    pub fn jacobi_defect(&self, f: &Polynomial, g: &Polynomial, h: &Polynomial) -> Polynomial {
        let s = if self.shifted_parity(f) * self.shifted_parity(g) == 1 { -1 } else { 1 };
        self.bracket(f, &self.bracket(g, h)) - self.bracket(&self.bracket(f, g), h) - self.bracket(g, &self.bracket(f, h)).scale(&Coeff::int(s))
    }
}

/// The four relations `{L_a,I_b} = f^c_ab I_c`, `{S,S} = 0`, `{I_a,I_b} = 0`, `{S,I_a} = L_a`.
pub fn check_qkweil(p: &SymplecticPreset) -> Report {
    let alg = &p.alg;
    let n = p.lie.dim;
    let mut r = Report::new(format!("graded Poisson relations for {}", p.lie.name));
    let push = |w: &mut Vec<Witness>, label: String, lhs: Polynomial, rhs: Polynomial| {
        if lhs != rhs {
            w.push(Witness::new(label, alg.render(&lhs), alg.render(&rhs)));
        }
    };
    let mut w1 = Vec::new();
    let mut w3 = Vec::new();
    let mut w4 = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let rhs: Polynomial = (0..n).map(|c| p.i_a(c).scale(p.lie.fc(c, a, b))).sum();
            push(&mut w1, format!("{{L_{},I_{}}}", a + 1, b + 1), p.bracket(&p.l_a(a), &p.i_a(b)), rhs);
            push(&mut w3, format!("{{I_{},I_{}}}", a + 1, b + 1), p.bracket(&p.i_a(a), &p.i_a(b)), Polynomial::zero());
        }
        push(&mut w4, format!("{{S,I_{}}}", a + 1), p.bracket(&p.s(), &p.i_a(a)), p.l_a(a));
    }
    let s = p.s();
    let mut w2 = Vec::new();
    push(&mut w2, "{S,S}".into(), p.bracket(&s, &s), Polynomial::zero());
    r.check("{L_a,I_b} = f^c_ab I_c", w1);
    r.check("{S,S} = 0", w2);
    r.check("{I_a,I_b} = 0", w3);
    r.check("{S,I_a} = L_a", w4);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_relations_hold() {
        let p = build_qkweil(&LieAlgebraData::su2()).unwrap();
        let r = check_qkweil(&p);
        assert!(r.passed(), "{r}");
        assert_eq!(p.alg.render(&p.l_a(0)), "-theta[2]*phi[3] + theta[3]*phi[2]");
    }

    #[test]
    fn bracket_has_degree_minus_three() {
        let p = build_qkweil(&LieAlgebraData::su2()).unwrap();
        let b = p.bracket(&p.s(), &p.i_a(0));
        assert_eq!(p.alg.degree(&b).bidegree(), Some(Bidegree::new(0, 3)));
    }

    #[test]
    fn low_degree_antisymmetry_and_jacobi() {
        let p = build_qkweil(&LieAlgebraData::abelian(1)).unwrap();
        let ms: Vec<Polynomial> = p.monomials(4).into_iter().map(|m| Polynomial::term(Coeff::one(), m)).collect();
        for f in &ms {
            for g in &ms {
                assert!(p.antisymmetry_defect(f, g).is_zero());
                for h in &ms {
                    assert!(p.jacobi_defect(f, g, h).is_zero());
                }
            }
        }
    }
}
