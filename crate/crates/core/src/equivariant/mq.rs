use super::kalkman::fill_linear_omega;
use super::lie::LieAlgebraData;
use super::weil::{add_weil_part, empty_ops, fill_weil_tables, lie_gen, LModule};
use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, Polynomial};
use crate::error::{Error, Result};
use crate::report::{Report, Witness};

/// `Σ_{a,j} ρ^i_{aj} x^a y^j` for each `i`.
fn rho_pair(alg: &Algebra, lie: &LieAlgebraData, x: &[GenId], y: &[Polynomial]) -> Vec<Polynomial> {
    let rho = lie.rho.as_ref().expect("representation present");
    let m = y.len();
    (0..m)
        .map(|i| {
            let mut acc = Polynomial::zero();
            for (a, ra) in rho.iter().enumerate() {
                for j in 0..m {
                    let k = &ra[i][j];
                    if !k.is_zero() {
                        acc += alg.mul(&alg.var(x[a]), &y[j]).scale(k);
                    }
                }
            }
            acc
        })
        .collect()
}

fn vars(alg: &Algebra, ids: &[GenId]) -> Vec<Polynomial> {
    ids.iter().map(|&g| alg.var(g)).collect()
}

fn dot(alg: &Algebra, x: &[Polynomial], y: &[Polynomial]) -> Polynomial {
    x.iter().zip(y).map(|(a, b)| alg.mul(a, b)).sum()
}

/// Weil algebra of `g ⋉ V` written as `W(g) ⊗ Ω(V*)`: `θ, φ` plus `χ` (0,1) and `b` (0,2).
#[derive(Debug, Clone)]
pub struct SemidirectWeil {
    pub alg: Algebra,
    pub lie: LieAlgebraData,
    pub total: LieAlgebraData,
    pub theta: Vec<GenId>,
    pub phi: Vec<GenId>,
    pub chi: Vec<GenId>,
    pub b: Vec<GenId>,
    /// Weil differential of `g ⋉ V`.
    pub d: Derivation,
}

/// Structure constants of `g ⋉ V`: `[ξ_a, t_j] = ρ^i_{aj} t_i`.
pub fn semidirect_lie(lie: &LieAlgebraData) -> Result<LieAlgebraData> {
    lie.check_rho()?;
    let rho = lie.rho.as_ref().expect("checked");
    let (n, m) = (lie.dim, lie.rep_dim());
    let mut f = vec![vec![vec![Coeff::zero(); n + m]; n + m]; n + m];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                f[a][b][c] = lie.f[a][b][c].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                f[n + i][a][n + j] = rho[a][i][j].clone();
                f[n + i][n + j][a] = -&rho[a][i][j];
            }
        }
    }
    Ok(LieAlgebraData::new(format!("{}|x V", lie.name), f))
}

pub fn build_semidirect_weil(lie: &LieAlgebraData) -> Result<SemidirectWeil> {
    lie.validate()?;
    let total = semidirect_lie(lie)?;
    total.validate().map_err(|e| Error::InvalidRepresentation(e.to_string()))?;
    let m = lie.rep_dim();
    let mut alg = Algebra::new(Convention::First);
    let (theta, phi) = add_weil_part(&mut alg, lie, "theta", "phi")?;
    let chi = (0..m).map(|i| alg.add(lie_gen("chi", i, Bidegree::new(0, 1)))).collect::<Result<Vec<_>>>()?;
    let b = (0..m).map(|i| alg.add(lie_gen("b", i, Bidegree::new(0, 2)))).collect::<Result<Vec<_>>>()?;
    let all_theta: Vec<GenId> = theta.iter().chain(&chi).copied().collect();
    let all_phi: Vec<GenId> = phi.iter().chain(&b).copied().collect();
    let (mut d, mut iota, mut lie_d) = empty_ops(&total, Convention::First);
    fill_weil_tables(&alg, &total, &all_theta, &all_phi, &mut d, &mut iota, &mut lie_d);
    Ok(SemidirectWeil {
        alg,
        lie: lie.clone(),
        total,
        theta,
        phi,
        chi,
        b,
        d,
    })
}

/// Compares the semidirect Weil differential with the Kalkman form `d⊗1 + 1⊗δ_K + θ^a Lie_a - φ^a ι_a`.
pub fn check_semidirect_kalkman(sw: &SemidirectWeil) -> Result<Report> {
    let alg = &sw.alg;
    let lie = &sw.lie;
    let conv = alg.convention();
    let (mut dw, mut iota_w, mut lie_w) = empty_ops(lie, conv);
    fill_weil_tables(alg, lie, &sw.theta, &sw.phi, &mut dw, &mut iota_w, &mut lie_w);
    // Ω(V*) = Λ(χ) ⊗ S(b) with δ_K χ = b, ι_a b = -ρ_a χ, Lie_a = -ρ_a.
    let (mut koszul, mut iota_v, mut lie_v) = empty_ops(lie, conv);
    fill_linear_omega(alg, lie.rho.as_ref().expect("rho"), &sw.chi, &sw.b, &mut koszul, &mut iota_v, &mut lie_v);
    let mut parts: Vec<Derivation> = vec![dw, koszul];
    for a in 0..lie.dim {
        parts.push(alg.left_mul(&alg.var(sw.theta[a]), &lie_v[a])?);
        parts.push(alg.left_mul(&alg.var(sw.phi[a]).scale(&Coeff::int(-1)), &iota_v[a])?);
    }
    let refs: Vec<(Coeff, &Derivation)> = parts.iter().map(|d| (Coeff::one(), d)).collect();
    let kalkman = alg.lincomb("d_K", &refs)?;
    let mut r = Report::new(format!("semidirect Weil algebra of {}", lie.name));
    r.check("d_W(g|x V) = d(x)1 + 1(x)delta_K + theta^a Lie_a - phi^a iota_a", alg.compare(&sw.d, &kalkman));
    let mut wl = Vec::new();
    for a in 0..lie.dim {
        for (i, &bi) in sw.b.iter().enumerate() {
            let img = alg.apply_gen(&lie_v[a], bi)?;
            let mut want = Polynomial::zero();
            for (j, &bj) in sw.b.iter().enumerate() {
                let k = &lie.rho.as_ref().expect("rho")[a][i][j];
                want -= &alg.var(bj).scale(k);
            }
            if img != want {
                wl.push(Witness::new(format!("Lie[{}] b[{}]", a + 1, i + 1), alg.render(&img), alg.render(&want)));
            }
        }
    }
    r.check("Lie_a b^i = -rho^i_aj b^j", wl);
    Ok(r)
}

/// `W(g) ⊗ Ω(V*) ⊗ Ω(V)` with the differential `s`, regraded so `L_fin` has degree (0,0).
#[derive(Debug, Clone)]
pub struct MqPreset {
    pub module: LModule,
    pub theta: Vec<GenId>,
    pub phi: Vec<GenId>,
    pub w: Vec<GenId>,
    pub dw: Vec<GenId>,
    pub chi: Vec<GenId>,
    pub b: Vec<GenId>,
    /// Kalkman variant: `s w = dw - θw`, `s dw = -θ dw + φ w`.
    pub variant: bool,
}

pub fn build_mq(lie: &LieAlgebraData, variant: bool) -> Result<MqPreset> {
    lie.validate()?;
    lie.check_rho()?;
    let m = lie.rep_dim();
    let conv = Convention::First;
    let mut alg = Algebra::new(conv);
    let (theta, phi) = add_weil_part(&mut alg, lie, "theta", "phi")?;
    let w = (0..m).map(|i| alg.add(Generator::indexed("w", vec![i as i64 + 1], Bidegree::ZERO))).collect::<Result<Vec<_>>>()?;
    let dw = (0..m)
        .map(|i| alg.add(Generator::indexed("dw", vec![i as i64 + 1], Bidegree::new(0, 1))))
        .collect::<Result<Vec<_>>>()?;
    let chi = (0..m)
        .map(|i| alg.add(Generator::indexed("chi", vec![i as i64 + 1], Bidegree::new(0, -1))))
        .collect::<Result<Vec<_>>>()?;
    let b = (0..m).map(|i| alg.add(Generator::indexed("b", vec![i as i64 + 1], Bidegree::ZERO))).collect::<Result<Vec<_>>>()?;
    let (mut s, mut iota, mut lie_d) = empty_ops(lie, conv);
    s.name = "s".into();
    fill_weil_tables(&alg, lie, &theta, &phi, &mut s, &mut iota, &mut lie_d);
    let rho = lie.rho.as_ref().expect("checked");
    let neg = |p: Vec<Polynomial>| -> Vec<Polynomial> { p.into_iter().map(|x| -x).collect() };
    let th_w = rho_pair(&alg, lie, &theta, &vars(&alg, &w));
    let th_dw = rho_pair(&alg, lie, &theta, &vars(&alg, &dw));
    let ph_w = rho_pair(&alg, lie, &phi, &vars(&alg, &w));
    let th_chi = rho_pair(&alg, lie, &theta, &vars(&alg, &chi));
    let th_b = rho_pair(&alg, lie, &theta, &vars(&alg, &b));
    let ph_chi = rho_pair(&alg, lie, &phi, &vars(&alg, &chi));
    for i in 0..m {
        if variant {
            s.set(w[i], &alg.var(dw[i]) - &th_w[i]);
            s.set(dw[i], &ph_w[i] - &th_dw[i]);
        } else {
            s.set(w[i], alg.var(dw[i]));
        }
        s.set(chi[i], &alg.var(b[i]) - &th_chi[i]);
        s.set(b[i], &ph_chi[i] - &th_b[i]);
    }
    for (a, ra) in rho.iter().enumerate() {
        for &(src, _) in &[(&w, 0), (&dw, 1), (&chi, 2), (&b, 3)] {
            for i in 0..m {
                let mut img = Polynomial::zero();
                for j in 0..m {
                    if !ra[i][j].is_zero() {
                        img -= &alg.var(src[j]).scale(&ra[i][j]);
                    }
                }
                lie_d[a].set(src[i], img);
            }
        }
        if !variant {
            for i in 0..m {
                let img = neg(vec![(0..m)
                    .filter(|&j| !ra[i][j].is_zero())
                    .map(|j| alg.var(w[j]).scale(&ra[i][j]))
                    .sum()]);
                iota[a].set(dw[i], img.into_iter().next().expect("one"));
            }
        }
    }
    Ok(MqPreset {
        module: LModule {
            alg,
            lie: lie.clone(),
            d: s,
            iota,
            lie_d,
        },
        theta,
        phi,
        w,
        dw,
        chi,
        b,
        variant,
    })
}

impl MqPreset {
    pub fn alg(&self) -> &Algebra {
        &self.module.alg
    }

    pub fn s(&self) -> &Derivation {
        &self.module.d
    }

    fn v(&self, ids: &[GenId]) -> Vec<Polynomial> {
        vars(self.alg(), ids)
    }

    fn rho_theta(&self, y: &[Polynomial]) -> Vec<Polynomial> {
        rho_pair(self.alg(), &self.module.lie, &self.theta, y)
    }

    fn rho_phi(&self, y: &[Polynomial]) -> Vec<Polynomial> {
        rho_pair(self.alg(), &self.module.lie, &self.phi, y)
    }

    /// `L = bᵗ(b/2 + i w) - ½ χᵗ φ χ - i χᵗ (dw + θ w)`; in the Kalkman variant `dw` is already covariant.
    pub fn l_fin(&self) -> Polynomial {
        let alg = self.alg();
        let (b, w, dw, chi) = (self.v(&self.b), self.v(&self.w), self.v(&self.dw), self.v(&self.chi));
        let i = Coeff::i();
        let half = Coeff::ratio(1, 2);
        let inner: Vec<Polynomial> = b.iter().zip(&w).map(|(bb, ww)| bb.scale(&half) + ww.scale(&i)).collect();
        let t1 = dot(alg, &b, &inner);
        let t2 = dot(alg, &chi, &self.rho_phi(&chi)).scale(&half);
        let tw = if self.variant { vec![Polynomial::zero(); w.len()] } else { self.rho_theta(&w) };
        let cov: Vec<Polynomial> = dw.iter().zip(&tw).map(|(x, y)| x + y).collect();
        let t3 = dot(alg, &chi, &cov).scale(&i);
        t1 - t2 - t3
    }

    /// `χᵗ(i w + b/2)`.
    pub fn l_fin_primitive(&self) -> Polynomial {
        let alg = self.alg();
        let (b, w, chi) = (self.v(&self.b), self.v(&self.w), self.v(&self.chi));
        let inner: Vec<Polynomial> = b.iter().zip(&w).map(|(bb, ww)| bb.scale(&Coeff::ratio(1, 2)) + ww.scale(&Coeff::i())).collect();
        dot(alg, &chi, &inner)
    }

    /// New coordinate `b̃ = b - θχ`.
    pub fn shifted_b(&self) -> Vec<Polynomial> {
        let tc = self.rho_theta(&self.v(&self.chi));
        self.v(&self.b).iter().zip(&tc).map(|(x, y)| x - y).collect()
    }

    pub fn theta_chi(&self) -> Vec<Polynomial> {
        self.rho_theta(&self.v(&self.chi))
    }
}

fn witness_eq(alg: &Algebra, label: &str, lhs: &Polynomial, rhs: &Polynomial) -> Vec<Witness> {
    if lhs == rhs {
        vec![]
    } else {
        vec![Witness::new(label, alg.render(lhs), alg.render(rhs))]
    }
}

/// The identities of the Mathai–Quillen construction for an orthogonal representation.
pub fn check_mq_identities(p: &MqPreset) -> Result<Report> {
    let alg = p.alg();
    let s = p.s();
    let lie = &p.module.lie;
    let mut r = Report::new(format!("Mathai-Quillen model for {}", lie.name));
    let s2 = alg.square(s)?;
    let all: Vec<GenId> = alg.ids().collect();
    r.check("s^2 = 0 on all generators", alg.vanishes_on(&s2, &all));
    r.check("s^2 b = 0", alg.vanishes_on(&s2, &p.b));
    r.check("s^2 chi = 0", alg.vanishes_on(&s2, &p.chi));

    let l = p.l_fin();
    let prim = p.l_fin_primitive();
    let s_prim = alg.apply(s, &prim)?;
    r.check("L = s(chi^t (i w + b/2))", witness_eq(alg, "L", &l, &s_prim));
    r.check("s L = 0", witness_eq(alg, "s L", &alg.apply(s, &l)?, &Polynomial::zero()));
    let mut wb = Vec::new();
    for a in 0..lie.dim {
        wb.extend(witness_eq(alg, &format!("iota[{}] L", a + 1), &alg.apply(&p.module.iota[a], &l)?, &Polynomial::zero()));
        wb.extend(witness_eq(alg, &format!("Lie[{}] L", a + 1), &alg.apply(&p.module.lie_d[a], &l)?, &Polynomial::zero()));
    }
    r.check("iota_a L = Lie_a L = 0", wb);

    if p.variant {
        r.note("coordinate change b~ = b - theta chi is stated for the Weil form; skipped for the Kalkman variant");
        return Ok(r);
    }
    let bt = p.shifted_b();
    let tc = p.theta_chi();
    let chi = p.v(&p.chi);
    let (w, dw) = (p.v(&p.w), p.v(&p.dw));
    let mut wc = Vec::new();
    for i in 0..chi.len() {
        wc.extend(witness_eq(alg, &format!("s chi[{}]", i + 1), &alg.apply(s, &chi[i])?, &bt[i]));
        wc.extend(witness_eq(alg, &format!("s b~[{}]", i + 1), &alg.apply(s, &bt[i])?, &Polynomial::zero()));
    }
    r.check("after b~ = b - theta chi: s chi = b~, s b~ = 0", wc);
    let tail = (dot(alg, &bt, &w) - dot(alg, &chi, &dw)).scale(&Coeff::i());
    let half = Coeff::ratio(1, 2);
    let alpha = |sign: i64| -> Polynomial {
        let inner: Vec<Polynomial> = bt.iter().zip(&tc).map(|(x, y)| x + &y.scale(&Coeff::int(sign))).collect();
        dot(alg, &chi, &inner).scale(&half)
    };
    let corrected = alpha(1);
    let post = alg.apply(s, &corrected)? + tail.clone();
    r.check(
        "L = s alpha + i(b~^t w - chi^t dw) with alpha = chi^t(b~ + theta chi)/2 = chi^t b/2",
        witness_eq(alg, "L", &l, &post),
    );
    let literal = alg.apply(s, &alpha(-1))? + tail;
    if literal != l {
        r.note(format!(
            "the uncorrected alpha = chi^t(b~ - theta chi)/2 leaves the residual {}",
            alg.render(&(&literal - &l))
        ));
    }
    Ok(r)
}

/// Whether `s` restricted to `Ω(V)` is the de Rham differential `w ↦ dw, dw ↦ 0`.
pub fn check_de_rham_restriction(p: &MqPreset) -> Result<Report> {
    let alg = p.alg();
    let mut r = Report::new("s restricted to Omega(V)");
    let mut wit = Vec::new();
    for i in 0..p.w.len() {
        wit.extend(witness_eq(alg, &alg.label_of(p.w[i]), &alg.apply_gen(p.s(), p.w[i])?, &alg.var(p.dw[i])));
        wit.extend(witness_eq(alg, &alg.label_of(p.dw[i]), &alg.apply_gen(p.s(), p.dw[i])?, &Polynomial::zero()));
    }
    r.check("s w = dw and s dw = 0", wit);
    Ok(r)
}

/// so(2) acting on ℝ² by the rotation generator `[[0,-1],[1,0]]`.
pub fn so2_standard() -> LieAlgebraData {
    LieAlgebraData::so(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so2_generator_is_rotation() {
        let g = so2_standard();
        let r = &g.rho.as_ref().unwrap()[0];
        assert_eq!(r[0][1], Coeff::int(-1));
        assert_eq!(r[1][0], Coeff::int(1));
    }

    #[test]
    fn semidirect_chi_differential_so2() {
        let sw = build_semidirect_weil(&so2_standard()).unwrap();
        let a = &sw.alg;
        let d1 = a.apply_gen(&sw.d, sw.chi[0]).unwrap();
        assert_eq!(a.render(&d1), "b[1] + theta[1]*chi[2]");
        let rep = check_semidirect_kalkman(&sw).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn trivial_rho_has_inert_b() {
        let g = LieAlgebraData::abelian(1).with_rho(vec![vec![vec![Coeff::zero(); 2]; 2]]);
        let sw = build_semidirect_weil(&g).unwrap();
        let rep = check_semidirect_kalkman(&sw).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn abelian_degeneration_is_still_exact() {
        let g = LieAlgebraData::abelian(1).with_rho(vec![vec![vec![Coeff::zero(); 2]; 2]]);
        let p = build_mq(&g, false).unwrap();
        let rep = check_mq_identities(&p).unwrap();
        assert!(rep.passed(), "{rep}");
        let alg = p.alg();
        assert_eq!(
            alg.render(&p.l_fin()),
            "i*w[1]*b[1] + i*w[2]*b[2] + i*dw[1]*chi[1] + i*dw[2]*chi[2] + 1/2*b[1]^2 + 1/2*b[2]^2"
        );
    }

    #[test]
    fn so2_identities_and_uncorrected_alpha() {
        let p = build_mq(&so2_standard(), false).unwrap();
        let rep = check_mq_identities(&p).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep.notes.iter().any(|n| n.contains("uncorrected alpha")));
        assert!(p.module.check().unwrap().passed());
    }

    #[test]
    fn variant_is_not_de_rham_on_w() {
        let p = build_mq(&so2_standard(), true).unwrap();
        assert!(check_mq_identities(&p).unwrap().passed());
        assert!(p.module.check().unwrap().passed());
        let dr = check_de_rham_restriction(&p).unwrap();
        assert!(!dr.passed());
        assert!(check_de_rham_restriction(&build_mq(&so2_standard(), false).unwrap()).unwrap().passed());
    }

    #[test]
    fn bad_representation_rejected() {
        let mut g = LieAlgebraData::su2();
        let mut rho = g.adjoint();
        rho[0][0][0] = Coeff::int(1);
        g.rho = Some(rho);
        assert!(matches!(build_semidirect_weil(&g), Err(Error::InvalidRepresentation(_))));
    }
}
