use std::collections::HashMap;

use super::lie::LieAlgebraData;
use super::weil::{add_weil_part, empty_ops, fill_weil_tables, lie_gen};
use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, GenKind, Polynomial, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::report::{Report, Witness};

/// `W(g) ⊗ Ω(V)` with the Weil operators and the de Rham operators of a linear representation.
#[derive(Debug, Clone)]
pub struct WeilTensorOmega {
    pub alg: Algebra,
    pub lie: LieAlgebraData,
    pub theta: Vec<GenId>,
    pub phi: Vec<GenId>,
    pub x: Vec<GenId>,
    pub dx: Vec<GenId>,
    pub d_w: Derivation,
    pub iota_w: Vec<Derivation>,
    pub lie_w: Vec<Derivation>,
    pub d_m: Derivation,
    pub iota_m: Vec<Derivation>,
    pub lie_m: Vec<Derivation>,
}

/// `ι_a dx^i = -ρ^i_{aj} x^j`, `Lie_a x = -ρ_a x`, `Lie_a dx = -ρ_a dx`, `d x = dx`.
pub(crate) fn fill_linear_omega(
    alg: &Algebra,
    rho: &[Vec<Vec<Coeff>>],
    x: &[GenId],
    dx: &[GenId],
    d: &mut Derivation,
    iota: &mut [Derivation],
    lie_d: &mut [Derivation],
) {
    let m = x.len();
    for i in 0..m {
        d.set(x[i], alg.var(dx[i]));
    }
    for (a, ra) in rho.iter().enumerate() {
        for i in 0..m {
            let mut rx = Polynomial::zero();
            let mut rdx = Polynomial::zero();
            for j in 0..m {
                let k = &ra[i][j];
                if !k.is_zero() {
                    rx += alg.var(x[j]).scale(&-k);
                    rdx += alg.var(dx[j]).scale(&-k);
                }
            }
            iota[a].set(dx[i], rx.clone());
            lie_d[a].set(x[i], rx);
            lie_d[a].set(dx[i], rdx);
        }
    }
}

pub fn weil_tensor_omega(lie: &LieAlgebraData) -> Result<WeilTensorOmega> {
    lie.validate()?;
    lie.check_rho()?;
    let rho = lie.rho.clone().expect("checked");
    let conv = Convention::First;
    let mut alg = Algebra::new(conv);
    let (theta, phi) = add_weil_part(&mut alg, lie, "theta", "phi")?;
    let m = lie.rep_dim();
    let x = (0..m).map(|i| alg.add(lie_gen("x", i, Bidegree::ZERO).with_kind(GenKind::Plain))).collect::<Result<Vec<_>>>()?;
    let dx = (0..m)
        .map(|i| alg.add(Generator::indexed("dx", vec![i as i64 + 1], Bidegree::new(0, 1))))
        .collect::<Result<Vec<_>>>()?;
    let (mut d_w, mut iota_w, mut lie_w) = empty_ops(lie, conv);
    fill_weil_tables(&alg, lie, &theta, &phi, &mut d_w, &mut iota_w, &mut lie_w);
    let (mut d_m, mut iota_m, mut lie_m) = empty_ops(lie, conv);
    fill_linear_omega(&alg, &rho, &x, &dx, &mut d_m, &mut iota_m, &mut lie_m);
    d_w.name = "d(x)1".into();
    d_m.name = "1(x)d".into();
    Ok(WeilTensorOmega {
        alg,
        lie: lie.clone(),
        theta,
        phi,
        x,
        dx,
        d_w,
        iota_w,
        lie_w,
        d_m,
        iota_m,
        lie_m,
    })
}

#[derive(Debug, Clone)]
pub struct KalkmanResult {
    /// `j ∘ d ∘ j⁻¹` computed by conjugation.
    pub d_k: Derivation,
    /// `d⊗1 + 1⊗d + θ^a Lie_a - φ^a ι_a`.
    pub closed: Derivation,
    /// `1⊗d - φ^a ι_a` restricted to θ-free generators.
    pub d_c: Derivation,
    pub report: Report,
}

impl WeilTensorOmega {
    fn sum_left(&self, name: &str, gens: &[GenId], ops: &[Derivation], sign: i64) -> Result<Derivation> {
        let parts = gens
            .iter()
            .zip(ops)
            .map(|(g, op)| self.alg.left_mul(&self.alg.var(*g).scale(&Coeff::int(sign)), op))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(Coeff, &Derivation)> = parts.iter().map(|d| (Coeff::one(), d)).collect();
        self.alg.lincomb(name, &refs)
    }

    /// `X = θ^a ι_a` acting on the Ω factor; `j = exp(X)`.
    pub fn kalkman_generator(&self) -> Result<Derivation> {
        self.sum_left("theta^a iota_a", &self.theta, &self.iota_m, 1)
    }

    /// Conjugates a derivation by `j`: `g ↦ j(D(j⁻¹ g))`.
    pub fn conjugate(&self, x: &Derivation, d: &Derivation) -> Result<Derivation> {
        let alg = &self.alg;
        let neg_x = alg.lincomb("-X", &[(Coeff::int(-1), x)])?;
        let mut out = Derivation::new(format!("j {} j^-1", d.name), d.degree, d.convention);
        for g in alg.ids() {
            let jinv = alg.exp_apply(&neg_x, &alg.var(g), DEFAULT_MAX_ITER)?;
            let dg = alg.apply(d, &jinv)?;
            out.set(g, alg.exp_apply(x, &dg, DEFAULT_MAX_ITER)?);
        }
        Ok(out)
    }
}

/// Kalkman conjugation and its checks on `W(g) ⊗ Ω(V)`.
pub fn kalkman_conjugate(t: &WeilTensorOmega) -> Result<KalkmanResult> {
    let alg = &t.alg;
    let mut report = Report::new(format!("Kalkman model for {}", t.lie.name));
    let d_total = alg.lincomb("d", &[(Coeff::one(), &t.d_w), (Coeff::one(), &t.d_m)])?;
    let x = t.kalkman_generator()?;
    let d_k = t.conjugate(&x, &d_total)?;

    let th_lie = t.sum_left("theta^a Lie_a", &t.theta, &t.lie_m, 1)?;
    let ph_iota = t.sum_left("-phi^a iota_a", &t.phi, &t.iota_m, -1)?;
    let closed = alg.lincomb(
        "d_K closed form",
        &[(Coeff::one(), &d_total), (Coeff::one(), &th_lie), (Coeff::one(), &ph_iota)],
    )?;
    report.check("j d j^-1 = d(x)1 + 1(x)d + theta^a Lie_a - phi^a iota_a", alg.compare(&d_k, &closed));

    let dk2 = alg.square(&d_k)?;
    report.check("d_K^2 = 0", alg.vanishes_on(&dk2, &alg.ids().collect::<Vec<_>>()));

    let mut w_iota = Vec::new();
    for a in 0..t.lie.dim {
        let both = alg.lincomb("iota(x)1 + 1(x)iota", &[(Coeff::one(), &t.iota_w[a]), (Coeff::one(), &t.iota_m[a])])?;
        let conj = t.conjugate(&x, &both)?;
        w_iota.extend(alg.compare(&conj, &t.iota_w[a]));
    }
    report.check("j (iota(x)1 + 1(x)iota) j^-1 = iota(x)1", w_iota);

    let d_c = alg.lincomb("d_C", &[(Coeff::one(), &t.d_m), (Coeff::one(), &ph_iota)])?;
    let kill_theta: HashMap<GenId, Polynomial> = t.theta.iter().map(|&g| (g, Polynomial::zero())).collect();
    let theta_free: Vec<GenId> = t.phi.iter().chain(&t.x).chain(&t.dx).copied().collect();
    let mut w_c = Vec::new();
    for &g in &theta_free {
        let lhs = alg.substitute(&kill_theta, &alg.apply_gen(&d_k, g)?)?;
        let rhs = alg.apply_gen(&d_c, g)?;
        if lhs != rhs {
            w_c.push(Witness::new(alg.label_of(g), alg.render(&lhs), alg.render(&rhs)));
        }
    }
    report.check("d_K restricted to theta = 0 equals d_C = d - phi^a iota_a on theta-free generators", w_c);

    let mut w_sq = Vec::new();
    let dc2 = alg.square(&d_c)?;
    for &g in &theta_free {
        let mut rhs = Polynomial::zero();
        for a in 0..t.lie.dim {
            rhs -= &alg.mul(&alg.var(t.phi[a]), &alg.apply_gen(&t.lie_m[a], g)?);
        }
        let lhs = alg.apply_gen(&dc2, g)?;
        if lhs != rhs {
            w_sq.push(Witness::new(alg.label_of(g), alg.render(&lhs), alg.render(&rhs)));
        }
    }
    report.check("d_C^2 = -phi^a Lie_a on theta-free generators", w_sq);
    Ok(KalkmanResult {
        d_k,
        closed,
        d_c,
        report,
    })
}

/// Checks `d_K f = d_C f` and `Lie_a f = 0` for θ-free invariants `f`.
pub fn cartan_on_invariants(t: &WeilTensorOmega, k: &KalkmanResult, invariants: &[Polynomial]) -> Result<Report> {
    let alg = &t.alg;
    let mut r = Report::new("Cartan model on invariants");
    for f in invariants {
        let mut w = Vec::new();
        for a in 0..t.lie.dim {
            let lie_total = alg.lincomb("Lie", &[(Coeff::one(), &t.lie_w[a]), (Coeff::one(), &t.lie_m[a])])?;
            let l = alg.apply(&lie_total, f)?;
            if !l.is_zero() {
                return Err(Error::Elaboration(format!("{} is not invariant", alg.render(f))));
            }
        }
        let lhs = alg.apply(&k.d_k, f)?;
        let rhs = alg.apply(&k.d_c, f)?;
        if lhs != rhs {
            w.push(Witness::new(alg.render(f), alg.render(&lhs), alg.render(&rhs)));
        }
        r.check(format!("d_K = d_C on {}", alg.render(f)), w);
    }
    Ok(r)
}
