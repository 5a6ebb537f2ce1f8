use std::collections::HashMap;

use super::forms::{one_form, selfdual_project_lie, TwoForm};
use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, Polynomial};
use crate::equivariant::lie::LieAlgebraData;
use crate::error::{Error, Result};
use crate::jet::space::multi_indices;
use crate::jet::{JetSpace, QkStructure};
use crate::report::{Report, Witness};

/// Components `X^a` of a Lie-algebra-valued polynomial.
pub type LieVec = Vec<Polynomial>;

/// The `(r, s, t)` family of QK-structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeParams {
    pub r: Coeff,
    pub s: Coeff,
    pub t: Coeff,
}

impl GaugeParams {
    pub fn new(r: Coeff, s: Coeff, t: Coeff) -> Self {
        GaugeParams { r, s, t }
    }

    /// `(0, 0, 1)`.
    pub fn tym() -> Self {
        GaugeParams::new(Coeff::zero(), Coeff::zero(), Coeff::one())
    }

    /// `(0, s, 1)`.
    pub fn with_s(s: Coeff) -> Self {
        GaugeParams::new(Coeff::zero(), s, Coeff::one())
    }
}

/// Coordinates before the Mathai-Quillen change (`Original`) or after it and `υ → υ - dθ` (`Shifted`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Original,
    Shifted,
}

#[derive(Debug, Clone)]
pub struct GaugeConfig {
    pub n: usize,
    pub order: usize,
    pub chart: Chart,
    pub params: GaugeParams,
    /// `w` of degree (0,0) with `Qw = ψ`, `Kψ = dw`.
    pub flat_w: bool,
}

impl Default for GaugeConfig {
    fn default() -> Self {
        GaugeConfig {
            n: 4,
            order: 2,
            chart: Chart::Shifted,
            params: GaugeParams::tym(),
            flat_w: false,
        }
    }
}

/// Jets of `θ, A, w, χ` and their vertical differentials `φ, υ, ψ, b`, with Lie-valued components.
#[derive(Debug, Clone)]
pub struct GaugeJetPreset {
    pub lie: LieAlgebraData,
    pub config: GaugeConfig,
    pub space: JetSpace,
    pub qk: QkStructure,
    pub iota: Derivation,
    /// `δ_λ = [Q, ι_λ]`.
    pub delta: Derivation,
    bases: HashMap<(&'static str, Vec<i64>), usize>,
    lambda: HashMap<(usize, Vec<u32>), GenId>,
    total_ext: Vec<Derivation>,
}

const FIELDS: [&str; 8] = ["theta", "phi", "A", "upsilon", "w", "psi", "chi", "b"];

fn is_zero(c: &Coeff) -> bool {
    c.is_zero()
}

/// Builds the family in the shifted chart; `t` must be 1 there.
pub fn build_gauge_jet(lie: &LieAlgebraData, n: usize, order: usize, r: Coeff, s: Coeff, t: Coeff) -> Result<GaugeJetPreset> {
    build_gauge(
        lie,
        GaugeConfig {
            n,
            order,
            chart: Chart::Shifted,
            params: GaugeParams::new(r, s, t),
            flat_w: false,
        },
    )
}

pub fn build_gauge(lie: &LieAlgebraData, config: GaugeConfig) -> Result<GaugeJetPreset> {
    lie.validate()?;
    let n = config.n;
    if !is_zero(&config.params.r) && n != 4 {
        return Err(Error::SelfDualNeedsDim4(n));
    }
    if config.chart == Chart::Shifted && !config.params.t.is_one() {
        return Err(Error::UnsupportedParameter(format!(
            "the shifted chart is only defined for t = 1 (got t = {})",
            config.params.t
        )));
    }
    let mut space = JetSpace::new(n, config.order, Convention::First)?;
    let (wd, psid) = if config.flat_w {
        (Bidegree::new(0, 0), Bidegree::new(0, 1))
    } else {
        (Bidegree::new(0, -2), Bidegree::new(0, -1))
    };
    let degrees = [
        Bidegree::new(0, 1),
        Bidegree::new(0, 2),
        Bidegree::new(0, 0),
        Bidegree::new(0, 1),
        wd,
        psid,
        Bidegree::new(0, -1),
        Bidegree::new(0, 0),
    ];
    let mut bases = HashMap::new();
    for (name, deg) in FIELDS.iter().zip(degrees) {
        for a in 1..=lie.dim as i64 {
            let tails: Vec<Vec<i64>> = match *name {
                "A" | "upsilon" => (1..=n as i64).map(|m| vec![m]).collect(),
                "chi" | "b" => {
                    let mut v = Vec::new();
                    for m in 1..=n as i64 {
                        for k in m + 1..=n as i64 {
                            v.push(vec![m, k]);
                        }
                    }
                    v
                }
                _ => vec![vec![]],
            };
            for tail in tails {
                let idx = [vec![a], tail].concat();
                let b = space.add_field(name, idx.clone(), deg)?;
                bases.insert((*name, idx), b);
            }
        }
    }
    let mut lambda = HashMap::new();
    let mis = multi_indices(n, config.order);
    for a in 0..lie.dim {
        for m in &mis {
            let g = Generator::indexed("lambda", vec![a as i64 + 1], Bidegree::ZERO).with_jet(m.clone());
            lambda.insert((a, m.clone()), space.add_param(g)?);
        }
    }
    let mut total_ext = space.total.clone();
    for ((a, m), &id) in &lambda {
        for (mu, d) in total_ext.iter_mut().enumerate() {
            if m.len() == config.order {
                d.set_undefined(id);
            } else {
                let mut next = m.clone();
                next.push(mu as u32 + 1);
                next.sort_unstable();
                d.set(id, space.alg.var(lambda[&(*a, next)]));
            }
        }
    }
    let mut p = GaugeJetPreset {
        lie: lie.clone(),
        config: config.clone(),
        space,
        qk: QkStructure {
            q: Derivation::new("Q", Bidegree::new(0, 1), Convention::First),
            k: Derivation::new("K", Bidegree::new(1, -1), Convention::First),
            l: Derivation::new("L", Bidegree::new(1, 0), Convention::First),
        },
        iota: Derivation::new("iota_lambda", Bidegree::new(0, -1), Convention::First),
        delta: Derivation::new("delta_lambda", Bidegree::ZERO, Convention::First),
        bases,
        lambda,
        total_ext,
    };
    p.qk = p.structure(&config.params)?;
    p.iota = p.build_iota()?;
    p.delta = p.space.alg.commutator(&p.qk.q, &p.iota)?.renamed("delta_lambda");
    Ok(p)
}

impl GaugeJetPreset {
    pub fn alg(&self) -> &Algebra {
        &self.space.alg
    }

    pub fn dim(&self) -> usize {
        self.lie.dim
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    fn base(&self, name: &'static str, idx: &[i64]) -> usize {
        self.bases[&(name, idx.to_vec())]
    }

    /// Jet `I` of a Lie-valued field component; `tail` holds form indices.
    pub fn field(&self, name: &'static str, tail: &[usize], jet: &[u32]) -> Result<LieVec> {
        if let [m, k] = tail {
            if m == k {
                return Ok(vec![Polynomial::zero(); self.dim()]);
            }
            if m > k {
                return Ok(self.field(name, &[*k, *m], jet)?.into_iter().map(|p| -p).collect());
            }
        }
        (0..self.dim())
            .map(|a| {
                let idx: Vec<i64> = std::iter::once(a as i64 + 1).chain(tail.iter().map(|&t| t as i64)).collect();
                self.space.jet(self.base(name, &idx), jet)
            })
            .collect()
    }

    fn f0(&self, name: &'static str, tail: &[usize]) -> Result<LieVec> {
        self.field(name, tail, &[])
    }

    pub fn lambda(&self, jet: &[u32]) -> LieVec {
        let mut key = jet.to_vec();
        key.sort_unstable();
        (0..self.dim()).map(|a| self.space.alg.var(self.lambda[&(a, key.clone())])).collect()
    }

    pub fn bracket(&self, x: &[Polynomial], y: &[Polynomial]) -> LieVec {
        self.lie.bracket(self.alg(), x, y)
    }

    pub fn dx(&self, mu: usize) -> Polynomial {
        self.space.dx(mu)
    }

    fn dxs(&self) -> Vec<Polynomial> {
        (1..=self.n()).map(|m| self.dx(m)).collect()
    }

    /// `dx^1 ... dx^n`.
    pub fn dvol(&self) -> Polynomial {
        self.alg().product(&self.dxs())
    }

    /// `X^a dx^μ`.
    fn times_dx(&self, x: &[Polynomial], mu: usize) -> LieVec {
        let d = self.dx(mu);
        x.iter().map(|p| self.alg().mul(p, &d)).collect()
    }

    /// `F_{μν} = ∂_μ A_ν - ∂_ν A_μ + [A_μ, A_ν]` as a Lie-valued two-form.
    pub fn curvature(&self) -> Result<Vec<TwoForm>> {
        self.lie_two_form(|m, k| {
            let a_m = self.f0("A", &[m])?;
            let a_k = self.f0("A", &[k])?;
            let d = lsub(&self.field("A", &[k], &[m as u32])?, &self.field("A", &[m], &[k as u32])?);
            Ok(ladd(&d, &self.bracket(&a_m, &a_k)))
        })
    }

    /// `(d_A X)_{μν} = ∂_μ X_ν - ∂_ν X_μ + [A_μ, X_ν] - [A_ν, X_μ]` for a one-form field.
    pub fn covariant_d_one(&self, name: &'static str) -> Result<Vec<TwoForm>> {
        self.lie_two_form(|m, k| {
            let d = lsub(&self.field(name, &[k], &[m as u32])?, &self.field(name, &[m], &[k as u32])?);
            let b1 = self.bracket(&self.f0("A", &[m])?, &self.f0(name, &[k])?);
            let b2 = self.bracket(&self.f0("A", &[k])?, &self.f0(name, &[m])?);
            Ok(lsub(&ladd(&d, &b1), &b2))
        })
    }

    /// `(∇_ρ X)_{μν} = ∂_ρ X_{μν} + [A_ρ, X_{μν}]` for a two-form field.
    pub fn covariant_derivative_two(&self, name: &'static str, rho: usize, mu: usize, nu: usize) -> Result<LieVec> {
        let d = self.field(name, &[mu, nu], &[rho as u32])?;
        Ok(ladd(&d, &self.bracket(&self.f0("A", &[rho])?, &self.f0(name, &[mu, nu])?)))
    }

    pub fn two_form_field(&self, name: &'static str) -> Result<Vec<TwoForm>> {
        self.lie_two_form(|m, k| self.f0(name, &[m, k]))
    }

    fn lie_two_form(&self, mut f: impl FnMut(usize, usize) -> Result<LieVec>) -> Result<Vec<TwoForm>> {
        let n = self.n();
        let mut out = vec![TwoForm::zero(n); self.dim()];
        for m in 1..=n {
            for k in m + 1..=n {
                for (a, p) in f(m, k)?.into_iter().enumerate() {
                    out[a].set(m, k, p);
                }
            }
        }
        Ok(out)
    }

    /// `Σ_μ X_μ dx^μ` for a one-form field.
    pub fn one_form(&self, name: &'static str) -> Result<LieVec> {
        let comps: Vec<LieVec> = (1..=self.n()).map(|m| self.f0(name, &[m])).collect::<Result<_>>()?;
        let dxs = self.dxs();
        Ok((0..self.dim())
            .map(|a| {
                let c: Vec<Polynomial> = comps.iter().map(|v| v[a].clone()).collect();
                one_form(self.alg(), &c, &dxs)
            })
            .collect())
    }

    /// `Σ_{μ<ν} X_{μν} dx^μ dx^ν` componentwise.
    pub fn two_form(&self, x: &[TwoForm]) -> LieVec {
        let dxs = self.dxs();
        x.iter().map(|c| c.to_form(self.alg(), &dxs)).collect()
    }

    /// `F_-` (zero unless `r ≠ 0` requires it).
    fn f_minus(&self) -> Result<Vec<TwoForm>> {
        selfdual_project_lie(&self.curvature()?, -1)
    }

    /// `Q`, `K`, `L` for the given parameters on this preset's generators.
    pub fn structure(&self, params: &GaugeParams) -> Result<QkStructure> {
        let n = self.n();
        if !is_zero(&params.r) && n != 4 {
            return Err(Error::SelfDualNeedsDim4(n));
        }
        let shifted = self.config.chart == Chart::Shifted;
        let flat_w = self.config.flat_w;
        let half = Coeff::ratio(1, 2);
        let r = &params.r;
        let s_half = &params.s * &half;
        let th = self.f0("theta", &[])?;
        let ph = self.f0("phi", &[])?;
        let w = self.f0("w", &[])?;
        let psi = self.f0("psi", &[])?;
        let (fm, dau) = if is_zero(r) {
            (vec![TwoForm::zero(n); self.dim()], vec![TwoForm::zero(n); self.dim()])
        } else {
            (self.f_minus()?, selfdual_project_lie(&self.covariant_d_one("upsilon")?, -1)?)
        };
        let fm_at = |m: usize, k: usize| -> LieVec { fm.iter().map(|c| c.get(m, k).clone()).collect() };
        let dau_at = |m: usize, k: usize| -> LieVec { dau.iter().map(|c| c.get(m, k).clone()).collect() };
        let curv = self.curvature()?;
        let f_at = |m: usize, k: usize| -> LieVec { curv.iter().map(|c| c.get(m, k).clone()).collect() };

        let mut q_img: Vec<(usize, Polynomial)> = Vec::new();
        let mut k_img: Vec<(usize, Polynomial)> = Vec::new();
        let push = |out: &mut Vec<(usize, Polynomial)>, name: &'static str, tail: &[usize], v: LieVec| {
            for (a, p) in v.into_iter().enumerate() {
                let idx: Vec<i64> = std::iter::once(a as i64 + 1).chain(tail.iter().map(|&t| t as i64)).collect();
                out.push((self.base(name, &idx), p));
            }
        };

        if shifted {
            push(&mut q_img, "theta", &[], lsub(&ph, &lscale(&self.bracket(&th, &th), &half)));
            push(&mut q_img, "phi", &[], lneg(&self.bracket(&th, &ph)));
        } else {
            push(&mut q_img, "theta", &[], ph.clone());
        }
        for m in 1..=n {
            let a_m = self.f0("A", &[m])?;
            let u_m = self.f0("upsilon", &[m])?;
            if shifted {
                let d_th = self.field("theta", &[], &[m as u32])?;
                push(&mut q_img, "A", &[m], ladd(&ladd(&u_m, &d_th), &self.bracket(&a_m, &th)));
                let d_ph = self.field("phi", &[], &[m as u32])?;
                let qu = lsub(&lsub(&lneg(&self.bracket(&th, &u_m)), &d_ph), &self.bracket(&a_m, &ph));
                push(&mut q_img, "upsilon", &[m], qu);
            } else {
                push(&mut q_img, "A", &[m], u_m);
            }
        }
        if shifted && !flat_w {
            push(&mut q_img, "w", &[], lsub(&psi, &self.bracket(&th, &w)));
            push(&mut q_img, "psi", &[], ladd(&lneg(&self.bracket(&th, &psi)), &self.bracket(&ph, &w)));
        } else {
            push(&mut q_img, "w", &[], psi.clone());
        }
        let mut q_chi_rest: Vec<((usize, usize), LieVec)> = Vec::new();
        for m in 1..=n {
            for k in m + 1..=n {
                let chi = self.f0("chi", &[m, k])?;
                let b = self.f0("b", &[m, k])?;
                let mut rest = lscale(&fm_at(m, k), r);
                let mut qb = lneg(&lscale(&dau_at(m, k), r));
                if shifted {
                    rest = lsub(&rest, &self.bracket(&th, &chi));
                    qb = ladd(&lsub(&qb, &self.bracket(&th, &b)), &self.bracket(&ph, &chi));
                }
                push(&mut q_img, "chi", &[m, k], ladd(&b, &rest));
                push(&mut q_img, "b", &[m, k], qb);
                q_chi_rest.push(((m, k), rest));
            }
        }

        let a_form = self.one_form("A")?;
        let u_form = self.one_form("upsilon")?;
        if shifted {
            push(&mut k_img, "theta", &[], a_form);
            push(&mut k_img, "phi", &[], lneg(&u_form));
        } else {
            push(&mut k_img, "theta", &[], lscale(&a_form, &params.t));
            let mut kphi = lneg(&lscale(&u_form, &params.t));
            for m in 1..=n {
                kphi = ladd(&kphi, &self.times_dx(&self.field("theta", &[], &[m as u32])?, m));
            }
            push(&mut k_img, "phi", &[], kphi);
        }
        for m in 1..=n {
            let mut ka = vec![Polynomial::zero(); self.dim()];
            let mut ku = vec![Polynomial::zero(); self.dim()];
            for k in 1..=n {
                if k == m {
                    continue;
                }
                ka = lsub(&ka, &self.times_dx(&lscale(&self.f0("chi", &[m, k])?, &s_half), k));
                let bf = ladd(&self.f0("b", &[m, k])?, &lscale(&fm_at(m, k), r));
                let mut c = lscale(&bf, &s_half);
                c = if shifted {
                    lsub(&c, &f_at(m, k))
                } else {
                    ladd(&c, &self.field("A", &[m], &[k as u32])?)
                };
                ku = ladd(&ku, &self.times_dx(&c, k));
            }
            if !shifted {
                ku = ladd(&ku, &self.times_dx(&self.field("A", &[m], &[m as u32])?, m));
            }
            push(&mut k_img, "A", &[m], ka);
            push(&mut k_img, "upsilon", &[m], ku);
        }
        let mut kpsi = vec![Polynomial::zero(); self.dim()];
        for m in 1..=n {
            let mut c = self.field("w", &[], &[m as u32])?;
            if shifted && !flat_w {
                c = ladd(&c, &self.bracket(&self.f0("A", &[m])?, &w));
            }
            kpsi = ladd(&kpsi, &self.times_dx(&c, m));
        }
        push(&mut k_img, "psi", &[], kpsi);

        let alg = self.alg();
        let k0 = self.space.prolong("K", Bidegree::new(1, -1), &k_img);
        for ((m, k), rest) in q_chi_rest {
            let mut lchi = vec![Polynomial::zero(); self.dim()];
            for rho in 1..=n {
                lchi = ladd(&lchi, &self.times_dx(&self.field("chi", &[m, k], &[rho as u32])?, rho));
            }
            let krest: LieVec = rest.iter().map(|p| alg.apply(&k0, p)).collect::<Result<_>>()?;
            push(&mut k_img, "b", &[m, k], lsub(&lchi, &krest));
        }
        let q = self.space.prolong("Q", Bidegree::new(0, 1), &q_img);
        let k = self.space.prolong("K", Bidegree::new(1, -1), &k_img);
        let l = self.space.horizontal()?;
        alg.validate_derivation(&q)?;
        alg.validate_derivation(&k)?;
        Ok(QkStructure { q, k, l })
    }

    /// Prolongation along total derivatives that also differentiate `λ`.
    fn prolong_ext(&self, name: &str, degree: Bidegree, base_images: &[(usize, Polynomial)]) -> Result<Derivation> {
        let alg = self.alg();
        let mut d = Derivation::new(name, degree, alg.convention());
        for (b, img) in base_images {
            for m in multi_indices(self.n(), self.space.order) {
                let id = self.space.jet_id(*b, &m)?;
                let mut g = img.clone();
                let mut ok = true;
                for &mu in &m {
                    match alg.apply(&self.total_ext[mu as usize - 1], &g) {
                        Ok(x) => g = x,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    d.set(id, g);
                } else {
                    d.set_undefined(id);
                }
            }
        }
        Ok(d)
    }

    /// `ι_λ θ = λ`; in the original chart also `φ ↦ -[λ,θ]`, `υ ↦ -[λ,A]`, `ψ ↦ -[λ,w]`, `b ↦ -[λ,χ]`.
    fn build_iota(&self) -> Result<Derivation> {
        let lam = self.lambda(&[]);
        let mut img = Vec::new();
        let push = |out: &mut Vec<(usize, Polynomial)>, name: &'static str, tail: &[usize], v: LieVec| {
            for (a, p) in v.into_iter().enumerate() {
                let idx: Vec<i64> = std::iter::once(a as i64 + 1).chain(tail.iter().map(|&t| t as i64)).collect();
                out.push((self.base(name, &idx), p));
            }
        };
        push(&mut img, "theta", &[], lam.clone());
        let original = self.config.chart == Chart::Original;
        if original {
            push(&mut img, "phi", &[], lneg(&self.bracket(&lam, &self.f0("theta", &[])?)));
            for m in 1..=self.n() {
                push(&mut img, "upsilon", &[m], lneg(&self.bracket(&lam, &self.f0("A", &[m])?)));
            }
            for m in 1..=self.n() {
                for k in m + 1..=self.n() {
                    push(&mut img, "b", &[m, k], lneg(&self.bracket(&lam, &self.f0("chi", &[m, k])?)));
                }
            }
        }
        if original || self.config.flat_w {
            push(&mut img, "psi", &[], lneg(&self.bracket(&lam, &self.f0("w", &[])?)));
        }
        let d = self.prolong_ext("iota_lambda", Bidegree::new(0, -1), &img)?;
        self.alg().validate_derivation(&d)?;
        Ok(d)
    }

    /// Generators carrying fields (everything except `dx` and `λ`).
    pub fn field_generators(&self) -> Vec<GenId> {
        self.alg().ids().filter(|g| self.space.origin(*g).is_some()).collect()
    }

    /// Order-zero generator ids of a field.
    pub fn base_ids(&self, name: &'static str) -> Vec<GenId> {
        let mut out: Vec<GenId> = self
            .bases
            .iter()
            .filter(|((nm, _), _)| *nm == name)
            .map(|(_, &b)| self.space.jet_id(b, &[]).expect("order zero"))
            .collect();
        out.sort();
        out
    }

    /// `exp(K)` applied componentwise.
    pub fn exp_k(&self, x: &[Polynomial]) -> Result<LieVec> {
        x.iter().map(|p| self.alg().exp_apply(&self.qk.k, p, 2 * self.n() + 2)).collect()
    }

    /// `Tr(XY)` with the Lie algebra's invariant metric.
    pub fn trace(&self, x: &[Polynomial], y: &[Polynomial]) -> Result<Polynomial> {
        self.lie.trace(self.alg(), x, y)
    }

    /// Sets every jet of `name` to `-Q(name)`; a negative control for the relation checks.
    pub fn corrupt_q_sign(&mut self, name: &'static str) {
        let ids: Vec<GenId> = self
            .alg()
            .ids()
            .filter(|g| self.space.origin(*g).map(|(b, _)| self.space.bases[*b].name == name).unwrap_or(false))
            .collect();
        for g in ids {
            if let Ok(p) = self.alg().apply_gen(&self.qk.q, g) {
                self.qk.q.set(g, -p);
            }
        }
    }
}

pub(crate) fn ladd(x: &[Polynomial], y: &[Polynomial]) -> LieVec {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub(crate) fn lsub(x: &[Polynomial], y: &[Polynomial]) -> LieVec {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub(crate) fn lneg(x: &[Polynomial]) -> LieVec {
    x.iter().map(|a| -a).collect()
}

pub(crate) fn lscale(x: &[Polynomial], c: &Coeff) -> LieVec {
    x.iter().map(|a| a.scale(c)).collect()
}

/// `Q² = 0`, `QK + KQ = L`, `KL + LK = 0` (plus `[Q,L] = 0`, `L² = 0`) on field generators.
pub fn check_gauge_relations(p: &GaugeJetPreset) -> Result<Report> {
    let mut r = p.qk.check(p.alg())?;
    r.title = format!(
        "gauge QK relations for {} (r = {}, s = {}, t = {}, {:?} chart)",
        p.lie.name, p.config.params.r, p.config.params.s, p.config.params.t, p.config.chart
    );
    Ok(r)
}

/// Checks `ι_λ`, `δ_λ` against the QK-structure.
pub fn gauge_structure(p: &GaugeJetPreset) -> Result<Report> {
    let alg = p.alg();
    let mut r = Report::new(format!("gauge structure ({:?} chart)", p.config.chart));
    let fields = p.field_generators();
    let lam = p.lambda(&[]);
    let th = p.f0("theta", &[])?;
    let n = p.n();
    let dlam_a = |a: usize| -> Polynomial { (1..=n).map(|m| alg.mul(&p.lambda(&[m as u32])[a], &p.dx(m))).sum() };

    let compare_lie = |label: &str, lhs: LieVec, rhs: LieVec, r: &mut Report| {
        let w: Vec<Witness> = lhs
            .iter()
            .zip(&rhs)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(a, (x, y))| Witness::new(format!("{label} [{}]", a + 1), alg.render(x), alg.render(y)))
            .collect();
        r.check(label, w);
    };
    let apply_lie = |d: &Derivation, x: &[Polynomial]| -> Result<LieVec> { x.iter().map(|f| alg.apply(d, f)).collect() };

    match p.config.chart {
        Chart::Shifted => {
            compare_lie(
                "delta_lambda theta = -[lambda, theta]",
                apply_lie(&p.delta, &th)?,
                lneg(&p.bracket(&lam, &th)),
                &mut r,
            );
            let mut w = Vec::new();
            for m in 1..=n {
                let lhs = apply_lie(&p.delta, &p.f0("A", &[m])?)?;
                let rhs = ladd(&p.lambda(&[m as u32]), &p.bracket(&p.f0("A", &[m])?, &lam));
                for a in 0..p.dim() {
                    if lhs[a] != rhs[a] {
                        w.push(Witness::new(format!("A[{},{m}]", a + 1), alg.render(&lhs[a]), alg.render(&rhs[a])));
                    }
                }
            }
            r.check("delta_lambda A = d lambda + [A, lambda]", w);

            let mut w_ik = Vec::new();
            let mut w_ki = Vec::new();
            for &g in &fields {
                if let Ok(kg) = alg.apply_gen(&p.qk.k, g) {
                    if let Ok(x) = alg.apply(&p.iota, &kg) {
                        if !x.is_zero() {
                            w_ik.push(Witness::new(alg.label_of(g), alg.render(&x), "0"));
                        }
                    }
                }
                if let Ok(ig) = alg.apply_gen(&p.iota, g) {
                    if let Ok(x) = alg.apply(&p.qk.k, &ig) {
                        if !x.is_zero() {
                            w_ki.push(Witness::new(alg.label_of(g), alg.render(&x), "0"));
                        }
                    }
                }
            }
            r.check("iota_lambda K = 0", w_ik);
            r.check("K iota_lambda = 0", w_ki);

            let kd = alg.commutator(&p.qk.k, &p.delta)?;
            let mut dlam: HashMap<GenId, Polynomial> = HashMap::new();
            for (&(a, ref m), &id) in &p.lambda {
                let v = m.iter().try_fold(dlam_a(a), |v, &mu| alg.apply(&p.total_ext[mu as usize - 1], &v));
                if let Ok(v) = v {
                    dlam.insert(id, v);
                }
            }
            let mut expected = Derivation::new("-iota_{d lambda}", kd.degree, alg.convention());
            let mut skip = Vec::new();
            for &g in &fields {
                let Ok(ig) = alg.apply_gen(&p.iota, g) else { continue };
                match replace_linear(alg, &ig, &dlam) {
                    Some(v) => expected.set(g, -v),
                    None => skip.push(g),
                }
            }
            let gens: Vec<GenId> = fields
                .iter()
                .copied()
                .filter(|&g| alg.apply_gen(&kd, g).is_ok() && !skip.contains(&g))
                .collect();
            r.check("K delta_lambda - delta_lambda K = -iota_{d lambda}", alg.compare_on(&kd, &expected, &gens));

            let il = alg.commutator(&p.iota, &p.qk.l)?;
            let dk = alg.commutator(&p.delta, &p.qk.k)?;
            let (w, _) = alg.compare_defined(&il, &dk);
            r.check("[iota_lambda, L] = [delta_lambda, K]", w);
        }
        Chart::Original => {
            let ik = alg.commutator(&p.iota, &p.qk.k)?;
            let ph = p.f0("phi", &[])?;
            let lhs = apply_lie(&ik, &ph)?;
            let rhs: LieVec = (0..p.dim()).map(dlam_a).collect();
            compare_lie("(iota_lambda K + K iota_lambda) phi = d lambda", lhs, rhs, &mut r);
            let nonzero = alg.vanishes_on(&ik, &fields);
            r.note(format!(
                "iota_lambda K + K iota_lambda is nonzero on {} field generators in the original chart",
                nonzero.len()
            ));
        }
    }
    Ok(r)
}

/// Replaces the single factor of `f` found in `map` in place; `None` if some term has no image.
fn replace_linear(alg: &Algebra, f: &Polynomial, map: &HashMap<GenId, Polynomial>) -> Option<Polynomial> {
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        let i = m.0.iter().position(|g| map.contains_key(g))?;
        let mut t = Polynomial::constant(c.clone());
        for (j, &g) in m.0.iter().enumerate() {
            let x = if j == i { map[&g].clone() } else { alg.var(g) };
            t = alg.mul(&t, &x);
        }
        out += t;
    }
    Some(out)
}
