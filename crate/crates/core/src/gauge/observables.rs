use super::preset::{build_gauge, ladd, lscale, lsub, Chart, GaugeConfig, GaugeJetPreset, GaugeParams, LieVec};
use crate::bigraded::{Bidegree, Coeff, Degree, Polynomial};
use crate::equivariant::lie::LieAlgebraData;
use crate::error::{Error, Result};
use crate::jet::{general_k_sequence, standard_k_sequence, verify_descent, DescentSequence, QkStructure};
use crate::report::{Report, Witness};

/// `Tr(φ²)^{m/2}`, the degree-`m` invariant built from the quadratic Casimir.
pub fn casimir_power(p: &GaugeJetPreset, m: usize) -> Result<Polynomial> {
    if p.lie.metric.is_none() {
        return Err(Error::MissingMetric);
    }
    if m == 0 || m % 2 == 1 {
        return Err(Error::UnsupportedParameter(format!("Tr(phi^{m}) needs m even and positive")));
    }
    let ph = p.field("phi", &[], &[])?;
    let t2 = p.trace(&ph, &ph)?;
    Ok(p.alg().pow(&t2, (m / 2) as u32))
}

/// The standard K-sequence `exp(K) Tr(φ^m)` split by horizontal degree.
pub fn tym_observables(p: &GaugeJetPreset, m: usize) -> Result<DescentSequence> {
    let o0 = casimir_power(p, m)?;
    if 2 * m != p.n() {
        return Err(Error::DegreeMismatch {
            what: format!("Tr(phi^{m}) as O[0]"),
            expected: Bidegree::new(0, p.n() as i32),
            found: Bidegree::new(0, 2 * m as i32).to_string(),
        });
    }
    standard_k_sequence(p.alg(), &p.qk, p.n(), &o0)
}

/// The closed-form list `Tr(φ²)`, `-2Tr(φυ)`, `Tr(υ∧υ + φ(sb - 2F))`, `Tr(sφ d_Aχ - υ∧(sb - 2F))`,
/// `Tr((sb/2 - F)∧(sb/2 - F) - s υ∧d_Aχ + s²φ[χ,χ]/4)` in the shifted chart with `r = 0`.
pub fn tym_closed_form(p: &GaugeJetPreset) -> Result<Vec<Polynomial>> {
    if p.config.chart != Chart::Shifted || !p.config.params.r.is_zero() || p.n() != 4 {
        return Err(Error::UnsupportedParameter("closed-form observables need the shifted chart, r = 0, n = 4".into()));
    }
    let alg = p.alg();
    let s = &p.config.params.s;
    let half = Coeff::ratio(1, 2);
    let ph = p.field("phi", &[], &[])?;
    let ups = p.one_form("upsilon")?;
    let f = p.two_form(&p.curvature()?);
    let b = p.two_form(&p.two_form_field("b")?);
    let chi = p.two_form(&p.two_form_field("chi")?);
    let mut dachi = vec![Polynomial::zero(); p.dim()];
    for rho in 1..=4 {
        for mu in 1..=4 {
            for nu in mu + 1..=4 {
                let c = p.covariant_derivative_two("chi", rho, mu, nu)?;
                let dx3 = alg.product([&p.dx(rho), &p.dx(mu), &p.dx(nu)]);
                dachi = ladd(&dachi, &c.iter().map(|x| alg.mul(x, &dx3)).collect::<Vec<_>>());
            }
        }
    }
    let sb_2f = lsub(&lscale(&b, s), &lscale(&f, &Coeff::int(2)));
    let x = lsub(&lscale(&b, &(s * &half)), &f);
    let chichi = p.bracket(&chi, &chi);
    let tr = |x: &LieVec, y: &LieVec| p.trace(x, y);
    Ok(vec![
        tr(&ph, &ph)?,
        tr(&ph, &ups)?.scale(&Coeff::int(-2)),
        tr(&ups, &ups)? + tr(&ph, &sb_2f)?,
        tr(&ph, &dachi)?.scale(s) - tr(&ups, &sb_2f)?,
        tr(&x, &x)? - tr(&ups, &dachi)?.scale(s) + tr(&ph, &chichi)?.scale(&(s * s * Coeff::ratio(1, 4))),
    ])
}

fn compare_sequences(p: &GaugeJetPreset, r: &mut Report, label: &str, a: &DescentSequence, b: &[Polynomial]) {
    let alg = p.alg();
    for (k, (x, y)) in a.o.iter().zip(b).enumerate() {
        let w = if x == y {
            vec![]
        } else {
            vec![Witness::new(format!("O[{k}]"), alg.render(x), alg.render(y))]
        };
        r.check(format!("{label} O[{k}]"), w);
    }
}

/// Compares the standard `K_s`-sequence of `Tr(φ²)` with the general `K_0`-sequence seeded by
/// `W(2) = s Q Tr(φχ)` and `W(4) = -s²/4 Q Tr(b∧χ)` (su(2), `n = 4`, `J = 2`).
///
/// When termwise equality fails the residual `O_s[p] - O_0[p]` is tested for being `c Q Tr(b∧χ)`,
/// which makes the two sequences equivalent up to an exact sequence.
pub fn k0_equivalence(s: Coeff) -> Result<Report> {
    let p = build_gauge(
        &LieAlgebraData::su2(),
        GaugeConfig {
            params: GaugeParams::with_s(s),
            ..GaugeConfig::default()
        },
    )?;
    k0_equivalence_on(&p)
}

/// `Some(c)` with `f = c g`, if any.
fn multiple_of(f: &Polynomial, g: &Polynomial) -> Option<Coeff> {
    let Some((m, c)) = g.terms().next() else {
        return f.is_zero().then(Coeff::zero);
    };
    let k = &f.coeff(m) / c;
    (g.scale(&k) == *f).then_some(k)
}

pub fn k0_equivalence_on(p: &GaugeJetPreset) -> Result<Report> {
    if !p.config.params.r.is_zero() || p.config.chart != Chart::Shifted {
        return Err(Error::UnsupportedParameter("k0 equivalence needs r = 0 in the shifted chart".into()));
    }
    let alg = p.alg();
    let s = p.config.params.s.clone();
    let mut r = Report::new(format!("K_s sequence vs general K_0 sequence (s = {s})"));
    let n = p.n();
    let o0 = casimir_power(p, 2)?;
    let ks = standard_k_sequence(alg, &p.qk, n, &o0)?;
    let k0 = p.structure(&GaugeParams::tym())?;
    let qk0 = QkStructure {
        q: p.qk.q.clone(),
        k: k0.k,
        l: p.qk.l.clone(),
    };
    let ph = p.field("phi", &[], &[])?;
    let chi = p.two_form(&p.two_form_field("chi")?);
    let b = p.two_form(&p.two_form_field("b")?);
    let w2 = alg.apply(&p.qk.q, &p.trace(&ph, &chi)?)?.scale(&s);
    let q_bchi = alg.apply(&p.qk.q, &p.trace(&b, &chi)?)?;
    let quarter = &s * &s * Coeff::ratio(1, 4);
    let w4 = q_bchi.scale(&-&quarter);
    let w2_closed = p.trace(&ph, &b)?.scale(&s);
    let w4_closed = (p.trace(&b, &b)? + p.trace(&ph, &p.bracket(&chi, &chi))?).scale(&-&quarter);
    r.expect("W(2) = s Tr(phi b)", w2 == w2_closed, || Witness::new("W(2)", alg.render(&w2), alg.render(&w2_closed)));
    r.expect("W(4) = -s^2/4 Tr(b b + phi [chi,chi])", w4 == w4_closed, || {
        Witness::new("W(4)", alg.render(&w4), alg.render(&w4_closed))
    });
    let zero = Polynomial::zero();
    let gen = general_k_sequence(alg, &qk0, n, &o0, &[zero.clone(), w2.clone(), zero.clone(), w4])?;
    let mut residual_ok = true;
    for (k, (x, y)) in ks.o.iter().zip(&gen.o).enumerate() {
        if x == y {
            continue;
        }
        let res = x - y;
        match multiple_of(&res, &q_bchi) {
            Some(c) => r.note(format!("O[{k}] differs from the quoted K_0 sequence by {c} Q Tr(b chi)")),
            None => residual_ok = false,
        }
        if k != n {
            residual_ok = false;
        }
    }
    r.expect("K_s standard = K_0 general up to a Q-exact top term", residual_ok, || {
        Witness::new("residual", "not a multiple of Q Tr(b chi)", "c Q Tr(b chi)")
    });
    let w4_plus = q_bchi.scale(&quarter);
    let gen_plus = general_k_sequence(alg, &qk0, n, &o0, &[zero.clone(), w2, zero, w4_plus])?;
    compare_sequences(p, &mut r, "K_s standard = K_0 general with W(4) = +s^2/4 Q Tr(b chi):", &gen_plus, &ks.o);
    r.absorb(verify_descent(alg, &p.qk, &ks)?);
    if s.is_zero() {
        r.note("s = 0: K_s = K_0 and every W vanishes");
    }
    Ok(r)
}

/// `(⟨υ, d_A w⟩ + ⟨ψ, [φ, w]⟩ + ⟨χ, F_- + b⟩) dvol`, componentwise with the flat metric.
pub fn tym_prepotential(p: &GaugeJetPreset) -> Result<Polynomial> {
    if p.config.flat_w || p.n() != 4 {
        return Err(Error::UnsupportedParameter("the topological Yang-Mills gauge fixing needs n = 4 and w of degree (0,-2)".into()));
    }
    let w = p.field("w", &[], &[])?;
    let mut acc = Polynomial::zero();
    for mu in 1..=4 {
        let daw = ladd(&p.field("w", &[], &[mu as u32])?, &p.bracket(&p.field("A", &[mu], &[])?, &w));
        acc += p.trace(&p.field("upsilon", &[mu], &[])?, &daw)?;
    }
    acc += p.trace(&p.field("psi", &[], &[])?, &p.bracket(&p.field("phi", &[], &[])?, &w))?;
    let fm = super::forms::selfdual_project_lie(&p.curvature()?, -1)?;
    for mu in 1..=4 {
        for nu in mu + 1..=4 {
            let f3: LieVec = fm.iter().map(|c| c.get(mu, nu).clone()).collect();
            let rhs = ladd(&f3, &p.field("b", &[mu, nu], &[])?);
            acc += p.trace(&p.field("chi", &[mu, nu], &[])?, &rhs)?;
        }
    }
    Ok(p.alg().mul(&acc, &p.dvol()))
}

/// `𝓛 = Q(prepotential)` for a basic prepotential of degree `(n, -1)`.
pub fn build_lagrangian(prepotential: &Polynomial, p: &GaugeJetPreset) -> Result<(Polynomial, Report)> {
    let alg = p.alg();
    let n = p.n() as i32;
    match alg.degree(prepotential) {
        Degree::Zero => {}
        Degree::Homogeneous(d) if d == Bidegree::new(n, -1) => {}
        d => {
            return Err(Error::DegreeMismatch {
                what: "prepotential".into(),
                expected: Bidegree::new(n, -1),
                found: match d {
                    Degree::Homogeneous(x) => x.to_string(),
                    _ => "mixed".into(),
                },
            })
        }
    }
    for (op, d) in [("iota_lambda", &p.iota), ("delta_lambda", &p.delta)] {
        let img = alg.apply(d, prepotential)?;
        if !img.is_zero() {
            return Err(Error::NotBasic {
                op: op.into(),
                image: alg.render(&img),
            });
        }
    }
    let lag = alg.apply(&p.qk.q, prepotential)?;
    let mut r = Report::new("Lagrangian");
    let vanish = |label: &str, f: Polynomial, r: &mut Report| {
        r.expect(label, f.is_zero(), || Witness::new(label, alg.render(&f), "0"));
    };
    vanish("Q L = 0", alg.apply(&p.qk.q, &lag)?, &mut r);
    vanish("iota_lambda L = 0", alg.apply(&p.iota, &lag)?, &mut r);
    vanish("delta_lambda L = 0", alg.apply(&p.delta, &lag)?, &mut r);
    let deg_ok = matches!(alg.degree(&lag), Degree::Zero) || alg.degree(&lag) == Degree::Homogeneous(Bidegree::new(n, 0));
    r.expect(format!("L has degree ({n},0)"), deg_ok, || {
        Witness::new("degree", format!("{:?}", alg.degree(&lag)), format!("({n},0)"))
    });
    Ok((lag, r))
}
