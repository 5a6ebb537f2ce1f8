use cohoma::equivariant::lie::LieAlgebraData;
use cohoma::gauge::observables::tym_closed_form;
use cohoma::gauge::{
    build_gauge, build_gauge_jet, build_lagrangian, check_gauge_relations, gauge_structure, k0_equivalence, tym_observables,
    tym_prepotential, Chart, GaugeConfig, GaugeJetPreset, GaugeParams,
};
use cohoma::{Coeff, Error, Polynomial};

fn su2(r: i64, s: i64) -> GaugeJetPreset {
    build_gauge_jet(&LieAlgebraData::su2(), 4, 2, Coeff::int(r), Coeff::int(s), Coeff::one()).unwrap()
}

fn lie_eq(p: &GaugeJetPreset, lhs: &[Polynomial], rhs: &[Polynomial]) {
    for (a, (x, y)) in lhs.iter().zip(rhs).enumerate() {
        assert_eq!(x, y, "component {}: {} vs {}", a + 1, p.alg().render(x), p.alg().render(y));
    }
}

fn apply(p: &GaugeJetPreset, x: &[Polynomial]) -> Vec<Polynomial> {
    x.iter().map(|f| p.alg().apply(&p.qk.k, f).unwrap()).collect()
}

fn add(x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn scale(x: &[Polynomial], c: Coeff) -> Vec<Polynomial> {
    x.iter().map(|a| a.scale(&c)).collect()
}

#[test]
fn relations_hold_across_the_family() {
    for (r, s) in [(0, 0), (0, 1), (0, -2), (1, 0), (1, 1)] {
        let p = su2(r, s);
        let rep = check_gauge_relations(&p).unwrap();
        assert!(rep.passed(), "(r,s)=({r},{s}): {rep}");
    }
    for t in [0, 1, 3] {
        for (r, s) in [(0, 0), (1, 1)] {
            let p = build_gauge(
                &LieAlgebraData::su2(),
                GaugeConfig {
                    chart: Chart::Original,
                    params: GaugeParams::new(Coeff::int(r), Coeff::int(s), Coeff::int(t)),
                    ..GaugeConfig::default()
                },
            )
            .unwrap();
            let rep = check_gauge_relations(&p).unwrap();
            assert!(rep.passed(), "original chart t={t}: {rep}");
        }
    }
}

#[test]
fn flat_w_variant_relations_hold() {
    let p = build_gauge(
        &LieAlgebraData::su2(),
        GaugeConfig {
            flat_w: true,
            ..GaugeConfig::default()
        },
    )
    .unwrap();
    assert!(check_gauge_relations(&p).unwrap().passed());
    let r = gauge_structure(&p).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn corrupted_q_upsilon_breaks_q_squared_on_a() {
    let mut p = su2(0, 0);
    p.corrupt_q_sign("upsilon");
    let rep = check_gauge_relations(&p).unwrap();
    assert!(!rep.passed());
    let q2 = rep.entries.iter().find(|e| e.label == "Q^2 = 0").unwrap();
    assert!(!q2.passed);
    assert!(q2.witnesses.iter().any(|w| w.generator.starts_with("A[")), "{:?}", q2.witnesses);
}

#[test]
fn k_table_at_the_form_level() {
    for s in [0, 1, 3] {
        let p = su2(0, s);
        let sc = Coeff::int(s);
        let ups = p.one_form("upsilon").unwrap();
        let f = p.two_form(&p.curvature().unwrap());
        let b = p.two_form(&p.two_form_field("b").unwrap());
        let chi = p.two_form(&p.two_form_field("chi").unwrap());
        let phi = p.field("phi", &[], &[]).unwrap();
        let theta = p.field("theta", &[], &[]).unwrap();
        lie_eq(&p, &apply(&p, &theta), &p.one_form("A").unwrap());
        lie_eq(&p, &apply(&p, &phi), &scale(&ups, Coeff::int(-1)));
        lie_eq(&p, &apply(&p, &p.one_form("A").unwrap()), &scale(&chi, sc.clone()));
        lie_eq(&p, &apply(&p, &ups), &add(&scale(&f, Coeff::int(2)), &scale(&b, -sc)));
    }
}

#[test]
fn k_on_b_is_the_covariant_exterior_derivative() {
    let p = su2(0, 1);
    let b = p.two_form(&p.two_form_field("b").unwrap());
    let alg = p.alg();
    let mut dachi = vec![Polynomial::zero(); 3];
    for rho in 1..=4 {
        for mu in 1..=4 {
            for nu in mu + 1..=4 {
                let c = p.covariant_derivative_two("chi", rho, mu, nu).unwrap();
                let dx3 = alg.product([&p.dx(rho), &p.dx(mu), &p.dx(nu)]);
                dachi = add(&dachi, &c.iter().map(|x| alg.mul(x, &dx3)).collect::<Vec<_>>());
            }
        }
    }
    lie_eq(&p, &apply(&p, &b), &dachi);
}

#[test]
fn universal_connection_and_curvature() {
    for s in [0, 2] {
        let p = su2(0, s);
        let half_s = Coeff::ratio(s, 2);
        let theta = p.field("theta", &[], &[]).unwrap();
        let phi = p.field("phi", &[], &[]).unwrap();
        let a = p.one_form("A").unwrap();
        let chi = p.two_form(&p.two_form_field("chi").unwrap());
        let th_k = add(&add(&theta, &a), &scale(&chi, half_s.clone()));
        lie_eq(&p, &p.exp_k(&theta).unwrap(), &th_k);

        let ups = p.one_form("upsilon").unwrap();
        let f = p.two_form(&p.curvature().unwrap());
        let b = p.two_form(&p.two_form_field("b").unwrap());
        let alg = p.alg();
        let mut dachi = vec![Polynomial::zero(); 3];
        for rho in 1..=4 {
            for mu in 1..=4 {
                for nu in mu + 1..=4 {
                    let c = p.covariant_derivative_two("chi", rho, mu, nu).unwrap();
                    let dx3 = alg.product([&p.dx(rho), &p.dx(mu), &p.dx(nu)]);
                    dachi = add(&dachi, &c.iter().map(|x| alg.mul(x, &dx3)).collect::<Vec<_>>());
                }
            }
        }
        let mut ph_k = add(&phi, &scale(&add(&ups, &f), Coeff::int(-1)));
        ph_k = add(&ph_k, &scale(&add(&b, &dachi), half_s.clone()));
        ph_k = add(&ph_k, &scale(&p.bracket(&chi, &chi), Coeff::ratio(s * s, 8)));
        let got = p.exp_k(&phi).unwrap();
        lie_eq(&p, &got, &ph_k);

        let lhs = alg.exp_apply(&p.qk.k, &p.trace(&phi, &phi).unwrap(), 20).unwrap();
        assert_eq!(lhs, p.trace(&got, &got).unwrap());
    }
}

#[test]
fn tym_observables_match_the_closed_form() {
    for s in [0, 1, -1, 2] {
        let p = su2(0, s);
        let seq = tym_observables(&p, 2).unwrap();
        let closed = tym_closed_form(&p).unwrap();
        for (k, (x, y)) in seq.o.iter().zip(&closed).enumerate() {
            assert_eq!(x, y, "s={s} O[{k}]: {} vs {}", p.alg().render(x), p.alg().render(y));
        }
    }
}

#[test]
fn tym_observable_errors() {
    let p = su2(0, 0);
    assert!(matches!(tym_observables(&p, 3), Err(Error::UnsupportedParameter(_))));
    let mut g = LieAlgebraData::su2();
    g.metric = None;
    let q = build_gauge_jet(&g, 4, 2, Coeff::zero(), Coeff::zero(), Coeff::one()).unwrap();
    assert_eq!(tym_observables(&q, 2).unwrap_err(), Error::MissingMetric);
    let small = build_gauge_jet(&LieAlgebraData::su2(), 2, 2, Coeff::zero(), Coeff::zero(), Coeff::one()).unwrap();
    assert!(tym_observables(&small, 2).is_err());
}

#[test]
fn k0_equivalence_up_to_a_q_exact_top_term() {
    for (s, c) in [(Coeff::zero(), None), (Coeff::one(), Some("1/2")), (Coeff::int(2), Some("2")), (Coeff::ratio(-1, 3), Some("1/18"))] {
        let r = k0_equivalence(s.clone()).unwrap();
        assert!(r.passed(), "s={s}: {r}");
        let residual = r.notes.iter().find(|n| n.starts_with("O[4] differs"));
        match c {
            None => assert!(residual.is_none(), "{r}"),
            Some(c) => assert!(residual.unwrap().contains(&format!("by {c} Q Tr")), "{r}"),
        }
    }
}

#[test]
fn gauge_structure_in_both_charts() {
    let p = su2(0, 0);
    let r = gauge_structure(&p).unwrap();
    assert!(r.passed(), "{r}");
    let o = build_gauge(
        &LieAlgebraData::su2(),
        GaugeConfig {
            chart: Chart::Original,
            ..GaugeConfig::default()
        },
    )
    .unwrap();
    let r = gauge_structure(&o).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.notes[0].contains("nonzero"), "{r}");
}

#[test]
fn gauge_structure_with_s() {
    let r = gauge_structure(&su2(0, 1)).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn tym_lagrangian_is_basic_and_q_exact() {
    let p = su2(0, 0);
    let pre = tym_prepotential(&p).unwrap();
    let (lag, r) = build_lagrangian(&pre, &p).unwrap();
    assert!(r.passed(), "{r}");
    assert!(!lag.is_zero());

    let (zero, r0) = build_lagrangian(&Polynomial::zero(), &p).unwrap();
    assert!(zero.is_zero() && r0.passed());

    let theta = p.field("theta", &[], &[]).unwrap();
    let chi = p.field("chi", &[1, 2], &[]).unwrap();
    let chi34 = p.field("chi", &[3, 4], &[]).unwrap();
    let bad = p.alg().mul(&p.alg().product([&theta[0], &chi[0], &chi34[0]]), &p.dvol());
    match build_lagrangian(&bad, &p) {
        Err(Error::NotBasic { op, .. }) => assert_eq!(op, "iota_lambda"),
        other => panic!("expected NotBasic, got {other:?}"),
    }
    assert!(matches!(build_lagrangian(&chi[0], &p), Err(Error::DegreeMismatch { .. })));
}

#[test]
fn self_dual_needs_dimension_four() {
    let e = build_gauge_jet(&LieAlgebraData::su2(), 3, 2, Coeff::one(), Coeff::zero(), Coeff::one()).unwrap_err();
    assert_eq!(e, Error::SelfDualNeedsDim4(3));
    let e = build_gauge_jet(&LieAlgebraData::su2(), 4, 2, Coeff::zero(), Coeff::zero(), Coeff::int(2)).unwrap_err();
    assert!(matches!(e, Error::UnsupportedParameter(_)));
}
