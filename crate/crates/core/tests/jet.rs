use cohoma::bigraded::{Coeff, Polynomial, Tensor};
use cohoma::jet::presets::{g2_form, symplectic_form};
use cohoma::jet::*;
use cohoma::Error;

/// Closed-form line `c α_{i1..ir} u^{i1}_{μ1} ⋯ u^{ip}_{μp} dx^{μ1} ⋯ dx^{μp} δu^{i(p+1)} ⋯ δu^{ir}`.
fn closed_line(p: &JetPreset, alpha: &Tensor, pp: usize, c: i64) -> Polynomial {
    let alg = p.alg();
    let n = p.space.n;
    let mut out = Polynomial::zero();
    for t in alpha.indices() {
        let a = alpha.get(&t);
        if a.is_zero() {
            continue;
        }
        let mut mus = vec![vec![]];
        for _ in 0..pp {
            mus = mus.into_iter().flat_map(|m: Vec<usize>| (1..=n).map(move |x| [m.clone(), vec![x]].concat())).collect();
        }
        for m in mus {
            let mut f: Vec<Polynomial> = (0..pp).map(|s| p.u_mu(t[s], m[s])).collect();
            f.extend(m.iter().map(|&mu| p.space.dx(mu)));
            f.extend(t[pp..].iter().map(|&i| p.du(i)));
            out += alg.product(f.iter()).scale(&(a * &Coeff::int(c)));
        }
    }
    out
}

fn reversal_sign(p: usize) -> i64 {
    if (p * p.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn sigma_model_sequence_matches_closed_lines() {
    let p = sigma(2).unwrap();
    let w = symplectic_form(2);
    let o0 = descent::vertical_form(&p, &w);
    let seq = standard_k_sequence(p.alg(), &p.qk, 2, &o0).unwrap();
    for (pp, c) in [(0, 1), (1, 2), (2, 1)] {
        assert_eq!(seq.o[pp], closed_line(&p, &w, pp, c * reversal_sign(pp)), "O[{pp}]");
    }
    assert!(verify_descent(p.alg(), &p.qk, &seq).unwrap().passed());
    let pb = pullback_constant(&p, &w).unwrap();
    assert_eq!(pb, seq);
}

#[test]
fn m_theory_sequence_matches_closed_lines() {
    let p = mtheory().unwrap();
    let phi = g2_form();
    let o0 = descent::vertical_form(&p, &phi);
    let seq = standard_k_sequence(p.alg(), &p.qk, 3, &o0).unwrap();
    for (pp, c) in [(0, 1), (1, 3), (2, 3), (3, 1)] {
        assert_eq!(seq.o[pp], closed_line(&p, &phi, pp, c * reversal_sign(pp)), "O[{pp}]");
    }
    assert!(verify_descent(p.alg(), &p.qk, &seq).unwrap().passed());
    assert_eq!(pullback_constant(&p, &phi).unwrap(), seq);
}

#[test]
fn tqm_height_function_observable() {
    let p = tqm(2).unwrap();
    let alg = p.alg();
    let seq = pullback_observable(&p, 1, 2, |t| p.u(t[0])).unwrap();
    assert_eq!(alg.render(&seq.o[0]), "u[1]*du[1] + u[2]*du[2]");
    assert_eq!(alg.render(&seq.o[1]), "dx[1]*u[1]*u[1;1] + dx[1]*u[2]*u[2;1]");
    assert!(verify_descent(alg, &p.qk, &seq).unwrap().passed());
}

#[test]
fn dropping_factorials_breaks_descent_at_two() {
    let p = sigma(2).unwrap();
    let alg = p.alg();
    let o0 = descent::vertical_form(&p, &symplectic_form(2));
    let mut seq = standard_k_sequence(alg, &p.qk, 2, &o0).unwrap();
    seq.o[2] = alg.apply(&p.qk.k, &seq.o[1]).unwrap();
    let r = verify_descent(alg, &p.qk, &seq).unwrap();
    let failed: Vec<_> = r.failures().map(|e| e.label.clone()).collect();
    assert_eq!(failed, vec!["Q O[2] = d O[1]".to_string()]);
}

#[test]
fn general_and_exact_sequences() {
    let p = sigma(2).unwrap();
    let alg = p.alg();
    let w = symplectic_form(2);
    let o0 = descent::vertical_form(&p, &w);
    let std = standard_k_sequence(alg, &p.qk, 2, &o0).unwrap();
    assert_eq!(general_k_sequence(alg, &p.qk, 2, &o0, &[Polynomial::zero(), Polynomial::zero()]).unwrap(), std);
    let unclosed_w1 = alg.mul(&p.dh_u(0), &p.du(1));
    assert!(matches!(general_k_sequence(alg, &p.qk, 2, &o0, &[unclosed_w1]), Err(Error::NotClosed { q: 1, .. })));
    let closed = [
        alg.mul(&p.space.dx(1), &p.du(0)),
        alg.apply(&p.qk.q, &alg.mul(&p.u(0), &p.dh_u(1))).unwrap(),
    ];
    for w1 in closed {
        let g = general_k_sequence(alg, &p.qk, 2, &o0, &[w1]).unwrap();
        assert!(verify_descent(alg, &p.qk, &g).unwrap().passed());
    }
    let bad = alg.mul(&p.u(0), &alg.mul(&p.dh_u(1), &p.du(0)));
    assert!(matches!(general_k_sequence(alg, &p.qk, 2, &o0, &[bad]), Err(Error::NotClosed { q: 1, .. })));

    let t = tqm(1).unwrap();
    let ta = t.alg();
    let rho0 = ta.mul(&t.u(0), &t.du(0));
    let e = exact_sequence(ta, &t.qk, 1, &[Polynomial::zero(), Polynomial::zero()]).unwrap();
    assert!(e.o.iter().all(Polynomial::is_zero));
    let rho_bad = exact_sequence(ta, &t.qk, 1, &[rho0]);
    assert!(matches!(rho_bad, Err(Error::DegreeMismatch { .. })));
    let rho = vec![ta.mul(&t.u(0), &t.u(0))];
    let e = exact_sequence(ta, &t.qk, 1, &rho).unwrap();
    assert_eq!(ta.render(&e.o[0]), "2*u[1]*du[1]");
    assert_eq!(ta.render(&e.o[1]), "2*dx[1]*u[1]*u[1;1]");
    assert!(verify_descent(ta, &t.qk, &e).unwrap().passed());
}

#[test]
fn witness_checker() {
    let p = sigma(2).unwrap();
    let alg = p.alg();
    let o0 = descent::vertical_form(&p, &symplectic_form(2));
    let seq = standard_k_sequence(alg, &p.qk, 2, &o0).unwrap();
    assert!(is_k_sequence_with_witness(alg, &p.qk, &seq, &o0, &[], &[]).unwrap().passed());
    let mut bad = seq.clone();
    bad.o[1] = bad.o[1].scale(&Coeff::int(3));
    let r = is_k_sequence_with_witness(alg, &p.qk, &bad, &o0, &[], &[]).unwrap();
    assert!(!r.passed());
    assert!(r.notes.iter().any(|n| n.contains("p = 1")));
}

#[test]
fn non_antisymmetric_form_is_rejected() {
    let p = sigma(2).unwrap();
    let mut t = Tensor::zeros(vec![2, 2]);
    t.set(&[0, 1], Coeff::one());
    assert!(matches!(pullback_constant(&p, &t), Err(Error::NotAntisymmetric(_))));
}
