use cohoma::equivariant::kalkman::{cartan_on_invariants, kalkman_conjugate, weil_tensor_omega};
use cohoma::equivariant::lie::LieAlgebraData;
use cohoma::equivariant::mq::{build_mq, check_mq_identities, so2_standard};
use cohoma::equivariant::poisson::{build_qkweil, check_qkweil};
use cohoma::equivariant::weil::{build_weil, build_weil_unchecked};
use cohoma::gauge::{build_gauge_jet, curvature_algebra_checks, gauge_structure};
use cohoma::{Coeff, Polynomial};

fn passed(r: &cohoma::Report) {
    assert!(r.passed(), "{r}");
}

#[test]
fn weil_relations_for_su2_and_so3() {
    for g in [LieAlgebraData::su2(), LieAlgebraData::so3()] {
        let w = build_weil(&g).unwrap();
        let r = w.module.check().unwrap();
        passed(&r);
        assert_eq!(r.entries.len(), 6);
    }
}

#[test]
fn jacobi_broken_constants_fail_with_a_witness() {
    let mut f = vec![vec![vec![Coeff::zero(); 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                f[a][b][c] = Coeff::int(cohoma::equivariant::lie::epsilon3(a, b, c));
            }
        }
    }
    f[0][0][1] = Coeff::one();
    f[0][1][0] = Coeff::int(-1);
    let g = LieAlgebraData::new("broken", f);
    assert!(g.check_jacobi().is_err());
    assert!(build_weil(&g).is_err());
    let r = build_weil_unchecked(&g).module.check().unwrap();
    assert!(!r.passed());
    assert!(!r.witnesses().is_empty());
}

#[test]
fn kalkman_closed_form_and_cartan_restriction() {
    let g = LieAlgebraData::su2();
    let t = weil_tensor_omega(&g).unwrap();
    let k = kalkman_conjugate(&t).unwrap();
    passed(&k.report);
    assert!(t.alg.compare(&k.d_k, &k.closed).is_empty());
    let a = &t.alg;
    let xx: Polynomial = t.x.iter().map(|&x| a.mul(&a.var(x), &a.var(x))).sum();
    passed(&cartan_on_invariants(&t, &k, &[xx]).unwrap());
}

#[test]
fn mathai_quillen_so2() {
    let p = build_mq(&so2_standard(), false).unwrap();
    let r = check_mq_identities(&p).unwrap();
    passed(&r);
    for label in ["s^2 b = 0", "s^2 chi = 0", "L = s(chi^t (i w + b/2))", "iota_a L = Lie_a L = 0"] {
        assert!(r.entries.iter().any(|e| e.label == label), "{label}");
    }
}

#[test]
fn poisson_brackets_for_su2() {
    let p = build_qkweil(&LieAlgebraData::su2()).unwrap();
    let r = check_qkweil(&p);
    passed(&r);
    let i1 = p.i_a(0);
    assert!(p.bracket(&i1, &p.i_a(1)).is_zero());
    assert_eq!(p.bracket(&p.s(), &i1), p.l_a(0));
    assert!(p.bracket(&p.s(), &p.s()).is_zero());
}

#[test]
fn curvature_algebra_for_su2_and_abelian() {
    for g in [LieAlgebraData::su2(), LieAlgebraData::abelian(2)] {
        passed(&curvature_algebra_checks(&g).unwrap());
    }
}

#[test]
fn h_simple_certification() {
    let p = build_gauge_jet(&LieAlgebraData::su2(), 4, 2, Coeff::zero(), Coeff::zero(), Coeff::one()).unwrap();
    passed(&gauge_structure(&p).unwrap());
    let alg = p.alg();
    let kd = alg.commutator(&p.qk.k, &p.delta).unwrap();
    let mut horizontal = 0;
    for g in p.field_generators() {
        let (Ok(ig), Ok(v)) = (alg.apply_gen(&p.iota, g), alg.apply_gen(&kd, g)) else { continue };
        if ig.is_zero() {
            horizontal += 1;
            assert!(v.is_zero(), "{} -> {}", alg.label_of(g), alg.render(&v));
        }
    }
    assert!(horizontal > 0);
    let theta = p.field("theta", &[], &[]).unwrap();
    for (a, th) in theta.iter().enumerate() {
        let dlam: Polynomial = (1..=4).map(|m| alg.mul(&p.lambda(&[m as u32])[a], &p.dx(m))).sum();
        assert_eq!(alg.apply(&kd, th).unwrap(), -dlam);
    }
}
