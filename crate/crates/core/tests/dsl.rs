use std::collections::BTreeMap;
use std::path::PathBuf;

use cohoma::dsl::ast::*;
use cohoma::dsl::{execute, exit_code, parse, render, render_json, run, Session, Status};
use cohoma::equivariant::weil::build_weil;
use cohoma::equivariant::lie::LieAlgebraData;
use cohoma::gauge::observables::tym_closed_form;
use cohoma::gauge::{build_gauge, Chart, GaugeConfig, GaugeParams};
use cohoma::{Coeff, Convention, Error};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cohoma"))
        .collect();
    v.sort();
    v
}

fn json(src: &str) -> serde_json::Value {
    serde_json::from_str(&render_json(&run(src, true).unwrap())).unwrap()
}

#[test]
fn generator_ranges_expand_to_concrete_generators() {
    let mut s = Session::new();
    for st in parse("gen theta[a=1..3] deg (0,1);").unwrap().stmts {
        s.declare(&st.kind).unwrap();
    }
    let labels: Vec<_> = s.algebra().generators().iter().map(|g| g.label()).collect();
    assert_eq!(labels, ["theta[1]", "theta[2]", "theta[3]"]);
}

#[test]
fn handwritten_weil_differential_matches_the_preset() {
    let src = "lie su2;
        gen theta[a=1..3] deg (0,1);
        gen phi[a=1..3] deg (0,2);
        der d deg (0,1) {
          theta[a] -> phi[a] - 1/2*sum(b,c) f[a,b,c]*theta[b]*theta[c];
          phi[a] -> -sum(b,c) f[a,b,c]*theta[b]*phi[c];
        }";
    let mut s = Session::new();
    for st in parse(src).unwrap().stmts {
        s.declare(&st.kind).unwrap();
    }
    let w = build_weil(&LieAlgebraData::su2()).unwrap();
    let table = |alg: &cohoma::Algebra, d: &cohoma::Derivation| -> BTreeMap<String, String> {
        alg.ids().map(|g| (alg.label_of(g), alg.render(&alg.apply_gen(d, g).unwrap()))).collect()
    };
    let ours = table(s.algebra(), s.derivation("d").unwrap());
    let theirs = table(&w.module.alg, &w.module.d);
    assert_eq!(ours, theirs);
    assert_eq!(ours["theta[1]"], "phi[1] - theta[2]*theta[3]");
}

#[test]
fn malformed_degree_is_rejected_with_a_position() {
    match parse("gen x deg (0);") {
        Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 13)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn contraction_identity_on_weil_su2() {
    let r = run("use weil(su2); check [d,iota[1]] == Lie[1];", true).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].status, Status::Pass);
    assert_eq!(exit_code(&r), 0);
}

#[test]
fn normal_form_command() {
    let r = run("nf \"KQK\";", true).unwrap();
    assert_eq!(r[0].output, ["K L - K^2 Q"]);
}

#[test]
fn gauge_kseq_listing_matches_the_closed_form() {
    let r = run("kseq standard O0 = Tr(phi^2) preset = gauge(su2, 4, 2, 0, 0);", true).unwrap();
    assert_eq!(r[0].status, Status::Pass, "{:?}", r[0]);
    let p = build_gauge(
        &LieAlgebraData::su2(),
        GaugeConfig {
            n: 4,
            order: 2,
            chart: Chart::Shifted,
            params: GaugeParams::new(Coeff::zero(), Coeff::zero(), Coeff::one()),
            flat_w: false,
        },
    )
    .unwrap();
    let expected: Vec<String> = tym_closed_form(&p)
        .unwrap()
        .iter()
        .enumerate()
        .map(|(k, f)| format!("O[{k}] = {}", p.alg().render(f)))
        .collect();
    assert_eq!(expected.len(), 5);
    assert_eq!(r[0].output, expected);
}

#[test]
fn passing_check_serializes_with_empty_witnesses() {
    let v = json("gen x deg (0,0); check x == x;");
    assert_eq!(v["schema"], 1);
    let rep = &v["reports"][0];
    assert_eq!(rep["status"], "pass");
    assert_eq!(rep["witnesses"], serde_json::json!([]));
    assert_eq!(rep["command"], "check x == x;");
    assert!(rep.get("elapsed_ms").is_none());
}

#[test]
fn failing_q_squared_names_the_generator() {
    let src = "gen x deg (0,0); gen y deg (0,1); gen z deg (0,2);
        der Q deg (0,1) { x -> y; y -> z; }
        check Q^2 == 0;";
    let v = json(src);
    let rep = &v["reports"][0];
    assert_eq!(rep["status"], "fail");
    assert_eq!(rep["witnesses"], serde_json::json!([{"generator": "x", "lhs": "z", "rhs": "0"}]));
    assert_eq!(exit_code(&run(src, true).unwrap()), 1);
}

#[test]
fn empty_script_gives_an_empty_report_list() {
    let r = run("# nothing here\n", true).unwrap();
    assert!(r.is_empty());
    assert_eq!(exit_code(&r), 0);
    assert_eq!(json("")["reports"], serde_json::json!([]));
}

#[test]
fn timings_are_reported_only_outside_deterministic_mode() {
    let r = run("nf \"QK\";", false).unwrap();
    assert!(r[0].elapsed_ms.is_some());
}

#[test]
fn elaboration_errors_exit_with_two() {
    for src in [
        "check y == 0;",
        "gen x deg (0,0); der D deg (0,1) { x -> x; }",
        "gen x deg (0,1); gen x deg (0,1);",
        "use nosuch;",
        "k0equiv;",
    ] {
        let r = run(src, true).unwrap();
        assert_eq!(exit_code(&r), 2, "{src}");
        assert_eq!(r.last().unwrap().status, Status::Error, "{src}");
    }
}

#[test]
fn a_failed_declaration_stops_but_a_failed_command_does_not() {
    let r = run("check y == 0; nf \"Q\"; gen x deg (0); nf \"K\";", true);
    assert!(matches!(r, Err(Error::Syntax { .. })));
    let r = run("check y == 0; nf \"Q\"; use nosuch; nf \"K\";", true).unwrap();
    let st: Vec<_> = r.iter().map(|x| x.status).collect();
    assert_eq!(st, [Status::Error, Status::Pass, Status::Error]);
}

#[test]
fn sums_infer_ranges_from_tensors_and_families() {
    let src = "tensor g[2,2] = {1,2: 3; 2,1: 5};
        gen x[a=1..2] deg (0,0);
        check sum(a,b) g[a,b]*x[a]*x[b] == 8*x[1]*x[2];
        check sum(a) x[a] == x[1] + x[2];";
    let r = run(src, true).unwrap();
    assert!(r.iter().all(|x| x.status == Status::Pass), "{r:?}");
}

#[test]
fn imaginary_unit_and_rationals() {
    let src = "gen x deg (0,0); let y = (1 + 2*i)*x/3; check 3*y - x == 2*i*x; check i^2 == -1;";
    let r = run(src, true).unwrap();
    assert!(r.iter().all(|x| x.status == Status::Pass), "{r:?}");
}

#[test]
fn second_convention_is_honoured() {
    let src = "convention second; gen a deg (1,0); gen b deg (0,1); check a*b == b*a;";
    assert_eq!(run(src, true).unwrap()[0].status, Status::Fail);
    let src = "convention first; gen a deg (1,0); gen b deg (0,1); check a*b == b*a;";
    assert_eq!(run(src, true).unwrap()[0].status, Status::Pass);
}

#[test]
fn corpus_exit_codes_follow_the_file_names() {
    let files = corpus();
    assert!(files.len() >= 15);
    for f in files {
        let src = std::fs::read_to_string(&f).unwrap();
        let r = run(&src, true).unwrap();
        let want = if f.file_stem().unwrap().to_str().unwrap().ends_with("_negative") { 1 } else { 0 };
        assert_eq!(exit_code(&r), want, "{}: {r:?}", f.display());
    }
}

#[test]
fn corpus_reports_are_byte_identical_across_runs() {
    for f in corpus() {
        let src = std::fs::read_to_string(&f).unwrap();
        let a = render_json(&run(&src, true).unwrap());
        let b = render_json(&run(&src, true).unwrap());
        assert_eq!(a, b, "{}", f.display());
        assert!(!a.contains("elapsed_ms"));
    }
}

#[test]
fn corpus_scripts_round_trip_through_the_renderer() {
    for f in corpus() {
        let s = parse(&std::fs::read_to_string(&f).unwrap()).unwrap();
        assert_eq!(parse(&render(&s)).unwrap(), s, "{}", f.display());
    }
}

#[test]
fn rendered_polynomials_parse_back() {
    let src = "use weil(su2); exp d, theta[1];";
    let out = run(src, true).unwrap()[0].output[0].clone();
    let back = run(&format!("use weil(su2); check exp(d, theta[1]) == {out};"), true).unwrap();
    assert_eq!(back[0].status, Status::Pass, "{out}");
}

const KEYWORDS: [&str; 16] = [
    "convention", "lie", "gen", "tensor", "der", "use", "let", "check", "nf", "kseq", "exp", "commute", "bracket", "report", "i", "sum",
];

fn name() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9_]{0,3}".prop_filter("reserved", |s| !KEYWORDS.contains(&s.as_str()))
}

fn index_arg() -> impl Strategy<Value = IndexArg> {
    prop_oneof![(0i64..12).prop_map(IndexArg::Lit), name().prop_map(IndexArg::Var)]
}

fn reference() -> impl Strategy<Value = Expr> {
    (name(), prop::collection::vec(index_arg(), 0..3), prop::collection::vec(index_arg(), 0..2))
        .prop_map(|(name, idx, jet)| Expr::Ref { name, idx, jet })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0i64..1000).prop_map(Expr::Int), Just(Expr::Imag), reference()];
    leaf.prop_recursive(4, 32, 3, |e| {
        let b = |x: Expr| Box::new(x);
        prop_oneof![
            e.clone().prop_map(move |x| Expr::Neg(b(x))),
            (e.clone(), e.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (e.clone(), e.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (e.clone(), e.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (e.clone(), e.clone()).prop_map(move |(x, y)| Expr::Div(b(x), b(y))),
            (e.clone(), 0u32..6).prop_map(move |(x, k)| Expr::Pow(b(x), k)),
            (prop::collection::vec(name(), 1..3), e.clone()).prop_map(move |(vars, x)| Expr::Sum { vars, body: b(x) }),
            (reference(), prop::collection::vec(e.clone(), 1..3)).prop_map(move |(f, args)| Expr::Call { func: b(f), args }),
            (e.clone(), e.clone()).prop_map(move |(x, y)| Expr::Commutator(b(x), b(y))),
        ]
    })
}

/// Values in argument position cannot start with `name(`, which would read as a preset call.
fn plain_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0i64..100).prop_map(Expr::Int), reference()];
    leaf.prop_recursive(2, 8, 2, |e| {
        prop_oneof![
            e.clone().prop_map(|x| Expr::Neg(Box::new(x))),
            (e.clone(), e.clone()).prop_map(|(x, y)| Expr::Div(Box::new(x), Box::new(y))),
            (e.clone(), e.clone()).prop_map(|(x, y)| Expr::Sub(Box::new(x), Box::new(y))),
        ]
    })
}

fn args(value: impl Strategy<Value = Value> + Clone, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Arg>> {
    let arg = prop_oneof![value.clone().prop_map(Arg::Pos), (name(), value).prop_map(|(k, v)| Arg::Key(k, v))];
    prop::collection::vec(arg, n)
}

fn plain_value() -> impl Strategy<Value = Value> + Clone {
    prop_oneof![
        plain_expr().prop_map(Value::Expr),
        prop::collection::vec(plain_expr(), 2..4).prop_map(Value::Tuple),
    ]
}

/// Nested calls need at least one argument, otherwise `name` reads back as an expression.
fn call() -> impl Strategy<Value = PresetCall> {
    let inner = (name(), args(plain_value(), 1..3)).prop_map(|(name, args)| PresetCall { name, args });
    let value = prop_oneof![plain_value(), inner.prop_map(Value::Call)];
    (name(), args(value, 0..4)).prop_map(|(name, args)| PresetCall { name, args })
}

fn ranges() -> impl Strategy<Value = Vec<IndexRange>> {
    prop::collection::vec((name(), 0i64..3, 0i64..3), 0..3)
        .prop_map(|v| v.into_iter().map(|(var, lo, len)| IndexRange { var, lo, hi: lo + len }).collect())
}

fn degree() -> impl Strategy<Value = (i32, i32)> {
    (-3i32..4, -3i32..4)
}

fn stmt() -> impl Strategy<Value = StmtKind> {
    prop_oneof![
        prop_oneof![Just(Convention::First), Just(Convention::Second)].prop_map(StmtKind::Convention),
        call().prop_map(StmtKind::Lie),
        call().prop_map(StmtKind::Use),
        (name(), ranges(), degree()).prop_map(|(name, ranges, degree)| {
            let expanded = expand_ranges(&ranges);
            StmtKind::Gen { name, ranges, degree, expanded }
        }),
        (name(), 1usize..4).prop_map(|(name, n)| StmtKind::Tensor { name, dims: vec![n; n], value: TensorValue::Epsilon }),
        (name(), prop::collection::vec((prop::collection::vec(1i64..4, 2), plain_expr()), 1..4))
            .prop_map(|(name, es)| StmtKind::Tensor { name, dims: vec![3, 3], value: TensorValue::Entries(es) }),
        (name(), ranges(), degree(), prop::collection::vec((reference(), expr()), 0..3)).prop_map(|(name, ranges, degree, rs)| {
            let rules = rs.into_iter().map(|(lhs, rhs)| Rule { lhs, rhs }).collect();
            StmtKind::Der { name, ranges, degree, rules }
        }),
        (name(), expr()).prop_map(|(name, expr)| StmtKind::Let { name, expr }),
        (expr(), expr()).prop_map(|(lhs, rhs)| StmtKind::Check { lhs, rhs }),
        "[QKL]{0,8}".prop_map(StmtKind::Nf),
        (expr(), prop::option::of(call())).prop_map(|(o0, preset)| StmtKind::Kseq { kind: KseqKind::Standard, o0, w: vec![], preset }),
        (expr(), prop::collection::vec(expr(), 1..3)).prop_map(|(o0, w)| StmtKind::Kseq { kind: KseqKind::General, o0, w, preset: None }),
        (expr(), expr()).prop_map(|(op, arg)| StmtKind::Exp { op, arg }),
        (expr(), expr()).prop_map(|(a, b)| StmtKind::Commute(a, b)),
        (expr(), expr()).prop_map(|(a, b)| StmtKind::Bracket(a, b)),
        call().prop_map(StmtKind::Suite),
    ]
}

fn runner(seed: u8) -> TestRunner {
    let config = Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

#[test]
fn render_then_parse_is_the_identity_on_scripts() {
    let strategy = prop::collection::vec(stmt(), 0..6).prop_map(|v| Script { stmts: v.into_iter().map(Stmt::new).collect() });
    runner(7)
        .run(&strategy, |s| {
            let text = render(&s);
            let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(back, s, "{}", text);
            Ok(())
        })
        .unwrap();
}

#[test]
fn render_then_parse_is_the_identity_on_expressions() {
    runner(11)
        .run(&expr(), |e| {
            let text = cohoma::dsl::render_expr(&e);
            let back = cohoma::dsl::parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
            prop_assert_eq!(back, e, "{}", text);
            Ok(())
        })
        .unwrap();
}

#[test]
fn execute_accepts_an_already_parsed_script() {
    let s = parse("nf \"LL\";").unwrap();
    assert_eq!(execute(&s, true)[0].output, ["0"]);
}
