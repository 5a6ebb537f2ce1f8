use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use super::ast::*;
use super::outcome::{CommandReport, Status};
use super::parser::parse;
use super::render::{render_call, render_expr, render_stmt};
use crate::bigraded::{label, Algebra, Bidegree, Coeff, Convention, Derivation, Generator, Polynomial, Tensor, DEFAULT_MAX_ITER};
use crate::equivariant::kalkman::{kalkman_conjugate, weil_tensor_omega};
use crate::equivariant::lie::LieAlgebraData;
use crate::equivariant::mq::{build_mq, check_mq_identities, so2_standard};
use crate::equivariant::poisson::{build_qkweil, check_qkweil, SymplecticPreset};
use crate::equivariant::weil::build_weil;
use crate::error::{Error, Result};
use crate::gauge::observables::tym_closed_form;
use crate::gauge::{
    build_curvature_algebra, build_gauge, build_lagrangian, check_gauge_relations, curvature_algebra_checks, gauge_structure,
    k0_equivalence, tym_observables, tym_prepotential, Chart, GaugeConfig, GaugeJetPreset, GaugeParams,
};
use crate::jet::{general_k_sequence, standard_k_sequence, verify_descent, QkStructure};
use crate::qk::gl::{gl_family_check, gl_family_check_shifted};
use crate::qk::{check_qpk, reduce};
use crate::report::{Report, Witness};

/// A value produced by evaluating an expression.
#[derive(Debug, Clone)]
pub enum Val {
    Poly(Polynomial),
    Der(Derivation),
    /// Components of a Lie-algebra-valued element.
    Lie(Vec<Polynomial>),
}

enum Preset {
    Gauge(Box<GaugeJetPreset>),
    QkWeil(Box<SymplecticPreset>),
    Suite(Box<dyn Fn() -> Result<Report>>),
}

/// State of one script: the algebra, named derivations, tensors and abbreviations.
pub struct Session {
    alg: Algebra,
    ders: BTreeMap<String, Derivation>,
    der_index: HashMap<String, Vec<Vec<i64>>>,
    tensors: HashMap<String, Tensor>,
    lie: Option<LieAlgebraData>,
    lets: BTreeMap<String, Val>,
    let_index: HashMap<String, Vec<Vec<i64>>>,
    preset: Option<Preset>,
}

type Env = HashMap<String, i64>;

fn elab(msg: impl Into<String>) -> Error {
    Error::Elaboration(msg.into())
}

fn bideg(d: (i32, i32)) -> Bidegree {
    Bidegree::new(d.0, d.1)
}

/// Parses and runs a script; syntax errors are returned as `Err`.
pub fn run(src: &str, deterministic: bool) -> Result<Vec<CommandReport>> {
    Ok(execute(&parse(src)?, deterministic))
}

/// Runs every statement in order; a failed declaration stops the script.
pub fn execute(script: &Script, deterministic: bool) -> Vec<CommandReport> {
    let mut s = Session::new();
    let mut out = Vec::new();
    for st in &script.stmts {
        let text = render_stmt(&st.kind);
        let at = |e: Error| format!("{}:{}: {e}", st.span.line, st.span.col);
        if st.kind.is_command() {
            let t0 = Instant::now();
            let mut rep = s.command(&st.kind, &text).unwrap_or_else(|e| CommandReport::error(text.clone(), at(e)));
            if !deterministic {
                rep.elapsed_ms = Some(t0.elapsed().as_millis() as u64);
            }
            out.push(rep);
        } else if let Err(e) = s.declare(&st.kind) {
            out.push(CommandReport::error(text, at(e)));
            break;
        }
    }
    out
}

fn find_arg<'a>(args: &'a [Arg], pos: usize, key: &str) -> Option<&'a Value> {
    args.iter()
        .find_map(|a| match a {
            Arg::Key(k, v) if k == key => Some(v),
            _ => None,
        })
        .or_else(|| {
            args.iter()
                .filter_map(|a| match a {
                    Arg::Pos(v) => Some(v),
                    _ => None,
                })
                .nth(pos)
        })
}

fn const_coeff(e: &Expr) -> Result<Coeff> {
    Ok(match e {
        Expr::Int(n) => Coeff::int(*n),
        Expr::Imag => Coeff::i(),
        Expr::Neg(x) => -const_coeff(x)?,
        Expr::Add(a, b) => const_coeff(a)? + const_coeff(b)?,
        Expr::Sub(a, b) => const_coeff(a)? - const_coeff(b)?,
        Expr::Mul(a, b) => const_coeff(a)? * const_coeff(b)?,
        Expr::Div(a, b) => {
            let d = const_coeff(b)?.recip().ok_or_else(|| elab("division by zero"))?;
            const_coeff(a)? * d
        }
        Expr::Pow(b, k) => {
            let b = const_coeff(b)?;
            (0..*k).fold(Coeff::one(), |acc, _| &acc * &b)
        }
        _ => return Err(elab(format!("expected a number, found {}", render_expr(e)))),
    })
}

fn coeff_arg(args: &[Arg], pos: usize, key: &str, default: Option<Coeff>) -> Result<Coeff> {
    match find_arg(args, pos, key) {
        Some(Value::Expr(e)) => const_coeff(e),
        Some(_) => Err(elab(format!("argument `{key}` must be a number"))),
        None => default.ok_or_else(|| elab(format!("missing argument `{key}`"))),
    }
}

fn usize_arg(args: &[Arg], pos: usize, key: &str, default: Option<usize>) -> Result<usize> {
    let c = coeff_arg(args, pos, key, default.map(|d| Coeff::int(d as i64)))?;
    c.to_i64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| elab(format!("argument `{key}` must be a nonnegative integer, got {c}")))
}

fn name_arg(args: &[Arg], pos: usize, key: &str) -> Option<PresetCall> {
    match find_arg(args, pos, key)? {
        Value::Expr(Expr::Ref { name, idx, jet }) if idx.is_empty() && jet.is_empty() => Some(PresetCall {
            name: name.clone(),
            args: vec![],
        }),
        Value::Call(c) => Some(c.clone()),
        _ => None,
    }
}

/// `su2`, `so3`, `so(n)`, `abelian(n)`.
pub fn lie_from_call(c: &PresetCall) -> Result<LieAlgebraData> {
    Ok(match c.name.as_str() {
        "su2" => LieAlgebraData::su2(),
        "so3" => LieAlgebraData::so3(),
        "so2" => so2_standard(),
        "so" => LieAlgebraData::so(usize_arg(&c.args, 0, "n", None)?),
        "abelian" | "u1" => LieAlgebraData::abelian(usize_arg(&c.args, 0, "n", Some(1))?),
        other => return Err(Error::UnknownName(format!("Lie algebra {other}"))),
    })
}

fn lie_arg(args: &[Arg], pos: usize) -> Result<LieAlgebraData> {
    let c = name_arg(args, pos, "lie").unwrap_or(PresetCall {
        name: "su2".into(),
        args: vec![],
    });
    lie_from_call(&c)
}

fn pair_arg(args: &[Arg], key: &str) -> Result<[Coeff; 2]> {
    match find_arg(args, usize::MAX, key) {
        Some(Value::Tuple(xs)) if xs.len() == 2 => Ok([const_coeff(&xs[0])?, const_coeff(&xs[1])?]),
        _ => Err(elab(format!("argument `{key}` must be a pair such as (1, 0)"))),
    }
}

fn gauge_from_call(args: &[Arg]) -> Result<GaugeJetPreset> {
    let lie = lie_arg(args, 0)?;
    let chart = match name_arg(args, usize::MAX, "chart").map(|c| c.name) {
        None => Chart::Shifted,
        Some(c) if c == "shifted" => Chart::Shifted,
        Some(c) if c == "original" => Chart::Original,
        Some(c) => return Err(elab(format!("unknown chart `{c}`"))),
    };
    let config = GaugeConfig {
        n: usize_arg(args, 1, "n", Some(4))?,
        order: usize_arg(args, 2, "J", Some(2))?,
        chart,
        params: GaugeParams::new(
            coeff_arg(args, 3, "r", Some(Coeff::zero()))?,
            coeff_arg(args, 4, "s", Some(Coeff::zero()))?,
            coeff_arg(args, 5, "t", Some(Coeff::one()))?,
        ),
        flat_w: usize_arg(args, usize::MAX, "flat_w", Some(0))? != 0,
    };
    build_gauge(&lie, config)
}

fn render_lie(alg: &Algebra, v: &[Polynomial]) -> Vec<String> {
    v.iter().enumerate().map(|(a, p)| format!("[{}] = {}", a + 1, alg.render(p))).collect()
}

/// Splits `name[1,2]` into `("name", [1, 2])`.
fn split_label(l: &str) -> (String, Vec<i64>) {
    match l.split_once('[') {
        Some((n, rest)) => {
            let idx = rest.trim_end_matches(']').split(',').filter_map(|x| x.trim().parse().ok()).collect();
            (n.to_string(), idx)
        }
        None => (l.to_string(), vec![]),
    }
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Self {
        Session {
            alg: Algebra::new(Convention::First),
            ders: BTreeMap::new(),
            der_index: HashMap::new(),
            tensors: HashMap::new(),
            lie: None,
            lets: BTreeMap::new(),
            let_index: HashMap::new(),
            preset: None,
        }
    }

    /// A session with one preset loaded; `call` is e.g. `weil(su2)` or `gauge(su2, 4, 2)`.
    pub fn with_preset(call: &str) -> Result<Session> {
        let script = parse(&format!("use {call};"))?;
        let mut s = Session::new();
        for st in &script.stmts {
            s.declare(&st.kind)?;
        }
        Ok(s)
    }

    /// Labels of the named derivations, sorted.
    pub fn derivation_names(&self) -> impl Iterator<Item = &str> {
        self.ders.keys().map(String::as_str)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn derivation(&self, label: &str) -> Option<&Derivation> {
        self.ders.get(label)
    }

    fn add_der(&mut self, d: Derivation) {
        let (n, idx) = split_label(&d.name);
        self.der_index.entry(n).or_default().push(idx);
        self.ders.insert(d.name.clone(), d);
    }

    fn add_let(&mut self, label: String, v: Val) {
        let (n, idx) = split_label(&label);
        self.let_index.entry(n).or_default().push(idx);
        self.lets.insert(label, v);
    }

    fn set_lie(&mut self, lie: LieAlgebraData) {
        let n = lie.dim;
        let mut f = Tensor::zeros(vec![n, n, n]);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    f.set(&[a, b, c], lie.fc(a, b, c).clone());
                }
            }
        }
        self.tensors.insert("f".into(), f);
        if let Some(m) = &lie.metric {
            let mut k = Tensor::zeros(vec![n, n]);
            for a in 0..n {
                for b in 0..n {
                    k.set(&[a, b], m[a][b].clone());
                }
            }
            self.tensors.insert("kappa".into(), k);
        }
        self.lie = Some(lie);
    }

    fn install(&mut self, alg: Algebra, ders: Vec<Derivation>) {
        self.alg = alg;
        for d in ders {
            self.add_der(d);
        }
    }

    pub fn declare(&mut self, k: &StmtKind) -> Result<()> {
        match k {
            StmtKind::Convention(c) => {
                if !self.alg.is_empty() {
                    return Err(elab("the convention must be set before any generator"));
                }
                self.alg = Algebra::new(*c);
            }
            StmtKind::Lie(c) => self.set_lie(lie_from_call(c)?),
            StmtKind::Gen {
                name, degree, expanded, ranges, ..
            } => {
                for idx in expanded {
                    let g = if ranges.is_empty() {
                        Generator::new(name.clone(), bideg(*degree))
                    } else {
                        Generator::indexed(name.clone(), idx.clone(), bideg(*degree))
                    };
                    self.alg.add(g)?;
                }
            }
            StmtKind::Tensor { name, dims, value } => {
                let t = match value {
                    TensorValue::Epsilon => {
                        let n = dims[0];
                        if dims.len() != n || dims.iter().any(|&d| d != n) {
                            return Err(elab(format!("epsilon needs shape [{n}; {n}]")));
                        }
                        Tensor::epsilon(n)
                    }
                    TensorValue::Delta => {
                        if dims.len() != 2 || dims[0] != dims[1] {
                            return Err(elab("delta needs a square shape [n, n]"));
                        }
                        let mut t = Tensor::zeros(dims.clone());
                        for a in 0..dims[0] {
                            t.set(&[a, a], Coeff::one());
                        }
                        t
                    }
                    TensorValue::Entries(es) => {
                        let mut t = Tensor::zeros(dims.clone());
                        for (idx, e) in es {
                            if idx.len() != dims.len() || idx.iter().zip(dims).any(|(&i, &d)| i < 1 || i as usize > d) {
                                return Err(elab(format!("entry {idx:?} is outside the shape {dims:?}")));
                            }
                            let i: Vec<usize> = idx.iter().map(|&x| x as usize - 1).collect();
                            t.set(&i, const_coeff(e)?);
                        }
                        t
                    }
                };
                self.tensors.insert(name.clone(), t);
            }
            StmtKind::Der {
                name,
                ranges,
                degree,
                rules,
            } => {
                for idx in expand_ranges(ranges) {
                    let env: Env = ranges.iter().map(|r| r.var.clone()).zip(idx.iter().copied()).collect();
                    let lbl = if ranges.is_empty() { name.clone() } else { label(name, &idx, &[]) };
                    let d = self.build_der(&lbl, bideg(*degree), rules, &env)?;
                    self.add_der(d);
                }
            }
            StmtKind::Use(c) => self.load(c)?,
            StmtKind::Let { name, expr } => {
                let v = self.eval(expr, &Env::new())?;
                self.add_let(name.clone(), v);
            }
            _ => return Err(elab("not a declaration")),
        }
        Ok(())
    }

    fn build_der(&self, lbl: &str, degree: Bidegree, rules: &[Rule], env: &Env) -> Result<Derivation> {
        let mut d = Derivation::new(lbl, degree, self.alg.convention());
        let mut seen = BTreeSet::new();
        for rule in rules {
            let Expr::Ref { name, idx, jet } = &rule.lhs else {
                return Err(elab(format!("rule left side must be a generator, found {}", render_expr(&rule.lhs))));
            };
            let mut matched = false;
            for g in self.alg.ids() {
                let gen = self.alg.generator(g);
                if &gen.name != name || gen.indices.len() != idx.len() || gen.jet.len() != jet.len() {
                    continue;
                }
                let mut e = env.clone();
                let jet_vals: Vec<i64> = gen.jet.iter().map(|&x| x as i64).collect();
                let ok = idx.iter().zip(&gen.indices).chain(jet.iter().zip(&jet_vals)).all(|(a, &v)| match a {
                    IndexArg::Lit(n) => *n == v,
                    IndexArg::Var(x) => *e.entry(x.clone()).or_insert(v) == v,
                });
                if !ok {
                    continue;
                }
                matched = true;
                if !seen.insert(g) {
                    return Err(elab(format!("{lbl}: two rules for {}", self.alg.label_of(g))));
                }
                let img = self.eval_poly(&rule.rhs, &e)?;
                let want = gen.degree + degree;
                if !self.alg.degree(&img).fits(want) {
                    return Err(Error::DegreeMismatch {
                        what: format!("{lbl}({})", self.alg.label_of(g)),
                        expected: want,
                        found: format!("{:?}", self.alg.degree(&img)),
                    });
                }
                d.set(g, img);
            }
            if !matched {
                return Err(Error::UnknownName(render_expr(&rule.lhs)));
            }
        }
        Ok(d)
    }

    fn load(&mut self, c: &PresetCall) -> Result<()> {
        if !self.alg.is_empty() || self.preset.is_some() {
            return Err(elab("a preset must be the first algebra declaration of a script"));
        }
        let args = &c.args;
        match c.name.as_str() {
            "weil" => {
                let lie = lie_arg(args, 0)?;
                let w = build_weil(&lie)?;
                let m = w.module;
                let mut ders = vec![m.d.clone()];
                ders.extend(m.iota.iter().cloned());
                ders.extend(m.lie_d.iter().cloned());
                self.install(m.alg.clone(), ders);
                self.set_lie(lie);
                self.preset = Some(Preset::Suite(Box::new(move || m.check())));
            }
            "kalkman" => {
                let lie = lie_arg(args, 0)?;
                let t = weil_tensor_omega(&lie)?;
                let alg = t.alg.clone();
                let mut ders = Vec::new();
                let rn = |d: &Derivation, n: String| d.clone().renamed(n);
                ders.push(rn(&t.d_w, "dW".into()));
                ders.push(rn(&t.d_m, "dV".into()));
                ders.push(alg.lincomb("d", &[(Coeff::one(), &t.d_w), (Coeff::one(), &t.d_m)])?);
                for a in 0..lie.dim {
                    let i = a as i64 + 1;
                    ders.push(rn(&t.iota_w[a], label("iotaW", &[i], &[])));
                    ders.push(rn(&t.iota_m[a], label("iotaV", &[i], &[])));
                    ders.push(rn(&t.lie_w[a], label("LieW", &[i], &[])));
                    ders.push(rn(&t.lie_m[a], label("LieV", &[i], &[])));
                    ders.push(alg.lincomb(label("iota", &[i], &[]), &[(Coeff::one(), &t.iota_w[a]), (Coeff::one(), &t.iota_m[a])])?);
                    ders.push(alg.lincomb(label("Lie", &[i], &[]), &[(Coeff::one(), &t.lie_w[a]), (Coeff::one(), &t.lie_m[a])])?);
                }
                ders.push(t.kalkman_generator()?.renamed("X"));
                self.install(alg, ders);
                self.set_lie(lie);
                self.preset = Some(Preset::Suite(Box::new(move || Ok(kalkman_conjugate(&t)?.report))));
            }
            "mq" => {
                let variant = usize_arg(args, usize::MAX, "variant", Some(0))? != 0;
                let p = build_mq(&so2_standard(), variant)?;
                let mut ders = vec![p.s().clone().renamed("s")];
                ders.extend(p.module.iota.iter().cloned());
                ders.extend(p.module.lie_d.iter().cloned());
                self.install(p.alg().clone(), ders);
                self.add_let("Lfin".into(), Val::Poly(p.l_fin()));
                self.add_let("alpha".into(), Val::Poly(p.l_fin_primitive()));
                self.set_lie(p.module.lie.clone());
                self.preset = Some(Preset::Suite(Box::new(move || check_mq_identities(&p))));
            }
            "gauge" => {
                let p = gauge_from_call(args)?;
                let ders = vec![
                    p.qk.q.clone().renamed("Q"),
                    p.qk.k.clone().renamed("K"),
                    p.qk.l.clone().renamed("L"),
                    p.iota.clone().renamed("iota"),
                    p.delta.clone().renamed("delta"),
                ];
                self.install(p.alg().clone(), ders);
                self.set_lie(p.lie.clone());
                self.preset = Some(Preset::Gauge(Box::new(p)));
            }
            "sigma" | "mtheory" | "tqm" | "tsm" => {
                let (alg, qk) = match c.name.as_str() {
                    "sigma" => {
                        let p = crate::jet::sigma(usize_arg(args, 0, "m", Some(2))?)?;
                        (p.alg().clone(), p.qk)
                    }
                    "mtheory" => {
                        let p = crate::jet::mtheory()?;
                        (p.alg().clone(), p.qk)
                    }
                    "tqm" => {
                        let p = crate::jet::tqm(usize_arg(args, 0, "k", Some(1))?)?;
                        (p.alg().clone(), p.qk)
                    }
                    _ => {
                        let p = crate::jet::flat_tsm(usize_arg(args, 0, "n", Some(2))?)?;
                        (p.alg, p.qk)
                    }
                };
                let ders = vec![qk.q.clone().renamed("Q"), qk.k.clone().renamed("K"), qk.l.clone().renamed("L")];
                let a2 = alg.clone();
                self.install(alg, ders);
                self.preset = Some(Preset::Suite(Box::new(move || qk.check(&a2))));
            }
            "curvature" => {
                let lie = lie_arg(args, 0)?;
                let p = build_curvature_algebra(&lie)?;
                let ders = vec![
                    p.q.clone().renamed("Q"),
                    p.k.clone().renamed("K"),
                    p.l.clone().renamed("L"),
                    p.iota.clone().renamed("iota"),
                    p.delta.clone().renamed("delta"),
                ];
                self.install(p.alg.clone(), ders);
                self.add_let("Rh".into(), Val::Lie(p.r_h()));
                self.add_let("Rv".into(), Val::Lie(p.r_v()));
                self.add_let("Rm".into(), Val::Lie(p.r_m()));
                self.set_lie(lie.clone());
                self.preset = Some(Preset::Suite(Box::new(move || curvature_algebra_checks(&lie))));
            }
            "qkweil" => {
                let lie = lie_arg(args, 0)?;
                let p = build_qkweil(&lie)?;
                self.install(p.alg.clone(), vec![]);
                self.add_let("S".into(), Val::Poly(p.s()));
                for a in 0..lie.dim {
                    self.add_let(label("I", &[a as i64 + 1], &[]), Val::Poly(p.i_a(a)));
                    self.add_let(label("L", &[a as i64 + 1], &[]), Val::Poly(p.l_a(a)));
                }
                self.set_lie(lie);
                self.preset = Some(Preset::QkWeil(Box::new(p)));
            }
            other => return Err(Error::UnknownName(format!("preset {other}"))),
        }
        Ok(())
    }

    fn index_values(&self, env: &Env, args: &[IndexArg]) -> Result<Vec<i64>> {
        args.iter()
            .map(|a| match a {
                IndexArg::Lit(n) => Ok(*n),
                IndexArg::Var(v) => env.get(v).copied().ok_or_else(|| Error::UnknownName(format!("index {v}"))),
            })
            .collect()
    }

    fn resolve(&self, name: &str, idx: &[IndexArg], jet: &[IndexArg], env: &Env) -> Result<Val> {
        let i = self.index_values(env, idx)?;
        let j: Vec<u32> = self
            .index_values(env, jet)?
            .into_iter()
            .map(|x| u32::try_from(x).map_err(|_| elab("negative jet index")))
            .collect::<Result<_>>()?;
        let mut js = j.clone();
        js.sort_unstable();
        let lbl = label(name, &i, &js);
        if let Some(v) = self.lets.get(&lbl) {
            return Ok(v.clone());
        }
        if let (Some(t), true) = (self.tensors.get(name), j.is_empty()) {
            if i.len() != t.rank() || i.iter().zip(&t.shape).any(|(&x, &d)| x < 1 || x as usize > d) {
                return Err(elab(format!("{lbl} is outside the tensor shape {:?}", t.shape)));
            }
            let u: Vec<usize> = i.iter().map(|&x| x as usize - 1).collect();
            return Ok(Val::Poly(Polynomial::constant(t.get(&u).clone())));
        }
        if let Ok(g) = self.alg.id(&lbl) {
            return Ok(Val::Poly(self.alg.var(g)));
        }
        if let Some(d) = self.ders.get(&lbl) {
            return Ok(Val::Der(d.clone()));
        }
        if i.is_empty() && j.is_empty() {
            let mut comps: Vec<(i64, Polynomial)> = self
                .alg
                .ids()
                .filter_map(|g| {
                    let gen = self.alg.generator(g);
                    (gen.name == name && gen.indices.len() == 1 && gen.jet.is_empty()).then(|| (gen.indices[0], self.alg.var(g)))
                })
                .collect();
            comps.sort_by_key(|(k, _)| *k);
            let expected = self.lie.as_ref().map(|l| l.dim);
            if !comps.is_empty() && comps.iter().enumerate().all(|(k, (x, _))| *x == k as i64 + 1) && expected.is_none_or(|d| d == comps.len()) {
                return Ok(Val::Lie(comps.into_iter().map(|(_, p)| p).collect()));
            }
        }
        Err(Error::UnknownName(lbl))
    }

    /// Values the index variable `var` can take, read off its first use in `e`.
    fn var_range(&self, e: &Expr, var: &str) -> Option<Vec<i64>> {
        match e {
            Expr::Ref { name, idx, jet } => {
                let hit = |args: &[IndexArg]| args.iter().position(|a| matches!(a, IndexArg::Var(v) if v == var));
                if let Some(p) = hit(idx) {
                    if let Some(t) = self.tensors.get(name) {
                        if p < t.rank() {
                            return Some((1..=t.shape[p] as i64).collect());
                        }
                    }
                    let mut vals = BTreeSet::new();
                    for g in self.alg.generators() {
                        if &g.name == name && g.indices.len() == idx.len() && g.jet.len() == jet.len() {
                            vals.insert(g.indices[p]);
                        }
                    }
                    for tuples in [self.der_index.get(name), self.let_index.get(name)].into_iter().flatten() {
                        for t in tuples.iter().filter(|t| t.len() == idx.len()) {
                            vals.insert(t[p]);
                        }
                    }
                    if !vals.is_empty() {
                        return Some(vals.into_iter().collect());
                    }
                }
                if let Some(p) = hit(jet) {
                    let vals: BTreeSet<i64> = self
                        .alg
                        .generators()
                        .iter()
                        .filter(|g| &g.name == name && g.indices.len() == idx.len() && g.jet.len() == jet.len())
                        .map(|g| g.jet[p] as i64)
                        .collect();
                    if !vals.is_empty() {
                        return Some(vals.into_iter().collect());
                    }
                }
                None
            }
            Expr::Neg(x) | Expr::Pow(x, _) => self.var_range(x, var),
            Expr::Sum { body, .. } => self.var_range(body, var),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Commutator(a, b) => {
                self.var_range(a, var).or_else(|| self.var_range(b, var))
            }
            Expr::Call { func, args } => self.var_range(func, var).or_else(|| args.iter().find_map(|a| self.var_range(a, var))),
            Expr::Int(_) | Expr::Imag => None,
        }
    }

    pub fn eval_poly(&self, e: &Expr, env: &Env) -> Result<Polynomial> {
        match self.eval(e, env)? {
            Val::Poly(p) => Ok(p),
            Val::Der(_) => Err(elab(format!("{} is a derivation, expected a polynomial", render_expr(e)))),
            Val::Lie(_) => Err(elab(format!("{} is Lie-algebra valued, expected a polynomial", render_expr(e)))),
        }
    }

    fn eval_der(&self, e: &Expr, env: &Env) -> Result<Derivation> {
        match self.eval(e, env)? {
            Val::Der(d) => Ok(d),
            _ => Err(elab(format!("{} is not a derivation", render_expr(e)))),
        }
    }

    fn lie_data(&self) -> Result<&LieAlgebraData> {
        self.lie.as_ref().ok_or_else(|| Error::MissingStructure("no Lie algebra declared (use `lie su2;` or a preset)".into()))
    }

    fn scale(&self, v: Val, c: &Coeff) -> Result<Val> {
        Ok(match v {
            Val::Poly(p) => Val::Poly(p.scale(c)),
            Val::Lie(x) => Val::Lie(x.iter().map(|p| p.scale(c)).collect()),
            Val::Der(d) => {
                let name = d.name.clone();
                Val::Der(self.alg.lincomb(name, &[(c.clone(), &d)])?)
            }
        })
    }

    fn add(&self, a: Val, b: Val, sign: i64) -> Result<Val> {
        let c = Coeff::int(sign);
        Ok(match (a, b) {
            (Val::Poly(x), Val::Poly(y)) => Val::Poly(x + y.scale(&c)),
            (Val::Lie(x), Val::Lie(y)) if x.len() == y.len() => Val::Lie(x.iter().zip(&y).map(|(p, q)| p + &q.scale(&c)).collect()),
            (Val::Der(x), Val::Der(y)) => Val::Der(self.alg.lincomb(format!("{}{}{}", x.name, if sign > 0 { "+" } else { "-" }, y.name), &[(Coeff::one(), &x), (c, &y)])?),
            (Val::Der(x), Val::Poly(p)) | (Val::Poly(p), Val::Der(x)) if p.is_zero() => {
                let neg = Coeff::int(sign);
                let _ = neg;
                Val::Der(x)
            }
            _ => return Err(elab("cannot add values of different kinds")),
        })
    }

    fn mul(&self, a: Val, b: Val) -> Result<Val> {
        Ok(match (a, b) {
            (Val::Poly(x), Val::Poly(y)) => Val::Poly(self.alg.mul(&x, &y)),
            (Val::Poly(p), Val::Der(d)) => {
                if p.len() <= 1 && p.terms().all(|(m, _)| m.is_unit()) {
                    self.scale(Val::Der(d), &p.constant_part())?
                } else {
                    Val::Der(self.alg.left_mul(&p, &d)?)
                }
            }
            (Val::Poly(p), Val::Lie(x)) => Val::Lie(x.iter().map(|q| self.alg.mul(&p, q)).collect()),
            (Val::Lie(x), Val::Poly(p)) => Val::Lie(x.iter().map(|q| self.alg.mul(q, &p)).collect()),
            (Val::Der(_), _) => return Err(elab("a derivation acts by application D(f), not by multiplication")),
            (Val::Lie(_), _) => return Err(elab("use Tr(X*Y) or [X, Y] to combine Lie-valued elements")),
        })
    }

    fn trace(&self, arg: &Expr, env: &Env) -> Result<Polynomial> {
        let lie = self.lie_data()?;
        let lie_of = |e: &Expr| match self.eval(e, env)? {
            Val::Lie(x) => Ok(x),
            _ => Err(elab(format!("{} is not Lie-algebra valued", render_expr(e)))),
        };
        match arg {
            Expr::Mul(a, b) => lie.trace(&self.alg, &lie_of(a)?, &lie_of(b)?),
            Expr::Pow(a, k) if *k >= 2 && k % 2 == 0 => {
                let x = lie_of(a)?;
                Ok(self.alg.pow(&lie.trace(&self.alg, &x, &x)?, k / 2))
            }
            _ => Err(Error::UnsupportedParameter(format!(
                "Tr({}) : only Tr(X*Y) and Tr(X^(2k)) = Tr(X^2)^k are supported",
                render_expr(arg)
            ))),
        }
    }

    fn exp_val(&self, d: &Derivation, v: Val) -> Result<Val> {
        Ok(match v {
            Val::Poly(p) => Val::Poly(self.alg.exp_apply(d, &p, DEFAULT_MAX_ITER)?),
            Val::Lie(x) => Val::Lie(x.iter().map(|p| self.alg.exp_apply(d, p, DEFAULT_MAX_ITER)).collect::<Result<_>>()?),
            Val::Der(_) => return Err(elab("exp acts on polynomials")),
        })
    }

    /// `g ↦ exp(X) D exp(-X) g`.
    fn conjugate(&self, x: &Derivation, d: &Derivation) -> Result<Derivation> {
        let neg = self.alg.lincomb("-X", &[(Coeff::int(-1), x)])?;
        let mut out = Derivation::new(format!("conj({},{})", x.name, d.name), d.degree, d.convention);
        for g in self.alg.ids() {
            let inner = self.alg.exp_apply(&neg, &self.alg.var(g), DEFAULT_MAX_ITER)?;
            match self.alg.apply(d, &inner) {
                Ok(dg) => out.set(g, self.alg.exp_apply(x, &dg, DEFAULT_MAX_ITER)?),
                Err(_) => out.set_undefined(g),
            }
        }
        Ok(out)
    }

    pub fn eval(&self, e: &Expr, env: &Env) -> Result<Val> {
        match e {
            Expr::Int(n) => Ok(Val::Poly(Polynomial::constant(Coeff::int(*n)))),
            Expr::Imag => Ok(Val::Poly(Polynomial::constant(Coeff::i()))),
            Expr::Ref { name, idx, jet } => self.resolve(name, idx, jet, env),
            Expr::Neg(x) => {
                let v = self.eval(x, env)?;
                self.scale(v, &Coeff::int(-1))
            }
            Expr::Add(a, b) => self.add(self.eval(a, env)?, self.eval(b, env)?, 1),
            Expr::Sub(a, b) => self.add(self.eval(a, env)?, self.eval(b, env)?, -1),
            Expr::Mul(a, b) => self.mul(self.eval(a, env)?, self.eval(b, env)?),
            Expr::Div(a, b) => {
                let d = self.eval_poly(b, env)?;
                if !d.terms().all(|(m, _)| m.is_unit()) {
                    return Err(elab("only division by a number is supported"));
                }
                let inv = d.constant_part().recip().ok_or_else(|| elab("division by zero"))?;
                let v = self.eval(a, env)?;
                self.scale(v, &inv)
            }
            Expr::Pow(b, k) => match self.eval(b, env)? {
                Val::Poly(p) => Ok(Val::Poly(self.alg.pow(&p, *k))),
                Val::Der(d) if *k == 1 => Ok(Val::Der(d)),
                Val::Der(d) if *k == 2 => Ok(Val::Der(self.alg.square(&d)?)),
                _ => Err(elab(format!("{} : unsupported power", render_expr(e)))),
            },
            Expr::Sum { vars, body } => {
                let mut ranges = Vec::new();
                for v in vars {
                    let r = self.var_range(body, v).ok_or_else(|| elab(format!("cannot infer the range of sum index {v}")))?;
                    ranges.push((v.clone(), r));
                }
                let mut acc: Option<Val> = None;
                let mut envs = vec![env.clone()];
                for (v, r) in &ranges {
                    envs = envs
                        .into_iter()
                        .flat_map(|e| {
                            r.iter().map(move |&x| {
                                let mut e2 = e.clone();
                                e2.insert(v.clone(), x);
                                e2
                            })
                        })
                        .collect();
                }
                for e2 in &envs {
                    let t = self.eval(body, e2)?;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => self.add(a, t, 1)?,
                    });
                }
                Ok(acc.unwrap_or(Val::Poly(Polynomial::zero())))
            }
            Expr::Call { func, args } => {
                if let Expr::Ref { name, idx, jet } = func.as_ref() {
                    if idx.is_empty() && jet.is_empty() {
                        match (name.as_str(), args.as_slice()) {
                            ("Tr", [x]) => return Ok(Val::Poly(self.trace(x, env)?)),
                            ("exp", [d, f]) => {
                                let d = self.eval_der(d, env)?;
                                return self.exp_val(&d, self.eval(f, env)?);
                            }
                            ("conj", [x, d]) => {
                                return Ok(Val::Der(self.conjugate(&self.eval_der(x, env)?, &self.eval_der(d, env)?)?));
                            }
                            _ => {}
                        }
                    }
                }
                let d = self.eval_der(func, env)?;
                let [arg] = args.as_slice() else {
                    return Err(elab(format!("{} takes one argument", render_expr(func))));
                };
                match self.eval(arg, env)? {
                    Val::Poly(p) => Ok(Val::Poly(self.alg.apply(&d, &p)?)),
                    Val::Lie(x) => Ok(Val::Lie(x.iter().map(|p| self.alg.apply(&d, p)).collect::<Result<_>>()?)),
                    Val::Der(_) => Err(elab("derivations act on polynomials; use [D, E] for commutators")),
                }
            }
            Expr::Commutator(a, b) => match (self.eval(a, env)?, self.eval(b, env)?) {
                (Val::Der(x), Val::Der(y)) => Ok(Val::Der(self.alg.commutator(&x, &y)?)),
                (Val::Lie(x), Val::Lie(y)) => Ok(Val::Lie(self.lie_data()?.bracket(&self.alg, &x, &y))),
                _ => Err(elab("[X, Y] needs two derivations or two Lie-valued elements")),
            },
        }
    }

    fn gauge(&self) -> Option<&GaugeJetPreset> {
        match &self.preset {
            Some(Preset::Gauge(p)) => Some(p),
            _ => None,
        }
    }

    fn qk(&self) -> Result<QkStructure> {
        let get = |n: &str| {
            self.ders
                .get(n)
                .cloned()
                .ok_or_else(|| Error::MissingStructure(format!("derivation {n} (declare Q, K, L or use a preset)")))
        };
        Ok(QkStructure {
            q: get("Q")?,
            k: get("K")?,
            l: get("L")?,
        })
    }

    fn compare(&self, rep: &mut CommandReport, a: Val, b: Val) -> Result<()> {
        let alg = &self.alg;
        let zero_der = |d: &Derivation| Derivation::new("0", d.degree, d.convention);
        match (a, b) {
            (Val::Der(x), Val::Der(y)) => {
                if x.degree != y.degree && !x.is_zero() && !y.is_zero() {
                    return Err(Error::DegreeMismatch {
                        what: "derivation identity".into(),
                        expected: x.degree,
                        found: y.degree.to_string(),
                    });
                }
                let (w, skipped) = alg.compare_defined(&x, &y);
                rep.fail_with(w);
                if skipped > 0 {
                    rep.notes.push(format!("{skipped} generators beyond the truncation were skipped"));
                }
            }
            (Val::Der(x), Val::Poly(p)) | (Val::Poly(p), Val::Der(x)) if p.is_zero() => {
                let (w, skipped) = alg.compare_defined(&x, &zero_der(&x));
                rep.fail_with(w);
                if skipped > 0 {
                    rep.notes.push(format!("{skipped} generators beyond the truncation were skipped"));
                }
            }
            (Val::Poly(x), Val::Poly(y)) => {
                if x != y {
                    rep.fail_with(vec![Witness::new("expression", alg.render(&x), alg.render(&y))]);
                }
            }
            (Val::Lie(x), Val::Lie(y)) if x.len() == y.len() => {
                let w = x
                    .iter()
                    .zip(&y)
                    .enumerate()
                    .filter(|(_, (p, q))| p != q)
                    .map(|(k, (p, q))| Witness::new(format!("component {}", k + 1), alg.render(p), alg.render(q)))
                    .collect();
                rep.fail_with(w);
            }
            (Val::Lie(x), Val::Poly(p)) | (Val::Poly(p), Val::Lie(x)) if p.is_zero() => {
                let w = x
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(k, q)| Witness::new(format!("component {}", k + 1), alg.render(q), "0"))
                    .collect();
                rep.fail_with(w);
            }
            _ => return Err(elab("the two sides of the check have different kinds")),
        }
        Ok(())
    }

    pub fn command(&self, k: &StmtKind, text: &str) -> Result<CommandReport> {
        let mut rep = CommandReport::new(text);
        let env = Env::new();
        match k {
            StmtKind::Check { lhs, rhs } => {
                let (a, b) = (self.eval(lhs, &env)?, self.eval(rhs, &env)?);
                self.compare(&mut rep, a, b)?;
            }
            StmtKind::Nf(w) => rep.output.push(reduce(w, None)?.render()),
            StmtKind::Kseq { kind, o0, w, preset } => {
                let fresh;
                let s = match preset {
                    Some(p) => {
                        let mut t = Session::new();
                        t.load(p)?;
                        fresh = t;
                        &fresh
                    }
                    None => self,
                };
                let o0 = s.eval_poly(o0, &env)?;
                let n = match s.alg.degree(&o0).bidegree() {
                    Some(d) if d.h == 0 && d.v >= 0 => d.v as usize,
                    _ => {
                        return Err(Error::DegreeMismatch {
                            what: "O[0]".into(),
                            expected: Bidegree::new(0, 0),
                            found: format!("{:?}", s.alg.degree(&o0)),
                        })
                    }
                };
                let qk = s.qk()?;
                let seq = match kind {
                    KseqKind::Standard => standard_k_sequence(&s.alg, &qk, n, &o0)?,
                    KseqKind::General => {
                        let ws = w.iter().map(|x| s.eval_poly(x, &env)).collect::<Result<Vec<_>>>()?;
                        general_k_sequence(&s.alg, &qk, n, &o0, &ws)?
                    }
                };
                for (p, f) in seq.o.iter().enumerate() {
                    rep.output.push(format!("O[{p}] = {}", s.alg.render(f)));
                }
                rep.absorb(&verify_descent(&s.alg, &qk, &seq)?);
            }
            StmtKind::Exp { op, arg } => {
                let d = self.eval_der(op, &env)?;
                match self.exp_val(&d, self.eval(arg, &env)?)? {
                    Val::Poly(p) => rep.output.push(self.alg.render(&p)),
                    Val::Lie(x) => rep.output.extend(render_lie(&self.alg, &x)),
                    Val::Der(_) => unreachable!(),
                }
            }
            StmtKind::Commute(a, b) => {
                let d = self
                    .alg
                    .commutator(&self.eval_der(a, &env)?, &self.eval_der(b, &env)?)?
                    .renamed(format!("[{}, {}]", render_expr(a), render_expr(b)));
                rep.output.extend(self.alg.render_derivation(&d));
            }
            StmtKind::Bracket(a, b) => match (self.eval(a, &env)?, self.eval(b, &env)?, &self.preset) {
                (Val::Lie(x), Val::Lie(y), _) => rep.output.extend(render_lie(&self.alg, &self.lie_data()?.bracket(&self.alg, &x, &y))),
                (Val::Poly(x), Val::Poly(y), Some(Preset::QkWeil(p))) => rep.output.push(self.alg.render(&p.bracket(&x, &y))),
                _ => return Err(elab("bracket needs two Lie-valued elements, or two functions in the qkweil preset")),
            },
            StmtKind::Suite(c) => self.suite(c, &mut rep)?,
            _ => return Err(elab("not a command")),
        }
        Ok(rep)
    }

    fn suite(&self, c: &PresetCall, rep: &mut CommandReport) -> Result<()> {
        let args = &c.args;
        let owned_gauge;
        let gauge = || -> Result<&GaugeJetPreset> { self.gauge().ok_or_else(|| Error::MissingStructure("suite needs `use gauge(...)`".into())) };
        let r = match c.name.as_str() {
            "relations" => match &self.preset {
                Some(Preset::Suite(f)) => f()?,
                Some(Preset::Gauge(p)) => check_gauge_relations(p)?,
                Some(Preset::QkWeil(p)) => check_qkweil(p),
                None => self.qk()?.check(&self.alg)?,
            },
            "weil" => build_weil(&lie_arg(args, 0)?)?.module.check()?,
            "kalkman" => kalkman_conjugate(&weil_tensor_omega(&lie_arg(args, 0)?)?)?.report,
            "mq" => check_mq_identities(&build_mq(&so2_standard(), usize_arg(args, 0, "variant", Some(0))? != 0)?)?,
            "poisson" => check_qkweil(&build_qkweil(&lie_arg(args, 0)?)?),
            "curvature" => curvature_algebra_checks(&lie_arg(args, 0)?)?,
            "qpk" => check_qpk(usize_arg(args, 0, "p", Some(16))?)?,
            "k0equiv" => k0_equivalence(coeff_arg(args, 0, "s", None)?)?,
            "gl" => {
                let (u, v) = (pair_arg(args, "u")?, pair_arg(args, "v")?);
                match find_arg(args, usize::MAX, "s") {
                    Some(_) => gl_family_check_shifted(u, v, &coeff_arg(args, usize::MAX, "s", None)?),
                    None => gl_family_check(u, v),
                }
            }
            "tym" => {
                let p = match self.gauge() {
                    Some(p) => p,
                    None => {
                        owned_gauge = gauge_from_call(&[])?;
                        &owned_gauge
                    }
                };
                let m = usize_arg(args, 0, "m", Some(2))?;
                let seq = tym_observables(p, m)?;
                for (k, f) in seq.o.iter().enumerate() {
                    rep.output.push(format!("O[{k}] = {}", p.alg().render(f)));
                }
                let mut r = verify_descent(p.alg(), &p.qk, &seq)?;
                if let Ok(closed) = tym_closed_form(p) {
                    for (k, (x, y)) in seq.o.iter().zip(&closed).enumerate() {
                        r.expect(format!("O[{k}] matches the closed-form list"), x == y, || {
                            Witness::new(format!("O[{k}]"), p.alg().render(x), p.alg().render(y))
                        });
                    }
                }
                r
            }
            "gauge_structure" => gauge_structure(gauge()?)?,
            "lagrangian" => {
                let p = gauge()?;
                let (lag, r) = build_lagrangian(&tym_prepotential(p)?, p)?;
                rep.output.push(format!("L has {} terms", lag.len()));
                r
            }
            other => return Err(Error::UnknownName(format!("command {other}"))),
        };
        rep.absorb(&r);
        if rep.status == Status::Pass && r.entries.is_empty() {
            rep.notes.push(format!("{} ran no checks", render_call(c)));
        }
        Ok(())
    }
}
