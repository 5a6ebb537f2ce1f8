use super::ast::*;
use crate::bigraded::Convention;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) | Expr::Sum { .. } => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

/// Whether the text of `e` ends in a `sum(..)` body that would swallow a following factor.
fn ends_greedy(e: &Expr) -> bool {
    match e {
        Expr::Sum { .. } => true,
        Expr::Neg(x) | Expr::Mul(_, x) | Expr::Div(_, x) => ends_greedy(x),
        _ => false,
    }
}

fn wrap(s: String, paren: bool) -> String {
    if paren {
        format!("({s})")
    } else {
        s
    }
}

fn index_arg(a: &IndexArg) -> String {
    match a {
        IndexArg::Lit(n) => n.to_string(),
        IndexArg::Var(v) => v.clone(),
    }
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Int(n) => n.to_string(),
        Expr::Imag => "i".into(),
        Expr::Ref { name, idx, jet } => {
            if idx.is_empty() && jet.is_empty() {
                return name.clone();
            }
            let i: Vec<String> = idx.iter().map(index_arg).collect();
            if jet.is_empty() {
                format!("{name}[{}]", i.join(","))
            } else {
                let j: Vec<String> = jet.iter().map(index_arg).collect();
                format!("{name}[{};{}]", i.join(","), j.join(","))
            }
        }
        Expr::Neg(x) => format!("-{}", wrap(render_expr(x), prec(x) < 3)),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let op = if matches!(e, Expr::Add(..)) { "+" } else { "-" };
            format!("{} {op} {}", wrap(render_expr(a), prec(a) < 1), wrap(render_expr(b), prec(b) <= 1))
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            let op = if matches!(e, Expr::Mul(..)) { "*" } else { "/" };
            format!(
                "{}{op}{}",
                wrap(render_expr(a), prec(a) < 2 || ends_greedy(a)),
                wrap(render_expr(b), prec(b) <= 2)
            )
        }
        Expr::Pow(b, k) => format!("{}^{k}", wrap(render_expr(b), prec(b) < 5)),
        Expr::Sum { vars, body } => format!("sum({}) {}", vars.join(", "), wrap(render_expr(body), prec(body) < 2)),
        Expr::Call { func, args } => {
            let a: Vec<String> = args.iter().map(render_expr).collect();
            format!("{}({})", wrap(render_expr(func), prec(func) < 5), a.join(", "))
        }
        Expr::Commutator(a, b) => format!("[{}, {}]", render_expr(a), render_expr(b)),
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::Expr(e) => render_expr(e),
        Value::Call(c) => render_call(c),
        Value::Tuple(xs) => format!("({})", xs.iter().map(render_expr).collect::<Vec<_>>().join(", ")),
    }
}

fn render_args(args: &[Arg]) -> String {
    args.iter()
        .map(|a| match a {
            Arg::Pos(v) => render_value(v),
            Arg::Key(k, v) => format!("{k}={}", render_value(v)),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_call(c: &PresetCall) -> String {
    if c.args.is_empty() {
        c.name.clone()
    } else {
        format!("{}({})", c.name, render_args(&c.args))
    }
}

fn render_ranges(r: &[IndexRange]) -> String {
    if r.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = r.iter().map(|x| format!("{}={}..{}", x.var, x.lo, x.hi)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn render_stmt(s: &StmtKind) -> String {
    match s {
        StmtKind::Convention(c) => format!(
            "convention {};",
            match c {
                Convention::First => "first",
                Convention::Second => "second",
            }
        ),
        StmtKind::Lie(c) => format!("lie {};", render_call(c)),
        StmtKind::Gen { name, ranges, degree, .. } => {
            format!("gen {name}{} deg ({}, {});", render_ranges(ranges), degree.0, degree.1)
        }
        StmtKind::Tensor { name, dims, value } => {
            let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
            let v = match value {
                TensorValue::Epsilon => "epsilon".to_string(),
                TensorValue::Delta => "delta".to_string(),
                TensorValue::Entries(es) => {
                    let parts: Vec<String> = es
                        .iter()
                        .map(|(idx, e)| {
                            let i: Vec<String> = idx.iter().map(|x| x.to_string()).collect();
                            format!("{}: {}", i.join(", "), render_expr(e))
                        })
                        .collect();
                    format!("{{{}}}", parts.join("; "))
                }
            };
            format!("tensor {name}[{}] = {v};", d.join(", "))
        }
        StmtKind::Der {
            name,
            ranges,
            degree,
            rules,
        } => {
            let mut out = format!("der {name}{} deg ({}, {}) {{\n", render_ranges(ranges), degree.0, degree.1);
            for r in rules {
                out.push_str(&format!("    {} -> {};\n", render_expr(&r.lhs), render_expr(&r.rhs)));
            }
            out.push('}');
            out
        }
        StmtKind::Use(c) => format!("use {};", render_call(c)),
        StmtKind::Let { name, expr } => format!("let {name} = {};", render_expr(expr)),
        StmtKind::Check { lhs, rhs } => format!("check {} == {};", render_expr(lhs), render_expr(rhs)),
        StmtKind::Nf(w) => format!("nf \"{w}\";"),
        StmtKind::Kseq { kind, o0, w, preset } => {
            let mut out = format!(
                "kseq {} O0 = {}",
                match kind {
                    KseqKind::Standard => "standard",
                    KseqKind::General => "general",
                },
                render_expr(o0)
            );
            if !w.is_empty() {
                out.push_str(&format!(" W = [{}]", w.iter().map(render_expr).collect::<Vec<_>>().join(", ")));
            }
            if let Some(p) = preset {
                out.push_str(&format!(" preset = {}", render_call(p)));
            }
            out.push(';');
            out
        }
        StmtKind::Exp { op, arg } => format!("exp {}, {};", render_expr(op), render_expr(arg)),
        StmtKind::Commute(a, b) => format!("commute {}, {};", render_expr(a), render_expr(b)),
        StmtKind::Bracket(a, b) => format!("bracket {}, {};", render_expr(a), render_expr(b)),
        StmtKind::Suite(c) => format!("{};", render_call(c)),
    }
}

/// Canonical text; `parse(render(s)) == s`.
pub fn render(s: &Script) -> String {
    let mut out = String::new();
    for st in &s.stmts {
        out.push_str(&render_stmt(&st.kind));
        out.push('\n');
    }
    out
}
