use super::ast::*;
use super::lexer::{lex, syntax, Span, Tok, Token};
use crate::bigraded::Convention;
use crate::error::Result;

pub fn parse(src: &str) -> Result<Script> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut stmts = Vec::new();
    while p.peek() != &Tok::Eof {
        stmts.push(p.stmt()?);
    }
    Ok(Script { stmts })
}

/// Parses a single expression, e.g. a rendered polynomial.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const RESERVED: [&str; 2] = ["i", "sum"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(syntax(self.span(), msg))
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn decl_name(&mut self) -> Result<String> {
        let span = self.span();
        let n = self.ident()?;
        if RESERVED.contains(&n.as_str()) {
            return Err(syntax(span, format!("`{n}` is reserved")));
        }
        Ok(n)
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn end(&mut self) -> Result<()> {
        self.expect(";")
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let span = self.span();
        let head = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.err(format!("expected a statement, found {}", self.describe())),
        };
        self.bump();
        let kind = match head.as_str() {
            "convention" => {
                let c = match self.ident()?.as_str() {
                    "first" => Convention::First,
                    "second" => Convention::Second,
                    other => return Err(syntax(span, format!("unknown convention `{other}`"))),
                };
                self.end()?;
                StmtKind::Convention(c)
            }
            "lie" => {
                let c = self.call()?;
                self.end()?;
                StmtKind::Lie(c)
            }
            "gen" => {
                let name = self.decl_name()?;
                let ranges = self.ranges()?;
                let degree = self.degree()?;
                self.end()?;
                let expanded = expand_ranges(&ranges);
                StmtKind::Gen {
                    name,
                    ranges,
                    degree,
                    expanded,
                }
            }
            "tensor" => self.tensor()?,
            "der" => {
                let name = self.decl_name()?;
                let ranges = self.ranges()?;
                let degree = self.degree()?;
                self.expect("{")?;
                let mut rules = Vec::new();
                while !self.eat("}") {
                    let lhs = self.expr()?;
                    self.expect("->")?;
                    let rhs = self.expr()?;
                    self.end()?;
                    rules.push(Rule { lhs, rhs });
                }
                self.eat(";");
                StmtKind::Der {
                    name,
                    ranges,
                    degree,
                    rules,
                }
            }
            "use" => {
                let c = self.call()?;
                self.end()?;
                StmtKind::Use(c)
            }
            "let" => {
                let name = self.decl_name()?;
                self.expect("=")?;
                let expr = self.expr()?;
                self.end()?;
                StmtKind::Let { name, expr }
            }
            "check" => {
                let lhs = self.expr()?;
                self.expect("==")?;
                let rhs = self.expr()?;
                self.end()?;
                StmtKind::Check { lhs, rhs }
            }
            "nf" => {
                let w = match self.bump() {
                    Tok::Str(s) => s,
                    _ => return Err(syntax(span, "nf expects a quoted word such as \"KQK\"")),
                };
                self.end()?;
                StmtKind::Nf(w)
            }
            "kseq" => self.kseq()?,
            "exp" | "commute" | "bracket" => {
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.end()?;
                match head.as_str() {
                    "exp" => StmtKind::Exp { op: a, arg: b },
                    "commute" => StmtKind::Commute(a, b),
                    _ => StmtKind::Bracket(a, b),
                }
            }
            "report" => {
                let name = self.ident()?;
                self.suite(name)?
            }
            _ => self.suite(head)?,
        };
        Ok(Stmt { kind, span })
    }

    fn suite(&mut self, name: String) -> Result<StmtKind> {
        let mut args = Vec::new();
        if self.is_sym("(") {
            self.bump();
            args = self.call_args()?;
        } else {
            while !self.is_sym(";") {
                if self.peek() == &Tok::Eof {
                    return self.err("expected `;`");
                }
                args.push(self.arg()?);
                self.eat(",");
            }
        }
        self.end()?;
        Ok(StmtKind::Suite(PresetCall { name, args }))
    }

    fn ranges(&mut self) -> Result<Vec<IndexRange>> {
        let mut out = Vec::new();
        if !self.eat("[") {
            return Ok(out);
        }
        loop {
            let var = self.ident()?;
            self.expect("=")?;
            let span = self.span();
            let lo = self.int()?;
            self.expect("..")?;
            let hi = self.int()?;
            if hi < lo {
                return Err(syntax(span, format!("empty range {lo}..{hi}")));
            }
            out.push(IndexRange { var, lo, hi });
            if !self.eat(",") {
                break;
            }
        }
        self.expect("]")?;
        Ok(out)
    }

    fn degree(&mut self) -> Result<(i32, i32)> {
        self.expect_kw("deg")?;
        self.expect("(")?;
        let h = self.int()?;
        self.expect(",")?;
        let v = self.int()?;
        self.expect(")")?;
        let conv = |x: i64| i32::try_from(x).map_err(|_| syntax(self.span(), "degree out of range"));
        Ok((conv(h)?, conv(v)?))
    }

    fn tensor(&mut self) -> Result<StmtKind> {
        let name = self.decl_name()?;
        self.expect("[")?;
        let mut dims = Vec::new();
        loop {
            let span = self.span();
            let d = self.int()?;
            if d <= 0 {
                return Err(syntax(span, "tensor dimensions must be positive"));
            }
            dims.push(d as usize);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("]")?;
        self.expect("=")?;
        let value = if self.is_kw("epsilon") {
            self.bump();
            TensorValue::Epsilon
        } else if self.is_kw("delta") {
            self.bump();
            TensorValue::Delta
        } else {
            self.expect("{")?;
            let mut entries = Vec::new();
            while !self.eat("}") {
                let mut idx = vec![self.int()?];
                while self.eat(",") {
                    idx.push(self.int()?);
                }
                self.expect(":")?;
                let e = self.expr()?;
                entries.push((idx, e));
                if !self.eat(";") {
                    self.expect("}")?;
                    break;
                }
            }
            TensorValue::Entries(entries)
        };
        self.end()?;
        Ok(StmtKind::Tensor { name, dims, value })
    }

    fn kseq(&mut self) -> Result<StmtKind> {
        let kind = match self.ident()?.as_str() {
            "standard" => KseqKind::Standard,
            "general" => KseqKind::General,
            other => return self.err(format!("expected `standard` or `general`, found `{other}`")),
        };
        self.expect_kw("O0")?;
        self.expect("=")?;
        let o0 = self.expr()?;
        let mut w = Vec::new();
        let mut preset = None;
        loop {
            if self.is_kw("W") {
                self.bump();
                self.expect("=")?;
                self.expect("[")?;
                if !self.eat("]") {
                    loop {
                        w.push(self.expr()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect("]")?;
                }
            } else if self.is_kw("preset") {
                self.bump();
                self.expect("=")?;
                preset = Some(self.call()?);
            } else {
                break;
            }
        }
        self.end()?;
        if kind == KseqKind::Standard && !w.is_empty() {
            return self.err("a standard K-sequence takes no W seeds");
        }
        Ok(StmtKind::Kseq { kind, o0, w, preset })
    }

    fn call(&mut self) -> Result<PresetCall> {
        let name = self.ident()?;
        let args = if self.eat("(") { self.call_args()? } else { vec![] };
        Ok(PresetCall { name, args })
    }

    /// Comma-separated arguments after `(`, through the closing `)`.
    fn call_args(&mut self) -> Result<Vec<Arg>> {
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.arg()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn arg(&mut self) -> Result<Arg> {
        if let (Tok::Ident(k), Tok::Sym("=")) = (self.peek().clone(), self.peek_at(1)) {
            self.bump();
            self.bump();
            return Ok(Arg::Key(k, self.value()?));
        }
        Ok(Arg::Pos(self.value()?))
    }

    fn value(&mut self) -> Result<Value> {
        if let (Tok::Ident(_), Tok::Sym("(")) = (self.peek(), self.peek_at(1)) {
            return Ok(Value::Call(self.call()?));
        }
        let start = self.pos;
        if self.eat("(") {
            let first = self.expr()?;
            if self.is_sym(",") {
                let mut xs = vec![first];
                while self.eat(",") {
                    xs.push(self.expr()?);
                }
                self.expect(")")?;
                return Ok(Value::Tuple(xs));
            }
            self.pos = start;
        }
        Ok(Value::Expr(self.expr()?))
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat("*") {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat("/") {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.is_kw("sum") && self.peek_at(1) == &Tok::Sym("(") {
            self.bump();
            self.bump();
            let mut vars = vec![self.ident()?];
            while self.eat(",") {
                vars.push(self.ident()?);
            }
            self.expect(")")?;
            let body = self.term()?;
            return Ok(Expr::Sum { vars, body: Box::new(body) });
        }
        let base = self.postfix()?;
        if self.eat("^") {
            let span = self.span();
            let k = self.int()?;
            let k = u32::try_from(k).map_err(|_| syntax(span, "exponents must be nonnegative integers"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while self.eat("(") {
            let mut args = Vec::new();
            if !self.eat(")") {
                loop {
                    args.push(self.expr()?);
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect(")")?;
            }
            e = Expr::Call { func: Box::new(e), args };
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok(Expr::Imag)
            }
            Tok::Ident(name) => {
                self.bump();
                let (mut idx, mut jet) = (vec![], vec![]);
                if self.eat("[") {
                    let mut in_jet = false;
                    if self.eat(";") {
                        in_jet = true;
                    }
                    loop {
                        let a = self.index_arg()?;
                        if in_jet { jet.push(a) } else { idx.push(a) }
                        if self.eat(",") {
                            continue;
                        }
                        if !in_jet && self.eat(";") {
                            in_jet = true;
                            continue;
                        }
                        break;
                    }
                    self.expect("]")?;
                }
                Ok(Expr::Ref { name, idx, jet })
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Sym("[") => {
                self.bump();
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect("]")?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn index_arg(&mut self) -> Result<IndexArg> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(IndexArg::Lit(n))
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(IndexArg::Var(v))
            }
            _ => self.err(format!("expected an index, found {}", self.describe())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn gen_ranges_expand() {
        let s = parse("gen theta[a=1..3] deg (0,1);").unwrap();
        match &s.stmts[0].kind {
            StmtKind::Gen { expanded, .. } => assert_eq!(expanded, &vec![vec![1], vec![2], vec![3]]),
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn malformed_degree_is_a_syntax_error() {
        let e = parse("gen x deg (0);").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, col: 13, .. }), "{e:?}");
    }

    #[test]
    fn sum_binds_a_product() {
        let e = parse_expr("phi[a] - 1/2*sum(b,c) f[a,b,c]*theta[b]*theta[c]").unwrap();
        let Expr::Sub(_, rhs) = e else { panic!() };
        let Expr::Mul(half, sum) = *rhs else { panic!() };
        assert!(matches!(*half, Expr::Div(..)));
        assert!(matches!(*sum, Expr::Sum { ref vars, .. } if vars.len() == 2));
    }

    #[test]
    fn jets_and_commutators() {
        let e = parse_expr("[d, iota[1]](A[1,2;3,4])").unwrap();
        let Expr::Call { func, args } = e else { panic!() };
        assert!(matches!(*func, Expr::Commutator(..)));
        assert!(matches!(&args[0], Expr::Ref { jet, .. } if jet.len() == 2));
    }

    #[test]
    fn suites_take_bare_arguments() {
        let s = parse("tym m=2; k0equiv s=-1/3; curvature su2; report weil(so3);").unwrap();
        let names: Vec<_> = s
            .stmts
            .iter()
            .map(|t| match &t.kind {
                StmtKind::Suite(c) => c.name.clone(),
                _ => panic!(),
            })
            .collect();
        assert_eq!(names, ["tym", "k0equiv", "curvature", "weil"]);
    }
}
