use super::lexer::Span;
use crate::bigraded::Convention;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

/// A statement with its source position; equality ignores the position.
#[derive(Debug, Clone, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl PartialEq for Stmt {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
    }
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Self {
        Stmt { kind, span: Span::default() }
    }
}

/// `var = lo..hi`, expanded at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRange {
    pub var: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexArg {
    Lit(i64),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Imag,
    Ref { name: String, idx: Vec<IndexArg>, jet: Vec<IndexArg> },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sum { vars: Vec<String>, body: Box<Expr> },
    /// `f(args)`: derivation application, `Tr`, `exp`, `conj`.
    Call { func: Box<Expr>, args: Vec<Expr> },
    Commutator(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn name(s: &str) -> Expr {
        Expr::Ref {
            name: s.into(),
            idx: vec![],
            jet: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Expr(Expr),
    Call(PresetCall),
    Tuple(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Pos(Value),
    Key(String, Value),
}

/// `name` or `name(args)`, e.g. `gauge(su2, n=4, J=2, r=0, s=1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresetCall {
    pub name: String,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorValue {
    Epsilon,
    Delta,
    Entries(Vec<(Vec<i64>, Expr)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KseqKind {
    Standard,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Convention(Convention),
    Lie(PresetCall),
    Gen {
        name: String,
        ranges: Vec<IndexRange>,
        degree: (i32, i32),
        /// Every concrete index tuple, in lexicographic order.
        expanded: Vec<Vec<i64>>,
    },
    Tensor {
        name: String,
        dims: Vec<usize>,
        value: TensorValue,
    },
    Der {
        name: String,
        ranges: Vec<IndexRange>,
        degree: (i32, i32),
        rules: Vec<Rule>,
    },
    Use(PresetCall),
    Let {
        name: String,
        expr: Expr,
    },
    Check {
        lhs: Expr,
        rhs: Expr,
    },
    Nf(String),
    Kseq {
        kind: KseqKind,
        o0: Expr,
        w: Vec<Expr>,
        preset: Option<PresetCall>,
    },
    Exp {
        op: Expr,
        arg: Expr,
    },
    Commute(Expr, Expr),
    Bracket(Expr, Expr),
    /// Built-in suites such as `tym m=2`, `k0equiv s=1`, `curvature su2`, `relations`.
    Suite(PresetCall),
}

impl StmtKind {
    pub fn is_command(&self) -> bool {
        matches!(
            self,
            StmtKind::Check { .. }
                | StmtKind::Nf(_)
                | StmtKind::Kseq { .. }
                | StmtKind::Exp { .. }
                | StmtKind::Commute(..)
                | StmtKind::Bracket(..)
                | StmtKind::Suite(_)
        )
    }
}

/// Cartesian product of the ranges, in lexicographic order.
pub fn expand_ranges(ranges: &[IndexRange]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (r.lo..=r.hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}
