use thiserror::Error;

use crate::bigraded::Bidegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("derivation `{0}` uses a different sign convention than the algebra")]
    ConventionMismatch(String),
    #[error("derivation `{name}` is not nilpotent within {max_iter} steps")]
    NotNilpotent { name: String, max_iter: usize },
    #[error("degree mismatch for {what}: expected {expected}, found {found}")]
    DegreeMismatch {
        what: String,
        expected: Bidegree,
        found: String,
    },
    #[error("jet truncation exceeded at `{0}`")]
    TruncationExceeded(String),
    #[error("normalization u.v = {0} differs from 1")]
    NormalizationViolated(String),
    #[error("missing structure: {0}")]
    MissingStructure(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidLieAlgebra(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("seed W({q}) is not Q-closed: Q W = {residual}")]
    NotClosed { q: usize, residual: String },
    #[error("tensor is not antisymmetric at {0}")]
    NotAntisymmetric(String),
    #[error("self-dual projection needs base dimension 4, got {0}")]
    SelfDualNeedsDim4(usize),
    #[error("Hodge star is only implemented in dimension 4, got {0}")]
    Dim4Only(usize),
    #[error("no invariant metric supplied")]
    MissingMetric,
    #[error("prepotential is not basic: {op} gives {image}")]
    NotBasic { op: String, image: String },
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Elaboration(String),
}
