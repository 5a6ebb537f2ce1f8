//! Bigraded generators, canonical monomials, polynomials and graded derivations.

mod algebra;
mod bidegree;
mod coeff;
mod derivation;
pub mod linalg;
mod poly;
pub mod tensor;

pub use algebra::{label, Algebra, Degree, GenKind, Generator};
pub use bidegree::{Bidegree, Convention};
pub use coeff::Coeff;
pub use derivation::{convert_derivation, convert_polynomial, Derivation, Image, DEFAULT_MAX_ITER};
pub use poly::{GenId, Monomial, Polynomial};
pub use tensor::Tensor;
