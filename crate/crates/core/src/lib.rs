//! Exact computer algebra for bigraded commutative algebras.
//!
//! Polynomials over Gaussian rationals in bigraded generators, graded
//! derivations with either sign convention, the QK word algebra and its
//! normal form, equivariant and variational presets, gauge-theoretic
//! QK-structures, and a small DSL driving all of it.

pub mod bigraded;
pub mod dsl;
pub mod equivariant;
pub mod error;
pub mod gauge;
pub mod jet;
pub mod qk;
pub mod report;

pub use bigraded::{
    Algebra, Bidegree, Coeff, Convention, Derivation, GenId, GenKind, Generator, Image, Monomial,
    Polynomial,
};
pub use error::{Error, Result};
pub use report::{Entry, Report, Witness};
