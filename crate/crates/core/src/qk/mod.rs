pub mod gl;
pub mod normal;
pub mod realize;
pub mod words;

pub use normal::{check_qpk, reduce, NormalForm};
pub use words::{QkAlgebra, WordExpr, WordGenerator};
