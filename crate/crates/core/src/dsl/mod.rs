//! A small text language for declaring algebras and derivations and running identity checks.

pub mod ast;
pub mod lexer;
pub mod outcome;
pub mod parser;
pub mod render;
pub mod session;

pub use ast::Script;
pub use outcome::{exit_code, render_json, render_text, CommandReport, Status};
pub use parser::{parse, parse_expr};
pub use render::{render, render_expr};
pub use session::{execute, run, Session, Val};
