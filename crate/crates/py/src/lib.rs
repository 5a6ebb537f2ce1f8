//! Python bindings: script execution, an interactive session, and QK normal forms.

use std::collections::HashMap;

use ::cohoma::dsl::render::render_stmt;
use ::cohoma::dsl::{self, exit_code, parse, parse_expr, render_json, Session as Inner, Val};
use ::cohoma::qk;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: ::cohoma::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Runs a script and returns `(exit_code, json)`; syntax errors raise `ValueError`.
#[pyfunction]
#[pyo3(signature = (src, deterministic = true))]
fn run_script(src: &str, deterministic: bool) -> PyResult<(i32, String)> {
    let reports = dsl::run(src, deterministic).map_err(value_err)?;
    Ok((exit_code(&reports), render_json(&reports)))
}

/// Normal form of a word in Q, K, L, optionally with `K^(n+1) = 0`.
#[pyfunction]
#[pyo3(signature = (word, n = None))]
fn reduce(word: &str, n: Option<usize>) -> PyResult<String> {
    Ok(qk::reduce(word, n).map_err(value_err)?.render())
}

/// A declaration context; polynomials cross the boundary as text.
#[pyclass(unsendable)]
struct Session {
    inner: Inner,
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (preset = None))]
    fn new(preset: Option<&str>) -> PyResult<Self> {
        let inner = match preset {
            Some(p) => Inner::with_preset(p).map_err(value_err)?,
            None => Inner::new(),
        };
        Ok(Session { inner })
    }

    /// Runs statements against this session and returns the command reports as JSON.
    fn execute(&mut self, src: &str) -> PyResult<String> {
        let script = parse(src).map_err(value_err)?;
        let mut out = Vec::new();
        for st in &script.stmts {
            if st.kind.is_command() {
                out.push(self.inner.command(&st.kind, &render_stmt(&st.kind)).map_err(value_err)?);
            } else {
                self.inner.declare(&st.kind).map_err(value_err)?;
            }
        }
        Ok(render_json(&out))
    }

    /// `(label, h, v)` for every generator.
    fn generators(&self) -> Vec<(String, i32, i32)> {
        let alg = self.inner.algebra();
        alg.ids()
            .map(|g| {
                let d = alg.degree_of(g);
                (alg.label_of(g), d.h, d.v)
            })
            .collect()
    }

    fn derivations(&self) -> Vec<String> {
        self.inner.derivation_names().map(str::to_string).collect()
    }

    /// Evaluates an expression to a polynomial.
    fn eval(&self, expr: &str) -> PyResult<String> {
        let e = parse_expr(expr).map_err(value_err)?;
        let p = self.inner.eval_poly(&e, &HashMap::new()).map_err(value_err)?;
        Ok(self.inner.algebra().render(&p))
    }

    /// Applies a named derivation to an expression.
    fn apply(&self, derivation: &str, expr: &str) -> PyResult<String> {
        let d = self.inner.derivation(derivation).ok_or_else(|| PyKeyError::new_err(derivation.to_string()))?;
        let e = parse_expr(expr).map_err(value_err)?;
        let f = match self.inner.eval(&e, &HashMap::new()).map_err(value_err)? {
            Val::Poly(p) => p,
            _ => return Err(PyValueError::new_err(format!("{expr} is not a polynomial"))),
        };
        let alg = self.inner.algebra();
        Ok(alg.render(&alg.apply(d, &f).map_err(value_err)?))
    }
}

#[pymodule]
fn cohoma(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run_script, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_class::<Session>()?;
    Ok(())
}
