//! Python bindings: parse, check, run and fuzz `.gg` programs from
//! Python. Parse errors raise `SyntaxError`, type errors raise
//! `ValueError` (both carry the rendered diagnostic), and evaluation
//! errors raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PySyntaxError, PyValueError};
use pyo3::prelude::*;

use glint::eval::{eval_program, eval_term, Env, Value};
use glint::syntax::Type;
use glint::typecheck::{check_program, infer_term, Ctx};
use glint::verify::{check_monad_laws, fuzz_confidentiality, fuzz_integrity, VerifyError};

/// The outcome of a fuzzing or law-checking run.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: glint::verify::Report,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn property(&self) -> String {
        self.inner.property.clone()
    }

    #[getter]
    fn trials(&self) -> u64 {
        self.inner.trials
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// Failures as (trial, inputs, left, right) tuples, in trial order.
    fn failures(&self) -> Vec<(u64, String, String, String)> {
        self.inner
            .failures
            .iter()
            .map(|f| (f.trial, f.inputs.clone(), f.left.clone(), f.right.clone()))
            .collect()
    }

    fn text(&self) -> String {
        self.inner.render_text()
    }

    fn json(&self) -> String {
        self.inner.render_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(property={:?}, trials={}, failures={}, seed={})",
            self.inner.property,
            self.inner.trials,
            self.inner.failures.len(),
            self.inner.seed
        )
    }
}

/// A parsed program.
#[pyclass(name = "Program", frozen)]
struct PyProgram {
    inner: glint::Program,
}

fn wrap_arg(n: i64, ty: &Type) -> Option<Value> {
    match ty {
        Type::Int => Some(Value::Int(n)),
        Type::Box(_, inner) if **inner == Type::Int => Some(Value::boxed(Value::Int(n))),
        Type::Star(inner) if **inner == Type::Int => Some(Value::starred(Value::Int(n))),
        _ => None,
    }
}

fn verify_err(program: &glint::Program, e: VerifyError) -> PyErr {
    match e {
        VerifyError::Type(mut e) => {
            if e.file.is_empty() {
                e.file = program.file.clone();
            }
            PyValueError::new_err(e.render())
        }
        e => PyValueError::new_err(e.to_string()),
    }
}

#[pymethods]
impl PyProgram {
    /// Typechecks the program and returns the `name -> type` signature
    /// environment.
    fn check(&self) -> PyResult<std::collections::BTreeMap<String, String>> {
        let sigs = check_program(&self.inner).map_err(|e| PyValueError::new_err(e.render()))?;
        Ok(sigs
            .into_iter()
            .map(|(name, ty)| (name, ty.to_string()))
            .collect())
    }

    /// Typechecks, applies a top-level function to integer arguments
    /// (wrapped according to the signature) and returns the printed
    /// value.
    #[pyo3(signature = (main, args = vec![]))]
    fn run(&self, main: &str, args: Vec<i64>) -> PyResult<String> {
        check_program(&self.inner).map_err(|e| PyValueError::new_err(e.render()))?;
        let decl = self
            .inner
            .find_fun(main)
            .ok_or_else(|| PyRuntimeError::new_err(format!("unknown function '{}'", main)))?;
        if args.len() != decl.params.len() {
            return Err(PyRuntimeError::new_err(format!(
                "'{}' takes {} arguments, {} given",
                main,
                decl.params.len(),
                args.len()
            )));
        }
        let mut domain = &decl.signature;
        let mut values = Vec::with_capacity(args.len());
        for n in args {
            let Type::Fun(dom, cod) = domain else {
                return Err(PyValueError::new_err(format!(
                    "'{}' takes no further arguments",
                    main
                )));
            };
            let value = wrap_arg(n, dom).ok_or_else(|| {
                PyValueError::new_err(format!(
                    "cannot build an argument of type {} from an integer",
                    dom
                ))
            })?;
            values.push(value);
            domain = cod;
        }
        let value = eval_program(&self.inner, main, values)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(value.to_string())
    }

    /// Fuzzes noninterference in the confidentiality direction for a
    /// function of type `Int [Private] -> Int [Public]`.
    #[pyo3(signature = (fn_name, trials = 100, seed = 0))]
    fn fuzz_confidentiality(&self, fn_name: &str, trials: u64, seed: u64) -> PyResult<PyReport> {
        fuzz_confidentiality(&self.inner, fn_name, trials, seed)
            .map(|inner| PyReport { inner })
            .map_err(|e| verify_err(&self.inner, e))
    }

    /// Fuzzes noninterference in the integrity direction for a function
    /// of type `Int [Public] -> Int *{Trusted}`.
    #[pyo3(signature = (fn_name, trials = 100, seed = 0))]
    fn fuzz_integrity(&self, fn_name: &str, trials: u64, seed: u64) -> PyResult<PyReport> {
        fuzz_integrity(&self.inner, fn_name, trials, seed)
            .map(|inner| PyReport { inner })
            .map_err(|e| verify_err(&self.inner, e))
    }

    /// Names of the top-level functions, in declaration order.
    fn functions(&self) -> Vec<String> {
        self.inner.fun_decls().map(|f| f.name.clone()).collect()
    }

    /// The printed form; reparsing it yields the same program.
    fn pretty(&self) -> String {
        glint::pretty::program_to_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Program(file={:?}, decls={})",
            self.inner.file,
            self.inner.decls.len()
        )
    }
}

/// A parsed standalone term.
#[pyclass(name = "Term", frozen)]
struct PyTerm {
    inner: glint::Term,
}

#[pymethods]
impl PyTerm {
    /// Synthesises the term's type in the empty context.
    fn infer(&self) -> PyResult<String> {
        let (ty, _usage) =
            infer_term(&Ctx::new(), &self.inner).map_err(|e| PyValueError::new_err(e.render()))?;
        Ok(ty.to_string())
    }

    /// Evaluates the closed term and returns the printed value.
    fn eval(&self) -> PyResult<String> {
        let value = eval_term(&Env::new(), &self.inner)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(value.to_string())
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().collect()
    }

    fn pretty(&self) -> String {
        glint::pretty::term_to_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.pretty())
    }
}

/// Parses a whole program from source text.
#[pyfunction]
#[pyo3(signature = (text, filename = "<python>"))]
fn parse_program(text: &str, filename: &str) -> PyResult<PyProgram> {
    glint::parser::parse_program(text, filename)
        .map(|inner| PyProgram { inner })
        .map_err(|e| PySyntaxError::new_err(e.render()))
}

/// Parses a single term.
#[pyfunction]
fn parse_term(text: &str) -> PyResult<PyTerm> {
    glint::parser::parse_term(text)
        .map(|inner| PyTerm { inner })
        .map_err(|e| PySyntaxError::new_err(e.render()))
}

/// Checks the return/bind laws of the box and star modalities.
#[pyfunction]
#[pyo3(signature = (trials = 200, seed = 0))]
fn monad_laws(trials: u64, seed: u64) -> PyReport {
    PyReport {
        inner: check_monad_laws(trials, seed),
    }
}

#[pymodule]
fn glint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyProgram>()?;
    m.add_class::<PyTerm>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(parse_program, m)?)?;
    m.add_function(wrap_pyfunction!(parse_term, m)?)?;
    m.add_function(wrap_pyfunction!(monad_laws, m)?)?;
    Ok(())
}
