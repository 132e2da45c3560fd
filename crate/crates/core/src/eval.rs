//! Call-by-value big-step evaluation.
//!
//! Modal wrappers are materialised as runtime tags (`Box`, `Star`) so the
//! verification harness can observe how values flow: `reveal` re-tags a
//! starred value as a box, `endorse` re-tags a box as a star for its bound
//! variable. Stripping the tags never changes the payload computation.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use crate::syntax::{Decl, PatKind, Pattern, Program, Span, Term, TermKind};

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Str(String),
    Ctor(String, Vec<Value>),
    Box(std::boxed::Box<Value>),
    Star(std::boxed::Box<Value>),
    Closure(Vec<(String, Value)>, String, Rc<Term>),
    /// A top-level function applied to fewer arguments than it has
    /// parameters.
    Partial(String, usize, Vec<Value>),
}

impl Value {
    pub fn boxed(v: Value) -> Value {
        Value::Box(std::boxed::Box::new(v))
    }

    pub fn starred(v: Value) -> Value {
        Value::Star(std::boxed::Box::new(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuntimeError {
    DivisionByZero(Span),
    NonExhaustiveMatch(Span),
    UnknownMain(String),
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    Unbound(String, Span),
    /// An evaluation-time shape violation; unreachable from checked
    /// programs and therefore a checker bug when it fires.
    Tag(Span, String),
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuntimeError::DivisionByZero(_) => f.write_str("division by zero"),
            RuntimeError::NonExhaustiveMatch(_) => f.write_str("non-exhaustive patterns"),
            RuntimeError::UnknownMain(name) => write!(f, "unknown function '{}'", name),
            RuntimeError::ArityMismatch {
                name,
                expected,
                found,
            } => write!(
                f,
                "'{}' takes {} arguments, {} given",
                name, expected, found
            ),
            RuntimeError::Unbound(name, _) => write!(f, "unbound variable '{}'", name),
            RuntimeError::Tag(_, msg) => write!(f, "value shape violation: {}", msg),
        }
    }
}

impl std::error::Error for RuntimeError {}

#[derive(Clone, Debug)]
struct GlobalFun {
    params: Vec<Pattern>,
    body: Rc<Term>,
    span: Span,
}

/// An evaluation environment: a scope stack of local values over a shared
/// table of top-level definitions. Local bindings shadow globals.
#[derive(Clone, Debug, Default)]
pub struct Env {
    globals: Rc<BTreeMap<String, GlobalFun>>,
    locals: Vec<(String, Value)>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn from_program(program: &Program) -> Env {
        let mut globals = BTreeMap::new();
        for decl in &program.decls {
            if let Decl::Fun(f) = decl {
                globals.insert(
                    f.name.clone(),
                    GlobalFun {
                        params: f.params.clone(),
                        body: Rc::new(f.body.clone()),
                        span: f.span,
                    },
                );
            }
        }
        Env {
            globals: Rc::new(globals),
            locals: Vec::new(),
        }
    }

    pub fn bind(&mut self, name: &str, value: Value) {
        self.locals.push((name.to_string(), value));
    }

    fn lookup(&self, name: &str) -> Option<&Value> {
        self.locals
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

/// Evaluates a term in the given environment.
pub fn eval_term(env: &Env, t: &Term) -> Result<Value, RuntimeError> {
    let mut env = env.clone();
    eval(&mut env, t)
}

fn eval(env: &mut Env, t: &Term) -> Result<Value, RuntimeError> {
    match &t.kind {
        TermKind::Var(x) => {
            if let Some(v) = env.lookup(x) {
                return Ok(v.clone());
            }
            match env.globals.get(x) {
                Some(fun) if fun.params.is_empty() => {
                    let body = fun.body.clone();
                    let saved = std::mem::take(&mut env.locals);
                    let result = eval(env, &body);
                    env.locals = saved;
                    result
                }
                Some(fun) => Ok(Value::Partial(x.clone(), fun.params.len(), Vec::new())),
                None => Err(RuntimeError::Unbound(x.clone(), t.span)),
            }
        }
        TermKind::Int(n) => Ok(Value::Int(*n)),
        TermKind::Str(s) => Ok(Value::Str(s.clone())),
        TermKind::Lam(x, body) => Ok(Value::Closure(
            env.locals.clone(),
            x.clone(),
            Rc::new((**body).clone()),
        )),
        TermKind::App(fun, arg) => {
            let fun_v = eval(env, fun)?;
            let arg_v = eval(env, arg)?;
            apply(env, fun_v, arg_v, t.span)
        }
        TermKind::BoxIntro(inner) => Ok(Value::boxed(eval(env, inner)?)),
        TermKind::TrustIntro(inner) => Ok(Value::starred(eval(env, inner)?)),
        TermKind::Reveal(inner) => match eval(env, inner)? {
            Value::Star(v) => Ok(Value::Box(v)),
            other => Err(tag(t.span, "a trusted value", &other)),
        },
        TermKind::LetBox(x, bound, body) => match eval(env, bound)? {
            Value::Box(v) => {
                env.locals.push((x.clone(), *v));
                let result = eval(env, body);
                env.locals.pop();
                result
            }
            other => Err(tag(t.span, "a boxed value", &other)),
        },
        TermKind::Endorse(bound, x, body) => match eval(env, bound)? {
            Value::Box(v) => {
                env.locals.push((x.clone(), Value::Star(v)));
                let result = eval(env, body);
                env.locals.pop();
                match result? {
                    v @ Value::Box(_) => Ok(v),
                    other => Err(tag(body.span, "a boxed value", &other)),
                }
            }
            other => Err(tag(t.span, "a boxed value", &other)),
        },
        TermKind::Case(scrut, alts) => {
            let scrut_v = eval(env, scrut)?;
            for (pat, body) in alts {
                if let Some(bindings) = match_pattern(pat, &scrut_v) {
                    let depth = env.locals.len();
                    env.locals.extend(bindings);
                    let result = eval(env, body);
                    env.locals.truncate(depth);
                    return result;
                }
            }
            Err(RuntimeError::NonExhaustiveMatch(t.span))
        }
        TermKind::Ctor(name, args) => {
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(eval(env, arg)?);
            }
            Ok(Value::Ctor(name.clone(), values))
        }
        TermKind::Prim(op, left, right) => {
            let l = eval(env, left)?;
            let r = eval(env, right)?;
            match (op.symbol(), l, r) {
                ("+", Value::Int(a), Value::Int(b)) => Ok(Value::Int(a.wrapping_add(b))),
                ("-", Value::Int(a), Value::Int(b)) => Ok(Value::Int(a.wrapping_sub(b))),
                ("*", Value::Int(a), Value::Int(b)) => Ok(Value::Int(a.wrapping_mul(b))),
                ("/", Value::Int(a), Value::Int(b)) => {
                    if b == 0 {
                        Err(RuntimeError::DivisionByZero(t.span))
                    } else {
                        Ok(Value::Int(a.wrapping_div(b)))
                    }
                }
                ("==", Value::Int(a), Value::Int(b)) => {
                    Ok(Value::Int(if a == b { 1 } else { 0 }))
                }
                ("++", Value::Str(a), Value::Str(b)) => Ok(Value::Str(a + &b)),
                (sym, l, _) => Err(tag(t.span, &format!("integer operands for '{}'", sym), &l)),
            }
        }
    }
}

fn apply(env: &mut Env, fun: Value, arg: Value, span: Span) -> Result<Value, RuntimeError> {
    match fun {
        Value::Closure(saved, param, body) => {
            let mut call_env = Env {
                globals: env.globals.clone(),
                locals: saved,
            };
            call_env.locals.push((param, arg));
            eval(&mut call_env, &body)
        }
        Value::Partial(name, arity, mut args) => {
            args.push(arg);
            if args.len() == arity {
                call_global(env, &name, args)
            } else {
                Ok(Value::Partial(name, arity, args))
            }
        }
        other => Err(tag(span, "a function", &other)),
    }
}

fn call_global(env: &mut Env, name: &str, args: Vec<Value>) -> Result<Value, RuntimeError> {
    let fun = env
        .globals
        .get(name)
        .cloned()
        .ok_or_else(|| RuntimeError::UnknownMain(name.to_string()))?;
    let mut locals = Vec::new();
    for (pat, arg) in fun.params.iter().zip(args) {
        match match_pattern(pat, &arg) {
            Some(bindings) => locals.extend(bindings),
            None => return Err(RuntimeError::NonExhaustiveMatch(fun.span)),
        }
    }
    let mut call_env = Env {
        globals: env.globals.clone(),
        locals,
    };
    eval(&mut call_env, &fun.body)
}

fn match_pattern(pat: &Pattern, value: &Value) -> Option<Vec<(String, Value)>> {
    match (&pat.kind, value) {
        (PatKind::Var(x), v) => Some(vec![(x.clone(), v.clone())]),
        (PatKind::Wild, _) => Some(vec![]),
        (PatKind::Int(n), Value::Int(m)) => (n == m).then(Vec::new),
        (PatKind::Ctor(name, subs), Value::Ctor(vname, vals)) => {
            if name != vname || subs.len() != vals.len() {
                return None;
            }
            let mut out = Vec::new();
            for (sub, val) in subs.iter().zip(vals) {
                out.extend(match_pattern(sub, val)?);
            }
            Some(out)
        }
        (PatKind::Box(inner), Value::Box(payload)) => match_pattern(inner, payload),
        _ => None,
    }
}

fn tag(span: Span, expected: &str, found: &Value) -> RuntimeError {
    RuntimeError::Tag(span, format!("expected {}, found {}", expected, found))
}

/// Applies a top-level function to the given argument values.
pub fn eval_program(
    program: &Program,
    main: &str,
    args: Vec<Value>,
) -> Result<Value, RuntimeError> {
    let mut env = Env::from_program(program);
    let fun = env
        .globals
        .get(main)
        .cloned()
        .ok_or_else(|| RuntimeError::UnknownMain(main.to_string()))?;
    if args.len() != fun.params.len() {
        return Err(RuntimeError::ArityMismatch {
            name: main.to_string(),
            expected: fun.params.len(),
            found: args.len(),
        });
    }
    call_global(&mut env, main, args)
}

/// Structural value equality. Functions never compare equal, not even to
/// themselves.
pub fn value_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Ctor(n, xs), Value::Ctor(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| value_eq(x, y))
        }
        (Value::Box(x), Value::Box(y)) => value_eq(x, y),
        (Value::Star(x), Value::Star(y)) => value_eq(x, y),
        _ => false,
    }
}

fn atomic(v: &Value) -> bool {
    match v {
        Value::Int(n) => *n >= 0,
        Value::Str(_) | Value::Box(_) => true,
        Value::Ctor(_, args) => args.is_empty(),
        _ => false,
    }
}

fn write_value(v: &Value, arg_position: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if arg_position && !atomic(v) {
        f.write_str("(")?;
        write_value(v, false, f)?;
        return f.write_str(")");
    }
    match v {
        Value::Int(n) => write!(f, "{}", n),
        Value::Str(s) => {
            f.write_str("\"")?;
            for c in s.chars() {
                match c {
                    '"' => f.write_str("\\\"")?,
                    '\\' => f.write_str("\\\\")?,
                    '\n' => f.write_str("\\n")?,
                    c => write!(f, "{}", c)?,
                }
            }
            f.write_str("\"")
        }
        Value::Ctor(name, args) => {
            f.write_str(name)?;
            for arg in args {
                f.write_str(" ")?;
                write_value(arg, true, f)?;
            }
            Ok(())
        }
        Value::Box(inner) => {
            f.write_str("[")?;
            write_value(inner, false, f)?;
            f.write_str("]")
        }
        Value::Star(inner) => {
            f.write_str("*")?;
            write_value(inner, true, f)
        }
        Value::Closure(..) | Value::Partial(..) => f.write_str("<fun>"),
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_value(self, false, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, parse_term};

    fn eval_closed(src: &str) -> Result<Value, RuntimeError> {
        eval_term(&Env::new(), &parse_term(src).unwrap())
    }

    #[test]
    fn reveal_retags_a_star_as_a_box() {
        let v = eval_closed("reveal (trust 42)").unwrap();
        assert!(value_eq(&v, &Value::boxed(Value::Int(42))));
    }

    #[test]
    fn endorse_round_trips_a_box() {
        // right-unit instance: endorsing and immediately revealing is the
        // identity on the underlying box
        let v = eval_closed("endorse [5] as x in reveal x").unwrap();
        assert!(value_eq(&v, &Value::boxed(Value::Int(5))));
    }

    #[test]
    fn let_box_binds_the_payload() {
        let v = eval_closed("let [y] = [2 + 3] in [y * 2]").unwrap();
        assert!(value_eq(&v, &Value::boxed(Value::Int(10))));
    }

    #[test]
    fn division_truncates_toward_zero() {
        assert!(value_eq(&eval_closed("7 / 2").unwrap(), &Value::Int(3)));
        assert!(value_eq(&eval_closed("(-7) / 2").unwrap(), &Value::Int(-3)));
        assert!(matches!(
            eval_closed("1 / 0"),
            Err(RuntimeError::DivisionByZero(_))
        ));
    }

    #[test]
    fn programs_apply_named_functions() {
        let p = parse_program("id : Int -> Int\nid x = x\n", "id.gg").unwrap();
        let v = eval_program(&p, "id", vec![Value::Int(7)]).unwrap();
        assert!(value_eq(&v, &Value::Int(7)));
        assert!(matches!(
            eval_program(&p, "nope", vec![]),
            Err(RuntimeError::UnknownMain(name)) if name == "nope"
        ));
        assert!(matches!(
            eval_program(&p, "id", vec![]),
            Err(RuntimeError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn value_equality_distinguishes_tags() {
        let one_box = Value::boxed(Value::Int(1));
        let one_star = Value::starred(Value::Int(1));
        assert!(value_eq(&one_box, &Value::boxed(Value::Int(1))));
        assert!(!value_eq(&one_box, &one_star));
        let clos = Value::Closure(vec![], "x".to_string(), Rc::new(Term::var("x")));
        assert!(!value_eq(&clos, &clos.clone()));
    }

    #[test]
    fn values_print_in_the_run_format() {
        let v = Value::Ctor(
            "PCons".to_string(),
            vec![
                Value::Ctor(
                    "Patient".to_string(),
                    vec![
                        Value::boxed(Value::Int(1)),
                        Value::boxed(Value::Str("Alice".to_string())),
                        Value::boxed(Value::Int(30)),
                    ],
                ),
                Value::Ctor("PNil".to_string(), vec![]),
            ],
        );
        assert_eq!(
            v.to_string(),
            "PCons (Patient [1] [\"Alice\"] [30]) PNil"
        );
        assert_eq!(Value::boxed(Value::Int(35)).to_string(), "[35]");
        assert_eq!(Value::starred(Value::Int(-2)).to_string(), "*(-2)");
    }

    #[test]
    fn evaluation_is_deterministic() {
        let t = parse_term("let [y] = reveal (trust (3 * 14)) in [y - 2]").unwrap();
        let a = eval_term(&Env::new(), &t).unwrap();
        let b = eval_term(&Env::new(), &t).unwrap();
        assert!(value_eq(&a, &b));
    }

    #[test]
    fn case_matches_top_to_bottom() {
        let p = parse_program(
            "sign : Int -> Int\nsign n = case n of | 0 -> 0 | _ -> 1\n",
            "s.gg",
        )
        .unwrap();
        let v = eval_program(&p, "sign", vec![Value::Int(0)]).unwrap();
        assert!(value_eq(&v, &Value::Int(0)));
        let v = eval_program(&p, "sign", vec![Value::Int(9)]).unwrap();
        assert!(value_eq(&v, &Value::Int(1)));
    }
}
