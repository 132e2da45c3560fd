//! Semantic verification harness.
//!
//! Noninterference is tested by fuzzing: confidentiality says a function
//! out of a private box into a public box cannot let its input influence
//! its output, integrity says a function from a public box into a trusted
//! star must be constant (trust has no dependencies). The box/star pair
//! also behaves like return and bind, and `check_monad_laws` tests the
//! three standard laws by evaluating both sides of each equation on
//! generated instances.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::{eval_program, eval_term, value_eq, Env, RuntimeError, Value};
use crate::pretty::term_to_string;
use crate::semiring::Grade;
use crate::syntax::{Program, Term, Type};
use crate::typecheck::{check_program, TypeError};

/// Inputs are drawn uniformly from this closed interval.
const SAMPLE_MIN: i64 = -1000;
const SAMPLE_MAX: i64 = 1000;

/// One counterexample: the inputs tried and the two values (or errors)
/// that should have agreed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub trial: u64,
    pub inputs: String,
    pub left: String,
    pub right: String,
}

/// The outcome of one fuzzing or law-checking run, reproducible from its
/// seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub property: String,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub seed: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Line-oriented rendering, one field per line, failures in trial
    /// order.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("property: {}\n", self.property));
        out.push_str(&format!("trials: {}\n", self.trials));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!("failures: {}\n", self.failures.len()));
        for (i, f) in self.failures.iter().enumerate() {
            out.push_str(&format!(
                "failure {}: trial={} inputs={} left={} right={}\n",
                i, f.trial, f.inputs, f.left, f.right
            ));
        }
        out.push_str(if self.passed() {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        });
        out
    }

    /// A one-line machine-readable summary.
    pub fn render_json(&self) -> String {
        format!(
            "{{\"property\":\"{}\",\"trials\":{},\"failures\":{},\"seed\":{}}}",
            self.property.replace('\\', "\\\\").replace('"', "\\\""),
            self.trials,
            self.failures.len(),
            self.seed
        )
    }
}

/// Why a fuzzing run could not start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    /// The program does not typecheck.
    Type(TypeError),
    /// The named function is missing or has the wrong signature.
    Signature {
        name: String,
        expected: String,
        actual: Option<String>,
    },
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::Type(e) => write!(f, "{}", e),
            VerifyError::Signature {
                name,
                expected,
                actual: Some(actual),
            } => write!(
                f,
                "'{}' has signature {}, expected {}",
                name, actual, expected
            ),
            VerifyError::Signature { name, expected, .. } => {
                write!(f, "no function '{}' with signature {}", name, expected)
            }
        }
    }
}

impl std::error::Error for VerifyError {}

fn render_outcome(result: &Result<Value, RuntimeError>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => format!("<error: {}>", e),
    }
}

fn outcomes_agree(left: &Result<Value, RuntimeError>, right: &Result<Value, RuntimeError>) -> bool {
    match (left, right) {
        (Ok(a), Ok(b)) => value_eq(a, b),
        _ => false,
    }
}

fn require_signature(
    program: &Program,
    name: &str,
    expected: &Type,
) -> Result<(), VerifyError> {
    check_program(program).map_err(VerifyError::Type)?;
    match program.find_fun(name) {
        Some(f) if f.signature == *expected => Ok(()),
        Some(f) => Err(VerifyError::Signature {
            name: name.to_string(),
            expected: expected.to_string(),
            actual: Some(f.signature.to_string()),
        }),
        None => Err(VerifyError::Signature {
            name: name.to_string(),
            expected: expected.to_string(),
            actual: None,
        }),
    }
}

pub fn confidentiality_signature() -> Type {
    Type::fun(
        Type::boxed(Grade::SecPrivate, Type::Int),
        Type::boxed(Grade::SecPublic, Type::Int),
    )
}

pub fn integrity_signature() -> Type {
    Type::fun(
        Type::boxed(Grade::SecPublic, Type::Int),
        Type::star(Type::Int),
    )
}

/// Fuzzes the confidentiality reading of noninterference: for a checked
/// function `Int [Private] -> Int [Public]`, outputs must not depend on
/// the boxed input.
pub fn fuzz_confidentiality(
    program: &Program,
    fn_name: &str,
    trials: u64,
    seed: u64,
) -> Result<Report, VerifyError> {
    require_signature(program, fn_name, &confidentiality_signature())?;
    Ok(fuzz_confidentiality_unchecked(program, fn_name, trials, seed))
}

/// As [`fuzz_confidentiality`] but without typechecking the program
/// first. This exists so tests can demonstrate that the harness detects
/// violations on deliberately ill-typed programs; no user-facing path
/// calls it.
#[doc(hidden)]
pub fn fuzz_confidentiality_unchecked(
    program: &Program,
    fn_name: &str,
    trials: u64,
    seed: u64,
) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let i = rng.gen_range(SAMPLE_MIN..=SAMPLE_MAX);
        let mut j = rng.gen_range(SAMPLE_MIN..=SAMPLE_MAX);
        while j == i {
            j = rng.gen_range(SAMPLE_MIN..=SAMPLE_MAX);
        }
        let left = eval_program(program, fn_name, vec![Value::boxed(Value::Int(i))]);
        let right = eval_program(program, fn_name, vec![Value::boxed(Value::Int(j))]);
        if !outcomes_agree(&left, &right) {
            failures.push(Failure {
                trial,
                inputs: format!("i={}, j={}", i, j),
                left: render_outcome(&left),
                right: render_outcome(&right),
            });
        }
    }
    Report {
        property: format!("confidentiality:{}", fn_name),
        trials,
        failures,
        seed,
    }
}

/// Fuzzes the integrity reading of noninterference: a checked function
/// `Int [Public] -> Int *{Trusted}` must be constant, because trusted
/// values cannot depend on their surroundings.
pub fn fuzz_integrity(
    program: &Program,
    fn_name: &str,
    trials: u64,
    seed: u64,
) -> Result<Report, VerifyError> {
    require_signature(program, fn_name, &integrity_signature())?;
    Ok(fuzz_integrity_unchecked(program, fn_name, trials, seed))
}

/// Unchecked twin of [`fuzz_integrity`]; see
/// [`fuzz_confidentiality_unchecked`].
#[doc(hidden)]
pub fn fuzz_integrity_unchecked(
    program: &Program,
    fn_name: &str,
    trials: u64,
    seed: u64,
) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut base: Option<(i64, Result<Value, RuntimeError>)> = None;
    for trial in 0..trials {
        let x = rng.gen_range(SAMPLE_MIN..=SAMPLE_MAX);
        let outcome = eval_program(program, fn_name, vec![Value::boxed(Value::Int(x))]);
        match &base {
            None => {
                if let Err(e) = &outcome {
                    failures.push(Failure {
                        trial,
                        inputs: format!("x={}", x),
                        left: format!("<error: {}>", e),
                        right: String::new(),
                    });
                }
                base = Some((x, outcome));
            }
            Some((x0, base_outcome)) => {
                if !outcomes_agree(base_outcome, &outcome) {
                    failures.push(Failure {
                        trial,
                        inputs: format!("x0={}, x={}", x0, x),
                        left: render_outcome(base_outcome),
                        right: render_outcome(&outcome),
                    });
                }
            }
        }
    }
    Report {
        property: format!("integrity:{}", fn_name),
        trials,
        failures,
        seed,
    }
}

// ---------------------------------------------------------------------
// term generation
// ---------------------------------------------------------------------

/// Generates a closed term of the goal type, deterministically in the
/// seed. Every output checks against its goal in the empty context.
/// Supported goals: `Int`, `Int [Public]`, `Int *{Trusted}`.
pub fn gen_term(seed: u64, goal: &Type, depth: u32) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_with(&mut rng, goal, depth)
}

fn gen_with(rng: &mut ChaCha8Rng, goal: &Type, depth: u32) -> Term {
    match goal {
        Type::Int => gen_int(rng, depth, &[]),
        Type::Box(Grade::SecPublic, inner) if **inner == Type::Int => gen_box_check(rng, depth),
        Type::Star(inner) if **inner == Type::Int => gen_star(rng, depth),
        other => panic!("gen_term: unsupported goal type {}", other),
    }
}

fn fresh(vars: &[String]) -> String {
    format!("v{}", vars.len())
}

/// An integer-typed term over security-graded variables currently in
/// scope. Such variables can be used any number of times: each bare use
/// demands `Public`, and public demand approximates a public supply.
fn gen_int(rng: &mut ChaCha8Rng, depth: u32, vars: &[String]) -> Term {
    let leaf = depth == 0 || rng.gen_range(0..4) == 0;
    if leaf {
        if !vars.is_empty() && rng.gen_bool(0.5) {
            let idx = rng.gen_range(0..vars.len());
            return Term::var(&vars[idx]);
        }
        return Term::int(rng.gen_range(-20..=20));
    }
    match rng.gen_range(0..3) {
        0 | 1 => {
            let op = match rng.gen_range(0..3) {
                0 => crate::syntax::PrimOp::Add,
                1 => crate::syntax::PrimOp::Sub,
                _ => crate::syntax::PrimOp::Mul,
            };
            let left = gen_int(rng, depth - 1, vars);
            let right = gen_int(rng, depth - 1, vars);
            Term::prim(op, left, right)
        }
        _ => {
            // let [v] = <public box> in <arithmetic over v>
            let v = fresh(vars);
            let bound = gen_box_infer(rng, depth - 1);
            let mut inner_vars = vars.to_vec();
            inner_vars.push(v.clone());
            let body = gen_int(rng, depth - 1, &inner_vars);
            Term::let_box(&v, bound, body)
        }
    }
}

/// A public-box term for checking positions: a direct box introduction is
/// allowed here because the expected type supplies its grade, and so is a
/// box elimination whose body is a box introduction, because the expected
/// type propagates into the body.
fn gen_box_check(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 {
        return Term::box_intro(gen_int(rng, 0, &[]));
    }
    match rng.gen_range(0..4) {
        0 | 1 => Term::box_intro(gen_int(rng, depth - 1, &[])),
        2 => {
            let bound = gen_box_infer(rng, depth - 1);
            let body = Term::box_intro(gen_int(rng, depth - 1, &["v".to_string()]));
            Term::let_box("v", bound, body)
        }
        _ => gen_box_infer(rng, depth),
    }
}

/// A public-box term whose type is synthesised, for elimination
/// positions (`let [x] = here`, `endorse here`). Box introductions are
/// check-only, so these are built from `reveal`, `endorse` and `let`.
fn gen_box_infer(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 {
        return Term::reveal(gen_star(rng, 0));
    }
    match rng.gen_range(0..4) {
        0 | 1 => Term::reveal(gen_star(rng, depth - 1)),
        2 => {
            let bound = gen_box_infer(rng, depth - 1);
            let body = gen_endorse_body(rng, depth - 1, "x");
            Term::endorse(bound, "x", body)
        }
        _ => {
            let bound = gen_box_infer(rng, depth - 1);
            let body = gen_box_infer(rng, depth - 1);
            Term::let_box("w", bound, body)
        }
    }
}

/// A trusted-star term: the only introduction requires a closed payload.
fn gen_star(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    Term::trust(gen_int(rng, depth, &[]))
}

/// A body for `endorse _ as x in …`: uses the linear trusted variable
/// exactly once and synthesises a public box type.
fn gen_endorse_body(rng: &mut ChaCha8Rng, depth: u32, x: &str) -> Term {
    if depth == 0 {
        return Term::reveal(Term::var(x));
    }
    match rng.gen_range(0..4) {
        0 | 1 => Term::reveal(Term::var(x)),
        2 => {
            // the revealed payload is bound and then discarded, which a
            // public supply permits
            let body = gen_box_infer(rng, depth - 1);
            Term::let_box("d", Term::reveal(Term::var(x)), body)
        }
        _ => {
            let inner = gen_endorse_body(rng, depth - 1, "y");
            Term::endorse(Term::reveal(Term::var(x)), "y", inner)
        }
    }
}

/// A law body: an open public-box term over a trusted variable whose
/// payload genuinely depends on it, drawn from a closed template family
/// of arithmetic around `let [v] = reveal x in [ … v … ]`. Every member
/// checks against `Int [Public]` with `x` linearly bound.
fn gen_law_body(rng: &mut ChaCha8Rng, x: &str, depth: u32) -> Term {
    if depth == 0 {
        return Term::reveal(Term::var(x));
    }
    match rng.gen_range(0..4) {
        0 => Term::reveal(Term::var(x)),
        1 | 2 => Term::let_box(
            "v",
            Term::reveal(Term::var(x)),
            Term::box_intro(gen_int(rng, 2, &["v".to_string()])),
        ),
        _ => {
            let inner = gen_law_body(rng, "y", depth - 1);
            Term::endorse(Term::reveal(Term::var(x)), "y", inner)
        }
    }
}

// ---------------------------------------------------------------------
// relative monad laws
// ---------------------------------------------------------------------

fn law_instance(
    trial: u64,
    name: &str,
    detail: String,
    left_term: &Term,
    right_term: &Term,
    failures: &mut Vec<Failure>,
) {
    let env = Env::new();
    let left = eval_term(&env, left_term);
    let right = eval_term(&env, right_term);
    if !outcomes_agree(&left, &right) {
        failures.push(Failure {
            trial,
            inputs: format!("{}: {}", name, detail),
            left: render_outcome(&left),
            right: render_outcome(&right),
        });
    }
}

/// Tests the three relative-monad laws of the box/star pair, with
/// `reveal` as return and `endorse` as bind:
///
/// - L1 (left unit): `endorse (reveal s) as x in b` ≡ `b[x := s]`
/// - L2 (right unit): `endorse e as x in reveal x` ≡ `e`
/// - L3 (associativity): `endorse (endorse e as x in f) as y in g` ≡
///   `endorse e as x in (endorse f as y in g)` when `x` is not free in `g`
pub fn check_monad_laws(trials: u64, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        // L1: left unit
        let s = gen_term(rng.gen(), &Type::star(Type::Int), 2);
        let b = gen_law_body(&mut rng, "x", 2);
        let left = Term::endorse(Term::reveal(s.clone()), "x", b.clone());
        let right = b.subst("x", &s);
        law_instance(
            trial,
            "L1",
            format!("s={} b={}", term_to_string(&s), term_to_string(&b)),
            &left,
            &right,
            &mut failures,
        );

        // L2: right unit
        let e = gen_term(rng.gen(), &Type::boxed(Grade::SecPublic, Type::Int), 3);
        let left = Term::endorse(e.clone(), "x", Term::reveal(Term::var("x")));
        law_instance(
            trial,
            "L2",
            format!("e={}", term_to_string(&e)),
            &left,
            &e,
            &mut failures,
        );

        // L3: associativity, with x not free in g by construction
        let e = gen_term(rng.gen(), &Type::boxed(Grade::SecPublic, Type::Int), 2);
        let f = gen_law_body(&mut rng, "x", 2);
        let g = gen_law_body(&mut rng, "y", 2);
        let left = Term::endorse(Term::endorse(e.clone(), "x", f.clone()), "y", g.clone());
        let right = Term::endorse(e.clone(), "x", Term::endorse(f.clone(), "y", g.clone()));
        law_instance(
            trial,
            "L3",
            format!(
                "e={} f={} g={}",
                term_to_string(&e),
                term_to_string(&f),
                term_to_string(&g)
            ),
            &left,
            &right,
            &mut failures,
        );
    }
    Report {
        property: "monad-laws".to_string(),
        trials,
        failures,
        seed,
    }
}
