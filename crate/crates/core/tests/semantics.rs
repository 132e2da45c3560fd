//! Semantic invariants tying the checker and the evaluator together:
//! accepted programs evaluate to values whose shapes match their static
//! types, accepting at Public implies accepting at Private, and modal
//! tags never influence payload computation.

use glint::eval::{eval_program, eval_term, value_eq, Env, Value};
use glint::parser::parse_program;
use glint::semiring::Grade;
use glint::syntax::{Decl, Program, Term, TermKind, Type};
use glint::typecheck::{check_program, check_term, Ctx};
use glint::verify::gen_term;

fn corpus_dir() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus").to_string()
}

fn load_corpus() -> Vec<Program> {
    let mut programs = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("gg"))
        .collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path).unwrap();
        programs.push(parse_program(&text, &path.display().to_string()).unwrap());
    }
    programs
}

fn accepted_corpus() -> Vec<Program> {
    load_corpus()
        .into_iter()
        .filter(|p| check_program(p).is_ok())
        .collect()
}

/// Does a runtime value have the shape the static type promises?
fn shape_matches(program: &Program, value: &Value, ty: &Type) -> bool {
    match (value, ty) {
        (Value::Int(_), Type::Int) => true,
        (Value::Str(_), Type::Str) => true,
        (Value::Box(inner), Type::Box(_, payload)) => shape_matches(program, inner, payload),
        (Value::Star(inner), Type::Star(payload)) => shape_matches(program, inner, payload),
        (Value::Closure(..) | Value::Partial(..), Type::Fun(..)) => true,
        (Value::Ctor(name, args), Type::Data(data)) => program.data_decls().any(|d| {
            d.name == *data
                && d.ctors
                    .iter()
                    .any(|(c, fields)| c == name && fields.len() == args.len())
        }),
        _ => false,
    }
}

#[test]
fn accepted_corpus_programs_evaluate_without_shape_errors() {
    let mut ran = 0;
    for program in accepted_corpus() {
        for fun in program.fun_decls() {
            if !fun.params.is_empty() {
                continue;
            }
            let value = eval_program(&program, &fun.name, vec![]).unwrap_or_else(|e| {
                panic!("{}: '{}' failed at runtime: {}", program.file, fun.name, e)
            });
            assert!(
                shape_matches(&program, &value, &fun.signature),
                "{}: '{}' evaluated to {} which does not fit {}",
                program.file,
                fun.name,
                value,
                fun.signature
            );
            ran += 1;
        }
    }
    assert!(ran >= 3, "expected several zero-argument corpus functions");
}

#[test]
fn corpus_functions_run_on_synthesised_arguments() {
    for program in accepted_corpus() {
        for fun in program.fun_decls() {
            // only single-parameter functions over integer-shaped inputs
            if fun.params.len() != 1 {
                continue;
            }
            let Type::Fun(dom, cod) = &fun.signature else {
                continue;
            };
            let arg = match &**dom {
                Type::Int => Value::Int(21),
                Type::Box(_, inner) => match &**inner {
                    Type::Int => Value::boxed(Value::Int(21)),
                    Type::Box(_, inner2) if **inner2 == Type::Int => {
                        Value::boxed(Value::boxed(Value::Int(21)))
                    }
                    _ => continue,
                },
                Type::Star(inner) if **inner == Type::Int => Value::starred(Value::Int(21)),
                _ => continue,
            };
            let value = eval_program(&program, &fun.name, vec![arg]).unwrap_or_else(|e| {
                panic!("{}: '{}' failed at runtime: {}", program.file, fun.name, e)
            });
            assert!(
                shape_matches(&program, &value, cod),
                "{}: '{}' returned {} which does not fit {}",
                program.file,
                fun.name,
                value,
                cod
            );
        }
    }
}

#[test]
fn generated_terms_preserve_their_goal_shape() {
    let empty = Program {
        file: String::new(),
        decls: Vec::new(),
    };
    let goals = [
        Type::Int,
        Type::boxed(Grade::SecPublic, Type::Int),
        Type::star(Type::Int),
    ];
    for goal in &goals {
        for seed in 0..60 {
            let t = gen_term(seed, goal, 4);
            let v = eval_term(&Env::new(), &t)
                .unwrap_or_else(|e| panic!("seed {seed}: {t} failed: {e}"));
            assert!(
                shape_matches(&empty, &v, goal),
                "seed {seed}: {t} evaluated to {v}, not a {goal}"
            );
        }
    }
}

#[test]
fn checking_at_public_implies_checking_at_private() {
    // closed terms accepted at Int [Public] are accepted at Int [Private];
    // the converse fails on the leak witness, which the checker rejects
    let public = Type::boxed(Grade::SecPublic, Type::Int);
    let private = Type::boxed(Grade::SecPrivate, Type::Int);
    for seed in 0..120 {
        let t = gen_term(seed, &public, 4);
        assert!(check_term(&Ctx::new(), &t, &public).is_ok());
        check_term(&Ctx::new(), &t, &private).unwrap_or_else(|e| {
            panic!("seed {seed}: {t} checks at {public} but not at {private}: {e}")
        });
    }
}

/// Replaces every modal form by its payload or binding skeleton: box,
/// trust and reveal disappear, and the two binding forms become plain
/// beta-redexes.
fn erase_term(t: &Term) -> Term {
    let kind = match &t.kind {
        TermKind::BoxIntro(inner) | TermKind::TrustIntro(inner) | TermKind::Reveal(inner) => {
            return erase_term(inner);
        }
        TermKind::LetBox(x, bound, body) | TermKind::Endorse(bound, x, body) => {
            return Term::app(Term::lam(x, erase_term(body)), erase_term(bound));
        }
        TermKind::Var(x) => TermKind::Var(x.clone()),
        TermKind::Int(n) => TermKind::Int(*n),
        TermKind::Str(s) => TermKind::Str(s.clone()),
        TermKind::Lam(x, body) => TermKind::Lam(x.clone(), Box::new(erase_term(body))),
        TermKind::App(f, a) => {
            TermKind::App(Box::new(erase_term(f)), Box::new(erase_term(a)))
        }
        TermKind::Case(scrut, alts) => TermKind::Case(
            Box::new(erase_term(scrut)),
            alts.iter()
                .map(|(p, b)| (p.clone(), erase_term(b)))
                .collect(),
        ),
        TermKind::Ctor(name, args) => {
            TermKind::Ctor(name.clone(), args.iter().map(erase_term).collect())
        }
        TermKind::Prim(op, l, r) => {
            TermKind::Prim(*op, Box::new(erase_term(l)), Box::new(erase_term(r)))
        }
    };
    Term::synth(kind)
}

fn strip_tags(v: &Value) -> Value {
    match v {
        Value::Box(inner) | Value::Star(inner) => strip_tags(inner),
        Value::Ctor(name, args) => {
            Value::Ctor(name.clone(), args.iter().map(strip_tags).collect())
        }
        other => other.clone(),
    }
}

#[test]
fn modal_tags_never_affect_payloads() {
    let goals = [
        Type::Int,
        Type::boxed(Grade::SecPublic, Type::Int),
        Type::star(Type::Int),
    ];
    for goal in &goals {
        for seed in 200..280 {
            let t = gen_term(seed, goal, 4);
            let tagged = eval_term(&Env::new(), &t).unwrap();
            let erased = eval_term(&Env::new(), &erase_term(&t)).unwrap();
            assert!(
                value_eq(&strip_tags(&tagged), &erased),
                "seed {seed}: {} evaluates to {} but its erasure gives {}",
                t,
                tagged,
                erased
            );
        }
    }
}

#[test]
fn corpus_mean_age_matches_the_integer_mean() {
    let text = std::fs::read_to_string(format!("{}/meanAge.gg", corpus_dir())).unwrap();
    let program = parse_program(&text, "meanAge.gg").unwrap();
    check_program(&program).unwrap();
    // independent oracle: the integer mean of the two ages
    let ages = [30i64, 40];
    let expected = ages.iter().sum::<i64>() / ages.len() as i64;
    let patients = Value::Ctor(
        "PCons".to_string(),
        vec![
            Value::Ctor(
                "Patient".to_string(),
                vec![
                    Value::boxed(Value::Int(1)),
                    Value::boxed(Value::Str("Alice".to_string())),
                    Value::boxed(Value::Int(ages[0])),
                ],
            ),
            Value::Ctor(
                "PCons".to_string(),
                vec![
                    Value::Ctor(
                        "Patient".to_string(),
                        vec![
                            Value::boxed(Value::Int(2)),
                            Value::boxed(Value::Str("Bob".to_string())),
                            Value::boxed(Value::Int(ages[1])),
                        ],
                    ),
                    Value::Ctor("PNil".to_string(), vec![]),
                ],
            ),
        ],
    );
    let v = eval_program(&program, "meanAge", vec![patients]).unwrap();
    assert!(value_eq(&v, &Value::boxed(Value::Int(expected))));
}

#[test]
fn rejected_corpus_files_have_the_documented_codes() {
    use glint::typecheck::ErrorCode;
    let expected = [
        ("leak.gg", ErrorCode::E104),
        ("inject.gg", ErrorCode::E102),
        ("smuggle.gg", ErrorCode::E102),
        ("trustLocal.gg", ErrorCode::E105),
        ("flattenBad.gg", ErrorCode::E104),
        ("linearBad.gg", ErrorCode::E103),
        ("once.gg", ErrorCode::E104),
        ("mixTags.gg", ErrorCode::E106),
    ];
    for (file, code) in expected {
        let path = format!("{}/{}", corpus_dir(), file);
        let text = std::fs::read_to_string(&path).unwrap();
        let program = parse_program(&text, file).unwrap();
        let err = check_program(&program)
            .expect_err(&format!("{file} should be rejected"));
        assert_eq!(err.code, code, "{file}: {}", err.render());
    }
    // everything else in the corpus is accepted
    let decl_count = |d: &Decl| matches!(d, Decl::Fun(_));
    for program in accepted_corpus() {
        assert!(program.decls.iter().any(decl_count), "{}", program.file);
    }
}
