//! End-to-end tests of the `glint` binary: subcommand behaviour, exit
//! statuses, stream separation, and byte-for-byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(file: &str) -> String {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"))
        .join(file)
        .display()
        .to_string()
}

fn fixture(file: &str) -> String {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures"))
        .join(file)
        .display()
        .to_string()
}

fn glint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glint"))
        .args(args)
        .output()
        .expect("failed to launch glint")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn check_prints_ok_per_file() {
    let add = corpus("addPatient.gg");
    let mean = corpus("meanAge.gg");
    let out = glint(&["check", &add, &mean]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), format!("OK {}\nOK {}\n", add, mean));
    assert_eq!(stderr(&out), "");
}

#[test]
fn check_reports_type_errors_on_stderr() {
    let leak = corpus("leak.gg");
    let out = glint(&["check", &leak]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "");
    assert_eq!(
        stderr(&out),
        format!(
            "{}:2:7: error[E104]: grade violation: 'x' used at Public but bound at Private\n",
            leak
        )
    );
}

#[test]
fn check_reports_parse_errors_with_status_two() {
    let bad = fixture("parseError.gg");
    let out = glint(&["check", &bad]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("error[E001]"), "{err}");
}

#[test]
fn run_prints_the_value() {
    let mean = corpus("meanAge.gg");
    let out = glint(&["run", &mean, "--main", "meanMain"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "[35]\n");

    let linear = corpus("linear.gg");
    let out = glint(&["run", &linear, "--main", "twice", "--arg", "21"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "42\n");
}

#[test]
fn run_wraps_arguments_by_signature() {
    let ni = corpus("ni.gg");
    // const42 takes Int [Private]; a bare 7 is boxed for it
    let out = glint(&["run", &ni, "--main", "const42", "--arg", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "[42]\n");
    let out = glint(&["run", &ni, "--main", "mkKey", "--arg", "7"]);
    assert_eq!(stdout(&out), "*7\n");
}

#[test]
fn run_unknown_function_is_a_runtime_error() {
    let mean = corpus("meanAge.gg");
    let out = glint(&["run", &mean, "--main", "nope"]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out), "");
}

#[test]
fn fuzz_ni_passes_on_corpus_functions() {
    let ni = corpus("ni.gg");
    let out = glint(&["fuzz-ni", &ni, "--fn", "const42", "--mode", "conf"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("property: confidentiality:const42\n"), "{text}");
    assert!(text.contains("trials: 100\n"), "{text}");
    assert!(text.contains("failures: 0\n"), "{text}");
    assert!(text.contains("result: PASS\n"), "{text}");
    assert!(
        text.contains("{\"property\":\"confidentiality:const42\",\"trials\":100,\"failures\":0,\"seed\":0}"),
        "{text}"
    );

    let out = glint(&["fuzz-ni", &ni, "--fn", "mkSeed", "--mode", "integ", "--trials", "64", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("result: PASS\n"));
}

#[test]
fn fuzz_ni_rejects_wrong_signatures_as_usage_errors() {
    let mean = corpus("meanAge.gg");
    let out = glint(&["fuzz-ni", &mean, "--fn", "meanAge", "--mode", "conf"]);
    assert_eq!(code(&out), 5);
    assert!(stderr(&out).contains("has signature"));
}

#[test]
fn fuzz_ni_rejects_ill_typed_programs() {
    let leak = corpus("leak.gg");
    let out = glint(&["fuzz-ni", &leak, "--fn", "leak", "--mode", "conf"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("error[E104]"));
}

#[test]
fn laws_pass_with_default_and_explicit_seeds() {
    let out = glint(&["laws"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("trials: 200\n"));
    let out = glint(&["laws", "--trials", "200", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("result: PASS\n"));
}

#[test]
fn unknown_subcommands_and_flags_are_usage_errors() {
    let out = glint(&["frobnicate"]);
    assert_eq!(code(&out), 5);
    let out = glint(&["laws", "--bogus"]);
    assert_eq!(code(&out), 5);
    let out = glint(&["check"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let mean = corpus("meanAge.gg");
    let ni = corpus("ni.gg");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["check", &mean],
        vec!["run", &mean, "--main", "meanMain"],
        vec!["fuzz-ni", &ni, "--fn", "shifted", "--mode", "conf", "--trials", "100", "--seed", "5"],
        vec!["laws", "--trials", "50", "--seed", "13"],
    ];
    for args in invocations {
        let first = glint(&args);
        let second = glint(&args);
        assert_eq!(first.stdout, second.stdout, "stdout differs for {args:?}");
        assert_eq!(first.stderr, second.stderr, "stderr differs for {args:?}");
        assert_eq!(code(&first), code(&second));
    }
}
