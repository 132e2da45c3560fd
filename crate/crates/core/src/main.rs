//! The `glint` command line: check, run, fuzz, and law-check `.gg`
//! programs.
//!
//! Exit statuses: 0 success or property pass, 1 type error, 2 parse
//! error, 3 runtime error, 4 property failure, 5 usage error. Results go
//! to stdout, diagnostics to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use glint::eval::{eval_program, Value};
use glint::parser::parse_program;
use glint::syntax::{Program, Type};
use glint::typecheck::check_program;
use glint::verify::{check_monad_laws, fuzz_confidentiality, fuzz_integrity, Report, VerifyError};

const EXIT_TYPE_ERROR: u8 = 1;
const EXIT_PARSE_ERROR: u8 = 2;
const EXIT_RUNTIME_ERROR: u8 = 3;
const EXIT_PROPERTY_FAILURE: u8 = 4;
const EXIT_USAGE_ERROR: u8 = 5;

#[derive(Parser)]
#[command(
    name = "glint",
    about = "graded confidentiality and integrity checker",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck source files
    Check {
        /// Files to check, in order
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Evaluate a top-level function and print its value
    Run {
        file: PathBuf,
        /// Function to apply
        #[arg(long)]
        main: String,
        /// Integer arguments, wrapped according to the signature
        #[arg(long = "arg")]
        args: Vec<i64>,
    },
    /// Fuzz a noninterference property of one function
    #[command(name = "fuzz-ni")]
    FuzzNi {
        file: PathBuf,
        /// Function under test
        #[arg(long = "fn")]
        fn_name: String,
        #[arg(long)]
        mode: Mode,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the return/bind laws of the box and star modalities
    Laws {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Private inputs must not influence public outputs
    Conf,
    /// Trusted outputs must not depend on public inputs
    Integ,
}

fn load(path: &PathBuf) -> Result<Program, u8> {
    let name = path.display().to_string();
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", name, e);
            return Err(EXIT_USAGE_ERROR);
        }
    };
    parse_program(&text, &name).map_err(|e| {
        eprintln!("{}", e.render());
        EXIT_PARSE_ERROR
    })
}

fn load_checked(path: &PathBuf) -> Result<Program, u8> {
    let program = load(path)?;
    check_program(&program).map_err(|e| {
        eprintln!("{}", e.render());
        EXIT_TYPE_ERROR
    })?;
    Ok(program)
}

fn cmd_check(files: &[PathBuf]) -> u8 {
    for path in files {
        match load_checked(path) {
            Ok(program) => println!("OK {}", program.file),
            Err(code) => return code,
        }
    }
    0
}

/// Wraps a bare integer argument according to the parameter type:
/// unboxed for `Int`, boxed for `Int [r]`, starred for `Int *{Trusted}`.
fn wrap_arg(n: i64, ty: &Type) -> Option<Value> {
    match ty {
        Type::Int => Some(Value::Int(n)),
        Type::Box(_, inner) if **inner == Type::Int => Some(Value::boxed(Value::Int(n))),
        Type::Star(inner) if **inner == Type::Int => Some(Value::starred(Value::Int(n))),
        _ => None,
    }
}

fn cmd_run(file: &PathBuf, main: &str, args: &[i64]) -> u8 {
    let program = match load_checked(file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let Some(decl) = program.find_fun(main) else {
        eprintln!("error: unknown function '{}'", main);
        return EXIT_RUNTIME_ERROR;
    };
    let arity = decl.params.len();
    if args.len() != arity {
        eprintln!(
            "error: '{}' takes {} arguments, {} given",
            main,
            arity,
            args.len()
        );
        return EXIT_RUNTIME_ERROR;
    }
    let mut domain = &decl.signature;
    let mut values = Vec::with_capacity(args.len());
    for n in args {
        let Type::Fun(dom, cod) = domain else {
            eprintln!("error: '{}' takes no further arguments", main);
            return EXIT_USAGE_ERROR;
        };
        match wrap_arg(*n, dom) {
            Some(v) => values.push(v),
            None => {
                eprintln!(
                    "error: cannot build an argument of type {} from an integer",
                    dom
                );
                return EXIT_USAGE_ERROR;
            }
        }
        domain = cod;
    }
    match eval_program(&program, main, values) {
        Ok(value) => {
            println!("{}", value);
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_RUNTIME_ERROR
        }
    }
}

fn emit_report(report: &Report) -> u8 {
    print!("{}", report.render_text());
    println!("{}", report.render_json());
    if report.passed() {
        0
    } else {
        EXIT_PROPERTY_FAILURE
    }
}

fn cmd_fuzz(file: &PathBuf, fn_name: &str, mode: Mode, trials: u64, seed: u64) -> u8 {
    let program = match load(file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let result = match mode {
        Mode::Conf => fuzz_confidentiality(&program, fn_name, trials, seed),
        Mode::Integ => fuzz_integrity(&program, fn_name, trials, seed),
    };
    match result {
        Ok(report) => emit_report(&report),
        Err(VerifyError::Type(mut e)) => {
            if e.file.is_empty() {
                e.file = program.file.clone();
            }
            eprintln!("{}", e.render());
            EXIT_TYPE_ERROR
        }
        Err(e @ VerifyError::Signature { .. }) => {
            eprintln!("error: {}", e);
            EXIT_USAGE_ERROR
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e);
            return ExitCode::from(EXIT_USAGE_ERROR);
        }
    };
    let status = match &cli.command {
        Command::Check { files } => cmd_check(files),
        Command::Run { file, main, args } => cmd_run(file, main, args),
        Command::FuzzNi {
            file,
            fn_name,
            mode,
            trials,
            seed,
        } => cmd_fuzz(file, fn_name, *mode, *trials, *seed),
        Command::Laws { trials, seed } => emit_report(&check_monad_laws(*trials, *seed)),
    };
    ExitCode::from(status)
}
