//! Glint: a small linearly typed functional language with two graded
//! modalities. The box modality `A [r]` tracks confidentiality (or usage
//! counts) via a preordered semiring grade `r`; the star modality
//! `A *{Trusted}` tracks integrity, guaranteeing that a value was built
//! without untrusted inputs.
//!
//! The crate is organised as a conventional language pipeline:
//!
//! - [`semiring`] — the grade algebras (security levels and usage counts)
//! - [`syntax`] — abstract syntax, free variables, substitution
//! - [`parser`] — concrete `.gg` surface syntax
//! - [`pretty`] — the printer the parser round-trips against
//! - [`typecheck`] — bidirectional checking with usage synthesis
//! - [`eval`] — call-by-value evaluation with observable modal tags
//! - [`verify`] — noninterference fuzzing and the return/bind law harness

pub mod eval;
pub mod parser;
pub mod pretty;
pub mod semiring;
pub mod syntax;
pub mod typecheck;
pub mod verify;

pub use eval::{eval_program, eval_term, value_eq, Env, RuntimeError, Value};
pub use parser::{parse_program, parse_term, ParseError};
pub use semiring::{Grade, SemiringTag, TagMismatch};
pub use syntax::{Decl, Pattern, Program, Span, Term, Type};
pub use typecheck::{check_program, check_term, infer_term, type_leq, Binding, TypeError};
pub use verify::{check_monad_laws, fuzz_confidentiality, fuzz_integrity, gen_term, Report};
