//! Printer for the concrete syntax. The output of every printer here
//! reparses to the same AST, which the parser tests rely on.

use std::fmt;

use crate::syntax::{Decl, PatKind, Pattern, Program, Term, TermKind, Type};

// Precedence levels, loosest to tightest. A node prints parenthesised
// whenever its own level is looser than the context demands.
const LVL_TERM: u8 = 0;
const LVL_OP_ADD: u8 = 1;
const LVL_OP_MUL: u8 = 2;
const LVL_APP: u8 = 3;
const LVL_ATOM: u8 = 4;

fn term_level(t: &Term) -> u8 {
    match &t.kind {
        TermKind::Lam(..)
        | TermKind::LetBox(..)
        | TermKind::Endorse(..)
        | TermKind::Reveal(..)
        | TermKind::TrustIntro(..)
        | TermKind::Case(..) => LVL_TERM,
        TermKind::Prim(op, ..) => match op.symbol() {
            "*" | "/" => LVL_OP_MUL,
            _ => LVL_OP_ADD,
        },
        TermKind::App(..) => LVL_APP,
        TermKind::Ctor(_, args) if !args.is_empty() => LVL_APP,
        TermKind::Int(n) if *n < 0 => LVL_ATOM, // printed pre-parenthesised
        TermKind::Var(_) | TermKind::Int(_) | TermKind::Str(_) => LVL_ATOM,
        TermKind::BoxIntro(..) | TermKind::Ctor(..) => LVL_ATOM,
    }
}

/// True when the printed form ends in an open case-alternative list, which
/// would greedily capture a following `|`.
fn tail_hazard(t: &Term) -> bool {
    match &t.kind {
        TermKind::Case(..) => true,
        TermKind::Lam(_, body)
        | TermKind::LetBox(_, _, body)
        | TermKind::Endorse(_, _, body) => tail_hazard(body),
        _ => false,
    }
}

fn escape_str(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_term(t: &Term, level: u8, out: &mut String) {
    if term_level(t) < level {
        out.push('(');
        write_term(t, LVL_TERM, out);
        out.push(')');
        return;
    }
    match &t.kind {
        TermKind::Var(x) => out.push_str(x),
        TermKind::Int(n) => {
            if *n < 0 {
                out.push('(');
                out.push_str(&n.to_string());
                out.push(')');
            } else {
                out.push_str(&n.to_string());
            }
        }
        TermKind::Str(s) => escape_str(s, out),
        TermKind::Lam(x, body) => {
            out.push('\\');
            out.push_str(x);
            out.push_str(" -> ");
            write_term(body, LVL_TERM, out);
        }
        TermKind::App(f, a) => {
            // a constructor head would otherwise fuse with the argument
            // into one constructor application
            if matches!(&f.kind, TermKind::Ctor(..)) {
                out.push('(');
                write_term(f, LVL_TERM, out);
                out.push(')');
            } else {
                write_term(f, LVL_APP, out);
            }
            out.push(' ');
            write_term(a, LVL_ATOM, out);
        }
        TermKind::BoxIntro(body) => {
            out.push('[');
            write_term(body, LVL_TERM, out);
            out.push(']');
        }
        TermKind::TrustIntro(body) => {
            out.push_str("trust ");
            write_term(body, LVL_ATOM, out);
        }
        TermKind::Reveal(body) => {
            out.push_str("reveal ");
            write_term(body, LVL_ATOM, out);
        }
        TermKind::LetBox(x, bound, body) => {
            out.push_str("let [");
            out.push_str(x);
            out.push_str("] = ");
            write_term(bound, LVL_TERM, out);
            out.push_str(" in ");
            write_term(body, LVL_TERM, out);
        }
        TermKind::Endorse(bound, x, body) => {
            out.push_str("endorse ");
            write_term(bound, LVL_TERM, out);
            out.push_str(" as ");
            out.push_str(x);
            out.push_str(" in ");
            write_term(body, LVL_TERM, out);
        }
        TermKind::Case(scrut, alts) => {
            out.push_str("case ");
            write_term(scrut, LVL_TERM, out);
            out.push_str(" of");
            for (pat, body) in alts {
                out.push_str(" | ");
                write_pattern(pat, false, out);
                out.push_str(" -> ");
                if tail_hazard(body) {
                    out.push('(');
                    write_term(body, LVL_TERM, out);
                    out.push(')');
                } else {
                    write_term(body, LVL_TERM, out);
                }
            }
        }
        TermKind::Ctor(name, args) => {
            out.push_str(name);
            for a in args {
                out.push(' ');
                write_term(a, LVL_ATOM, out);
            }
        }
        TermKind::Prim(op, l, r) => {
            let (own, tighter) = match op.symbol() {
                "*" | "/" => (LVL_OP_MUL, LVL_APP),
                _ => (LVL_OP_ADD, LVL_OP_MUL),
            };
            write_term(l, own, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_term(r, tighter, out);
        }
    }
}

fn write_pattern(p: &Pattern, atomic: bool, out: &mut String) {
    match &p.kind {
        PatKind::Var(x) => out.push_str(x),
        PatKind::Wild => out.push('_'),
        PatKind::Int(n) => out.push_str(&n.to_string()),
        PatKind::Box(inner) => {
            out.push('[');
            write_pattern(inner, true, out);
            out.push(']');
        }
        PatKind::Ctor(name, subs) => {
            if subs.is_empty() {
                out.push_str(name);
            } else {
                if atomic {
                    out.push('(');
                }
                out.push_str(name);
                for s in subs {
                    out.push(' ');
                    write_pattern(s, true, out);
                }
                if atomic {
                    out.push(')');
                }
            }
        }
    }
}

// Type levels: function arrows, postfix modalities, atoms.
fn write_type(ty: &Type, level: u8, out: &mut String) {
    let own = match ty {
        Type::Fun(..) => 0,
        Type::Box(..) | Type::Star(..) => 1,
        Type::Int | Type::Str | Type::Data(_) => 2,
    };
    if own < level {
        out.push('(');
        write_type(ty, 0, out);
        out.push(')');
        return;
    }
    match ty {
        Type::Int => out.push_str("Int"),
        Type::Str => out.push_str("String"),
        Type::Data(name) => out.push_str(name),
        Type::Fun(dom, cod) => {
            write_type(dom, 1, out);
            out.push_str(" -> ");
            write_type(cod, 0, out);
        }
        Type::Box(grade, inner) => {
            write_type(inner, 1, out);
            out.push_str(" [");
            out.push_str(&grade.to_string());
            out.push(']');
        }
        Type::Star(inner) => {
            write_type(inner, 1, out);
            out.push_str(" *{Trusted}");
        }
    }
}

pub fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, LVL_TERM, &mut out);
    out
}

pub fn pattern_to_string(p: &Pattern) -> String {
    let mut out = String::new();
    write_pattern(p, false, &mut out);
    out
}

pub fn type_to_string(ty: &Type) -> String {
    let mut out = String::new();
    write_type(ty, 0, &mut out);
    out
}

/// Prints a whole program, one declaration per line so that every
/// continuation stays clear of column 1.
pub fn program_to_string(p: &Program) -> String {
    let mut out = String::new();
    for (i, decl) in p.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match decl {
            Decl::Data(d) => {
                out.push_str("data ");
                out.push_str(&d.name);
                out.push_str(" where");
                for (ctor, fields) in &d.ctors {
                    out.push(' ');
                    out.push_str(ctor);
                    for f in fields {
                        out.push(' ');
                        write_type(f, 2, &mut out);
                    }
                    out.push(';');
                }
                out.push('\n');
            }
            Decl::Fun(f) => {
                out.push_str(&f.name);
                out.push_str(" : ");
                write_type(&f.signature, 0, &mut out);
                out.push('\n');
                out.push_str(&f.name);
                for param in &f.params {
                    out.push(' ');
                    write_pattern(param, true, &mut out);
                }
                out.push_str(" = ");
                write_term(&f.body, LVL_TERM, &mut out);
                out.push('\n');
            }
        }
    }
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_to_string(self))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pattern_to_string(self))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&type_to_string(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&program_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Grade;
    use crate::syntax::PrimOp;

    #[test]
    fn types_print_with_modalities_postfix() {
        let ty = Type::boxed(Grade::SecPublic, Type::boxed(Grade::SecPrivate, Type::Int));
        assert_eq!(type_to_string(&ty), "Int [Private] [Public]");
        let arrow = Type::fun(Type::star(Type::Str), Type::boxed(Grade::Usage(2), Type::Int));
        assert_eq!(type_to_string(&arrow), "String *{Trusted} -> Int [2]");
        let nested = Type::boxed(Grade::SecPublic, Type::fun(Type::Int, Type::Int));
        assert_eq!(type_to_string(&nested), "(Int -> Int) [Public]");
    }

    #[test]
    fn application_groups_left() {
        let t = Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y"));
        assert_eq!(term_to_string(&t), "f x y");
        let u = Term::app(Term::var("f"), Term::app(Term::var("g"), Term::var("x")));
        assert_eq!(term_to_string(&u), "f (g x)");
    }

    #[test]
    fn operators_respect_precedence() {
        let t = Term::prim(
            PrimOp::Add,
            Term::int(1),
            Term::prim(PrimOp::Mul, Term::int(2), Term::int(3)),
        );
        assert_eq!(term_to_string(&t), "1 + 2 * 3");
        let u = Term::prim(
            PrimOp::Mul,
            Term::prim(PrimOp::Add, Term::int(1), Term::int(2)),
            Term::int(3),
        );
        assert_eq!(term_to_string(&u), "(1 + 2) * 3");
    }

    #[test]
    fn negative_literals_are_parenthesised() {
        let t = Term::app(Term::var("f"), Term::int(-5));
        assert_eq!(term_to_string(&t), "f (-5)");
    }

    #[test]
    fn modal_forms_print_with_keywords() {
        let t = Term::reveal(Term::trust(Term::int(42)));
        assert_eq!(term_to_string(&t), "reveal (trust 42)");
        let e = Term::endorse(
            Term::box_intro(Term::int(5)),
            "x",
            Term::reveal(Term::var("x")),
        );
        assert_eq!(term_to_string(&e), "endorse [5] as x in reveal x");
    }
}
