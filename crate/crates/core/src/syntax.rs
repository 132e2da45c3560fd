//! Abstract syntax for types, terms, patterns and declarations, plus the
//! free-variable and substitution operations the verification harness
//! builds on.

use std::collections::BTreeSet;

use crate::semiring::Grade;

/// A half-open source region, 1-based. Synthetic terms use the all-zero
/// span, which never reaches a diagnostic for well-formed input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Span {
        Span {
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    pub fn merge(self, other: Span) -> Span {
        Span {
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

/// Types of the calculus. The star modality carries no grade field: its
/// only grade is the distinguished `Trusted` marker, which never mixes
/// with the box semirings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Int,
    Str,
    Data(String),
    Fun(Box<Type>, Box<Type>),
    Box(Grade, Box<Type>),
    Star(Box<Type>),
}

impl Type {
    pub fn fun(dom: Type, cod: Type) -> Type {
        Type::Fun(Box::new(dom), Box::new(cod))
    }

    pub fn boxed(grade: Grade, inner: Type) -> Type {
        Type::Box(grade, Box::new(inner))
    }

    pub fn star(inner: Type) -> Type {
        Type::Star(Box::new(inner))
    }
}

/// Binary primitive operators. `Eq` returns an integer (1 for equal,
/// 0 otherwise); `Concat` is string append.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Concat,
}

impl PrimOp {
    pub fn symbol(self) -> &'static str {
        match self {
            PrimOp::Add => "+",
            PrimOp::Sub => "-",
            PrimOp::Mul => "*",
            PrimOp::Div => "/",
            PrimOp::Eq => "==",
            PrimOp::Concat => "++",
        }
    }
}

/// A term together with its source span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Var(String),
    Int(i64),
    Str(String),
    /// `\x -> body`
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// `[t]` — box introduction (promotion).
    BoxIntro(Box<Term>),
    /// `trust t` — star introduction; the payload must be closed.
    TrustIntro(Box<Term>),
    /// `let [x] = bound in body`
    LetBox(String, Box<Term>, Box<Term>),
    /// `reveal t` — coerces a trusted value to a public box.
    Reveal(Box<Term>),
    /// `endorse bound as x in body`
    Endorse(Box<Term>, String, Box<Term>),
    Case(Box<Term>, Vec<(Pattern, Term)>),
    Ctor(String, Vec<Term>),
    Prim(PrimOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    /// A term with the zero span, for programmatic construction.
    pub fn synth(kind: TermKind) -> Term {
        Term {
            kind,
            span: Span::default(),
        }
    }

    pub fn var(name: &str) -> Term {
        Term::synth(TermKind::Var(name.to_string()))
    }

    pub fn int(n: i64) -> Term {
        Term::synth(TermKind::Int(n))
    }

    pub fn lam(param: &str, body: Term) -> Term {
        Term::synth(TermKind::Lam(param.to_string(), Box::new(body)))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::synth(TermKind::App(Box::new(fun), Box::new(arg)))
    }

    pub fn box_intro(body: Term) -> Term {
        Term::synth(TermKind::BoxIntro(Box::new(body)))
    }

    pub fn trust(body: Term) -> Term {
        Term::synth(TermKind::TrustIntro(Box::new(body)))
    }

    pub fn let_box(var: &str, bound: Term, body: Term) -> Term {
        Term::synth(TermKind::LetBox(
            var.to_string(),
            Box::new(bound),
            Box::new(body),
        ))
    }

    pub fn reveal(body: Term) -> Term {
        Term::synth(TermKind::Reveal(Box::new(body)))
    }

    pub fn endorse(bound: Term, var: &str, body: Term) -> Term {
        Term::synth(TermKind::Endorse(
            Box::new(bound),
            var.to_string(),
            Box::new(body),
        ))
    }

    pub fn prim(op: PrimOp, left: Term, right: Term) -> Term {
        Term::synth(TermKind::Prim(op, Box::new(left), Box::new(right)))
    }

    /// The free variables of the term. Binders (lambda, let-box, endorse,
    /// pattern variables) remove their bound names.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match &self.kind {
            TermKind::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            TermKind::Int(_) | TermKind::Str(_) => {}
            TermKind::Lam(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            TermKind::BoxIntro(t) | TermKind::TrustIntro(t) | TermKind::Reveal(t) => {
                t.collect_free(bound, out);
            }
            TermKind::LetBox(x, b, body) => {
                b.collect_free(bound, out);
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::Endorse(b, x, body) => {
                b.collect_free(bound, out);
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::Case(scrut, alts) => {
                scrut.collect_free(bound, out);
                for (pat, body) in alts {
                    let names = pat.bound_names();
                    let depth = bound.len();
                    bound.extend(names);
                    body.collect_free(bound, out);
                    bound.truncate(depth);
                }
            }
            TermKind::Ctor(_, args) => {
                for a in args {
                    a.collect_free(bound, out);
                }
            }
            TermKind::Prim(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
        }
    }

    /// Capture-free substitution of a closed term for every free
    /// occurrence of `x`. Callers must only pass closed `replacement`s;
    /// binders shadow as usual.
    pub fn subst(&self, x: &str, replacement: &Term) -> Term {
        let kind = match &self.kind {
            TermKind::Var(y) => {
                if y == x {
                    return replacement.clone();
                }
                TermKind::Var(y.clone())
            }
            TermKind::Int(n) => TermKind::Int(*n),
            TermKind::Str(s) => TermKind::Str(s.clone()),
            TermKind::Lam(y, body) => {
                if y == x {
                    TermKind::Lam(y.clone(), body.clone())
                } else {
                    TermKind::Lam(y.clone(), Box::new(body.subst(x, replacement)))
                }
            }
            TermKind::App(f, a) => TermKind::App(
                Box::new(f.subst(x, replacement)),
                Box::new(a.subst(x, replacement)),
            ),
            TermKind::BoxIntro(t) => TermKind::BoxIntro(Box::new(t.subst(x, replacement))),
            TermKind::TrustIntro(t) => TermKind::TrustIntro(Box::new(t.subst(x, replacement))),
            TermKind::Reveal(t) => TermKind::Reveal(Box::new(t.subst(x, replacement))),
            TermKind::LetBox(y, b, body) => {
                let b = Box::new(b.subst(x, replacement));
                if y == x {
                    TermKind::LetBox(y.clone(), b, body.clone())
                } else {
                    TermKind::LetBox(y.clone(), b, Box::new(body.subst(x, replacement)))
                }
            }
            TermKind::Endorse(b, y, body) => {
                let b = Box::new(b.subst(x, replacement));
                if y == x {
                    TermKind::Endorse(b, y.clone(), body.clone())
                } else {
                    TermKind::Endorse(b, y.clone(), Box::new(body.subst(x, replacement)))
                }
            }
            TermKind::Case(scrut, alts) => {
                let scrut = Box::new(scrut.subst(x, replacement));
                let alts = alts
                    .iter()
                    .map(|(pat, body)| {
                        if pat.bound_names().iter().any(|n| n == x) {
                            (pat.clone(), body.clone())
                        } else {
                            (pat.clone(), body.subst(x, replacement))
                        }
                    })
                    .collect();
                TermKind::Case(scrut, alts)
            }
            TermKind::Ctor(name, args) => TermKind::Ctor(
                name.clone(),
                args.iter().map(|a| a.subst(x, replacement)).collect(),
            ),
            TermKind::Prim(op, l, r) => TermKind::Prim(
                *op,
                Box::new(l.subst(x, replacement)),
                Box::new(r.subst(x, replacement)),
            ),
        };
        Term::new(kind, self.span)
    }

    /// A copy with every span zeroed, for structural comparisons.
    pub fn strip_spans(&self) -> Term {
        let kind = match &self.kind {
            TermKind::Var(x) => TermKind::Var(x.clone()),
            TermKind::Int(n) => TermKind::Int(*n),
            TermKind::Str(s) => TermKind::Str(s.clone()),
            TermKind::Lam(x, b) => TermKind::Lam(x.clone(), Box::new(b.strip_spans())),
            TermKind::App(f, a) => {
                TermKind::App(Box::new(f.strip_spans()), Box::new(a.strip_spans()))
            }
            TermKind::BoxIntro(t) => TermKind::BoxIntro(Box::new(t.strip_spans())),
            TermKind::TrustIntro(t) => TermKind::TrustIntro(Box::new(t.strip_spans())),
            TermKind::Reveal(t) => TermKind::Reveal(Box::new(t.strip_spans())),
            TermKind::LetBox(x, b, body) => TermKind::LetBox(
                x.clone(),
                Box::new(b.strip_spans()),
                Box::new(body.strip_spans()),
            ),
            TermKind::Endorse(b, x, body) => TermKind::Endorse(
                Box::new(b.strip_spans()),
                x.clone(),
                Box::new(body.strip_spans()),
            ),
            TermKind::Case(scrut, alts) => TermKind::Case(
                Box::new(scrut.strip_spans()),
                alts.iter()
                    .map(|(p, t)| (p.strip_spans(), t.strip_spans()))
                    .collect(),
            ),
            TermKind::Ctor(name, args) => TermKind::Ctor(
                name.clone(),
                args.iter().map(|a| a.strip_spans()).collect(),
            ),
            TermKind::Prim(op, l, r) => {
                TermKind::Prim(*op, Box::new(l.strip_spans()), Box::new(r.strip_spans()))
            }
        };
        Term::synth(kind)
    }
}

/// A pattern together with its source span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub kind: PatKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatKind {
    Var(String),
    Wild,
    Int(i64),
    Ctor(String, Vec<Pattern>),
    /// `[p]` — matches a box, binding inner variables at the box grade.
    Box(Box<Pattern>),
}

impl Pattern {
    pub fn new(kind: PatKind, span: Span) -> Pattern {
        Pattern { kind, span }
    }

    pub fn synth(kind: PatKind) -> Pattern {
        Pattern {
            kind,
            span: Span::default(),
        }
    }

    pub fn var(name: &str) -> Pattern {
        Pattern::synth(PatKind::Var(name.to_string()))
    }

    pub fn boxed(inner: Pattern) -> Pattern {
        Pattern::synth(PatKind::Box(Box::new(inner)))
    }

    pub fn bound_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        self.collect_names(&mut names);
        names
    }

    fn collect_names(&self, names: &mut Vec<String>) {
        match &self.kind {
            PatKind::Var(x) => names.push(x.clone()),
            PatKind::Wild | PatKind::Int(_) => {}
            PatKind::Ctor(_, subs) => {
                for p in subs {
                    p.collect_names(names);
                }
            }
            PatKind::Box(p) => p.collect_names(names),
        }
    }

    pub fn strip_spans(&self) -> Pattern {
        let kind = match &self.kind {
            PatKind::Var(x) => PatKind::Var(x.clone()),
            PatKind::Wild => PatKind::Wild,
            PatKind::Int(n) => PatKind::Int(*n),
            PatKind::Ctor(name, subs) => PatKind::Ctor(
                name.clone(),
                subs.iter().map(|p| p.strip_spans()).collect(),
            ),
            PatKind::Box(p) => PatKind::Box(Box::new(p.strip_spans())),
        };
        Pattern::synth(kind)
    }
}

/// A data declaration: a name and its constructors with field types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    pub ctors: Vec<(String, Vec<Type>)>,
    pub span: Span,
}

/// A function declaration: signature line plus a single defining equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDecl {
    pub name: String,
    pub signature: Type,
    pub params: Vec<Pattern>,
    pub body: Term,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Data(DataDecl),
    Fun(FunDecl),
}

/// An ordered list of declarations from one source file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub file: String,
    pub decls: Vec<Decl>,
}

impl Program {
    pub fn fun_decls(&self) -> impl Iterator<Item = &FunDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Fun(f) => Some(f),
            Decl::Data(_) => None,
        })
    }

    pub fn data_decls(&self) -> impl Iterator<Item = &DataDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Data(d) => Some(d),
            Decl::Fun(_) => None,
        })
    }

    pub fn find_fun(&self, name: &str) -> Option<&FunDecl> {
        self.fun_decls().find(|f| f.name == name)
    }

    pub fn strip_spans(&self) -> Program {
        Program {
            file: self.file.clone(),
            decls: self
                .decls
                .iter()
                .map(|d| match d {
                    Decl::Data(data) => Decl::Data(DataDecl {
                        name: data.name.clone(),
                        ctors: data.ctors.clone(),
                        span: Span::default(),
                    }),
                    Decl::Fun(f) => Decl::Fun(FunDecl {
                        name: f.name.clone(),
                        signature: f.signature.clone(),
                        params: f.params.iter().map(|p| p.strip_spans()).collect(),
                        body: f.body.strip_spans(),
                        span: Span::default(),
                    }),
                })
                .collect(),
        }
    }
}
