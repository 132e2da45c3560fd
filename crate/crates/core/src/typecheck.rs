//! Bidirectional type checking with usage synthesis.
//!
//! The base discipline is linear: every local variable bound by a plain
//! pattern or lambda must be used exactly once. Box elimination binds a
//! graded variable whose synthesised demand must approximate the box
//! grade. Box introduction is check-only and scales the usage of every
//! captured graded variable by the box grade; linear variables may not
//! appear under a promotion at all. The star modality has three rules:
//! introduction requires a closed term (top-level definitions count as
//! closed), `reveal` turns a trusted value into a public box, and
//! `endorse` temporarily rebinds a public box as trusted inside a body
//! that must itself produce a public box, so trust cannot escape.

use std::collections::BTreeMap;
use std::fmt;

use crate::semiring::{Grade, SemiringTag, TagMismatch};
use crate::syntax::{DataDecl, Decl, FunDecl, PatKind, Pattern, Program, Span, Term, TermKind, Type};

/// Diagnostic codes, stable across releases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCode {
    /// Structural misuse caught before typing (duplicates, unknown types).
    E001,
    /// Unbound variable or unknown constructor.
    E101,
    /// Type mismatch.
    E102,
    /// Linearity violation.
    E103,
    /// Grade violation (demand does not approximate supply).
    E104,
    /// Star introduction over a non-closed term.
    E105,
    /// Cross-semiring promotion.
    E106,
    /// Case alternatives synthesise different usage.
    E107,
    /// Usage entries with incompatible kinds or tags.
    E108,
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorCode::E001 => "E001",
            ErrorCode::E101 => "E101",
            ErrorCode::E102 => "E102",
            ErrorCode::E103 => "E103",
            ErrorCode::E104 => "E104",
            ErrorCode::E105 => "E105",
            ErrorCode::E106 => "E106",
            ErrorCode::E107 => "E107",
            ErrorCode::E108 => "E108",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub code: ErrorCode,
    pub span: Span,
    pub message: String,
    /// Source file, filled in by `check_program`.
    pub file: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl TypeError {
    fn new(code: ErrorCode, span: Span, message: String) -> TypeError {
        TypeError {
            code,
            span,
            message,
            file: String::new(),
            expected: None,
            actual: None,
        }
    }

    fn mismatch(span: Span, expected: &Type, actual: &Type) -> TypeError {
        let mut e = TypeError::new(
            ErrorCode::E102,
            span,
            format!("type mismatch: expected {}, found {}", expected, actual),
        );
        e.expected = Some(expected.to_string());
        e.actual = Some(actual.to_string());
        e
    }

    /// Fills in the span when the error was raised without one.
    fn or_span(mut self, span: Span) -> TypeError {
        if self.span == Span::default() {
            self.span = span;
        }
        self
    }

    /// Renders as `FILE:LINE:COL: error[CODE]: MESSAGE`.
    pub fn render(&self) -> String {
        format!(
            "{}:{}:{}: error[{}]: {}",
            self.file, self.span.start_line, self.span.start_col, self.code, self.message
        )
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

impl std::error::Error for TypeError {}

/// How a name is bound in the typing context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    /// Must be used exactly once and never under a promotion.
    Linear(Type),
    /// Arises from box elimination; usage is tracked as a grade.
    Graded(Type, SemiringTag),
    /// A top-level definition: closed, replicable, zero usage.
    Global(Type),
}

/// Synthesised usage for one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UsageEntry {
    Count(u64),
    Use(Grade),
}

/// Finite map from variable to synthesised usage; absent means unused.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UsageContext(BTreeMap<String, UsageEntry>);

impl UsageContext {
    pub fn new() -> UsageContext {
        UsageContext::default()
    }

    pub fn singleton(name: &str, entry: UsageEntry) -> UsageContext {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), entry);
        UsageContext(m)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&UsageEntry> {
        self.0.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &UsageEntry)> {
        self.0.iter()
    }

    fn remove_count(&mut self, name: &str) -> Result<u64, TypeError> {
        match self.0.remove(name) {
            None => Ok(0),
            Some(UsageEntry::Count(n)) => Ok(n),
            Some(UsageEntry::Use(_)) => Err(TypeError::new(
                ErrorCode::E108,
                Span::default(),
                format!("usage tag mismatch for '{}'", name),
            )),
        }
    }

    fn remove_grade(&mut self, name: &str, tag: SemiringTag) -> Result<Grade, TypeError> {
        match self.0.remove(name) {
            None => Ok(Grade::zero(tag)),
            Some(UsageEntry::Use(g)) if g.tag() == tag => Ok(g),
            Some(_) => Err(TypeError::new(
                ErrorCode::E108,
                Span::default(),
                format!("usage tag mismatch for '{}'", name),
            )),
        }
    }
}

/// Pointwise sum of two usage contexts: linear counts add, graded uses
/// combine through the semiring sum.
pub fn usage_add(left: &UsageContext, right: &UsageContext) -> Result<UsageContext, TypeError> {
    let mut out = left.0.clone();
    for (name, entry) in &right.0 {
        match out.get_mut(name) {
            None => {
                out.insert(name.clone(), entry.clone());
            }
            Some(UsageEntry::Count(n)) => match entry {
                UsageEntry::Count(m) => *n += m,
                UsageEntry::Use(_) => {
                    return Err(TypeError::new(
                        ErrorCode::E108,
                        Span::default(),
                        format!("usage tag mismatch for '{}'", name),
                    ));
                }
            },
            Some(UsageEntry::Use(g)) => match entry {
                UsageEntry::Use(h) => {
                    *g = g.add(*h).map_err(|e: TagMismatch| {
                        TypeError::new(
                            ErrorCode::E108,
                            Span::default(),
                            format!("usage tag mismatch for '{}': {}", name, e),
                        )
                    })?;
                }
                UsageEntry::Count(_) => {
                    return Err(TypeError::new(
                        ErrorCode::E108,
                        Span::default(),
                        format!("usage tag mismatch for '{}'", name),
                    ));
                }
            },
        }
    }
    Ok(UsageContext(out))
}

/// Scales a usage context by a box grade, as promotion demands. Linear
/// entries are rejected outright; graded entries must live in the same
/// semiring as the box grade.
pub fn usage_scale(grade: Grade, usage: &UsageContext) -> Result<UsageContext, TypeError> {
    let mut out = BTreeMap::new();
    for (name, entry) in &usage.0 {
        match entry {
            UsageEntry::Count(n) => {
                if *n > 0 {
                    return Err(TypeError::new(
                        ErrorCode::E103,
                        Span::default(),
                        format!("linear variable '{}' used under promotion", name),
                    ));
                }
            }
            UsageEntry::Use(g) => {
                if g.tag() != grade.tag() {
                    return Err(TypeError::new(
                        ErrorCode::E106,
                        Span::default(),
                        format!(
                            "cross-semiring promotion: box grade {} is a {} grade but '{}' is used in the {} semiring",
                            grade,
                            grade.tag(),
                            name,
                            g.tag()
                        ),
                    ));
                }
                let scaled = grade.mul(*g).expect("tags checked above");
                out.insert(name.clone(), UsageEntry::Use(scaled));
            }
        }
    }
    Ok(UsageContext(out))
}

/// Structural subtyping driven by grade approximation: a box can be used
/// at any demand the supplied grade approximates, functions are
/// contravariant in their domain, and the star modality is invariant.
pub fn type_leq(actual: &Type, expected: &Type) -> bool {
    match (actual, expected) {
        (Type::Int, Type::Int) | (Type::Str, Type::Str) => true,
        (Type::Data(a), Type::Data(b)) => a == b,
        (Type::Fun(a_dom, a_cod), Type::Fun(e_dom, e_cod)) => {
            type_leq(e_dom, a_dom) && type_leq(a_cod, e_cod)
        }
        (Type::Box(supply, a), Type::Box(demand, b)) => {
            demand.leq(*supply).unwrap_or(false) && type_leq(a, b)
        }
        (Type::Star(a), Type::Star(b)) => a == b,
        _ => false,
    }
}

#[derive(Clone, Debug)]
enum LocalBinding {
    Linear(Type),
    Graded(Type, SemiringTag),
}

#[derive(Clone, Debug)]
struct CtorInfo {
    data: String,
    fields: Vec<Type>,
}

/// A typing context: top-level signatures, data constructors, and a
/// scope stack of local bindings.
#[derive(Clone, Debug, Default)]
pub struct Ctx {
    globals: BTreeMap<String, Type>,
    ctors: BTreeMap<String, CtorInfo>,
    datas: Vec<String>,
    locals: Vec<(String, LocalBinding)>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn bind(&mut self, name: &str, binding: Binding) {
        match binding {
            Binding::Linear(ty) => self
                .locals
                .push((name.to_string(), LocalBinding::Linear(ty))),
            Binding::Graded(ty, tag) => self
                .locals
                .push((name.to_string(), LocalBinding::Graded(ty, tag))),
            Binding::Global(ty) => {
                self.globals.insert(name.to_string(), ty);
            }
        }
    }

    fn lookup_local(&self, name: &str) -> Option<&LocalBinding> {
        self.locals
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b)
    }

    fn is_local(&self, name: &str) -> bool {
        self.lookup_local(name).is_some()
    }

    fn data_declared(&self, name: &str) -> bool {
        self.datas.iter().any(|d| d == name)
    }
}

enum Supply {
    Linear,
    Graded(Grade),
}

struct PatternBinding {
    name: String,
    binding: LocalBinding,
    supply: Supply,
    span: Span,
}

fn infer(ctx: &mut Ctx, t: &Term) -> Result<(Type, UsageContext), TypeError> {
    match &t.kind {
        TermKind::Var(x) => {
            if let Some(binding) = ctx.lookup_local(x) {
                match binding {
                    LocalBinding::Linear(ty) => Ok((
                        ty.clone(),
                        UsageContext::singleton(x, UsageEntry::Count(1)),
                    )),
                    LocalBinding::Graded(ty, tag) => Ok((
                        ty.clone(),
                        UsageContext::singleton(x, UsageEntry::Use(Grade::one(*tag))),
                    )),
                }
            } else if let Some(sig) = ctx.globals.get(x) {
                Ok((sig.clone(), UsageContext::new()))
            } else {
                Err(TypeError::new(
                    ErrorCode::E101,
                    t.span,
                    format!("unbound variable '{}'", x),
                ))
            }
        }
        TermKind::Int(_) => Ok((Type::Int, UsageContext::new())),
        TermKind::Str(_) => Ok((Type::Str, UsageContext::new())),
        TermKind::Lam(..) => Err(TypeError::new(
            ErrorCode::E102,
            t.span,
            "cannot infer the type of a lambda; check it against a function type".to_string(),
        )),
        TermKind::BoxIntro(..) => Err(TypeError::new(
            ErrorCode::E102,
            t.span,
            "cannot infer the grade of a box introduction; check it against a box type"
                .to_string(),
        )),
        TermKind::App(fun, arg) => {
            let (fun_ty, fun_usage) = infer(ctx, fun)?;
            let Type::Fun(dom, cod) = fun_ty else {
                return Err(TypeError::new(
                    ErrorCode::E102,
                    fun.span,
                    format!("expected a function, found {}", fun_ty),
                ));
            };
            let arg_usage = check(ctx, arg, &dom)?;
            let usage = usage_add(&fun_usage, &arg_usage).map_err(|e| e.or_span(t.span))?;
            Ok((*cod, usage))
        }
        TermKind::Reveal(inner) => {
            let (inner_ty, usage) = infer(ctx, inner)?;
            let Type::Star(payload) = inner_ty else {
                return Err(TypeError::new(
                    ErrorCode::E102,
                    inner.span,
                    format!("'reveal' expects a trusted value, found {}", inner_ty),
                ));
            };
            Ok((Type::Box(Grade::SecPublic, payload), usage))
        }
        TermKind::TrustIntro(inner) => {
            require_closed(ctx, inner, t.span)?;
            let saved = std::mem::take(&mut ctx.locals);
            let result = infer(ctx, inner);
            ctx.locals = saved;
            let (payload_ty, _usage) = result?;
            Ok((Type::star(payload_ty), UsageContext::new()))
        }
        TermKind::LetBox(x, bound, body) => check_let_box(ctx, t, x, bound, body, None),
        TermKind::Endorse(bound, x, body) => check_endorse(ctx, t, x, bound, body, None),
        TermKind::Case(scrut, alts) => check_case(ctx, t, scrut, alts, None),
        TermKind::Ctor(name, args) => {
            let info = ctx.ctors.get(name).cloned().ok_or_else(|| {
                TypeError::new(
                    ErrorCode::E101,
                    t.span,
                    format!("unknown constructor '{}'", name),
                )
            })?;
            if args.len() != info.fields.len() {
                return Err(TypeError::new(
                    ErrorCode::E102,
                    t.span,
                    format!(
                        "constructor '{}' expects {} arguments, found {}",
                        name,
                        info.fields.len(),
                        args.len()
                    ),
                ));
            }
            let mut usage = UsageContext::new();
            for (arg, field_ty) in args.iter().zip(&info.fields) {
                let arg_usage = check(ctx, arg, field_ty)?;
                usage = usage_add(&usage, &arg_usage).map_err(|e| e.or_span(arg.span))?;
            }
            Ok((Type::Data(info.data), usage))
        }
        TermKind::Prim(op, left, right) => {
            let operand_ty = match op.symbol() {
                "++" => Type::Str,
                _ => Type::Int,
            };
            let result_ty = match op.symbol() {
                "++" => Type::Str,
                _ => Type::Int,
            };
            let left_usage = check(ctx, left, &operand_ty)?;
            let right_usage = check(ctx, right, &operand_ty)?;
            let usage = usage_add(&left_usage, &right_usage).map_err(|e| e.or_span(t.span))?;
            Ok((result_ty, usage))
        }
    }
}

/// Box elimination: the bound part always synthesises its type; the body
/// is checked against the expected type when one is known.
fn check_let_box(
    ctx: &mut Ctx,
    t: &Term,
    x: &str,
    bound: &Term,
    body: &Term,
    expected: Option<&Type>,
) -> Result<(Type, UsageContext), TypeError> {
    let (bound_ty, bound_usage) = infer(ctx, bound)?;
    let Type::Box(grade, payload) = bound_ty else {
        return Err(TypeError::new(
            ErrorCode::E102,
            bound.span,
            format!("'let [{}]' expects a boxed value, found {}", x, bound_ty),
        ));
    };
    ctx.locals
        .push((x.to_string(), LocalBinding::Graded(*payload, grade.tag())));
    let result = match expected {
        Some(ty) => check(ctx, body, ty).map(|u| (ty.clone(), u)),
        None => infer(ctx, body),
    };
    ctx.locals.pop();
    let (body_ty, mut body_usage) = result?;
    let demand = body_usage
        .remove_grade(x, grade.tag())
        .map_err(|e| e.or_span(t.span))?;
    if !demand.leq(grade).map_err(tag_error(t.span, x))? {
        return Err(grade_violation(t.span, x, demand, grade));
    }
    let usage = usage_add(&bound_usage, &body_usage).map_err(|e| e.or_span(t.span))?;
    Ok((body_ty, usage))
}

/// Endorsement: the bound part must be exactly a public box, the bound
/// variable is a linear trusted assumption, and the body must produce a
/// public box so the temporary trust cannot escape.
fn check_endorse(
    ctx: &mut Ctx,
    t: &Term,
    x: &str,
    bound: &Term,
    body: &Term,
    expected: Option<&Type>,
) -> Result<(Type, UsageContext), TypeError> {
    let body_target = match expected {
        None => None,
        Some(Type::Box(demand, inner)) if demand.leq(Grade::SecPublic) == Ok(true) => {
            Some(Type::Box(Grade::SecPublic, inner.clone()))
        }
        Some(other) => {
            return Err(TypeError::new(
                ErrorCode::E102,
                t.span,
                format!("'endorse' produces a public box, not {}", other),
            ));
        }
    };
    let (bound_ty, bound_usage) = infer(ctx, bound)?;
    let payload = match bound_ty {
        Type::Box(Grade::SecPublic, payload) => payload,
        other => {
            return Err(TypeError::new(
                ErrorCode::E102,
                bound.span,
                format!(
                    "'endorse' expects a value of a public box type, found {}",
                    other
                ),
            ));
        }
    };
    ctx.locals
        .push((x.to_string(), LocalBinding::Linear(Type::Star(payload))));
    let result = match &body_target {
        Some(target) => check(ctx, body, target).map(|u| (target.clone(), u)),
        None => infer(ctx, body),
    };
    ctx.locals.pop();
    let (body_ty, mut body_usage) = result?;
    if !matches!(body_ty, Type::Box(Grade::SecPublic, _)) {
        return Err(TypeError::new(
            ErrorCode::E102,
            body.span,
            format!(
                "the body of 'endorse' must produce a public box, found {}",
                body_ty
            ),
        ));
    }
    let count = body_usage.remove_count(x).map_err(|e| e.or_span(t.span))?;
    if count != 1 {
        return Err(TypeError::new(
            ErrorCode::E103,
            t.span,
            format!(
                "endorsed variable '{}' must be used exactly once (used {} times)",
                x, count
            ),
        ));
    }
    let usage = usage_add(&bound_usage, &body_usage).map_err(|e| e.or_span(t.span))?;
    Ok((body_ty, usage))
}

/// Case analysis: alternative bodies are checked against the expected
/// type when one is known and must otherwise synthesise identical types;
/// either way every alternative must use the outer context identically.
fn check_case(
    ctx: &mut Ctx,
    t: &Term,
    scrut: &Term,
    alts: &[(Pattern, Term)],
    expected: Option<&Type>,
) -> Result<(Type, UsageContext), TypeError> {
    let (scrut_ty, scrut_usage) = infer(ctx, scrut)?;
    if !matches!(scrut_ty, Type::Data(_) | Type::Int) {
        return Err(TypeError::new(
            ErrorCode::E102,
            scrut.span,
            format!(
                "case scrutinee must be a data type or Int, found {}",
                scrut_ty
            ),
        ));
    }
    let mut combined: Option<(Type, UsageContext)> = None;
    for (pat, body) in alts {
        // A top-level wildcard is a pure dispatch arm: the scrutinee
        // usage already accounts for the consumption. Wildcards at
        // binding positions (parameters, fields) stay rejected.
        let bindings = if matches!(pat.kind, PatKind::Wild) {
            Vec::new()
        } else {
            bind_pattern(ctx, pat, &scrut_ty, None)?
        };
        let depth = ctx.locals.len();
        for b in &bindings {
            ctx.locals.push((b.name.clone(), b.binding.clone()));
        }
        let result = match expected {
            Some(ty) => check(ctx, body, ty).map(|u| (ty.clone(), u)),
            None => infer(ctx, body),
        };
        ctx.locals.truncate(depth);
        let (body_ty, mut body_usage) = result?;
        discharge_all(&mut body_usage, &bindings)?;
        match &combined {
            None => combined = Some((body_ty, body_usage)),
            Some((ty0, usage0)) => {
                if expected.is_none() && body_ty != *ty0 {
                    return Err(TypeError::new(
                        ErrorCode::E102,
                        body.span,
                        format!(
                            "case alternatives have different types: {} and {}",
                            ty0, body_ty
                        ),
                    ));
                }
                if body_usage != *usage0 {
                    let name = first_usage_difference(usage0, &body_usage);
                    return Err(TypeError::new(
                        ErrorCode::E107,
                        body.span,
                        format!("case alternatives use '{}' inconsistently", name),
                    ));
                }
            }
        }
    }
    let (ty, usage) = combined.expect("parser guarantees at least one alternative");
    let usage = usage_add(&scrut_usage, &usage).map_err(|e| e.or_span(t.span))?;
    Ok((ty, usage))
}

fn check(ctx: &mut Ctx, t: &Term, expected: &Type) -> Result<UsageContext, TypeError> {
    match (&t.kind, expected) {
        (TermKind::LetBox(x, bound, body), _) => {
            check_let_box(ctx, t, x, bound, body, Some(expected)).map(|(_, u)| u)
        }
        (TermKind::Endorse(bound, x, body), _) => {
            check_endorse(ctx, t, x, bound, body, Some(expected)).map(|(_, u)| u)
        }
        (TermKind::Case(scrut, alts), _) => {
            check_case(ctx, t, scrut, alts, Some(expected)).map(|(_, u)| u)
        }
        (TermKind::Lam(x, body), Type::Fun(dom, cod)) => {
            ctx.locals
                .push((x.clone(), LocalBinding::Linear((**dom).clone())));
            let result = check(ctx, body, cod);
            ctx.locals.pop();
            let mut usage = result?;
            let count = usage.remove_count(x).map_err(|e| e.or_span(t.span))?;
            if count != 1 {
                return Err(TypeError::new(
                    ErrorCode::E103,
                    t.span,
                    format!(
                        "linear variable '{}' used {} times (must be exactly 1)",
                        x, count
                    ),
                ));
            }
            Ok(usage)
        }
        (TermKind::Lam(..), _) => Err(TypeError::new(
            ErrorCode::E102,
            t.span,
            format!("a lambda cannot have type {}", expected),
        )),
        (TermKind::BoxIntro(inner), Type::Box(grade, payload)) => {
            let usage = check(ctx, inner, payload)?;
            usage_scale(*grade, &usage).map_err(|e| e.or_span(t.span))
        }
        (TermKind::BoxIntro(..), _) => Err(TypeError::new(
            ErrorCode::E102,
            t.span,
            format!("a box introduction cannot have type {}", expected),
        )),
        (TermKind::TrustIntro(inner), Type::Star(payload)) => {
            require_closed(ctx, inner, t.span)?;
            let saved = std::mem::take(&mut ctx.locals);
            let result = check(ctx, inner, payload);
            ctx.locals = saved;
            result?;
            Ok(UsageContext::new())
        }
        (TermKind::TrustIntro(..), _) => Err(TypeError::new(
            ErrorCode::E102,
            t.span,
            format!("'trust' cannot have type {}", expected),
        )),
        _ => {
            let (actual, usage) = infer(ctx, t)?;
            if !type_leq(&actual, expected) {
                return Err(TypeError::mismatch(t.span, expected, &actual));
            }
            Ok(usage)
        }
    }
}

/// The star-introduction premise: the payload may mention top-level
/// definitions but no local variable of any kind.
fn require_closed(ctx: &Ctx, body: &Term, span: Span) -> Result<(), TypeError> {
    for name in body.free_vars() {
        if ctx.is_local(&name) {
            return Err(TypeError::new(
                ErrorCode::E105,
                span,
                format!("'trust' requires a closed term: '{}' is bound locally", name),
            ));
        }
    }
    Ok(())
}

fn tag_error(span: Span, name: &str) -> impl Fn(TagMismatch) -> TypeError + '_ {
    move |e| {
        TypeError::new(
            ErrorCode::E108,
            span,
            format!("usage tag mismatch for '{}': {}", name, e),
        )
    }
}

fn grade_violation(span: Span, name: &str, demand: Grade, supply: Grade) -> TypeError {
    let mut e = TypeError::new(
        ErrorCode::E104,
        span,
        format!(
            "grade violation: '{}' used at {} but bound at {}",
            name, demand, supply
        ),
    );
    e.expected = Some(supply.to_string());
    e.actual = Some(demand.to_string());
    e
}

/// Binds the variables of a pattern matched against a type. `boxes` is
/// the product of the grades of all enclosing box patterns: variables
/// under no box bind linearly, variables under boxes bind graded at that
/// product, which is how nested box patterns realise grade composition.
fn bind_pattern(
    ctx: &Ctx,
    pat: &Pattern,
    ty: &Type,
    boxes: Option<Grade>,
) -> Result<Vec<PatternBinding>, TypeError> {
    match (&pat.kind, ty) {
        (PatKind::Var(name), _) => {
            let (binding, supply) = match boxes {
                None => (LocalBinding::Linear(ty.clone()), Supply::Linear),
                Some(g) => (
                    LocalBinding::Graded(ty.clone(), g.tag()),
                    Supply::Graded(g),
                ),
            };
            Ok(vec![PatternBinding {
                name: name.clone(),
                binding,
                supply,
                span: pat.span,
            }])
        }
        (PatKind::Wild, _) => match boxes {
            None => Err(TypeError::new(
                ErrorCode::E103,
                pat.span,
                "cannot discard a linear value with '_'".to_string(),
            )),
            Some(g) => {
                let zero = Grade::zero(g.tag());
                if !zero.leq(g).map_err(tag_error(pat.span, "_"))? {
                    return Err(TypeError::new(
                        ErrorCode::E104,
                        pat.span,
                        format!("discarding under grade {} requires 0 \u{2291} {}", g, g),
                    ));
                }
                Ok(vec![])
            }
        },
        (PatKind::Int(_), Type::Int) => match boxes {
            None => Ok(vec![]),
            Some(g) => {
                let one = Grade::one(g.tag());
                if !one.leq(g).map_err(tag_error(pat.span, "_"))? {
                    return Err(TypeError::new(
                        ErrorCode::E104,
                        pat.span,
                        format!("matching a literal under grade {} requires 1 \u{2291} {}", g, g),
                    ));
                }
                Ok(vec![])
            }
        },
        (PatKind::Int(_), other) => Err(TypeError::new(
            ErrorCode::E102,
            pat.span,
            format!("integer pattern cannot match {}", other),
        )),
        (PatKind::Box(inner), Type::Box(grade, payload)) => {
            let combined = match boxes {
                None => *grade,
                Some(g) => g.mul(*grade).map_err(tag_error(pat.span, "_"))?,
            };
            bind_pattern(ctx, inner, payload, Some(combined))
        }
        (PatKind::Box(_), other) => Err(TypeError::new(
            ErrorCode::E102,
            pat.span,
            format!("box pattern cannot match {}", other),
        )),
        (PatKind::Ctor(name, subs), Type::Data(data)) => {
            let info = ctx.ctors.get(name).ok_or_else(|| {
                TypeError::new(
                    ErrorCode::E101,
                    pat.span,
                    format!("unknown constructor '{}'", name),
                )
            })?;
            if &info.data != data {
                return Err(TypeError::new(
                    ErrorCode::E102,
                    pat.span,
                    format!("constructor '{}' builds {}, not {}", name, info.data, data),
                ));
            }
            if subs.len() != info.fields.len() {
                return Err(TypeError::new(
                    ErrorCode::E102,
                    pat.span,
                    format!(
                        "constructor '{}' expects {} arguments, found {}",
                        name,
                        info.fields.len(),
                        subs.len()
                    ),
                ));
            }
            if let Some(g) = boxes {
                let one = Grade::one(g.tag());
                if !one.leq(g).map_err(tag_error(pat.span, "_"))? {
                    return Err(TypeError::new(
                        ErrorCode::E104,
                        pat.span,
                        format!(
                            "matching a constructor under grade {} requires 1 \u{2291} {}",
                            g, g
                        ),
                    ));
                }
            }
            let fields = info.fields.clone();
            let mut out = Vec::new();
            for (sub, field_ty) in subs.iter().zip(&fields) {
                out.extend(bind_pattern(ctx, sub, field_ty, boxes)?);
            }
            Ok(out)
        }
        (PatKind::Ctor(..), other) => Err(TypeError::new(
            ErrorCode::E102,
            pat.span,
            format!("constructor pattern cannot match {}", other),
        )),
    }
}

/// Validates and removes the pattern's binders from a usage context,
/// innermost binder first so shadowed names resolve correctly.
fn discharge_all(usage: &mut UsageContext, bindings: &[PatternBinding]) -> Result<(), TypeError> {
    for b in bindings.iter().rev() {
        match &b.supply {
            Supply::Linear => {
                let count = usage.remove_count(&b.name).map_err(|e| e.or_span(b.span))?;
                if count != 1 {
                    return Err(TypeError::new(
                        ErrorCode::E103,
                        b.span,
                        format!(
                            "linear variable '{}' used {} times (must be exactly 1)",
                            b.name, count
                        ),
                    ));
                }
            }
            Supply::Graded(g) => {
                let demand = usage
                    .remove_grade(&b.name, g.tag())
                    .map_err(|e| e.or_span(b.span))?;
                if !demand.leq(*g).map_err(tag_error(b.span, &b.name))? {
                    return Err(grade_violation(b.span, &b.name, demand, *g));
                }
            }
        }
    }
    Ok(())
}

fn first_usage_difference(left: &UsageContext, right: &UsageContext) -> String {
    for (name, entry) in left.iter() {
        if right.get(name) != Some(entry) {
            return name.clone();
        }
    }
    for (name, _) in right.iter() {
        if left.get(name).is_none() {
            return name.clone();
        }
    }
    "<none>".to_string()
}

/// Checks that every data type mentioned in a type is declared.
fn validate_type(ctx: &Ctx, ty: &Type, span: Span) -> Result<(), TypeError> {
    match ty {
        Type::Int | Type::Str => Ok(()),
        Type::Data(name) => {
            if ctx.data_declared(name) {
                Ok(())
            } else {
                Err(TypeError::new(
                    ErrorCode::E001,
                    span,
                    format!("unknown type '{}'", name),
                ))
            }
        }
        Type::Fun(dom, cod) => {
            validate_type(ctx, dom, span)?;
            validate_type(ctx, cod, span)
        }
        Type::Box(_, inner) | Type::Star(inner) => validate_type(ctx, inner, span),
    }
}

fn declare_data(ctx: &mut Ctx, decl: &DataDecl) -> Result<(), TypeError> {
    if decl.name == "Int" || decl.name == "String" {
        return Err(TypeError::new(
            ErrorCode::E001,
            decl.span,
            format!("'{}' is a reserved type name", decl.name),
        ));
    }
    if ctx.data_declared(&decl.name) {
        return Err(TypeError::new(
            ErrorCode::E001,
            decl.span,
            format!("duplicate data type '{}'", decl.name),
        ));
    }
    ctx.datas.push(decl.name.clone());
    for (ctor, fields) in &decl.ctors {
        if ctx.ctors.contains_key(ctor) {
            return Err(TypeError::new(
                ErrorCode::E001,
                decl.span,
                format!("duplicate constructor '{}'", ctor),
            ));
        }
        for field in fields {
            validate_type(ctx, field, decl.span)?;
        }
        ctx.ctors.insert(
            ctor.clone(),
            CtorInfo {
                data: decl.name.clone(),
                fields: fields.clone(),
            },
        );
    }
    Ok(())
}

fn check_fun(ctx: &mut Ctx, decl: &FunDecl) -> Result<(), TypeError> {
    validate_type(ctx, &decl.signature, decl.span)?;
    let mut bindings = Vec::new();
    let mut remaining = decl.signature.clone();
    for pat in &decl.params {
        let Type::Fun(dom, cod) = remaining else {
            return Err(TypeError::new(
                ErrorCode::E102,
                pat.span,
                format!("too many parameters for signature {}", decl.signature),
            ));
        };
        bindings.extend(bind_pattern(ctx, pat, &dom, None)?);
        remaining = *cod;
    }
    let depth = ctx.locals.len();
    for b in &bindings {
        ctx.locals.push((b.name.clone(), b.binding.clone()));
    }
    let result = check(ctx, &decl.body, &remaining);
    ctx.locals.truncate(depth);
    let mut usage = result?;
    discharge_all(&mut usage, &bindings)?;
    Ok(())
}

/// Checks every declaration of a program in order and returns the
/// signature environment. Top-level names are in scope in their own and
/// all later bodies.
pub fn check_program(program: &Program) -> Result<BTreeMap<String, Type>, TypeError> {
    let mut ctx = Ctx::new();
    let mut run = || -> Result<(), TypeError> {
        for decl in &program.decls {
            match decl {
                Decl::Data(d) => declare_data(&mut ctx, d)?,
                Decl::Fun(f) => {
                    if ctx.globals.contains_key(&f.name) {
                        return Err(TypeError::new(
                            ErrorCode::E001,
                            f.span,
                            format!("duplicate definition of '{}'", f.name),
                        ));
                    }
                    ctx.globals.insert(f.name.clone(), f.signature.clone());
                    check_fun(&mut ctx, f)?;
                }
            }
        }
        Ok(())
    };
    run().map_err(|mut e| {
        if e.file.is_empty() {
            e.file = program.file.clone();
        }
        e
    })?;
    Ok(ctx.globals)
}

/// Synthesises a type and usage for a term in the given context.
pub fn infer_term(ctx: &Ctx, t: &Term) -> Result<(Type, UsageContext), TypeError> {
    let mut ctx = ctx.clone();
    infer(&mut ctx, t)
}

/// Checks a term against an expected type, returning its usage.
pub fn check_term(ctx: &Ctx, t: &Term, expected: &Type) -> Result<UsageContext, TypeError> {
    let mut ctx = ctx.clone();
    check(&mut ctx, t, expected)
}

/// A context extended with the declarations of a checked program, for
/// checking standalone terms that mention its globals and constructors.
pub fn program_ctx(program: &Program) -> Result<Ctx, TypeError> {
    let mut ctx = Ctx::new();
    for decl in &program.decls {
        match decl {
            Decl::Data(d) => declare_data(&mut ctx, d)?,
            Decl::Fun(f) => {
                ctx.globals.insert(f.name.clone(), f.signature.clone());
            }
        }
    }
    Ok(ctx)
}
