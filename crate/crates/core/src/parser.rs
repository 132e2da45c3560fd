//! Parser for the `.gg` surface syntax.
//!
//! The grammar is layout-insensitive except for one rule: declarations
//! start at column 1, so inside a declaration any token at column 1 marks
//! the end of that declaration. Comments run from `--` to end of line.

use std::fmt;

use crate::semiring::Grade;
use crate::syntax::{
    DataDecl, Decl, FunDecl, PatKind, Pattern, Program, Span, Term, TermKind, Type,
};
use crate::syntax::PrimOp;

/// A syntax error: what was expected and what was found instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub span: Span,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    /// Renders as `FILE:LINE:COL: error[E001]: MESSAGE`.
    pub fn render(&self) -> String {
        format!(
            "{}:{}:{}: error[E001]: {}",
            self.file, self.span.start_line, self.span.start_col, self
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LowerId(String),
    UpperId(String),
    Int(i64),
    Str(String),
    // keywords
    Data,
    Where,
    Let,
    In,
    Endorse,
    As,
    Reveal,
    Trust,
    Case,
    Of,
    // punctuation and operators
    Colon,
    Semi,
    Arrow,
    Assign,
    EqEq,
    Backslash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    PlusPlus,
    Minus,
    Star,
    Slash,
    Pipe,
    Underscore,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    text: String,
    span: Span,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
    file: String,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, file: &str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
            file: file.to_string(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, span: Span, expected: &str, found: String) -> ParseError {
        ParseError {
            file: self.file.clone(),
            span,
            expected: vec![expected.to_string()],
            found,
        }
    }

    fn here(&self) -> Span {
        Span::new(self.line, self.col, self.line, self.col + 1)
    }

    fn tokenize(mut self) -> Result<(Vec<Token>, Span), ParseError> {
        let mut out = Vec::new();
        loop {
            // skip whitespace and comments
            loop {
                match self.chars.peek() {
                    Some(' ' | '\t' | '\r' | '\n') => {
                        self.bump();
                    }
                    Some('-') => {
                        let mut ahead = self.chars.clone();
                        ahead.next();
                        if ahead.peek() == Some(&'-') {
                            while let Some(&c) = self.chars.peek() {
                                if c == '\n' {
                                    break;
                                }
                                self.bump();
                            }
                        } else {
                            break;
                        }
                    }
                    _ => break,
                }
            }
            let (start_line, start_col) = (self.line, self.col);
            let c = match self.chars.peek() {
                Some(&c) => c,
                None => return Ok((out, self.here())),
            };
            let mut text = String::new();
            let tok = if c.is_ascii_digit() {
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                let span = Span::new(start_line, start_col, self.line, self.col);
                let n: i64 = text
                    .parse()
                    .map_err(|_| self.error(span, "integer literal", format!("'{}'", text)))?;
                Tok::Int(n)
            } else if c.is_ascii_alphabetic() {
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        text.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                match text.as_str() {
                    "data" => Tok::Data,
                    "where" => Tok::Where,
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    "endorse" => Tok::Endorse,
                    "as" => Tok::As,
                    "reveal" => Tok::Reveal,
                    "trust" => Tok::Trust,
                    "case" => Tok::Case,
                    "of" => Tok::Of,
                    _ if c.is_ascii_uppercase() => Tok::UpperId(text.clone()),
                    _ => Tok::LowerId(text.clone()),
                }
            } else if c == '"' {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.chars.peek() {
                        None | Some('\n') => {
                            let span = Span::new(start_line, start_col, self.line, self.col);
                            let found = if self.chars.peek().is_none() {
                                "end of input".to_string()
                            } else {
                                "end of line".to_string()
                            };
                            return Err(self.error(span, "closing '\"'", found));
                        }
                        Some('"') => {
                            self.bump();
                            break;
                        }
                        Some('\\') => {
                            self.bump();
                            let esc = self.bump();
                            match esc {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                other => {
                                    let span =
                                        Span::new(self.line, self.col.saturating_sub(1), self.line, self.col);
                                    return Err(self.error(
                                        span,
                                        "escape '\\\"', '\\\\' or '\\n'",
                                        match other {
                                            Some(c) => format!("'\\{}'", c),
                                            None => "end of input".to_string(),
                                        },
                                    ));
                                }
                            }
                        }
                        Some(&c) => {
                            s.push(c);
                            self.bump();
                        }
                    }
                }
                text = format!("{:?}", s);
                Tok::Str(s)
            } else if c == '_' {
                self.bump();
                text.push('_');
                if let Some(&d) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        let span = Span::new(start_line, start_col, self.line, self.col + 1);
                        return Err(self.error(span, "'_' as a whole pattern", format!("'_{}'", d)));
                    }
                }
                Tok::Underscore
            } else {
                self.bump();
                text.push(c);
                let two = |lexer: &mut Lexer<'a>, next: char, text: &mut String| -> bool {
                    if lexer.chars.peek() == Some(&next) {
                        lexer.bump();
                        text.push(next);
                        true
                    } else {
                        false
                    }
                };
                match c {
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '=' => {
                        if two(&mut self, '=', &mut text) {
                            Tok::EqEq
                        } else {
                            Tok::Assign
                        }
                    }
                    '-' => {
                        if two(&mut self, '>', &mut text) {
                            Tok::Arrow
                        } else {
                            Tok::Minus
                        }
                    }
                    '+' => {
                        if two(&mut self, '+', &mut text) {
                            Tok::PlusPlus
                        } else {
                            Tok::Plus
                        }
                    }
                    '\\' => Tok::Backslash,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '|' => Tok::Pipe,
                    other => {
                        let span = Span::new(start_line, start_col, self.line, self.col);
                        return Err(self.error(span, "a token", format!("'{}'", other)));
                    }
                }
            };
            let span = Span::new(start_line, start_col, self.line, self.col);
            out.push(Token { tok, text, span });
        }
    }
}

struct Parser {
    file: String,
    tokens: Vec<Token>,
    pos: usize,
    eof: Span,
    /// When true, tokens at column 1 end the current declaration.
    layout: bool,
}

impl Parser {
    fn new(text: &str, file: &str, layout: bool) -> Result<Parser, ParseError> {
        let (tokens, eof) = Lexer::new(text, file).tokenize()?;
        Ok(Parser {
            file: file.to_string(),
            tokens,
            pos: 0,
            eof,
            layout,
        })
    }

    /// The next token, unless it opens a new declaration.
    fn peek(&self) -> Option<&Token> {
        let t = self.tokens.get(self.pos)?;
        if self.layout && t.span.start_col == 1 {
            None
        } else {
            Some(t)
        }
    }

    fn peek_raw(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn prev_span(&self) -> Span {
        if self.pos == 0 {
            self.eof
        } else {
            self.tokens[self.pos - 1].span
        }
    }

    fn boundary_span(&self) -> Span {
        self.peek_raw().map(|t| t.span).unwrap_or(self.eof)
    }

    fn found_desc(&self) -> String {
        match self.tokens.get(self.pos) {
            None => "end of input".to_string(),
            Some(t) if self.layout && t.span.start_col == 1 => "end of declaration".to_string(),
            Some(t) => format!("'{}'", t.text),
        }
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            file: self.file.clone(),
            span: self.boundary_span(),
            expected: vec![expected.to_string()],
            found: self.found_desc(),
        })
    }

    fn expect(&mut self, tok: Tok, desc: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                let span = t.span;
                self.pos += 1;
                Ok(span)
            }
            _ => self.err(desc),
        }
    }

    fn lower_id(&mut self, desc: &str) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::LowerId(name),
                span,
                ..
            }) => {
                let out = (name.clone(), *span);
                self.pos += 1;
                Ok(out)
            }
            _ => self.err(desc),
        }
    }

    fn upper_id(&mut self, desc: &str) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::UpperId(name),
                span,
                ..
            }) => {
                let out = (name.clone(), *span);
                self.pos += 1;
                Ok(out)
            }
            _ => self.err(desc),
        }
    }

    // ----- types -----

    fn type_(&mut self) -> Result<Type, ParseError> {
        let dom = self.btype()?;
        if matches!(self.peek(), Some(t) if t.tok == Tok::Arrow) {
            self.pos += 1;
            let cod = self.type_()?;
            Ok(Type::fun(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn btype(&mut self) -> Result<Type, ParseError> {
        let mut ty = self.atype()?;
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::LBracket) => {
                    self.pos += 1;
                    let grade = self.grade()?;
                    self.expect(Tok::RBracket, "']'")?;
                    ty = Type::boxed(grade, ty);
                }
                Some(Tok::Star) => {
                    self.pos += 1;
                    self.expect(Tok::LBrace, "'{'")?;
                    match self.peek() {
                        Some(Token {
                            tok: Tok::UpperId(name),
                            ..
                        }) if name == "Trusted" => {
                            self.pos += 1;
                        }
                        _ => return self.err("'Trusted'"),
                    }
                    self.expect(Tok::RBrace, "'}'")?;
                    ty = Type::star(ty);
                }
                _ => break,
            }
        }
        Ok(ty)
    }

    fn atype(&mut self) -> Result<Type, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::UpperId(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "Int" => Type::Int,
                    "String" => Type::Str,
                    _ => Type::Data(name),
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let ty = self.type_()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(ty)
            }
            _ => self.err("a type"),
        }
    }

    fn grade(&mut self) -> Result<Grade, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::UpperId(name)) if name == "Public" => {
                self.pos += 1;
                Ok(Grade::SecPublic)
            }
            Some(Tok::UpperId(name)) if name == "Private" => {
                self.pos += 1;
                Ok(Grade::SecPrivate)
            }
            Some(Tok::Int(n)) if n >= 0 => {
                self.pos += 1;
                Ok(Grade::Usage(n as u64))
            }
            _ => self.err("a grade ('Public', 'Private' or a natural number)"),
        }
    }

    // ----- terms -----

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.boundary_span();
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Backslash) => {
                self.pos += 1;
                let (param, _) = self.lower_id("a parameter name")?;
                self.expect(Tok::Arrow, "'->'")?;
                let body = self.term()?;
                let span = start.merge(self.prev_span());
                Ok(Term::new(TermKind::Lam(param, Box::new(body)), span))
            }
            Some(Tok::Let) => {
                self.pos += 1;
                self.expect(Tok::LBracket, "'['")?;
                let (var, _) = self.lower_id("a variable name")?;
                self.expect(Tok::RBracket, "']'")?;
                self.expect(Tok::Assign, "'='")?;
                let bound = self.term()?;
                self.expect(Tok::In, "'in'")?;
                let body = self.term()?;
                let span = start.merge(self.prev_span());
                Ok(Term::new(
                    TermKind::LetBox(var, Box::new(bound), Box::new(body)),
                    span,
                ))
            }
            Some(Tok::Endorse) => {
                self.pos += 1;
                let bound = self.term()?;
                self.expect(Tok::As, "'as'")?;
                let (var, _) = self.lower_id("a variable name")?;
                self.expect(Tok::In, "'in'")?;
                let body = self.term()?;
                let span = start.merge(self.prev_span());
                Ok(Term::new(
                    TermKind::Endorse(Box::new(bound), var, Box::new(body)),
                    span,
                ))
            }
            Some(Tok::Reveal) => {
                self.pos += 1;
                let body = self.aterm()?;
                let span = start.merge(self.prev_span());
                Ok(Term::new(TermKind::Reveal(Box::new(body)), span))
            }
            Some(Tok::Trust) => {
                self.pos += 1;
                let body = self.aterm()?;
                let span = start.merge(self.prev_span());
                Ok(Term::new(TermKind::TrustIntro(Box::new(body)), span))
            }
            Some(Tok::Case) => {
                self.pos += 1;
                let scrut = self.term()?;
                self.expect(Tok::Of, "'of'")?;
                let mut alts = Vec::new();
                while matches!(self.peek(), Some(t) if t.tok == Tok::Pipe) {
                    self.pos += 1;
                    let pat = self.pattern()?;
                    self.expect(Tok::Arrow, "'->'")?;
                    let body = self.term()?;
                    alts.push((pat, body));
                }
                if alts.is_empty() {
                    return self.err("'|'");
                }
                let span = start.merge(self.prev_span());
                Ok(Term::new(TermKind::Case(Box::new(scrut), alts), span))
            }
            _ => self.opterm(),
        }
    }

    fn opterm(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.multerm()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => PrimOp::Add,
                Some(Tok::Minus) => PrimOp::Sub,
                Some(Tok::PlusPlus) => PrimOp::Concat,
                Some(Tok::EqEq) => PrimOp::Eq,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.multerm()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Term::new(TermKind::Prim(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn multerm(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.appterm()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Star) => PrimOp::Mul,
                Some(Tok::Slash) => PrimOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.appterm()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Term::new(TermKind::Prim(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn starts_aterm(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::LowerId(_)
                | Tok::UpperId(_)
                | Tok::Int(_)
                | Tok::Str(_)
                | Tok::LBracket
                | Tok::LParen
        )
    }

    fn appterm(&mut self) -> Result<Term, ParseError> {
        // A bare constructor head absorbs its arguments; anything else,
        // including a parenthesised constructor, builds an application
        // chain.
        if matches!(self.peek(), Some(t) if matches!(t.tok, Tok::UpperId(_))) {
            let start = self.boundary_span();
            let (name, _) = self.upper_id("a constructor")?;
            let mut args = Vec::new();
            while matches!(self.peek(), Some(t) if Parser::starts_aterm(&t.tok)) {
                args.push(self.aterm()?);
            }
            let span = start.merge(self.prev_span());
            return Ok(Term::new(TermKind::Ctor(name, args), span));
        }
        let mut out = self.aterm()?;
        while matches!(self.peek(), Some(t) if Parser::starts_aterm(&t.tok)) {
            let arg = self.aterm()?;
            let span = out.span.merge(arg.span);
            out = Term::new(TermKind::App(Box::new(out), Box::new(arg)), span);
        }
        Ok(out)
    }

    fn aterm(&mut self) -> Result<Term, ParseError> {
        let start = self.boundary_span();
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::LowerId(name)) => {
                self.pos += 1;
                Ok(Term::new(TermKind::Var(name), start))
            }
            Some(Tok::UpperId(name)) => {
                self.pos += 1;
                Ok(Term::new(TermKind::Ctor(name, Vec::new()), start))
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Term::new(TermKind::Int(n), start))
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::Int(n)) => {
                        self.pos += 1;
                        let span = start.merge(self.prev_span());
                        Ok(Term::new(TermKind::Int(-n), span))
                    }
                    _ => self.err("an integer literal after '-'"),
                }
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Term::new(TermKind::Str(s), start))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let body = self.term()?;
                let end = self.expect(Tok::RBracket, "']'")?;
                Ok(Term::new(TermKind::BoxIntro(Box::new(body)), start.merge(end)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut t = self.term()?;
                let end = self.expect(Tok::RParen, "')'")?;
                t.span = start.merge(end);
                Ok(t)
            }
            _ => self.err("a term"),
        }
    }

    // ----- patterns -----

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        let start = self.boundary_span();
        if let Some(Tok::UpperId(_)) = self.peek().map(|t| &t.tok) {
            let (name, _) = self.upper_id("a constructor")?;
            let mut subs = Vec::new();
            while matches!(self.peek(), Some(t) if Parser::starts_apat(&t.tok)) {
                subs.push(self.apat()?);
            }
            let span = start.merge(self.prev_span());
            return Ok(Pattern::new(PatKind::Ctor(name, subs), span));
        }
        self.apat()
    }

    fn starts_apat(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::LowerId(_)
                | Tok::UpperId(_)
                | Tok::Underscore
                | Tok::Int(_)
                | Tok::LBracket
                | Tok::LParen
        )
    }

    fn apat(&mut self) -> Result<Pattern, ParseError> {
        let start = self.boundary_span();
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::LowerId(name)) => {
                self.pos += 1;
                Ok(Pattern::new(PatKind::Var(name), start))
            }
            Some(Tok::UpperId(name)) => {
                self.pos += 1;
                Ok(Pattern::new(PatKind::Ctor(name, Vec::new()), start))
            }
            Some(Tok::Underscore) => {
                self.pos += 1;
                Ok(Pattern::new(PatKind::Wild, start))
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Pattern::new(PatKind::Int(n), start))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let inner = self.apat()?;
                let end = self.expect(Tok::RBracket, "']'")?;
                Ok(Pattern::new(PatKind::Box(Box::new(inner)), start.merge(end)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut p = self.pattern()?;
                let end = self.expect(Tok::RParen, "')'")?;
                p.span = start.merge(end);
                Ok(p)
            }
            _ => self.err("a pattern"),
        }
    }

    // ----- declarations -----

    fn data_decl(&mut self) -> Result<DataDecl, ParseError> {
        let start = self.boundary_span();
        self.pos += 1; // 'data'
        let (name, _) = self.upper_id("a data type name")?;
        self.expect(Tok::Where, "'where'")?;
        let mut ctors = Vec::new();
        while matches!(self.peek(), Some(t) if matches!(t.tok, Tok::UpperId(_))) {
            let (ctor, _) = self.upper_id("a constructor name")?;
            let mut fields = Vec::new();
            while matches!(
                self.peek(),
                Some(t) if matches!(t.tok, Tok::UpperId(_) | Tok::LParen)
            ) {
                fields.push(self.atype()?);
            }
            self.expect(Tok::Semi, "';'")?;
            ctors.push((ctor, fields));
        }
        Ok(DataDecl {
            name,
            ctors,
            span: start.merge(self.prev_span()),
        })
    }

    fn fun_decl(&mut self) -> Result<FunDecl, ParseError> {
        let (name, name_span) = match self.peek_raw() {
            Some(Token {
                tok: Tok::LowerId(name),
                span,
                ..
            }) => {
                let out = (name.clone(), *span);
                self.pos += 1;
                out
            }
            _ => return self.err("a function name"),
        };
        self.expect(Tok::Colon, "':'")?;
        let signature = self.type_()?;
        // The defining equation must restate the name at column 1.
        match self.peek_raw().map(|t| t.tok.clone()) {
            Some(Tok::LowerId(def_name)) if def_name == name => {
                self.pos += 1;
            }
            _ => {
                return Err(ParseError {
                    file: self.file.clone(),
                    span: self.boundary_span(),
                    expected: vec![format!("a definition of '{}'", name)],
                    found: match self.peek_raw() {
                        None => "end of input".to_string(),
                        Some(t) => format!("'{}'", t.text),
                    },
                });
            }
        }
        let mut params = Vec::new();
        while matches!(self.peek(), Some(t) if Parser::starts_apat(&t.tok) && t.tok != Tok::Assign)
        {
            params.push(self.apat()?);
        }
        self.expect(Tok::Assign, "'='")?;
        let body = self.term()?;
        Ok(FunDecl {
            name,
            signature,
            params,
            body,
            span: name_span,
        })
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut decls = Vec::new();
        while let Some(t) = self.peek_raw() {
            if t.span.start_col != 1 {
                return Err(ParseError {
                    file: self.file.clone(),
                    span: t.span,
                    expected: vec!["a declaration at column 1".to_string()],
                    found: format!("'{}'", t.text),
                });
            }
            match t.tok {
                Tok::Data => decls.push(Decl::Data(self.data_decl()?)),
                Tok::LowerId(_) => decls.push(Decl::Fun(self.fun_decl()?)),
                _ => {
                    return Err(ParseError {
                        file: self.file.clone(),
                        span: t.span,
                        expected: vec!["'data' or a function signature".to_string()],
                        found: format!("'{}'", t.text),
                    });
                }
            }
        }
        Ok(Program {
            file: self.file.clone(),
            decls,
        })
    }
}

/// Parses a whole `.gg` source file.
pub fn parse_program(text: &str, filename: &str) -> Result<Program, ParseError> {
    let mut parser = Parser::new(text, filename, true)?;
    parser.program()
}

/// Parses a single standalone term (no layout rule applies).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut parser = Parser::new(text, "<term>", false)?;
    let t = parser.term()?;
    if parser.peek_raw().is_some() {
        return parser.err("end of input");
    }
    Ok(t)
}
