//! Surface syntax: lexer, recursive-descent parser and name resolution.
//!
//! ```text
//! base A;                      -- base type
//! base B (x : A);              -- base family indexed by A
//! const a : A;
//! check x : A |- x : A;
//! check |- Pi (x : A) . B x type;
//! check |- (lam (x : A) . x) a = a : A;
//! check y : B a, x : A |- y : B a by exch 0;
//! ```

use super::ast::{Context, Hint, Judgement, Term, Type};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{loc}: syntax error: {msg}")]
    SyntaxError { msg: String, loc: Loc },
    #[error("{loc}: unbound variable `{name}`")]
    UnboundVariable { name: String, loc: Loc },
}

impl ParseError {
    pub fn loc(&self) -> Loc {
        match self {
            ParseError::SyntaxError { loc, .. } | ParseError::UnboundVariable { loc, .. } => *loc,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Base { name: String, params: Context },
    Const { name: String, ty: Type },
    Check { judgement: Judgement, exch: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located<T> {
    pub loc: Loc,
    pub item: T,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Located<Statement>>,
}

const KEYWORDS: &[&str] = &[
    "Pi", "Sigma", "lam", "pair", "split", "base", "const", "check", "type", "by", "exch", "ctx",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    loc: Loc,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                { let ch = chars[i]; advance(&mut i, &mut line, &mut col, ch); }
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                { let ch = chars[i]; advance(&mut i, &mut line, &mut col, ch); }
            }
            out.push(Token { tok: Tok::Ident(s), loc });
            continue;
        }
        if c.is_ascii_digit() {
            let mut n = 0usize;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n * 10 + chars[i].to_digit(10).unwrap() as usize;
                { let ch = chars[i]; advance(&mut i, &mut line, &mut col, ch); }
            }
            out.push(Token { tok: Tok::Nat(n), loc });
            continue;
        }
        if c == '|' && chars.get(i + 1) == Some(&'-') {
            advance(&mut i, &mut line, &mut col, c);
            advance(&mut i, &mut line, &mut col, '-');
            out.push(Token { tok: Tok::Sym("|-"), loc });
            continue;
        }
        let sym = match c {
            '(' => "(",
            ')' => ")",
            '[' => "[",
            ']' => "]",
            ',' => ",",
            '.' => ".",
            ':' => ":",
            ';' => ";",
            '=' => "=",
            _ => {
                return Err(ParseError::SyntaxError {
                    msg: format!("unexpected character `{c}`"),
                    loc,
                })
            }
        };
        advance(&mut i, &mut line, &mut col, c);
        out.push(Token { tok: Tok::Sym(sym), loc });
    }
    out.push(Token {
        tok: Tok::Eof,
        loc: Loc { line, col },
    });
    Ok(out)
}

/// Unresolved expression; names are resolved once we know whether a type or
/// a term is expected.
#[derive(Clone, Debug)]
enum Raw {
    Ident(String, Loc),
    Binder {
        kind: &'static str,
        name: String,
        dom: Box<Raw>,
        body: Box<Raw>,
        loc: Loc,
    },
    App(Box<Raw>, Box<Raw>, Loc),
    Pair(Box<Raw>, Box<Raw>, Loc),
    Split {
        z: String,
        motive: Box<Raw>,
        x: String,
        y: String,
        branch: Box<Raw>,
        scrutinee: Box<Raw>,
        loc: Loc,
    },
    Ann(Box<Raw>, Box<Raw>, Loc),
}

impl Raw {
    fn loc(&self) -> Loc {
        match self {
            Raw::Ident(_, l)
            | Raw::Binder { loc: l, .. }
            | Raw::App(_, _, l)
            | Raw::Pair(_, _, l)
            | Raw::Split { loc: l, .. }
            | Raw::Ann(_, _, l) => *l,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum GlobalKind {
    Base,
    Const,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    globals: HashMap<String, GlobalKind>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn loc(&self) -> Loc {
        self.toks[self.pos].loc
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::SyntaxError {
            msg: msg.into(),
            loc: self.loc(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {}", describe(&t))),
        }
    }

    fn script(&mut self) -> PResult<Script> {
        let mut script = Script::default();
        while *self.peek() != Tok::Eof {
            let loc = self.loc();
            let item = self.statement()?;
            script.statements.push(Located { loc, item });
        }
        Ok(script)
    }

    fn declare(&mut self, name: &str, kind: GlobalKind, loc: Loc) -> PResult<()> {
        if self.globals.contains_key(name) {
            return Err(ParseError::SyntaxError {
                msg: format!("`{name}` is already declared"),
                loc,
            });
        }
        self.globals.insert(name.to_string(), kind);
        Ok(())
    }

    fn statement(&mut self) -> PResult<Statement> {
        let loc = self.loc();
        if self.is_kw("base") {
            self.bump();
            let name = self.ident()?;
            let mut scope = Vec::new();
            let mut params = Context::empty();
            while self.is_sym("(") {
                self.bump();
                let x = self.ident()?;
                self.expect_sym(":")?;
                let raw = self.raw()?;
                let ty = self.to_type(&raw, &scope)?;
                self.expect_sym(")")?;
                params.push(Hint::new(x.clone()), ty);
                scope.push(x);
            }
            self.expect_sym(";")?;
            self.declare(&name, GlobalKind::Base, loc)?;
            Ok(Statement::Base { name, params })
        } else if self.is_kw("const") {
            self.bump();
            let name = self.ident()?;
            self.expect_sym(":")?;
            let raw = self.raw()?;
            let ty = self.to_type(&raw, &[])?;
            self.expect_sym(";")?;
            self.declare(&name, GlobalKind::Const, loc)?;
            Ok(Statement::Const { name, ty })
        } else if self.is_kw("check") {
            self.bump();
            let (ctx, scope) = self.context_until("|-")?;
            self.expect_sym("|-")?;
            let judgement = self.judgement(ctx, &scope)?;
            let exch = if self.is_kw("by") {
                self.bump();
                self.expect_kw("exch")?;
                match self.bump().tok {
                    Tok::Nat(n) => Some(n),
                    t => return self.err(format!("expected entry position, found {}", describe(&t))),
                }
            } else {
                None
            };
            self.expect_sym(";")?;
            Ok(Statement::Check { judgement, exch })
        } else {
            self.err(format!(
                "expected `base`, `const` or `check`, found {}",
                describe(self.peek())
            ))
        }
    }

    /// Parses `x : T, y : T, ...` (possibly empty) up to the terminator.
    fn context_until(&mut self, end: &str) -> PResult<(Context, Vec<String>)> {
        self.context_with_scope(end, Vec::new())
    }

    fn context_with_scope(&mut self, end: &str, mut scope: Vec<String>) -> PResult<(Context, Vec<String>)> {
        let mut ctx = Context::empty();
        if self.is_sym(end) {
            return Ok((ctx, scope));
        }
        loop {
            let x = self.ident()?;
            self.expect_sym(":")?;
            let raw = self.raw()?;
            let ty = self.to_type(&raw, &scope)?;
            ctx.push(Hint::new(x.clone()), ty);
            scope.push(x);
            if self.is_sym(",") {
                self.bump();
            } else {
                break;
            }
        }
        Ok((ctx, scope))
    }

    fn judgement(&mut self, ctx: Context, scope: &[String]) -> PResult<Judgement> {
        if self.is_kw("ctx") {
            self.bump();
            self.expect_sym("(")?;
            let (lhs, _) = self.context_with_scope(")", scope.to_vec())?;
            self.expect_sym(")")?;
            if self.is_sym("=") {
                self.bump();
                self.expect_sym("(")?;
                let (rhs, _) = self.context_with_scope(")", scope.to_vec())?;
                self.expect_sym(")")?;
                return Ok(Judgement::CtxEq { ctx, lhs, rhs });
            }
            return Ok(Judgement::CtxForm { ctx, ext: lhs });
        }
        let lhs = self.raw()?;
        if self.is_kw("type") {
            self.bump();
            let ty = self.to_type(&lhs, scope)?;
            return Ok(Judgement::TypeForm { ctx, ty });
        }
        if self.is_sym(":") {
            self.bump();
            let ty_raw = self.raw()?;
            let term = self.to_term(&lhs, scope)?;
            let ty = self.to_type(&ty_raw, scope)?;
            return Ok(Judgement::TermForm { ctx, term, ty });
        }
        if self.is_sym("=") {
            self.bump();
            let rhs = self.raw()?;
            if self.is_kw("type") {
                self.bump();
                let lhs = self.to_type(&lhs, scope)?;
                let rhs = self.to_type(&rhs, scope)?;
                return Ok(Judgement::TypeEq { ctx, lhs, rhs });
            }
            self.expect_sym(":")?;
            let ty_raw = self.raw()?;
            return Ok(Judgement::TermEq {
                ctx,
                lhs: self.to_term(&lhs, scope)?,
                rhs: self.to_term(&rhs, scope)?,
                ty: self.to_type(&ty_raw, scope)?,
            });
        }
        self.err(format!(
            "expected `type`, `:` or `=` in judgement, found {}",
            describe(self.peek())
        ))
    }

    fn raw(&mut self) -> PResult<Raw> {
        let loc = self.loc();
        for (kw, kind) in [("Pi", "Pi"), ("Sigma", "Sigma"), ("lam", "lam")] {
            if self.is_kw(kw) {
                self.bump();
                self.expect_sym("(")?;
                let name = self.ident()?;
                self.expect_sym(":")?;
                let dom = self.raw()?;
                self.expect_sym(")")?;
                self.expect_sym(".")?;
                let body = self.raw()?;
                return Ok(Raw::Binder {
                    kind,
                    name,
                    dom: Box::new(dom),
                    body: Box::new(body),
                    loc,
                });
            }
        }
        let mut head = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            head = Raw::App(Box::new(head), Box::new(arg), loc);
        }
        Ok(head)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || s == "pair" || s == "split",
            Tok::Sym("(") => true,
            _ => false,
        }
    }

    fn atom(&mut self) -> PResult<Raw> {
        let loc = self.loc();
        if self.is_kw("pair") {
            self.bump();
            self.expect_sym("(")?;
            let a = self.raw()?;
            self.expect_sym(",")?;
            let b = self.raw()?;
            self.expect_sym(")")?;
            return Ok(Raw::Pair(Box::new(a), Box::new(b), loc));
        }
        if self.is_kw("split") {
            self.bump();
            self.expect_sym("[")?;
            let z = self.ident()?;
            self.expect_sym(".")?;
            let motive = self.raw()?;
            self.expect_sym("]")?;
            self.expect_sym("(")?;
            let x = self.ident()?;
            let y = self.ident()?;
            self.expect_sym(".")?;
            let branch = self.raw()?;
            self.expect_sym(",")?;
            let scrutinee = self.raw()?;
            self.expect_sym(")")?;
            return Ok(Raw::Split {
                z,
                motive: Box::new(motive),
                x,
                y,
                branch: Box::new(branch),
                scrutinee: Box::new(scrutinee),
                loc,
            });
        }
        if self.is_sym("(") {
            self.bump();
            let inner = self.raw()?;
            if self.is_sym(":") {
                self.bump();
                let ty = self.raw()?;
                self.expect_sym(")")?;
                return Ok(Raw::Ann(Box::new(inner), Box::new(ty), loc));
            }
            self.expect_sym(")")?;
            return Ok(inner);
        }
        let name = self.ident()?;
        Ok(Raw::Ident(name, loc))
    }

    fn to_type(&self, raw: &Raw, scope: &[String]) -> PResult<Type> {
        match raw {
            Raw::Binder {
                kind,
                name,
                dom,
                body,
                loc,
            } => {
                let dom = self.to_type(dom, scope)?;
                let mut inner = scope.to_vec();
                inner.push(name.clone());
                let body = self.to_type(body, &inner)?;
                match *kind {
                    "Pi" => Ok(Type::Pi(Hint::new(name.clone()), Box::new(dom), Box::new(body))),
                    "Sigma" => Ok(Type::Sigma(Hint::new(name.clone()), Box::new(dom), Box::new(body))),
                    _ => Err(ParseError::SyntaxError {
                        msg: "expected a type, found a lambda".into(),
                        loc: *loc,
                    }),
                }
            }
            Raw::Ident(..) | Raw::App(..) => {
                let mut args = Vec::new();
                let mut head = raw;
                while let Raw::App(f, a, _) = head {
                    args.push(a.as_ref());
                    head = f;
                }
                args.reverse();
                match head {
                    Raw::Ident(name, loc) => {
                        if scope.iter().any(|s| s == name) || self.globals.get(name) == Some(&GlobalKind::Const) {
                            return Err(ParseError::SyntaxError {
                                msg: format!("expected a type, found term `{name}`"),
                                loc: *loc,
                            });
                        }
                        if self.globals.get(name) != Some(&GlobalKind::Base) {
                            return Err(ParseError::UnboundVariable {
                                name: name.clone(),
                                loc: *loc,
                            });
                        }
                        let args = args
                            .into_iter()
                            .map(|a| self.to_term(a, scope))
                            .collect::<PResult<Vec<_>>>()?;
                        Ok(Type::Base(name.clone(), args))
                    }
                    other => Err(ParseError::SyntaxError {
                        msg: "expected a type".into(),
                        loc: other.loc(),
                    }),
                }
            }
            other => Err(ParseError::SyntaxError {
                msg: "expected a type".into(),
                loc: other.loc(),
            }),
        }
    }

    fn to_term(&self, raw: &Raw, scope: &[String]) -> PResult<Term> {
        match raw {
            Raw::Ident(name, loc) => {
                if let Some(pos) = scope.iter().rposition(|s| s == name) {
                    return Ok(Term::Var(scope.len() - 1 - pos));
                }
                match self.globals.get(name) {
                    Some(GlobalKind::Const) => Ok(Term::Const(name.clone())),
                    Some(GlobalKind::Base) => Err(ParseError::SyntaxError {
                        msg: format!("expected a term, found type `{name}`"),
                        loc: *loc,
                    }),
                    None => Err(ParseError::UnboundVariable {
                        name: name.clone(),
                        loc: *loc,
                    }),
                }
            }
            Raw::Binder {
                kind,
                name,
                dom,
                body,
                loc,
            } => {
                if *kind != "lam" {
                    return Err(ParseError::SyntaxError {
                        msg: format!("expected a term, found a {kind} type"),
                        loc: *loc,
                    });
                }
                let dom = self.to_type(dom, scope)?;
                let mut inner = scope.to_vec();
                inner.push(name.clone());
                let body = self.to_term(body, &inner)?;
                Ok(Term::Lam(Hint::new(name.clone()), Box::new(dom), Box::new(body)))
            }
            Raw::App(f, a, _) => Ok(Term::App(
                Box::new(self.to_term(f, scope)?),
                Box::new(self.to_term(a, scope)?),
            )),
            Raw::Pair(a, b, _) => Ok(Term::Pair(
                Box::new(self.to_term(a, scope)?),
                Box::new(self.to_term(b, scope)?),
            )),
            Raw::Split {
                z,
                motive,
                x,
                y,
                branch,
                scrutinee,
                ..
            } => {
                let mut zs = scope.to_vec();
                zs.push(z.clone());
                let motive = self.to_type(motive, &zs)?;
                let mut xys = scope.to_vec();
                xys.push(x.clone());
                xys.push(y.clone());
                let branch = self.to_term(branch, &xys)?;
                let scrutinee = self.to_term(scrutinee, scope)?;
                Ok(Term::Split {
                    motive_hint: Hint::new(z.clone()),
                    motive: Box::new(motive),
                    hints: (Hint::new(x.clone()), Hint::new(y.clone())),
                    branch: Box::new(branch),
                    scrutinee: Box::new(scrutinee),
                })
            }
            Raw::Ann(t, ty, _) => Ok(Term::Ann(
                Box::new(self.to_term(t, scope)?),
                Box::new(self.to_type(ty, scope)?),
            )),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Nat(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

fn parser(text: &str, globals: HashMap<String, GlobalKind>) -> PResult<Parser> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        globals,
    })
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut p = parser(text, HashMap::new())?;
    p.script()
}

/// Names visible to standalone expression parsing.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub bases: Vec<String>,
    pub consts: Vec<String>,
    /// Variables, outermost first.
    pub vars: Vec<String>,
}

impl Scope {
    fn globals(&self) -> HashMap<String, GlobalKind> {
        let mut g = HashMap::new();
        for b in &self.bases {
            g.insert(b.clone(), GlobalKind::Base);
        }
        for c in &self.consts {
            g.insert(c.clone(), GlobalKind::Const);
        }
        g
    }
}

fn finish<T>(p: &mut Parser, v: T) -> PResult<T> {
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(v)
}

pub fn parse_type(text: &str, scope: &Scope) -> Result<Type, ParseError> {
    let mut p = parser(text, scope.globals())?;
    let raw = p.raw()?;
    let ty = p.to_type(&raw, &scope.vars)?;
    finish(&mut p, ty)
}

pub fn parse_term(text: &str, scope: &Scope) -> Result<Term, ParseError> {
    let mut p = parser(text, scope.globals())?;
    let raw = p.raw()?;
    let t = p.to_term(&raw, &scope.vars)?;
    finish(&mut p, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope() -> Scope {
        Scope {
            bases: vec!["A".into(), "B".into()],
            consts: vec!["a".into()],
            vars: vec![],
        }
    }

    #[test]
    fn pi_with_dependent_body() {
        let t = parse_type("Pi (x : A) . B x", &scope()).unwrap();
        assert_eq!(t, Type::pi("x", Type::base("A"), Type::family("B", vec![Term::Var(0)])));
    }

    #[test]
    fn identity_lambda() {
        let t = parse_term("lam (x : A) . x", &scope()).unwrap();
        assert_eq!(t, Term::lam("x", Type::base("A"), Term::Var(0)));
    }

    #[test]
    fn unbound_in_empty_scope() {
        let e = parse_term("x", &Scope::default()).unwrap_err();
        assert!(matches!(e, ParseError::UnboundVariable { ref name, .. } if name == "x"));
        assert_eq!(e.loc(), Loc { line: 1, col: 1 });
    }

    #[test]
    fn split_binds_motive_and_branch() {
        let t = parse_term("split[z. A](x y. x, a)", &scope()).unwrap();
        match t {
            Term::Split { branch, scrutinee, .. } => {
                assert_eq!(*branch, Term::Var(1));
                assert_eq!(*scrutinee, Term::constant("a"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn script_with_comments_and_judgements() {
        let s = parse_script(
            "-- header\nbase A;\nbase B (x : A);\nconst a : A;\ncheck x : A |- x : A;\ncheck |- B a type;\ncheck x : A, y : B x |- pair(x, y) : Sigma (u : A) . B u;",
        )
        .unwrap();
        assert_eq!(s.statements.len(), 6);
        assert_eq!(s.statements[3].loc, Loc { line: 5, col: 1 });
    }

    #[test]
    fn unbound_location_reported_in_script() {
        let e = parse_script("base A;\ncheck |- y : A;").unwrap_err();
        assert_eq!(
            e,
            ParseError::UnboundVariable {
                name: "y".into(),
                loc: Loc { line: 2, col: 10 }
            }
        );
    }

    #[test]
    fn equations_and_ctx_judgements() {
        let s = parse_script(
            "base A; const a : A;\ncheck |- a = a : A;\ncheck |- A = A type;\ncheck |- ctx (x : A, y : A);\ncheck |- ctx (x : A) = (y : A);",
        )
        .unwrap();
        let kinds: Vec<_> = s
            .statements
            .iter()
            .filter_map(|s| match &s.item {
                Statement::Check { judgement, .. } => Some(judgement.form_name()),
                _ => None,
            })
            .collect();
        assert_eq!(kinds, vec!["term-eq", "type-eq", "ctx", "ctx-eq"]);
    }

    #[test]
    fn syntax_error_has_location() {
        let e = parse_script("base A\ncheck").unwrap_err();
        assert!(matches!(e, ParseError::SyntaxError { loc: Loc { line: 2, col: 1 }, .. }));
    }
}
