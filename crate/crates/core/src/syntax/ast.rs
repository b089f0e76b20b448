use std::fmt;
use std::hash::{Hash, Hasher};

/// A binder's display name. Names never take part in equality: two
/// expressions that differ only in binder names are the same expression.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(s: impl Into<String>) -> Self {
        Hint(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    /// A declared base type applied to its parameter terms (empty for plain
    /// base types like `A`).
    Base(String, Vec<Term>),
    Pi(Hint, Box<Type>, Box<Type>),
    Sigma(Hint, Box<Type>, Box<Type>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// De Bruijn index; `Var(0)` is the innermost binder.
    Var(usize),
    Const(String),
    Lam(Hint, Box<Type>, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    /// `split[z. motive](x y. branch, scrutinee)`. The motive binds one
    /// variable, the branch binds two.
    Split {
        motive_hint: Hint,
        motive: Box<Type>,
        hints: (Hint, Hint),
        branch: Box<Term>,
        scrutinee: Box<Term>,
    },
    /// Type ascription `(t : T)`.
    Ann(Box<Term>, Box<Type>),
}

impl Type {
    pub fn base(name: &str) -> Type {
        Type::Base(name.to_string(), Vec::new())
    }

    pub fn family(name: &str, args: Vec<Term>) -> Type {
        Type::Base(name.to_string(), args)
    }

    pub fn pi(x: &str, dom: Type, cod: Type) -> Type {
        Type::Pi(Hint::new(x), Box::new(dom), Box::new(cod))
    }

    pub fn sigma(x: &str, dom: Type, cod: Type) -> Type {
        Type::Sigma(Hint::new(x), Box::new(dom), Box::new(cod))
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn lam(x: &str, dom: Type, body: Term) -> Term {
        Term::Lam(Hint::new(x), Box::new(dom), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn split(motive: Type, branch: Term, scrutinee: Term) -> Term {
        Term::Split {
            motive_hint: Hint::new("z"),
            motive: Box::new(motive),
            hints: (Hint::new("x"), Hint::new("y")),
            branch: Box::new(branch),
            scrutinee: Box::new(scrutinee),
        }
    }

    pub fn ann(t: Term, ty: Type) -> Term {
        Term::Ann(Box::new(t), Box::new(ty))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub name: Hint,
    pub ty: Type,
}

impl Entry {
    pub fn new(name: &str, ty: Type) -> Self {
        Entry {
            name: Hint::new(name),
            ty,
        }
    }
}

/// Ordered context; entry `i` lives in the context made of entries `0..i`.
/// `Var(0)` refers to the last entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    pub entries: Vec<Entry>,
}

impl Context {
    pub fn empty() -> Self {
        Context::default()
    }

    pub fn from_entries(entries: Vec<Entry>) -> Self {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extend(&self, name: &str, ty: Type) -> Context {
        let mut c = self.clone();
        c.entries.push(Entry::new(name, ty));
        c
    }

    pub fn push(&mut self, name: Hint, ty: Type) {
        self.entries.push(Entry { name, ty });
    }

    pub fn concat(&self, other: &Context) -> Context {
        let mut c = self.clone();
        c.entries.extend(other.entries.iter().cloned());
        c
    }

    pub fn prefix(&self, n: usize) -> Context {
        Context {
            entries: self.entries[..n].to_vec(),
        }
    }

    /// Entry referred to by `Var(index)`, as written (in its own prefix).
    pub fn lookup(&self, index: usize) -> Option<&Entry> {
        let n = self.entries.len();
        if index < n {
            Some(&self.entries[n - 1 - index])
        } else {
            None
        }
    }
}

/// The six judgement forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Judgement {
    TypeForm { ctx: Context, ty: Type },
    TypeEq { ctx: Context, lhs: Type, rhs: Type },
    TermForm { ctx: Context, term: Term, ty: Type },
    TermEq { ctx: Context, lhs: Term, rhs: Term, ty: Type },
    /// `ctx ⊢ ext cxt`: `ext` is a well-formed extension of `ctx`.
    CtxForm { ctx: Context, ext: Context },
    CtxEq { ctx: Context, lhs: Context, rhs: Context },
}

impl Judgement {
    pub fn ctx(&self) -> &Context {
        match self {
            Judgement::TypeForm { ctx, .. }
            | Judgement::TypeEq { ctx, .. }
            | Judgement::TermForm { ctx, .. }
            | Judgement::TermEq { ctx, .. }
            | Judgement::CtxForm { ctx, .. }
            | Judgement::CtxEq { ctx, .. } => ctx,
        }
    }

    pub fn with_ctx(&self, ctx: Context) -> Judgement {
        let mut j = self.clone();
        match &mut j {
            Judgement::TypeForm { ctx: c, .. }
            | Judgement::TypeEq { ctx: c, .. }
            | Judgement::TermForm { ctx: c, .. }
            | Judgement::TermEq { ctx: c, .. }
            | Judgement::CtxForm { ctx: c, .. }
            | Judgement::CtxEq { ctx: c, .. } => *c = ctx,
        }
        j
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            Judgement::TypeForm { .. } => "type",
            Judgement::TypeEq { .. } => "type-eq",
            Judgement::TermForm { .. } => "term",
            Judgement::TermEq { .. } => "term-eq",
            Judgement::CtxForm { .. } => "ctx",
            Judgement::CtxEq { .. } => "ctx-eq",
        }
    }
}
