//! Positions inside syntax, one-step reduction and normalization.

use super::KernelError;
use crate::syntax::ops::{lift, substitute};
use crate::syntax::{Term, Type};

/// Either kind of syntax, for walking positions uniformly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Ty(Type),
    Tm(Term),
}

/// What a child position binds on top of its parent's context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    None,
    /// One variable of the given type (lambda body, Π/Σ codomain).
    One(Type),
    /// The motive of a split: one variable of the scrutinee's Σ type.
    SplitMotive,
    /// The branch of a split: the two components of the scrutinee's Σ type.
    SplitBranch,
}

impl Expr {
    pub fn child_count(&self) -> usize {
        match self {
            Expr::Ty(Type::Base(_, args)) => args.len(),
            Expr::Ty(_) => 2,
            Expr::Tm(t) => match t {
                Term::Var(_) | Term::Const(_) => 0,
                Term::Lam(..) | Term::App(..) | Term::Pair(..) | Term::Ann(..) => 2,
                Term::Split { .. } => 3,
            },
        }
    }

    pub fn child(&self, i: usize) -> Option<(Expr, Binding)> {
        Some(match self {
            Expr::Ty(Type::Base(_, args)) => (Expr::Tm(args.get(i)?.clone()), Binding::None),
            Expr::Ty(Type::Pi(_, a, b)) | Expr::Ty(Type::Sigma(_, a, b)) => match i {
                0 => (Expr::Ty((**a).clone()), Binding::None),
                1 => (Expr::Ty((**b).clone()), Binding::One((**a).clone())),
                _ => return None,
            },
            Expr::Tm(t) => match (t, i) {
                (Term::Lam(_, a, _), 0) => (Expr::Ty((**a).clone()), Binding::None),
                (Term::Lam(_, a, b), 1) => (Expr::Tm((**b).clone()), Binding::One((**a).clone())),
                (Term::App(f, _), 0) | (Term::Pair(f, _), 0) | (Term::Ann(f, _), 0) => {
                    (Expr::Tm((**f).clone()), Binding::None)
                }
                (Term::App(_, a), 1) | (Term::Pair(_, a), 1) => (Expr::Tm((**a).clone()), Binding::None),
                (Term::Ann(_, ty), 1) => (Expr::Ty((**ty).clone()), Binding::None),
                (Term::Split { motive, .. }, 0) => (Expr::Ty((**motive).clone()), Binding::SplitMotive),
                (Term::Split { branch, .. }, 1) => (Expr::Tm((**branch).clone()), Binding::SplitBranch),
                (Term::Split { scrutinee, .. }, 2) => (Expr::Tm((**scrutinee).clone()), Binding::None),
                _ => return None,
            },
        })
    }

    /// Rebuilds with child `i` replaced; `None` on a kind mismatch.
    pub fn replace(&self, i: usize, new: Expr) -> Option<Expr> {
        let ty = |e: Expr| match e {
            Expr::Ty(t) => Some(t),
            _ => None,
        };
        let tm = |e: Expr| match e {
            Expr::Tm(t) => Some(t),
            _ => None,
        };
        Some(match self {
            Expr::Ty(Type::Base(n, args)) => {
                let mut args = args.clone();
                *args.get_mut(i)? = tm(new)?;
                Expr::Ty(Type::Base(n.clone(), args))
            }
            Expr::Ty(Type::Pi(h, a, b)) | Expr::Ty(Type::Sigma(h, a, b)) => {
                let (a, b) = match i {
                    0 => (ty(new)?, (**b).clone()),
                    1 => ((**a).clone(), ty(new)?),
                    _ => return None,
                };
                let (a, b) = (Box::new(a), Box::new(b));
                if matches!(self, Expr::Ty(Type::Pi(..))) {
                    Expr::Ty(Type::Pi(h.clone(), a, b))
                } else {
                    Expr::Ty(Type::Sigma(h.clone(), a, b))
                }
            }
            Expr::Tm(t) => Expr::Tm(match (t, i) {
                (Term::Lam(h, _, b), 0) => Term::Lam(h.clone(), Box::new(ty(new)?), b.clone()),
                (Term::Lam(h, a, _), 1) => Term::Lam(h.clone(), a.clone(), Box::new(tm(new)?)),
                (Term::App(_, a), 0) => Term::App(Box::new(tm(new)?), a.clone()),
                (Term::App(f, _), 1) => Term::App(f.clone(), Box::new(tm(new)?)),
                (Term::Pair(_, b), 0) => Term::Pair(Box::new(tm(new)?), b.clone()),
                (Term::Pair(a, _), 1) => Term::Pair(a.clone(), Box::new(tm(new)?)),
                (Term::Ann(_, ty_), 0) => Term::Ann(Box::new(tm(new)?), ty_.clone()),
                (Term::Ann(t_, _), 1) => Term::Ann(t_.clone(), Box::new(ty(new)?)),
                (
                    Term::Split {
                        motive_hint,
                        motive,
                        hints,
                        branch,
                        scrutinee,
                    },
                    k,
                ) => {
                    let mut s = (motive.clone(), branch.clone(), scrutinee.clone());
                    match k {
                        0 => s.0 = Box::new(ty(new)?),
                        1 => s.1 = Box::new(tm(new)?),
                        2 => s.2 = Box::new(tm(new)?),
                        _ => return None,
                    }
                    Term::Split {
                        motive_hint: motive_hint.clone(),
                        motive: s.0,
                        hints: hints.clone(),
                        branch: s.1,
                        scrutinee: s.2,
                    }
                }
                _ => return None,
            }),
        })
    }

    pub fn at_path(&self, path: &[usize]) -> Option<Expr> {
        let mut cur = self.clone();
        for &i in path {
            cur = cur.child(i)?.0;
        }
        Some(cur)
    }

    pub fn replace_at(&self, path: &[usize], new: Expr) -> Option<Expr> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => {
                let (child, _) = self.child(i)?;
                self.replace(i, child.replace_at(rest, new)?)
            }
        }
    }
}

/// Root redex shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Redex {
    /// `app(lam x : A . b, a)`
    Beta,
    /// `app((lam x : A . b : T), a)`
    BetaAnn,
    /// `split[z. C](x y. d, pair(a, b))`
    Split,
    /// `split[z. C](x y. d, (pair(a, b) : S))`
    SplitAnn,
    /// `(t : T)`
    Ann,
}

pub fn root_redex(t: &Term) -> Option<Redex> {
    match t {
        Term::App(f, _) => match f.as_ref() {
            Term::Lam(..) => Some(Redex::Beta),
            Term::Ann(inner, _) if matches!(inner.as_ref(), Term::Lam(..)) => Some(Redex::BetaAnn),
            _ => None,
        },
        Term::Split { scrutinee, .. } => match scrutinee.as_ref() {
            Term::Pair(..) => Some(Redex::Split),
            Term::Ann(inner, _) if matches!(inner.as_ref(), Term::Pair(..)) => Some(Redex::SplitAnn),
            _ => None,
        },
        Term::Ann(..) => Some(Redex::Ann),
        _ => None,
    }
}

/// `d[a/x, b/y]` for a branch `d` binding `x y`.
pub fn instantiate_branch(d: &Term, a: &Term, b: &Term) -> Term {
    substitute(&substitute(d, &lift(a, 0, 1), 1), b, 0)
}

pub fn contract(t: &Term) -> Option<Term> {
    match (root_redex(t)?, t) {
        (Redex::Beta, Term::App(f, a)) | (Redex::BetaAnn, Term::App(f, a)) => {
            let lam = match f.as_ref() {
                Term::Ann(inner, _) => inner.as_ref(),
                other => other,
            };
            match lam {
                Term::Lam(_, _, body) => Some(substitute(body.as_ref(), a, 0)),
                _ => None,
            }
        }
        (Redex::Split, Term::Split { branch, scrutinee, .. }) | (Redex::SplitAnn, Term::Split { branch, scrutinee, .. }) => {
            let p = match scrutinee.as_ref() {
                Term::Ann(inner, _) => inner.as_ref(),
                other => other,
            };
            match p {
                Term::Pair(a, b) => Some(instantiate_branch(branch, a, b)),
                _ => None,
            }
        }
        (Redex::Ann, Term::Ann(inner, _)) => Some((**inner).clone()),
        _ => None,
    }
}

/// Leftmost-outermost redex position.
pub fn find_redex(e: &Expr) -> Option<Vec<usize>> {
    if let Expr::Tm(t) = e {
        if root_redex(t).is_some() {
            return Some(Vec::new());
        }
    }
    for i in 0..e.child_count() {
        let (c, _) = e.child(i)?;
        if let Some(mut p) = find_redex(&c) {
            p.insert(0, i);
            return Some(p);
        }
    }
    None
}

/// One leftmost-outermost step: the redex path and the reduct.
pub fn step(e: &Expr) -> Option<(Vec<usize>, Expr)> {
    let path = find_redex(e)?;
    let redex = match e.at_path(&path)? {
        Expr::Tm(t) => t,
        Expr::Ty(_) => return None,
    };
    let reduct = contract(&redex)?;
    Some((path.clone(), e.replace_at(&path, Expr::Tm(reduct))?))
}

pub const STEP_BOUND: usize = 10_000;

/// Normal form, bounded by [`STEP_BOUND`] steps.
pub fn normalize(e: &Expr) -> Result<Expr, KernelError> {
    let mut cur = e.clone();
    for _ in 0..STEP_BOUND {
        match step(&cur) {
            Some((_, next)) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(KernelError::NonTermination { bound: STEP_BOUND })
}

pub fn normalize_term(t: &Term) -> Result<Term, KernelError> {
    match normalize(&Expr::Tm(t.clone()))? {
        Expr::Tm(t) => Ok(t),
        Expr::Ty(_) => unreachable!("normalization preserves kind"),
    }
}

pub fn normalize_type(t: &Type) -> Result<Type, KernelError> {
    match normalize(&Expr::Ty(t.clone()))? {
        Expr::Ty(t) => Ok(t),
        Expr::Tm(_) => unreachable!("normalization preserves kind"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_identity() {
        let a = Type::base("A");
        let t = Term::app(Term::lam("x", a, Term::Var(0)), Term::constant("a"));
        assert_eq!(normalize_term(&t).unwrap(), Term::constant("a"));
    }

    #[test]
    fn split_of_pair() {
        let t = Term::split(
            Type::base("A"),
            Term::Var(1),
            Term::pair(Term::constant("a"), Term::constant("b")),
        );
        assert_eq!(normalize_term(&t).unwrap(), Term::constant("a"));
        let t2 = Term::split(
            Type::base("A"),
            Term::Var(0),
            Term::pair(Term::constant("a"), Term::constant("b")),
        );
        assert_eq!(normalize_term(&t2).unwrap(), Term::constant("b"));
    }

    #[test]
    fn no_eta() {
        let a = Type::base("A");
        let f = Term::constant("f");
        let eta = Term::lam("x", a, Term::app(Term::constant("f"), Term::Var(0)));
        assert_ne!(normalize_term(&eta).unwrap(), f);
    }

    #[test]
    fn reduces_under_binders_and_in_types() {
        let a = Type::base("A");
        let redex = Term::app(Term::lam("x", a.clone(), Term::Var(0)), Term::Var(0));
        let ty = Type::pi("y", a.clone(), Type::family("B", vec![redex]));
        assert_eq!(
            normalize_type(&ty).unwrap(),
            Type::pi("y", a, Type::family("B", vec![Term::Var(0)]))
        );
    }

    #[test]
    fn replace_at_path_roundtrip() {
        let a = Type::base("A");
        let t = Expr::Tm(Term::app(Term::lam("x", a, Term::Var(0)), Term::constant("c")));
        let sub = t.at_path(&[0, 1]).unwrap();
        assert_eq!(sub, Expr::Tm(Term::Var(0)));
        assert_eq!(t.replace_at(&[0, 1], sub).unwrap(), t);
    }
}
