//! Index calculus: shifting, substitution, renaming.

use super::ast::{Context, Entry, Judgement, Term, Type};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("shift by {amount} would make free index {index} negative")]
pub struct NegativeIndex {
    pub index: usize,
    pub amount: isize,
}

/// Syntax with de Bruijn variables.
///
/// `map_free` rebuilds the expression, replacing every free variable
/// occurrence. The callback receives the variable's index relative to the
/// expression's ambient context and the number of binders crossed, and
/// returns the term to put in its place (valid under those binders).
pub trait Syntax: Sized + Clone {
    fn map_free(&self, depth: usize, f: &mut dyn FnMut(usize, usize) -> Term) -> Self;

    /// Visits free variables (relative indices).
    fn visit_free(&self, depth: usize, f: &mut dyn FnMut(usize));
}

impl Syntax for Term {
    fn map_free(&self, depth: usize, f: &mut dyn FnMut(usize, usize) -> Term) -> Term {
        match self {
            Term::Var(i) => {
                if *i >= depth {
                    f(*i - depth, depth)
                } else {
                    Term::Var(*i)
                }
            }
            Term::Const(c) => Term::Const(c.clone()),
            Term::Lam(h, a, b) => Term::Lam(
                h.clone(),
                Box::new(a.map_free(depth, f)),
                Box::new(b.map_free(depth + 1, f)),
            ),
            Term::App(g, a) => Term::App(Box::new(g.map_free(depth, f)), Box::new(a.map_free(depth, f))),
            Term::Pair(a, b) => Term::Pair(Box::new(a.map_free(depth, f)), Box::new(b.map_free(depth, f))),
            Term::Split {
                motive_hint,
                motive,
                hints,
                branch,
                scrutinee,
            } => Term::Split {
                motive_hint: motive_hint.clone(),
                motive: Box::new(motive.map_free(depth + 1, f)),
                hints: hints.clone(),
                branch: Box::new(branch.map_free(depth + 2, f)),
                scrutinee: Box::new(scrutinee.map_free(depth, f)),
            },
            Term::Ann(t, ty) => Term::Ann(Box::new(t.map_free(depth, f)), Box::new(ty.map_free(depth, f))),
        }
    }

    fn visit_free(&self, depth: usize, f: &mut dyn FnMut(usize)) {
        match self {
            Term::Var(i) => {
                if *i >= depth {
                    f(*i - depth)
                }
            }
            Term::Const(_) => {}
            Term::Lam(_, a, b) => {
                a.visit_free(depth, f);
                b.visit_free(depth + 1, f);
            }
            Term::App(g, a) | Term::Pair(g, a) => {
                g.visit_free(depth, f);
                a.visit_free(depth, f);
            }
            Term::Split {
                motive,
                branch,
                scrutinee,
                ..
            } => {
                motive.visit_free(depth + 1, f);
                branch.visit_free(depth + 2, f);
                scrutinee.visit_free(depth, f);
            }
            Term::Ann(t, ty) => {
                t.visit_free(depth, f);
                ty.visit_free(depth, f);
            }
        }
    }
}

impl Syntax for Type {
    fn map_free(&self, depth: usize, f: &mut dyn FnMut(usize, usize) -> Term) -> Type {
        match self {
            Type::Base(n, args) => Type::Base(n.clone(), args.iter().map(|a| a.map_free(depth, f)).collect()),
            Type::Pi(h, a, b) => Type::Pi(
                h.clone(),
                Box::new(a.map_free(depth, f)),
                Box::new(b.map_free(depth + 1, f)),
            ),
            Type::Sigma(h, a, b) => Type::Sigma(
                h.clone(),
                Box::new(a.map_free(depth, f)),
                Box::new(b.map_free(depth + 1, f)),
            ),
        }
    }

    fn visit_free(&self, depth: usize, f: &mut dyn FnMut(usize)) {
        match self {
            Type::Base(_, args) => args.iter().for_each(|a| a.visit_free(depth, f)),
            Type::Pi(_, a, b) | Type::Sigma(_, a, b) => {
                a.visit_free(depth, f);
                b.visit_free(depth + 1, f);
            }
        }
    }
}

/// Adds `amount` to every free index `>= cutoff`.
pub fn shift<E: Syntax>(e: &E, cutoff: usize, amount: isize) -> Result<E, NegativeIndex> {
    let mut err = None;
    let out = e.map_free(0, &mut |i, d| {
        if i >= cutoff {
            let n = i as isize + amount;
            if n < 0 || (n as usize) < cutoff {
                err.get_or_insert(NegativeIndex { index: i, amount });
                Term::Var(i + d)
            } else {
                Term::Var(n as usize + d)
            }
        } else {
            Term::Var(i + d)
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Shift up; never fails.
pub fn lift<E: Syntax>(e: &E, cutoff: usize, amount: usize) -> E {
    e.map_free(0, &mut |i, d| {
        if i >= cutoff {
            Term::Var(i + amount + d)
        } else {
            Term::Var(i + d)
        }
    })
}

/// Capture-avoiding substitution of `replacement` for the free variable
/// `index`. The replacement lives in the target's context with that variable
/// removed; free indices above `index` move down by one.
pub fn substitute<E: Syntax>(target: &E, replacement: &Term, index: usize) -> E {
    target.map_free(0, &mut |i, d| {
        if i == index {
            lift(replacement, 0, d)
        } else if i > index {
            Term::Var(i - 1 + d)
        } else {
            Term::Var(i + d)
        }
    })
}

/// Applies a permutation-like renaming to free variables.
pub fn rename<E: Syntax>(e: &E, f: &dyn Fn(usize) -> usize) -> E {
    e.map_free(0, &mut |i, d| Term::Var(f(i) + d))
}

pub fn occurs_free<E: Syntax>(e: &E, index: usize) -> bool {
    let mut found = false;
    e.visit_free(0, &mut |i| found |= i == index);
    found
}

pub fn max_free<E: Syntax>(e: &E) -> Option<usize> {
    let mut m: Option<usize> = None;
    e.visit_free(0, &mut |i| m = Some(m.map_or(i, |x| x.max(i))));
    m
}

/// Type of the variable `Var(index)` in `ctx`, transported into `ctx`.
pub fn var_type(ctx: &Context, index: usize) -> Option<Type> {
    ctx.lookup(index).map(|e| lift(&e.ty, 0, index + 1))
}

/// Applies a per-depth transformation to the subject of a judgement while
/// keeping its context prefix. `f(expr, depth)` is called for every type or
/// term of the judgement that lives `depth` entries past the judgement's
/// context (only context extensions have depth > 0).
pub fn map_judgement_subject(
    j: &Judgement,
    ty_f: &mut dyn FnMut(&Type, usize) -> Type,
    tm_f: &mut dyn FnMut(&Term, usize) -> Term,
) -> Judgement {
    let map_ctx = |c: &Context, ty_f: &mut dyn FnMut(&Type, usize) -> Type| Context {
        entries: c
            .entries
            .iter()
            .enumerate()
            .map(|(k, e)| Entry {
                name: e.name.clone(),
                ty: ty_f(&e.ty, k),
            })
            .collect(),
    };
    match j {
        Judgement::TypeForm { ctx, ty } => Judgement::TypeForm {
            ctx: ctx.clone(),
            ty: ty_f(ty, 0),
        },
        Judgement::TypeEq { ctx, lhs, rhs } => Judgement::TypeEq {
            ctx: ctx.clone(),
            lhs: ty_f(lhs, 0),
            rhs: ty_f(rhs, 0),
        },
        Judgement::TermForm { ctx, term, ty } => Judgement::TermForm {
            ctx: ctx.clone(),
            term: tm_f(term, 0),
            ty: ty_f(ty, 0),
        },
        Judgement::TermEq { ctx, lhs, rhs, ty } => Judgement::TermEq {
            ctx: ctx.clone(),
            lhs: tm_f(lhs, 0),
            rhs: tm_f(rhs, 0),
            ty: ty_f(ty, 0),
        },
        Judgement::CtxForm { ctx, ext } => Judgement::CtxForm {
            ctx: ctx.clone(),
            ext: map_ctx(ext, ty_f),
        },
        Judgement::CtxEq { ctx, lhs, rhs } => {
            let lhs = map_ctx(lhs, ty_f);
            let rhs = map_ctx(rhs, ty_f);
            Judgement::CtxEq {
                ctx: ctx.clone(),
                lhs,
                rhs,
            }
        }
    }
}

/// Weakening of a judgement's subject by one fresh variable at the end of
/// its context (the context itself is not changed here).
pub fn weaken_subject(j: &Judgement) -> Judgement {
    map_judgement_subject(j, &mut |t, k| lift(t, k, 1), &mut |t, k| lift(t, k, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::{Term, Type};

    #[test]
    fn substitute_at_variable() {
        let c = Term::constant("c");
        assert_eq!(substitute(&Term::Var(0), &c, 0), c);
    }

    #[test]
    fn substitute_under_binder_shifts() {
        let a = Type::base("A");
        let body = Term::lam("x", a.clone(), Term::Var(1));
        let r = Term::Var(3);
        assert_eq!(
            substitute(&body, &r, 0),
            Term::lam("x", a, lift(&r, 0, 1))
        );
    }

    #[test]
    fn substitute_family_argument() {
        // B(x)[a/x] for B = App(f, Var 0)
        let t = Term::app(Term::constant("f"), Term::Var(0));
        let a = Term::constant("a");
        assert_eq!(substitute(&t, &a, 0), Term::app(Term::constant("f"), a));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&Term::Var(0), 0, 1).unwrap(), Term::Var(1));
        let a = Type::base("A");
        let l = Term::lam("x", a, Term::Var(0));
        assert_eq!(shift(&l, 0, 1).unwrap(), l);
        let e = Term::app(Term::Var(2), Term::Var(0));
        assert_eq!(shift(&shift(&e, 0, 1).unwrap(), 0, -1).unwrap(), e);
    }

    #[test]
    fn shift_underflow_is_an_error() {
        assert!(shift(&Term::Var(0), 0, -1).is_err());
        assert!(shift(&Term::Var(1), 1, -1).is_err());
        assert_eq!(shift(&Term::Var(2), 1, -1).unwrap(), Term::Var(1));
    }

    #[test]
    fn alpha_equivalence_is_structural() {
        let a = Type::base("A");
        assert_eq!(
            Term::lam("x", a.clone(), Term::Var(0)),
            Term::lam("y", a, Term::Var(0))
        );
        assert_ne!(Term::Var(0), Term::Var(1));
    }
}
