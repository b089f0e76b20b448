//! Derivation trees and their validator.

use super::expr::{Binding, Expr};
use super::{KernelError, Signature};
use crate::syntax::ops::{lift, map_judgement_subject, occurs_free, rename, shift, substitute, weaken_subject};
use crate::syntax::{Context, Entry, Judgement, Term, Type};
use std::collections::{BTreeSet, HashSet};
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Vble,
    Subst,
    Weak,
    /// Exchange of the context entries at this position and the next.
    Exch(usize),
    TyRefl,
    TySym,
    TyTrans,
    TmRefl,
    TmSym,
    TmTrans,
    PiForm,
    PiIntro,
    PiElim,
    PiComp,
    SigmaForm,
    SigmaIntro,
    SigmaElim,
    SigmaComp,
    BaseForm,
    ConstIntro,
    Conv,
    /// Replacement of the subexpression at this path by an equal one.
    Cong(Vec<usize>),
    Ann,
    AnnErase,
    CtxEmpty,
    CtxExt,
    CtxEqEmpty,
    CtxEqExt,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Vble => "Vble",
            Rule::Subst => "Subst",
            Rule::Weak => "Weak",
            Rule::Exch(_) => "Exch",
            Rule::TyRefl => "TyRefl",
            Rule::TySym => "TySym",
            Rule::TyTrans => "TyTrans",
            Rule::TmRefl => "TmRefl",
            Rule::TmSym => "TmSym",
            Rule::TmTrans => "TmTrans",
            Rule::PiForm => "Pi-form",
            Rule::PiIntro => "Pi-intro",
            Rule::PiElim => "Pi-elim",
            Rule::PiComp => "Pi-comp",
            Rule::SigmaForm => "Sigma-form",
            Rule::SigmaIntro => "Sigma-intro",
            Rule::SigmaElim => "Sigma-elim",
            Rule::SigmaComp => "Sigma-comp",
            Rule::BaseForm => "Base-form",
            Rule::ConstIntro => "Const",
            Rule::Conv => "Conv",
            Rule::Cong(_) => "Cong",
            Rule::Ann => "Ann",
            Rule::AnnErase => "Ann-erase",
            Rule::CtxEmpty => "Ctx-empty",
            Rule::CtxExt => "Ctx-ext",
            Rule::CtxEqEmpty => "CtxEq-empty",
            Rule::CtxEqExt => "CtxEq-ext",
        }
    }
}

/// A derivation tree. Premises are shared, so a tree is really a DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Judgement,
    pub premises: Vec<Rc<Derivation>>,
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Judgement, premises: Vec<Rc<Derivation>>) -> Rc<Derivation> {
        Rc::new(Derivation {
            rule,
            conclusion,
            premises,
        })
    }

    /// Names of all rules used anywhere in the tree.
    pub fn rules_used(&self) -> BTreeSet<&'static str> {
        let mut out = BTreeSet::new();
        let mut seen = HashSet::new();
        fn go(d: &Derivation, out: &mut BTreeSet<&'static str>, seen: &mut HashSet<*const Derivation>) {
            if !seen.insert(d as *const _) {
                return;
            }
            out.insert(d.rule.name());
            d.premises.iter().for_each(|p| go(p, out, seen));
        }
        go(self, &mut out, &mut seen);
        out
    }

    /// Number of distinct nodes.
    pub fn node_count(&self) -> usize {
        let mut seen = HashSet::new();
        fn go(d: &Derivation, seen: &mut HashSet<*const Derivation>) {
            if seen.insert(d as *const _) {
                d.premises.iter().for_each(|p| go(p, seen));
            }
        }
        go(self, &mut seen);
        seen.len()
    }
}

/// Checks every node of `d` against its rule schema.
pub fn validate_derivation(sig: &Signature, d: &Derivation) -> Result<(), KernelError> {
    let mut seen = HashSet::new();
    validate_at(sig, d, "root".to_string(), &mut seen)
}

fn validate_at(
    sig: &Signature,
    d: &Derivation,
    path: String,
    seen: &mut HashSet<*const Derivation>,
) -> Result<(), KernelError> {
    if !seen.insert(d as *const _) {
        return Ok(());
    }
    for (i, p) in d.premises.iter().enumerate() {
        validate_at(sig, p, format!("{path}.{i}"), seen)?;
    }
    check_node(sig, d).map_err(|reason| KernelError::RuleMismatch {
        path,
        rule: d.rule.name().to_string(),
        reason,
    })
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: &str) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn arity(d: &Derivation, n: usize) -> Check {
    if d.premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premise(s), found {}", d.premises.len()))
    }
}

pub(crate) fn snoc(ctx: &Context, ty: &Type) -> Context {
    let mut c = ctx.clone();
    c.entries.push(Entry::new("x", ty.clone()));
    c
}

/// `(Γ, A)` if `ctx` ends in an entry.
fn unsnoc(ctx: &Context) -> Option<(Context, Type)> {
    let n = ctx.len();
    if n == 0 {
        None
    } else {
        Some((ctx.prefix(n - 1), ctx.entries[n - 1].ty.clone()))
    }
}

fn as_type_form(j: &Judgement) -> Option<(&Context, &Type)> {
    match j {
        Judgement::TypeForm { ctx, ty } => Some((ctx, ty)),
        _ => None,
    }
}

fn as_term_form(j: &Judgement) -> Option<(&Context, &Term, &Type)> {
    match j {
        Judgement::TermForm { ctx, term, ty } => Some((ctx, term, ty)),
        _ => None,
    }
}

/// The branch type `C[pair(x, y)/z]` in `Γ, x : A, y : B` for a motive `C`
/// over `Γ, z : Σ`.
pub(crate) fn branch_type(motive: &Type) -> Type {
    substitute(&lift(motive, 1, 2), &Term::pair(Term::Var(1), Term::Var(0)), 0)
}

/// The canonical `split` over the last variable of `Γ, z : Σ`.
pub(crate) fn generic_split(motive: &Type, branch: &Term) -> Term {
    Term::split(lift(motive, 1, 1), lift(branch, 2, 1), Term::Var(0))
}

/// Instantiates telescope entry `i` with the first `i` arguments.
pub(crate) fn telescope_entry(tel: &Context, args: &[Term], i: usize) -> Type {
    let ty = &tel.entries[i].ty;
    use crate::syntax::ops::Syntax;
    ty.map_free(0, &mut |k, d| {
        if k < i {
            lift(&args[i - 1 - k], 0, d)
        } else {
            Term::Var(k + d)
        }
    })
}

/// Conclusion of Weak from `Γ ⊢ A type` and `Γ ⊢ J`.
pub(crate) fn weak_judgement(a: &Judgement, j: &Judgement) -> Result<Judgement, String> {
    let (g, a) = as_type_form(a).ok_or("first premise must be a type formation")?;
    ensure(j.ctx() == g, "premises must share the context")?;
    Ok(weaken_subject(j).with_ctx(snoc(g, a)))
}

/// Conclusion of Subst from `Γ ⊢ a : A` and `Γ, x : A, Δ ⊢ J`.
pub(crate) fn subst_judgement(a: &Judgement, j: &Judgement) -> Result<Judgement, String> {
    let (g, a, ty_a) = as_term_form(a).ok_or("first premise must be a typing")?;
    let full = j.ctx();
    let n = g.len();
    ensure(full.len() > n, "second premise context too short")?;
    ensure(full.prefix(n) == *g, "second premise must extend the first's context")?;
    ensure(full.entries[n].ty == *ty_a, "substituted variable must have the term's type")?;
    let delta = &full.entries[n + 1..];
    let k = delta.len();
    let mut ctx = g.clone();
    for (i, e) in delta.iter().enumerate() {
        ctx.entries.push(Entry {
            name: e.name.clone(),
            ty: substitute(&e.ty, &lift(a, 0, i), i),
        });
    }
    Ok(map_judgement_subject(
        j,
        &mut |t, dp| substitute(t, &lift(a, 0, k + dp), k + dp),
        &mut |t, dp| substitute(t, &lift(a, 0, k + dp), k + dp),
    )
    .with_ctx(ctx))
}

/// Conclusion of exchanging context entries `pos` and `pos + 1` of `j`.
pub(crate) fn exch_judgement(pos: usize, j: &Judgement) -> Result<Judgement, String> {
    let full = j.ctx();
    ensure(full.len() >= pos + 2, "exchange position out of range")?;
    let a = &full.entries[pos];
    let b = &full.entries[pos + 1];
    ensure(!occurs_free(&b.ty, 0), "the second entry must not depend on the first")?;
    let k = full.len() - pos - 2;
    let mut ctx = full.prefix(pos);
    ctx.entries.push(Entry {
        name: b.name.clone(),
        ty: shift(&b.ty, 0, -1).map_err(|e| e.to_string())?,
    });
    ctx.entries.push(Entry {
        name: a.name.clone(),
        ty: lift(&a.ty, 0, 1),
    });
    for (i, e) in full.entries[pos + 2..].iter().enumerate() {
        ctx.entries.push(Entry {
            name: e.name.clone(),
            ty: rename(&e.ty, &|v| swap(v, i)),
        });
    }
    Ok(map_judgement_subject(
        j,
        &mut |t, dp| rename(t, &|v| swap(v, k + dp)),
        &mut |t, dp| rename(t, &|v| swap(v, k + dp)),
    )
    .with_ctx(ctx))
}

fn check_node(sig: &Signature, d: &Derivation) -> Check {
    let prem: Vec<&Judgement> = d.premises.iter().map(|p| &p.conclusion).collect();
    let concl = &d.conclusion;
    match &d.rule {
        Rule::Vble => {
            arity(d, 1)?;
            let (g, a) = as_type_form(prem[0]).ok_or("premise must be a type formation")?;
            let want = Judgement::TermForm {
                ctx: snoc(g, a),
                term: Term::Var(0),
                ty: lift(a, 0, 1),
            };
            ensure(*concl == want, "conclusion must be Γ, x : A ⊢ x : A")
        }
        Rule::Weak => {
            arity(d, 2)?;
            let want = weak_judgement(prem[0], prem[1])?;
            ensure(*concl == want, "conclusion must be the weakened judgement")
        }
        Rule::Subst => {
            arity(d, 2)?;
            let want = subst_judgement(prem[0], prem[1])?;
            ensure(*concl == want, "conclusion must be the substituted judgement")
        }
        Rule::Exch(pos) => {
            arity(d, 1)?;
            let want = exch_judgement(*pos, prem[0])?;
            ensure(*concl == want, "conclusion must be the exchanged judgement")
        }
        Rule::TyRefl => {
            arity(d, 1)?;
            let (g, a) = as_type_form(prem[0]).ok_or("premise must be a type formation")?;
            ensure(
                *concl
                    == Judgement::TypeEq {
                        ctx: g.clone(),
                        lhs: a.clone(),
                        rhs: a.clone(),
                    },
                "conclusion must be A = A",
            )
        }
        Rule::TySym => {
            arity(d, 1)?;
            match (prem[0], concl) {
                (Judgement::TypeEq { ctx, lhs, rhs }, Judgement::TypeEq { ctx: c2, lhs: l2, rhs: r2 }) => {
                    ensure(ctx == c2 && lhs == r2 && rhs == l2, "conclusion must swap the sides")
                }
                _ => Err("premise and conclusion must be type equalities".into()),
            }
        }
        Rule::TyTrans => {
            arity(d, 2)?;
            match (prem[0], prem[1], concl) {
                (
                    Judgement::TypeEq { ctx, lhs, rhs },
                    Judgement::TypeEq { ctx: c1, lhs: l1, rhs: r1 },
                    Judgement::TypeEq { ctx: c2, lhs: l2, rhs: r2 },
                ) => ensure(
                    ctx == c1 && ctx == c2 && rhs == l1 && lhs == l2 && r1 == r2,
                    "premises must chain and the conclusion join their ends",
                ),
                _ => Err("premises and conclusion must be type equalities".into()),
            }
        }
        Rule::TmRefl => {
            arity(d, 1)?;
            let (g, a, t) = as_term_form(prem[0]).ok_or("premise must be a typing")?;
            ensure(
                *concl
                    == Judgement::TermEq {
                        ctx: g.clone(),
                        lhs: a.clone(),
                        rhs: a.clone(),
                        ty: t.clone(),
                    },
                "conclusion must be a = a : A",
            )
        }
        Rule::TmSym => {
            arity(d, 1)?;
            match (prem[0], concl) {
                (
                    Judgement::TermEq { ctx, lhs, rhs, ty },
                    Judgement::TermEq {
                        ctx: c2,
                        lhs: l2,
                        rhs: r2,
                        ty: t2,
                    },
                ) => ensure(
                    ctx == c2 && lhs == r2 && rhs == l2 && ty == t2,
                    "conclusion must swap the sides",
                ),
                _ => Err("premise and conclusion must be term equalities".into()),
            }
        }
        Rule::TmTrans => {
            arity(d, 2)?;
            match (prem[0], prem[1], concl) {
                (
                    Judgement::TermEq { ctx, lhs, rhs, ty },
                    Judgement::TermEq {
                        ctx: c1,
                        lhs: l1,
                        rhs: r1,
                        ty: t1,
                    },
                    Judgement::TermEq {
                        ctx: c2,
                        lhs: l2,
                        rhs: r2,
                        ty: t2,
                    },
                ) => ensure(
                    ctx == c1 && ctx == c2 && ty == t1 && ty == t2 && rhs == l1 && lhs == l2 && r1 == r2,
                    "premises must chain and the conclusion join their ends",
                ),
                _ => Err("premises and conclusion must be term equalities".into()),
            }
        }
        Rule::PiForm => {
            arity(d, 1)?;
            let (ga, b) = as_type_form(prem[0]).ok_or("premise must be a type formation")?;
            let (g, a) = unsnoc(ga).ok_or("premise context must be nonempty")?;
            ensure(
                *concl
                    == Judgement::TypeForm {
                        ctx: g,
                        ty: Type::Pi(Default::default(), Box::new(a), Box::new(b.clone())),
                    },
                "conclusion must be Π(x : A). B type",
            )
        }
        Rule::PiIntro => {
            arity(d, 2)?;
            let (ga, b_ty) = as_type_form(prem[0]).ok_or("first premise must be a type formation")?;
            let (c1, body, t1) = as_term_form(prem[1]).ok_or("second premise must be a typing")?;
            ensure(ga == c1 && b_ty == t1, "premises must agree on Γ, x : A and B")?;
            let (g, a) = unsnoc(ga).ok_or("premise context must be nonempty")?;
            let want = Judgement::TermForm {
                ctx: g,
                term: Term::Lam(Default::default(), Box::new(a.clone()), Box::new(body.clone())),
                ty: Type::Pi(Default::default(), Box::new(a), Box::new(b_ty.clone())),
            };
            ensure(*concl == want, "conclusion must be λ(x : A). b : Π(x : A). B")
        }
        Rule::PiElim => {
            arity(d, 2)?;
            let (g, f, fty) = as_term_form(prem[0]).ok_or("first premise must be a typing")?;
            let (g2, a, aty) = as_term_form(prem[1]).ok_or("second premise must be a typing")?;
            ensure(g == g2, "premises must share the context")?;
            let (dom, cod) = match fty {
                Type::Pi(_, dom, cod) => (dom, cod),
                _ => return Err("function premise must have a Π type".into()),
            };
            ensure(**dom == *aty, "argument must have the domain type")?;
            let want = Judgement::TermForm {
                ctx: g.clone(),
                term: Term::app(f.clone(), a.clone()),
                ty: substitute(cod.as_ref(), a, 0),
            };
            ensure(*concl == want, "conclusion must be app(f, a) : B[a/x]")
        }
        Rule::PiComp => {
            arity(d, 3)?;
            let (ga, b_ty) = as_type_form(prem[0]).ok_or("first premise must be a type formation")?;
            let (c1, body, t1) = as_term_form(prem[1]).ok_or("second premise must be a typing")?;
            let (g, a, aty) = as_term_form(prem[2]).ok_or("third premise must be a typing")?;
            ensure(ga == c1 && b_ty == t1, "premises must agree on Γ, x : A and B")?;
            let (g0, dom) = unsnoc(ga).ok_or("premise context must be nonempty")?;
            ensure(g0 == *g && dom == *aty, "argument must live in Γ with type A")?;
            let want = Judgement::TermEq {
                ctx: g.clone(),
                lhs: Term::app(
                    Term::Lam(Default::default(), Box::new(dom), Box::new(body.clone())),
                    a.clone(),
                ),
                rhs: substitute(body, a, 0),
                ty: substitute(b_ty, a, 0),
            };
            ensure(*concl == want, "conclusion must be app(λx.b, a) = b[a/x] : B[a/x]")
        }
        Rule::SigmaForm => {
            arity(d, 2)?;
            let (g, a) = as_type_form(prem[0]).ok_or("first premise must be a type formation")?;
            let (ga, b) = as_type_form(prem[1]).ok_or("second premise must be a type formation")?;
            ensure(*ga == snoc(g, a), "second premise must live in Γ, x : A")?;
            ensure(
                *concl
                    == Judgement::TypeForm {
                        ctx: g.clone(),
                        ty: Type::Sigma(Default::default(), Box::new(a.clone()), Box::new(b.clone())),
                    },
                "conclusion must be Σ(x : A). B type",
            )
        }
        Rule::SigmaIntro => {
            arity(d, 2)?;
            let (g, a) = as_type_form(prem[0]).ok_or("first premise must be a type formation")?;
            let (ga, b) = as_type_form(prem[1]).ok_or("second premise must be a type formation")?;
            ensure(*ga == snoc(g, a), "second premise must live in Γ, x : A")?;
            let sigma = Type::Sigma(Default::default(), Box::new(a.clone()), Box::new(b.clone()));
            let want = Judgement::TermForm {
                ctx: snoc(ga, b),
                term: Term::pair(Term::Var(1), Term::Var(0)),
                ty: lift(&sigma, 0, 2),
            };
            ensure(*concl == want, "conclusion must be Γ, x : A, y : B ⊢ pair(x, y) : Σ(x : A). B")
        }
        Rule::SigmaElim | Rule::SigmaComp => {
            arity(d, 2)?;
            let (gz, c) = as_type_form(prem[0]).ok_or("first premise must be a type formation")?;
            let (gab, dd, dty) = as_term_form(prem[1]).ok_or("second premise must be a typing")?;
            let (g, sigma) = unsnoc(gz).ok_or("motive context must be nonempty")?;
            let (a, b) = match &sigma {
                Type::Sigma(_, a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err("motive must be over a Σ type".into()),
            };
            ensure(*gab == snoc(&snoc(&g, &a), &b), "branch must live in Γ, x : A, y : B")?;
            ensure(*dty == branch_type(c), "branch must have type C[pair(x, y)/z]")?;
            let want = if d.rule == Rule::SigmaElim {
                Judgement::TermForm {
                    ctx: gz.clone(),
                    term: generic_split(c, dd),
                    ty: c.clone(),
                }
            } else {
                Judgement::TermEq {
                    ctx: gab.clone(),
                    lhs: Term::split(lift(c, 1, 2), lift(dd, 2, 2), Term::pair(Term::Var(1), Term::Var(0))),
                    rhs: dd.clone(),
                    ty: dty.clone(),
                }
            };
            ensure(*concl == want, "conclusion does not match the Σ rule")
        }
        Rule::BaseForm => {
            let (g, ty) = as_type_form(concl).ok_or("conclusion must be a type formation")?;
            let (name, args) = match ty {
                Type::Base(n, args) => (n, args),
                _ => return Err("conclusion must be a base type".into()),
            };
            let tel = sig.base(name).ok_or_else(|| format!("unknown base type `{name}`"))?;
            ensure(args.len() == tel.len(), "wrong number of parameters")?;
            arity(d, 1 + args.len())?;
            ensure(
                *prem[0]
                    == Judgement::CtxForm {
                        ctx: Context::empty(),
                        ext: g.clone(),
                    },
                "first premise must be ⊢ Γ ctx",
            )?;
            for (i, arg) in args.iter().enumerate() {
                let want = Judgement::TermForm {
                    ctx: g.clone(),
                    term: arg.clone(),
                    ty: telescope_entry(tel, args, i),
                };
                ensure(*prem[i + 1] == want, "parameter premise does not match the telescope")?;
            }
            Ok(())
        }
        Rule::ConstIntro => {
            arity(d, 1)?;
            let (g, t, ty) = as_term_form(concl).ok_or("conclusion must be a typing")?;
            let name = match t {
                Term::Const(c) => c,
                _ => return Err("conclusion must type a constant".into()),
            };
            let want = sig.constant(name).ok_or_else(|| format!("unknown constant `{name}`"))?;
            ensure(ty == want, "constant must have its declared type")?;
            ensure(
                *prem[0]
                    == Judgement::CtxForm {
                        ctx: Context::empty(),
                        ext: g.clone(),
                    },
                "premise must be ⊢ Γ ctx",
            )
        }
        Rule::Conv => {
            arity(d, 2)?;
            let (g, t, a) = as_term_form(prem[0]).ok_or("first premise must be a typing")?;
            match prem[1] {
                Judgement::TypeEq { ctx, lhs, rhs } => {
                    ensure(ctx == g && lhs == a, "type equality must start at the term's type")?;
                    ensure(
                        *concl
                            == Judgement::TermForm {
                                ctx: g.clone(),
                                term: t.clone(),
                                ty: rhs.clone(),
                            },
                        "conclusion must retype the term",
                    )
                }
                _ => Err("second premise must be a type equality".into()),
            }
        }
        Rule::Ann | Rule::AnnErase => {
            arity(d, 1)?;
            let (g, t, ty) = as_term_form(prem[0]).ok_or("premise must be a typing")?;
            let ann = Term::ann(t.clone(), ty.clone());
            let want = if d.rule == Rule::Ann {
                Judgement::TermForm {
                    ctx: g.clone(),
                    term: ann,
                    ty: ty.clone(),
                }
            } else {
                Judgement::TermEq {
                    ctx: g.clone(),
                    lhs: ann,
                    rhs: t.clone(),
                    ty: ty.clone(),
                }
            };
            ensure(*concl == want, "conclusion does not match the ascription")
        }
        Rule::Cong(path) => check_cong(d, path, &prem),
        Rule::CtxEmpty | Rule::CtxEqEmpty => {
            let g = concl.ctx();
            let shape_ok = match concl {
                Judgement::CtxForm { ext, .. } => d.rule == Rule::CtxEmpty && ext.is_empty(),
                Judgement::CtxEq { lhs, rhs, .. } => d.rule == Rule::CtxEqEmpty && lhs.is_empty() && rhs.is_empty(),
                _ => false,
            };
            ensure(shape_ok, "conclusion must be about the empty extension")?;
            if g.is_empty() && d.rule == Rule::CtxEmpty {
                arity(d, 0)
            } else {
                arity(d, 1)?;
                ensure(
                    *prem[0]
                        == Judgement::CtxForm {
                            ctx: Context::empty(),
                            ext: g.clone(),
                        },
                    "premise must be ⊢ Γ ctx",
                )
            }
        }
        Rule::CtxExt => {
            arity(d, 2)?;
            match (prem[0], prem[1], concl) {
                (
                    Judgement::CtxForm { ctx, ext },
                    Judgement::TypeForm { ctx: c1, ty },
                    Judgement::CtxForm { ctx: c2, ext: e2 },
                ) => {
                    ensure(*c1 == ctx.concat(ext), "type must live in Γ, Δ")?;
                    ensure(ctx == c2 && e2.len() == ext.len() + 1, "conclusion must extend Δ by one")?;
                    ensure(e2.prefix(ext.len()) == *ext && e2.entries[ext.len()].ty == *ty, "conclusion must be Δ, x : A")
                }
                _ => Err("premises must be a context and a type formation".into()),
            }
        }
        Rule::CtxEqExt => {
            arity(d, 2)?;
            match (prem[0], prem[1], concl) {
                (
                    Judgement::CtxEq { ctx, lhs, rhs },
                    Judgement::TypeEq { ctx: c1, lhs: a, rhs: b },
                    Judgement::CtxEq {
                        ctx: c2,
                        lhs: l2,
                        rhs: r2,
                    },
                ) => {
                    ensure(*c1 == ctx.concat(lhs), "type equality must live in Γ, Δ")?;
                    ensure(ctx == c2, "contexts must agree")?;
                    ensure(*l2 == snoc(lhs, a) && *r2 == snoc(rhs, b), "conclusion must extend both sides")
                }
                _ => Err("premises must be a context equality and a type equality".into()),
            }
        }
    }
}

pub(crate) fn swap(v: usize, j: usize) -> usize {
    if v == j {
        j + 1
    } else if v == j + 1 {
        j
    } else {
        v
    }
}

/// Premises: the hole equation, the typing of the left side, then one
/// typing of the scrutinee for every split binder crossed by the path.
fn check_cong(d: &Derivation, path: &[usize], prem: &[&Judgement]) -> Check {
    ensure(prem.len() >= 2, "Cong needs a hole equation and a typing")?;
    let concl = &d.conclusion;
    let (g, lhs, rhs) = match concl {
        Judgement::TermEq { ctx, lhs, rhs, ty } => {
            let want = Judgement::TermForm {
                ctx: ctx.clone(),
                term: lhs.clone(),
                ty: ty.clone(),
            };
            ensure(*prem[1] == want, "second premise must type the left side")?;
            (ctx, Expr::Tm(lhs.clone()), Expr::Tm(rhs.clone()))
        }
        Judgement::TypeEq { ctx, lhs, rhs } => {
            let want = Judgement::TypeForm {
                ctx: ctx.clone(),
                ty: lhs.clone(),
            };
            ensure(*prem[1] == want, "second premise must form the left side")?;
            (ctx, Expr::Ty(lhs.clone()), Expr::Ty(rhs.clone()))
        }
        _ => return Err("conclusion must be an equality".into()),
    };
    let mut ctx = g.clone();
    let (mut l, mut r) = (lhs, rhs);
    let mut extra = prem[2..].iter();
    for &i in path {
        ensure(l.child_count() == r.child_count() && i < l.child_count(), "path leaves the expression")?;
        for k in 0..l.child_count() {
            if k != i {
                ensure(l.child(k) == r.child(k), "sides differ outside the path")?;
            }
        }
        // Same constructor: replacing the path child must make them equal.
        let (lc, bind) = l.child(i).ok_or("path leaves the expression")?;
        let (rc, _) = r.child(i).ok_or("path leaves the expression")?;
        ensure(l.replace(i, rc.clone()).as_ref() == Some(&r), "sides have different constructors")?;
        match bind {
            Binding::None => {}
            Binding::One(a) => ctx = snoc(&ctx, &a),
            Binding::SplitMotive | Binding::SplitBranch => {
                let scrut = match &l {
                    Expr::Tm(Term::Split { scrutinee, .. }) => (**scrutinee).clone(),
                    _ => return Err("split binder outside a split".into()),
                };
                let j = extra.next().ok_or("missing scrutinee typing premise")?;
                let (jc, jt, jty) = as_term_form(j).ok_or("scrutinee premise must be a typing")?;
                ensure(*jc == ctx && *jt == scrut, "scrutinee premise must type the scrutinee here")?;
                match jty {
                    Type::Sigma(_, a, b) => {
                        if bind == Binding::SplitMotive {
                            ctx = snoc(&ctx, jty);
                        } else {
                            ctx = snoc(&snoc(&ctx, a), b);
                        }
                    }
                    _ => return Err("scrutinee must have a Σ type".into()),
                }
            }
        }
        l = lc;
        r = rc;
    }
    ensure(extra.next().is_none(), "too many premises")?;
    match (prem[0], &l, &r) {
        (Judgement::TermEq { ctx: hc, lhs, rhs, .. }, Expr::Tm(lt), Expr::Tm(rt)) => {
            ensure(*hc == ctx && lhs == lt && rhs == rt, "hole equation does not match the position")
        }
        (Judgement::TypeEq { ctx: hc, lhs, rhs }, Expr::Ty(lt), Expr::Ty(rt)) => {
            ensure(*hc == ctx && lhs == lt && rhs == rt, "hole equation does not match the position")
        }
        _ => Err("hole equation has the wrong form".into()),
    }
}
