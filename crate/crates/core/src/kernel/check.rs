//! Bidirectional checker. Every successful check returns the derivation it
//! found, so the validator can confirm it.

use super::derivation::{
    branch_type, exch_judgement, generic_split, snoc, subst_judgement, swap, telescope_entry, weak_judgement,
};
use super::expr::{root_redex, step, Binding, Expr, Redex, STEP_BOUND};
use super::{ctx_names, def_equal_types, Derivation, KernelError, Rule, Signature};
use crate::syntax::ops::{lift, occurs_free, rename, shift, substitute};
use crate::syntax::print::{print_term_in, print_type_in};
use crate::syntax::{Context, Entry, Judgement, Term, Type};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

type D = Rc<Derivation>;
type R<T> = Result<T, KernelError>;

pub struct Checker<'s> {
    sig: &'s Signature,
    ctx_cache: RefCell<HashMap<Context, D>>,
    type_cache: RefCell<HashMap<(Context, Type), D>>,
    path: RefCell<Vec<&'static str>>,
}

fn node(rule: Rule, conclusion: Judgement, premises: Vec<D>) -> D {
    Derivation::new(rule, conclusion, premises)
}

/// Builds a node whose conclusion is computed by a structural rule.
fn derived(rule: Rule, premises: Vec<D>, f: impl FnOnce(&[&Judgement]) -> Result<Judgement, String>) -> R<D> {
    let js: Vec<&Judgement> = premises.iter().map(|p| &p.conclusion).collect();
    let concl = f(&js).map_err(|reason| KernelError::RuleMismatch {
        path: "checker".into(),
        rule: rule.name().into(),
        reason,
    })?;
    Ok(node(rule, concl, premises))
}

fn term_of(d: &D) -> (&Context, &Term, &Type) {
    match &d.conclusion {
        Judgement::TermForm { ctx, term, ty } => (ctx, term, ty),
        j => panic!("expected a typing derivation, found {}", j.form_name()),
    }
}

fn eq_sides(d: &D) -> (&Term, &Term, &Type) {
    match &d.conclusion {
        Judgement::TermEq { lhs, rhs, ty, .. } => (lhs, rhs, ty),
        j => panic!("expected a term equality, found {}", j.form_name()),
    }
}

impl<'s> Checker<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Checker {
            sig,
            ctx_cache: RefCell::default(),
            type_cache: RefCell::default(),
            path: RefCell::default(),
        }
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    fn at<T>(&self, seg: &'static str, f: impl FnOnce() -> T) -> T {
        self.path.borrow_mut().push(seg);
        let r = f();
        self.path.borrow_mut().pop();
        r
    }

    fn path_str(&self) -> String {
        let p = self.path.borrow();
        if p.is_empty() {
            "top".into()
        } else {
            p.join(".")
        }
    }

    fn show_ty(&self, ctx: &Context, t: &Type) -> String {
        print_type_in(t, &ctx_names(ctx))
    }

    fn show_tm(&self, ctx: &Context, t: &Term) -> String {
        print_term_in(t, &ctx_names(ctx))
    }

    // ---- contexts ----

    /// `⊢ Γ ctx`. Errors name the first ill-formed entry.
    pub fn check_context(&self, ctx: &Context) -> R<D> {
        if let Some(d) = self.ctx_cache.borrow().get(ctx) {
            return Ok(d.clone());
        }
        let d = match ctx.len() {
            0 => node(
                Rule::CtxEmpty,
                Judgement::CtxForm {
                    ctx: Context::empty(),
                    ext: Context::empty(),
                },
                vec![],
            ),
            n => {
                let prefix = ctx.prefix(n - 1);
                let pd = self.check_context(&prefix)?;
                let e = &ctx.entries[n - 1];
                let td = self.type_deriv(&prefix, &e.ty).map_err(|reason| KernelError::IllFormedContext {
                    entry: n - 1,
                    name: e.name.0.clone(),
                    reason: Box::new(reason),
                })?;
                node(
                    Rule::CtxExt,
                    Judgement::CtxForm {
                        ctx: Context::empty(),
                        ext: ctx.clone(),
                    },
                    vec![pd, td],
                )
            }
        };
        self.ctx_cache.borrow_mut().insert(ctx.clone(), d.clone());
        Ok(d)
    }

    /// `Γ ⊢ Δ ctx`.
    pub fn check_extension(&self, ctx: &Context, ext: &Context) -> R<D> {
        let base = self.check_context(ctx)?;
        let mut d = if ctx.is_empty() {
            base
        } else {
            node(
                Rule::CtxEmpty,
                Judgement::CtxForm {
                    ctx: ctx.clone(),
                    ext: Context::empty(),
                },
                vec![base],
            )
        };
        let mut cur = Context::empty();
        for (i, e) in ext.entries.iter().enumerate() {
            let td = self
                .type_deriv(&ctx.concat(&cur), &e.ty)
                .map_err(|reason| KernelError::IllFormedContext {
                    entry: ctx.len() + i,
                    name: e.name.0.clone(),
                    reason: Box::new(reason),
                })?;
            cur.entries.push(e.clone());
            d = node(
                Rule::CtxExt,
                Judgement::CtxForm {
                    ctx: ctx.clone(),
                    ext: cur.clone(),
                },
                vec![d, td],
            );
        }
        Ok(d)
    }

    // ---- types ----

    /// `Γ ⊢ A type`, checking `Γ` first.
    pub fn check_type(&self, ctx: &Context, ty: &Type) -> R<D> {
        self.check_context(ctx)?;
        self.type_deriv(ctx, ty)
    }

    fn type_deriv(&self, ctx: &Context, ty: &Type) -> R<D> {
        let key = (ctx.clone(), ty.clone());
        if let Some(d) = self.type_cache.borrow().get(&key) {
            return Ok(d.clone());
        }
        let concl = Judgement::TypeForm {
            ctx: ctx.clone(),
            ty: ty.clone(),
        };
        let d = match ty {
            Type::Base(name, args) => {
                let tel = self.sig.base(name).ok_or_else(|| KernelError::UnknownBase(name.clone()))?;
                if tel.len() != args.len() {
                    return Err(KernelError::ArityMismatch {
                        name: name.clone(),
                        expected: tel.len(),
                        found: args.len(),
                    });
                }
                let mut prem = vec![self.check_context(ctx)?];
                for (i, a) in args.iter().enumerate() {
                    let want = telescope_entry(tel, args, i);
                    prem.push(self.at("param", || self.check(ctx, a, &want))?);
                }
                node(Rule::BaseForm, concl, prem)
            }
            Type::Pi(h, a, b) => {
                self.at("dom", || self.type_deriv(ctx, a))?;
                let mut ca = ctx.clone();
                ca.push(h.clone(), (**a).clone());
                let bd = self.at("cod", || self.type_deriv(&ca, b))?;
                node(Rule::PiForm, concl, vec![bd])
            }
            Type::Sigma(h, a, b) => {
                let ad = self.at("dom", || self.type_deriv(ctx, a))?;
                let mut ca = ctx.clone();
                ca.push(h.clone(), (**a).clone());
                let bd = self.at("cod", || self.type_deriv(&ca, b))?;
                node(Rule::SigmaForm, concl, vec![ad, bd])
            }
        };
        self.type_cache.borrow_mut().insert(key, d.clone());
        Ok(d)
    }

    // ---- terms ----

    /// `Γ ⊢ t : A`, checking `Γ` and `A` first.
    pub fn check_term(&self, ctx: &Context, t: &Term, ty: &Type) -> R<D> {
        self.check_type(ctx, ty)?;
        self.check(ctx, t, ty)
    }

    /// Synthesizes a type for `t` in a checked context.
    pub fn infer_type(&self, ctx: &Context, t: &Term) -> R<(Type, D)> {
        self.check_context(ctx)?;
        self.infer(ctx, t)
    }

    fn var_deriv(&self, ctx: &Context, i: usize) -> R<D> {
        let n = ctx.len();
        if i >= n {
            return Err(KernelError::UnboundIndex(i));
        }
        let p = n - 1 - i;
        let prefix = ctx.prefix(p);
        let a = &ctx.entries[p];
        let mut d = node(
            Rule::Vble,
            Judgement::TermForm {
                ctx: ctx.prefix(p + 1),
                term: Term::Var(0),
                ty: lift(&a.ty, 0, 1),
            },
            vec![self.type_deriv(&prefix, &a.ty)?],
        );
        for q in p + 1..n {
            let td = self.type_deriv(&ctx.prefix(q), &ctx.entries[q].ty)?;
            let mut concl = weak_judgement(&td.conclusion, &d.conclusion).expect("weakening a variable");
            concl = concl.with_ctx(ctx.prefix(q + 1));
            d = node(Rule::Weak, concl, vec![td, d]);
        }
        Ok(d)
    }

    fn infer(&self, ctx: &Context, t: &Term) -> R<(Type, D)> {
        let d = match t {
            Term::Var(i) => self.var_deriv(ctx, *i)?,
            Term::Const(c) => {
                let ty = self.sig.constant(c).ok_or_else(|| KernelError::UnknownConst(c.clone()))?;
                node(
                    Rule::ConstIntro,
                    Judgement::TermForm {
                        ctx: ctx.clone(),
                        term: t.clone(),
                        ty: ty.clone(),
                    },
                    vec![self.check_context(ctx)?],
                )
            }
            Term::Lam(h, a, b) => {
                self.at("dom", || self.type_deriv(ctx, a))?;
                let mut ca = ctx.clone();
                ca.push(h.clone(), (**a).clone());
                let (bt, bd) = self.at("body", || self.infer(&ca, b))?;
                let btd = self.type_deriv(&ca, &bt)?;
                node(
                    Rule::PiIntro,
                    Judgement::TermForm {
                        ctx: ctx.clone(),
                        term: t.clone(),
                        ty: Type::Pi(h.clone(), a.clone(), Box::new(bt)),
                    },
                    vec![btd, bd],
                )
            }
            Term::App(f, a) => {
                let (ft, fd) = self.at("fun", || self.infer(ctx, f))?;
                let (dom, cod) = match &ft {
                    Type::Pi(_, dom, cod) => (dom, cod),
                    _ => return Err(KernelError::NotAFunction(self.show_tm(ctx, f))),
                };
                let ad = self.at("arg", || self.check(ctx, a, dom))?;
                node(
                    Rule::PiElim,
                    Judgement::TermForm {
                        ctx: ctx.clone(),
                        term: t.clone(),
                        ty: substitute(cod.as_ref(), a, 0),
                    },
                    vec![fd, ad],
                )
            }
            Term::Pair(a, b) => {
                // Without an expected type, a pair gets the non-dependent Σ of
                // its components' types.
                let (at, ad) = self.at("fst", || self.infer(ctx, a))?;
                let (bt, bd) = self.at("snd", || self.infer(ctx, b))?;
                let sigma = Type::sigma("x", at, lift(&bt, 0, 1));
                self.pair_deriv(ctx, &sigma, ad, bd)?
            }
            Term::Split {
                motive,
                branch,
                scrutinee,
                ..
            } => {
                let (st, sd) = self.at("scrutinee", || self.infer(ctx, scrutinee))?;
                let elim = self.split_elim(ctx, &st, motive, branch, scrutinee)?;
                derived(Rule::Subst, vec![sd, elim], |j| subst_judgement(j[0], j[1]))?
            }
            Term::Ann(inner, ty) => {
                self.at("ann", || self.type_deriv(ctx, ty))?;
                let d = self.check(ctx, inner, ty)?;
                node(
                    Rule::Ann,
                    Judgement::TermForm {
                        ctx: ctx.clone(),
                        term: t.clone(),
                        ty: (**ty).clone(),
                    },
                    vec![d],
                )
            }
        };
        let ty = term_of(&d).2.clone();
        Ok((ty, d))
    }

    /// Σ-elim over `Γ, z : S` for a split with scrutinee type `S`.
    fn split_elim(&self, ctx: &Context, st: &Type, motive: &Type, branch: &Term, scrutinee: &Term) -> R<D> {
        let (a, b) = match st {
            Type::Sigma(_, a, b) => (a, b),
            _ => return Err(KernelError::NotASigma(self.show_tm(ctx, scrutinee))),
        };
        let cz = snoc(ctx, st);
        let md = self.at("motive", || self.type_deriv(&cz, motive))?;
        let cab = snoc(&snoc(ctx, a), b);
        let bd = self.at("branch", || self.check(&cab, branch, &branch_type(motive)))?;
        Ok(node(
            Rule::SigmaElim,
            Judgement::TermForm {
                ctx: cz,
                term: generic_split(motive, branch),
                ty: motive.clone(),
            },
            vec![md, bd],
        ))
    }

    /// `pair(a, b) : Σ(x : A). B` from `a : A` and `b : B[a/x]`.
    fn pair_deriv(&self, ctx: &Context, sigma: &Type, ad: D, bd: D) -> R<D> {
        let (a, b) = match sigma {
            Type::Sigma(_, a, b) => (a, b),
            _ => unreachable!("pair_deriv needs a Σ type"),
        };
        let ta = self.type_deriv(ctx, a)?;
        let tb = self.type_deriv(&snoc(ctx, a), b)?;
        let intro = node(
            Rule::SigmaIntro,
            Judgement::TermForm {
                ctx: snoc(&snoc(ctx, a), b),
                term: Term::pair(Term::Var(1), Term::Var(0)),
                ty: lift(sigma, 0, 2),
            },
            vec![ta, tb],
        );
        let s1 = derived(Rule::Subst, vec![ad, intro], |j| subst_judgement(j[0], j[1]))?;
        derived(Rule::Subst, vec![bd, s1], |j| subst_judgement(j[0], j[1]))
    }

    fn check(&self, ctx: &Context, t: &Term, ty: &Type) -> R<D> {
        match (t, ty) {
            (Term::Pair(a, b), Type::Sigma(_, at, bt)) => {
                let ad = self.at("fst", || self.check(ctx, a, at))?;
                let bty = substitute(bt.as_ref(), a, 0);
                let bd = self.at("snd", || self.check(ctx, b, &bty))?;
                self.pair_deriv(ctx, ty, ad, bd)
            }
            (Term::Pair(..), _) => Err(KernelError::TypeMismatch {
                path: self.path_str(),
                expected: self.show_ty(ctx, ty),
                found: "a pair".into(),
            }),
            (Term::Lam(h, a, body), Type::Pi(_, dom, cod)) if a == dom => {
                let mut ca = ctx.clone();
                ca.push(h.clone(), (**a).clone());
                let cd = self.type_deriv(&ca, cod)?;
                let bd = self.at("body", || self.check(&ca, body, cod))?;
                Ok(node(
                    Rule::PiIntro,
                    Judgement::TermForm {
                        ctx: ctx.clone(),
                        term: t.clone(),
                        ty: ty.clone(),
                    },
                    vec![cd, bd],
                ))
            }
            _ => {
                let (found, d) = self.infer(ctx, t)?;
                if found == *ty {
                    return Ok(d);
                }
                if !def_equal_types(&found, ty)? {
                    return Err(KernelError::TypeMismatch {
                        path: self.path_str(),
                        expected: self.show_ty(ctx, ty),
                        found: self.show_ty(ctx, &found),
                    });
                }
                let eq = self.type_eq_deriv(ctx, &found, ty)?;
                Ok(node(
                    Rule::Conv,
                    Judgement::TermForm {
                        ctx: ctx.clone(),
                        term: t.clone(),
                        ty: ty.clone(),
                    },
                    vec![d, eq],
                ))
            }
        }
    }

    // ---- equality ----

    /// Derivation of `Γ ⊢ lhs = rhs type` through their normal forms.
    pub fn type_eq_deriv(&self, ctx: &Context, lhs: &Type, rhs: &Type) -> R<D> {
        if lhs == rhs {
            let d = self.type_deriv(ctx, lhs)?;
            return Ok(node(
                Rule::TyRefl,
                Judgement::TypeEq {
                    ctx: ctx.clone(),
                    lhs: lhs.clone(),
                    rhs: lhs.clone(),
                },
                vec![d],
            ));
        }
        let (nl, dl) = self.chain(ctx, &Expr::Ty(lhs.clone()), None)?;
        let (nr, dr) = self.chain(ctx, &Expr::Ty(rhs.clone()), None)?;
        if nl != nr {
            return Err(KernelError::NotDefEqual {
                lhs: self.show_ty(ctx, lhs),
                rhs: self.show_ty(ctx, rhs),
            });
        }
        Ok(join(ctx, dl, dr, false))
    }

    /// Derivation of `Γ ⊢ lhs = rhs : ty` through their normal forms.
    pub fn term_eq_deriv(&self, ctx: &Context, lhs: &Term, rhs: &Term, ty: &Type) -> R<D> {
        let (nl, dl) = self.chain(ctx, &Expr::Tm(lhs.clone()), Some(ty))?;
        let (nr, dr) = self.chain(ctx, &Expr::Tm(rhs.clone()), Some(ty))?;
        if nl != nr {
            return Err(KernelError::NotDefEqual {
                lhs: self.show_tm(ctx, lhs),
                rhs: self.show_tm(ctx, rhs),
            });
        }
        Ok(join(ctx, dl, dr, true))
    }

    /// Reduces `e` to normal form, returning it with a derivation of
    /// `e = nf` (at type `ty` for terms).
    fn chain(&self, ctx: &Context, e: &Expr, ty: Option<&Type>) -> R<(Expr, D)> {
        let mut cur = e.clone();
        let mut acc: D = match (&cur, ty) {
            (Expr::Tm(t), Some(ty)) => {
                let d = self.check(ctx, t, ty)?;
                node(
                    Rule::TmRefl,
                    Judgement::TermEq {
                        ctx: ctx.clone(),
                        lhs: t.clone(),
                        rhs: t.clone(),
                        ty: ty.clone(),
                    },
                    vec![d],
                )
            }
            (Expr::Ty(t), None) => {
                let d = self.type_deriv(ctx, t)?;
                node(
                    Rule::TyRefl,
                    Judgement::TypeEq {
                        ctx: ctx.clone(),
                        lhs: t.clone(),
                        rhs: t.clone(),
                    },
                    vec![d],
                )
            }
            _ => unreachable!("terms need a type, types do not"),
        };
        let mut first = true;
        for _ in 0..STEP_BOUND {
            let Some((path, next)) = step(&cur) else {
                return Ok((cur, acc));
            };
            let sd = self.step_deriv(ctx, &cur, &path, &next, ty)?;
            acc = if first { sd } else { trans(ctx, acc, sd) };
            first = false;
            cur = next;
        }
        Err(KernelError::NonTermination { bound: STEP_BOUND })
    }

    /// `whole = next` where `next` contracts the redex at `path`.
    fn step_deriv(&self, ctx: &Context, whole: &Expr, path: &[usize], next: &Expr, ty: Option<&Type>) -> R<D> {
        let mut hctx = ctx.clone();
        let mut extra = Vec::new();
        let mut cur = whole.clone();
        for &i in path {
            let (child, bind) = cur.child(i).expect("redex path is valid");
            match bind {
                Binding::None => {}
                Binding::One(a) => hctx = snoc(&hctx, &a),
                Binding::SplitMotive | Binding::SplitBranch => {
                    let scrut = match &cur {
                        Expr::Tm(Term::Split { scrutinee, .. }) => scrutinee.as_ref().clone(),
                        _ => unreachable!("split binder outside a split"),
                    };
                    let (st, sd) = self.infer(&hctx, &scrut)?;
                    extra.push(sd);
                    match (&st, bind) {
                        (Type::Sigma(..), Binding::SplitMotive) => hctx = snoc(&hctx, &st),
                        (Type::Sigma(_, a, b), _) => hctx = snoc(&snoc(&hctx, a), b),
                        _ => return Err(KernelError::NotASigma(self.show_tm(&hctx, &scrut))),
                    }
                }
            }
            cur = child;
        }
        let redex = match cur {
            Expr::Tm(t) => t,
            Expr::Ty(_) => unreachable!("redexes are terms"),
        };
        let hole = self.redex_deriv(&hctx, &redex)?;
        let (typing, concl) = match (whole, next, ty) {
            (Expr::Tm(l), Expr::Tm(r), Some(ty)) => (
                self.check(ctx, l, ty)?,
                Judgement::TermEq {
                    ctx: ctx.clone(),
                    lhs: l.clone(),
                    rhs: r.clone(),
                    ty: ty.clone(),
                },
            ),
            (Expr::Ty(l), Expr::Ty(r), None) => (
                self.type_deriv(ctx, l)?,
                Judgement::TypeEq {
                    ctx: ctx.clone(),
                    lhs: l.clone(),
                    rhs: r.clone(),
                },
            ),
            _ => unreachable!("step preserves kind"),
        };
        let mut prem = vec![hole, typing];
        prem.extend(extra);
        Ok(node(Rule::Cong(path.to_vec()), concl, prem))
    }

    /// `redex = contractum` in `ctx`, at whatever type is convenient.
    fn redex_deriv(&self, ctx: &Context, redex: &Term) -> R<D> {
        let kind = root_redex(redex).expect("redex_deriv on a redex");
        match (kind, redex) {
            (Redex::Ann, Term::Ann(inner, ty)) => {
                let d = self.check(ctx, inner, ty)?;
                Ok(node(
                    Rule::AnnErase,
                    Judgement::TermEq {
                        ctx: ctx.clone(),
                        lhs: redex.clone(),
                        rhs: (**inner).clone(),
                        ty: (**ty).clone(),
                    },
                    vec![d],
                ))
            }
            (Redex::Beta, Term::App(f, a)) => {
                let Term::Lam(h, dom, body) = f.as_ref() else { unreachable!() };
                let mut ca = ctx.clone();
                ca.push(h.clone(), (**dom).clone());
                let (bt, bd) = self.infer(&ca, body)?;
                self.pi_comp(ctx, dom, body, &bt, bd, a)
            }
            (Redex::BetaAnn, Term::App(f, a)) => {
                let Term::Ann(lam, ann) = f.as_ref() else { unreachable!() };
                let Term::Lam(h, dom, body) = lam.as_ref() else { unreachable!() };
                let beta = match ann.as_ref() {
                    Type::Pi(_, d2, cod) if d2 == dom => {
                        let mut ca = ctx.clone();
                        ca.push(h.clone(), (**dom).clone());
                        let bd = self.check(&ca, body, cod)?;
                        self.pi_comp(ctx, dom, body, cod, bd, a)?
                    }
                    _ => self.redex_deriv(ctx, &Term::App(lam.clone(), a.clone()))?,
                };
                let ty = eq_sides(&beta).2.clone();
                let erase = self.redex_deriv(ctx, f)?;
                let first = node(
                    Rule::Cong(vec![0]),
                    Judgement::TermEq {
                        ctx: ctx.clone(),
                        lhs: redex.clone(),
                        rhs: Term::App(lam.clone(), a.clone()),
                        ty: ty.clone(),
                    },
                    vec![erase, self.check(ctx, redex, &ty)?],
                );
                Ok(trans(ctx, first, beta))
            }
            (Redex::Split, Term::Split { motive, branch, scrutinee, .. }) => {
                let Term::Pair(a, b) = scrutinee.as_ref() else { unreachable!() };
                let (at, ad) = self.infer(ctx, a)?;
                let (bt, bd) = self.infer(ctx, b)?;
                let sigma = Type::sigma("x", at, lift(&bt, 0, 1));
                self.sigma_comp(ctx, &sigma, motive, branch, ad, bd)
            }
            (Redex::SplitAnn, Term::Split { motive, branch, scrutinee, .. }) => {
                let Term::Ann(p, sigma) = scrutinee.as_ref() else { unreachable!() };
                let Term::Pair(a, b) = p.as_ref() else { unreachable!() };
                let Type::Sigma(_, at, bt) = sigma.as_ref() else {
                    return Err(KernelError::NotASigma(self.show_tm(ctx, scrutinee)));
                };
                let ad = self.check(ctx, a, at)?;
                let bd = self.check(ctx, b, &substitute(bt.as_ref(), a, 0))?;
                let comp = self.sigma_comp(ctx, sigma, motive, branch, ad, bd)?;
                let ty = eq_sides(&comp).2.clone();
                let erase = self.redex_deriv(ctx, scrutinee)?;
                let first = node(
                    Rule::Cong(vec![2]),
                    Judgement::TermEq {
                        ctx: ctx.clone(),
                        lhs: redex.clone(),
                        rhs: eq_sides(&comp).0.clone(),
                        ty: ty.clone(),
                    },
                    vec![erase, self.check(ctx, redex, &ty)?],
                );
                Ok(trans(ctx, first, comp))
            }
            _ => unreachable!("redex kind matches its shape"),
        }
    }

    fn pi_comp(&self, ctx: &Context, dom: &Type, body: &Term, cod: &Type, bd: D, a: &Term) -> R<D> {
        let ca = snoc(ctx, dom);
        let cd = self.type_deriv(&ca, cod)?;
        let ad = self.check(ctx, a, dom)?;
        Ok(node(
            Rule::PiComp,
            Judgement::TermEq {
                ctx: ctx.clone(),
                lhs: Term::app(Term::Lam(Default::default(), Box::new(dom.clone()), Box::new(body.clone())), a.clone()),
                rhs: substitute(body, a, 0),
                ty: substitute(cod, a, 0),
            },
            vec![cd, bd, ad],
        ))
    }

    /// `split(pair(a, b)) = d[a, b]` via Σ-comp and two substitutions.
    fn sigma_comp(&self, ctx: &Context, sigma: &Type, motive: &Type, branch: &Term, ad: D, bd: D) -> R<D> {
        let Type::Sigma(_, a, b) = sigma else { unreachable!() };
        let md = self.type_deriv(&snoc(ctx, sigma), motive)?;
        let cab = snoc(&snoc(ctx, a), b);
        let dd = self.check(&cab, branch, &branch_type(motive))?;
        let comp = node(
            Rule::SigmaComp,
            Judgement::TermEq {
                ctx: cab,
                lhs: Term::split(lift(motive, 1, 2), lift(branch, 2, 2), Term::pair(Term::Var(1), Term::Var(0))),
                rhs: branch.clone(),
                ty: branch_type(motive),
            },
            vec![md, dd],
        );
        let s1 = derived(Rule::Subst, vec![ad, comp], |j| subst_judgement(j[0], j[1]))?;
        derived(Rule::Subst, vec![bd, s1], |j| subst_judgement(j[0], j[1]))
    }

    // ---- judgements ----

    /// Checks any judgement, returning a derivation of exactly it.
    pub fn check_judgement(&self, j: &Judgement) -> R<D> {
        match j {
            Judgement::TypeForm { ctx, ty } => self.check_type(ctx, ty),
            Judgement::TypeEq { ctx, lhs, rhs } => {
                self.check_type(ctx, lhs)?;
                self.check_type(ctx, rhs)?;
                self.type_eq_deriv(ctx, lhs, rhs)
            }
            Judgement::TermForm { ctx, term, ty } => self.check_term(ctx, term, ty),
            Judgement::TermEq { ctx, lhs, rhs, ty } => {
                self.check_term(ctx, lhs, ty)?;
                self.check_term(ctx, rhs, ty)?;
                self.term_eq_deriv(ctx, lhs, rhs, ty)
            }
            Judgement::CtxForm { ctx, ext } => self.check_extension(ctx, ext),
            Judgement::CtxEq { ctx, lhs, rhs } => {
                if lhs.len() != rhs.len() {
                    return Err(KernelError::ContextLength(lhs.len(), rhs.len()));
                }
                self.check_extension(ctx, lhs)?;
                self.check_extension(ctx, rhs)?;
                let mut d = node(
                    Rule::CtxEqEmpty,
                    Judgement::CtxEq {
                        ctx: ctx.clone(),
                        lhs: Context::empty(),
                        rhs: Context::empty(),
                    },
                    vec![self.check_context(ctx)?],
                );
                for i in 0..lhs.len() {
                    let here = ctx.concat(&lhs.prefix(i));
                    let (a, b) = (&lhs.entries[i].ty, &rhs.entries[i].ty);
                    self.type_deriv(&here, b)?;
                    let eq = self.type_eq_deriv(&here, a, b)?;
                    d = node(
                        Rule::CtxEqExt,
                        Judgement::CtxEq {
                            ctx: ctx.clone(),
                            lhs: lhs.prefix(i + 1),
                            rhs: rhs.prefix(i + 1),
                        },
                        vec![d, eq],
                    );
                }
                Ok(d)
            }
        }
    }

    /// Checks `j` by deriving it with context entries `pos` and `pos + 1`
    /// in the opposite order and exchanging them.
    pub fn check_by_exchange(&self, j: &Judgement, pos: usize) -> R<D> {
        let target = j.ctx();
        if target.len() < pos + 2 {
            return Err(KernelError::ExchOutOfRange {
                position: pos,
                len: target.len(),
            });
        }
        let first = &target.entries[pos];
        let second = &target.entries[pos + 1];
        if occurs_free(&second.ty, 0) {
            return Err(KernelError::ExchDependency { position: pos });
        }
        let k = target.len() - pos - 2;
        let mut ctx = target.prefix(pos);
        ctx.entries.push(Entry {
            name: second.name.clone(),
            ty: shift(&second.ty, 0, -1).expect("checked above"),
        });
        ctx.entries.push(Entry {
            name: first.name.clone(),
            ty: lift(&first.ty, 0, 1),
        });
        for (i, e) in target.entries[pos + 2..].iter().enumerate() {
            ctx.entries.push(Entry {
                name: e.name.clone(),
                ty: rename(&e.ty, &|v| swap(v, i)),
            });
        }
        let pre = crate::syntax::ops::map_judgement_subject(
            j,
            &mut |t, dp| rename(t, &|v| swap(v, k + dp)),
            &mut |t, dp| rename(t, &|v| swap(v, k + dp)),
        )
        .with_ctx(ctx);
        let pd = self.check_judgement(&pre)?;
        let d = derived(Rule::Exch(pos), vec![pd], |js| exch_judgement(pos, js[0]))?;
        debug_assert_eq!(d.conclusion, *j);
        Ok(d)
    }
}

fn trans(ctx: &Context, a: D, b: D) -> D {
    match (&a.conclusion, &b.conclusion) {
        (Judgement::TermEq { lhs, ty, .. }, Judgement::TermEq { rhs, .. }) => {
            let concl = Judgement::TermEq {
                ctx: ctx.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                ty: ty.clone(),
            };
            node(Rule::TmTrans, concl, vec![a, b])
        }
        (Judgement::TypeEq { lhs, .. }, Judgement::TypeEq { rhs, .. }) => {
            let concl = Judgement::TypeEq {
                ctx: ctx.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            };
            node(Rule::TyTrans, concl, vec![a, b])
        }
        _ => unreachable!("trans of mismatched equalities"),
    }
}

/// `l = n` and `r = n` give `l = r`.
fn join(ctx: &Context, dl: D, dr: D, terms: bool) -> D {
    let sym = match &dr.conclusion {
        Judgement::TermEq { ctx: c, lhs, rhs, ty } => node(
            Rule::TmSym,
            Judgement::TermEq {
                ctx: c.clone(),
                lhs: rhs.clone(),
                rhs: lhs.clone(),
                ty: ty.clone(),
            },
            vec![dr.clone()],
        ),
        Judgement::TypeEq { ctx: c, lhs, rhs } => node(
            Rule::TySym,
            Judgement::TypeEq {
                ctx: c.clone(),
                lhs: rhs.clone(),
                rhs: lhs.clone(),
            },
            vec![dr.clone()],
        ),
        _ => unreachable!(),
    };
    debug_assert_eq!(terms, matches!(dl.conclusion, Judgement::TermEq { .. }));
    trans(ctx, dl, sym)
}
