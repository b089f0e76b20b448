//! Pointwise evaluation. A type is evaluated at an environment (a list of
//! object labels, one per context entry) to a finite groupoid, and at an
//! environment morphism to a transport functor. A term is evaluated to an
//! object label of its type's groupoid, and at an environment morphism
//! `g: ρ → ρ'` to a morphism `T(g)(t ρ) → t ρ'` in the groupoid at `ρ'`.

use super::family::{family_at, grothendieck, section_at, section_mor_at, sections_groupoid};
use super::{BaseBinding, ConstBinding, ModelEnv, SemError};
use crate::gpd::{FinGroupoid, Functor};
use crate::kernel::{Checker, Signature};
use crate::syntax::{Context, Hint, Term, Type};
use crate::Label;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

type R<T> = Result<T, SemError>;

pub struct Interp<'a> {
    pub(crate) sig: &'a Signature,
    pub(crate) env: &'a ModelEnv,
    checker: Checker<'a>,
    tys: RefCell<HashMap<(Type, Vec<Label>), Arc<FinGroupoid>>>,
    trs: RefCell<HashMap<(Type, Vec<Label>, Vec<Label>), Functor>>,
    inferred: RefCell<HashMap<(Context, Term), Type>>,
}

fn push(v: &[Label], l: &Label) -> Vec<Label> {
    let mut out = v.to_vec();
    out.push(l.clone());
    out
}

fn internal(what: impl Into<String>) -> SemError {
    SemError::Internal(what.into())
}

fn obj_of(g: &FinGroupoid, l: &Label) -> R<usize> {
    g.object_index(l).ok_or_else(|| internal(format!("no object {l}")))
}

fn mor_of(g: &FinGroupoid, l: &Label) -> R<usize> {
    g.morphism_index(l).ok_or_else(|| internal(format!("no morphism {l}")))
}

fn apply_obj(f: &Functor, l: &Label) -> R<Label> {
    Ok(f.cod.object(f.obj[obj_of(&f.dom, l)?]).clone())
}

fn apply_mor(f: &Functor, l: &Label) -> R<Label> {
    Ok(f.cod.morphism(f.mor[mor_of(&f.dom, l)?]).clone())
}

/// Inverse object and morphism tables of a bijective functor.
fn invert(f: &Functor) -> R<(Vec<usize>, Vec<usize>)> {
    let mut io = vec![usize::MAX; f.cod.obj_count()];
    let mut im = vec![usize::MAX; f.cod.mor_count()];
    for (o, &v) in f.obj.iter().enumerate() {
        io[v] = o;
    }
    for (m, &v) in f.mor.iter().enumerate() {
        im[v] = m;
    }
    if io.contains(&usize::MAX) || im.contains(&usize::MAX) {
        return Err(internal("transport is not invertible"));
    }
    Ok((io, im))
}

struct PiMove {
    ta: Functor,
    io: Vec<usize>,
    im: Vec<usize>,
    along: Vec<Functor>,
}

impl PiMove {
    /// The transport of a section label.
    fn section(&self, s: &Label) -> R<Label> {
        let (ga, ga2) = (&self.ta.dom, &self.ta.cod);
        let mut objs = Vec::new();
        for a2 in 0..ga2.obj_count() {
            let x = self.io[a2];
            let v = section_at(s, ga.object(x)).ok_or_else(|| internal("section value"))?;
            objs.push(Label::pair(ga2.object(a2).clone(), apply_obj(&self.along[x], v)?));
        }
        let mut mors = Vec::new();
        for al2 in 0..ga2.mor_count() {
            let al = self.im[al2];
            let b = section_mor_at(s, ga.morphism(al)).ok_or_else(|| internal("section morphism"))?;
            mors.push(Label::pair(ga2.morphism(al2).clone(), apply_mor(&self.along[ga.tgt(al)], b)?));
        }
        Ok(Label::List(vec![Label::List(objs), Label::List(mors)]))
    }
}

impl<'a> Interp<'a> {
    pub fn new(sig: &'a Signature, env: &'a ModelEnv) -> Interp<'a> {
        Interp {
            sig,
            env,
            checker: Checker::new(sig),
            tys: RefCell::default(),
            trs: RefCell::default(),
            inferred: RefCell::default(),
        }
    }

    pub(crate) fn checker(&self) -> &Checker<'a> {
        &self.checker
    }

    pub(crate) fn infer(&self, ctx: &Context, t: &Term) -> R<Type> {
        let key = (ctx.clone(), t.clone());
        if let Some(ty) = self.inferred.borrow().get(&key) {
            return Ok(ty.clone());
        }
        let (ty, _) = self.checker.infer_type(ctx, t).map_err(SemError::Kernel)?;
        self.inferred.borrow_mut().insert(key, ty.clone());
        Ok(ty)
    }

    fn pi_parts(&self, ctx: &Context, f: &Term) -> R<(Hint, Type, Type)> {
        match self.infer(ctx, f)? {
            Type::Pi(h, a, b) => Ok((h, *a, *b)),
            other => Err(internal(format!("expected a Π type, found {other:?}"))),
        }
    }

    fn sigma_parts(&self, ctx: &Context, p: &Term) -> R<(Hint, Type, Type)> {
        match self.infer(ctx, p)? {
            Type::Sigma(h, a, b) => Ok((h, *a, *b)),
            other => Err(internal(format!("expected a Σ type, found {other:?}"))),
        }
    }

    pub(crate) fn base_groupoid(&self, name: &str) -> R<Arc<FinGroupoid>> {
        match self.env.bases.get(name) {
            Some(BaseBinding::Groupoid(g)) => Ok(g.clone()),
            Some(BaseBinding::Family { .. }) => Err(SemError::Unsupported(format!("`{name}` is a family, used without an argument"))),
            None => Err(SemError::missing(name)),
        }
    }

    fn family(&self, name: &str) -> R<&super::Family> {
        match self.env.bases.get(name) {
            Some(BaseBinding::Family { family, .. }) => Ok(family),
            Some(BaseBinding::Groupoid(_)) => Err(SemError::Unsupported(format!("`{name}` is bound to a groupoid, not a family"))),
            None => Err(SemError::missing(name)),
        }
    }

    pub(crate) fn const_value(&self, c: &str) -> R<(Label, Arc<FinGroupoid>)> {
        let ty = self.sig.constant(c).ok_or_else(|| internal(format!("undeclared constant {c}")))?;
        let g = self.ty(&Context::empty(), ty, &[])?;
        let missing = || SemError::MissingConstBinding(c.to_string());
        let l = match self.env.consts.get(c).ok_or_else(missing)? {
            ConstBinding::Label(l) => g.object_index(l).map(|_| l.clone()),
            ConstBinding::Named(s) => g.objects().iter().find(|o| o.to_string() == *s).cloned(),
            ConstBinding::Index(i) => g.objects().get(*i).cloned(),
        };
        let l = l.ok_or_else(|| SemError::Format(format!("the value bound to `{c}` is not an object of its type")))?;
        Ok((l, g))
    }

    /// Identity morphism of the environment `rho` in context `ctx`.
    pub(crate) fn id_env(&self, ctx: &Context, rho: &[Label]) -> R<Vec<Label>> {
        (0..ctx.len())
            .map(|k| {
                let g = self.ty(&ctx.prefix(k), &ctx.entries[k].ty, &rho[..k])?;
                Ok(g.morphism(g.id(obj_of(&g, &rho[k])?)).clone())
            })
            .collect()
    }

    /// The groupoid a type denotes at `rho`.
    pub fn ty(&self, ctx: &Context, a: &Type, rho: &[Label]) -> R<Arc<FinGroupoid>> {
        let key = (a.clone(), rho.to_vec());
        if let Some(g) = self.tys.borrow().get(&key) {
            return Ok(g.clone());
        }
        let g = match a {
            Type::Base(n, args) if args.is_empty() => self.base_groupoid(n)?,
            Type::Base(n, args) => {
                if args.len() != 1 {
                    return Err(SemError::Unsupported(format!("`{n}` takes more than one parameter")));
                }
                let fam = self.family(n)?;
                let v = self.tm(ctx, &args[0], rho)?;
                fam.fibers[obj_of(&fam.base, &v)?].clone()
            }
            Type::Pi(h, d, c) => {
                let (ga, fibers, tr) = self.over_fibers(ctx, h, d, c, rho)?;
                sections_groupoid(&ga, &fibers, &tr)
            }
            Type::Sigma(h, d, c) => {
                let (ga, fibers, tr) = self.over_fibers(ctx, h, d, c, rho)?;
                grothendieck(&ga, &fibers, &tr, &|b, e| Label::pair(b.clone(), e.clone())).total
            }
        };
        self.tys.borrow_mut().insert(key, g.clone());
        Ok(g)
    }

    /// `⟦A⟧ρ` with the family `a ↦ ⟦B⟧(ρ, a)` over it.
    fn over_fibers(
        &self,
        ctx: &Context,
        h: &Hint,
        d: &Type,
        c: &Type,
        rho: &[Label],
    ) -> R<(Arc<FinGroupoid>, Vec<Arc<FinGroupoid>>, Vec<Functor>)> {
        let ga = self.ty(ctx, d, rho)?;
        let mut cx = ctx.clone();
        cx.push(h.clone(), d.clone());
        let idr = self.id_env(ctx, rho)?;
        let fibers = (0..ga.obj_count())
            .map(|a| self.ty(&cx, c, &push(rho, ga.object(a))))
            .collect::<R<Vec<_>>>()?;
        let tr = (0..ga.mor_count())
            .map(|al| {
                self.tr(
                    &cx,
                    c,
                    &push(rho, ga.object(ga.src(al))),
                    &push(&idr, ga.morphism(al)),
                    &push(rho, ga.object(ga.tgt(al))),
                )
            })
            .collect::<R<Vec<_>>>()?;
        Ok((ga, fibers, tr))
    }

    /// Transport of a type along the environment morphism `g: rho → rho2`.
    pub fn tr(&self, ctx: &Context, a: &Type, rho: &[Label], g: &[Label], rho2: &[Label]) -> R<Functor> {
        let key = (a.clone(), rho.to_vec(), g.to_vec());
        if let Some(f) = self.trs.borrow().get(&key) {
            return Ok(f.clone());
        }
        let f = match a {
            Type::Base(n, args) if args.is_empty() => Functor::identity(&self.base_groupoid(n)?),
            Type::Base(n, args) => {
                let fam = self.family(n)?;
                let m = self.tm_mor(ctx, &args[0], rho, g, rho2)?;
                fam.transport[mor_of(&fam.base, &m)?].clone()
            }
            Type::Sigma(h, d, c) => self.tr_sigma(ctx, a, (h, d, c), rho, g, rho2)?,
            Type::Pi(h, d, c) => self.tr_pi(ctx, a, (h, d, c), rho, g, rho2)?,
        };
        self.trs.borrow_mut().insert(key, f.clone());
        Ok(f)
    }

    /// Transport of the codomain family at `a ↦ a2 = ta(a)`, along `(g, id)`.
    fn tr_along(
        &self,
        cx: &Context,
        c: &Type,
        (rho, g, rho2): (&[Label], &[Label], &[Label]),
        ta: &Functor,
        a: usize,
    ) -> R<Functor> {
        let ga2 = &ta.cod;
        let a2 = ta.obj[a];
        self.tr(
            cx,
            c,
            &push(rho, ta.dom.object(a)),
            &push(g, ga2.morphism(ga2.id(a2))),
            &push(rho2, ga2.object(a2)),
        )
    }

    fn tr_sigma(
        &self,
        ctx: &Context,
        a: &Type,
        (h, d, c): (&Hint, &Type, &Type),
        rho: &[Label],
        g: &[Label],
        rho2: &[Label],
    ) -> R<Functor> {
        let src = self.ty(ctx, a, rho)?;
        let dst = self.ty(ctx, a, rho2)?;
        let ta = self.tr(ctx, d, rho, g, rho2)?;
        let ga = ta.dom.clone();
        let mut cx = ctx.clone();
        cx.push(h.clone(), d.clone());
        let at = |x: usize| self.tr_along(&cx, c, (rho, g, rho2), &ta, x);
        let mut obj = Vec::new();
        for o in 0..src.obj_count() {
            let (al, bl) = src.object(o).as_pair().ok_or_else(|| internal("Σ object"))?;
            let x = obj_of(&ga, al)?;
            let l = Label::pair(ta.cod.object(ta.obj[x]).clone(), apply_obj(&at(x)?, bl)?);
            obj.push(obj_of(&dst, &l)?);
        }
        let mut mor = Vec::new();
        for m in 0..src.mor_count() {
            let (al, bl) = src.morphism(m).as_pair().ok_or_else(|| internal("Σ morphism"))?;
            let x = mor_of(&ga, al)?;
            let l = Label::pair(ta.cod.morphism(ta.mor[x]).clone(), apply_mor(&at(ga.tgt(x))?, bl)?);
            mor.push(mor_of(&dst, &l)?);
        }
        Ok(Functor {
            dom: src,
            cod: dst,
            obj,
            mor,
        })
    }

    /// What is needed to move a section of a Π type along `g`.
    fn pi_move(
        &self,
        ctx: &Context,
        (h, d, c): (&Hint, &Type, &Type),
        rho: &[Label],
        g: &[Label],
        rho2: &[Label],
    ) -> R<PiMove> {
        let ta = self.tr(ctx, d, rho, g, rho2)?;
        let (io, im) = invert(&ta)?;
        let mut cx = ctx.clone();
        cx.push(h.clone(), d.clone());
        let along = (0..ta.dom.obj_count())
            .map(|x| self.tr_along(&cx, c, (rho, g, rho2), &ta, x))
            .collect::<R<Vec<_>>>()?;
        Ok(PiMove { ta, io, im, along })
    }

    fn tr_pi(
        &self,
        ctx: &Context,
        a: &Type,
        (h, d, c): (&Hint, &Type, &Type),
        rho: &[Label],
        g: &[Label],
        rho2: &[Label],
    ) -> R<Functor> {
        let src = self.ty(ctx, a, rho)?;
        let dst = self.ty(ctx, a, rho2)?;
        let mv = self.pi_move(ctx, (h, d, c), rho, g, rho2)?;
        let (ga, ga2, io) = (&mv.ta.dom, &mv.ta.cod, &mv.io);
        let along = &mv.along;
        let move_section = |s: &Label| mv.section(s);
        let mut moved = HashMap::new();
        let mut obj = Vec::new();
        for o in 0..src.obj_count() {
            let l = move_section(src.object(o))?;
            obj.push(obj_of(&dst, &l)?);
            moved.insert(o, l);
        }
        let mut mor = Vec::new();
        for m in 0..src.mor_count() {
            let ml = src.morphism(m);
            let mut comps = Vec::new();
            for a2 in 0..ga2.obj_count() {
                let x = io[a2];
                let (_, _, th) = family_at(ml, ga.object(x)).ok_or_else(|| internal("family component"))?;
                comps.push(Label::pair(ga2.object(a2).clone(), apply_mor(&along[x], th)?));
            }
            let l = Label::List(vec![
                moved[&src.src(m)].clone(),
                moved[&src.tgt(m)].clone(),
                Label::List(comps),
            ]);
            mor.push(mor_of(&dst, &l)?);
        }
        Ok(Functor {
            dom: src,
            cod: dst,
            obj,
            mor,
        })
    }

    /// The value of a term at `rho`.
    pub fn tm(&self, ctx: &Context, t: &Term, rho: &[Label]) -> R<Label> {
        match t {
            Term::Var(i) => rho
                .len()
                .checked_sub(i + 1)
                .map(|k| rho[k].clone())
                .ok_or_else(|| internal("variable out of range")),
            Term::Const(c) => Ok(self.const_value(c)?.0),
            Term::Lam(h, d, b) => {
                let ga = self.ty(ctx, d, rho)?;
                let mut cx = ctx.clone();
                cx.push(h.clone(), (**d).clone());
                let idr = self.id_env(ctx, rho)?;
                let objs = (0..ga.obj_count())
                    .map(|a| Ok(Label::pair(ga.object(a).clone(), self.tm(&cx, b, &push(rho, ga.object(a)))?)))
                    .collect::<R<Vec<_>>>()?;
                let mors = (0..ga.mor_count())
                    .map(|al| {
                        let v = self.tm_mor(
                            &cx,
                            b,
                            &push(rho, ga.object(ga.src(al))),
                            &push(&idr, ga.morphism(al)),
                            &push(rho, ga.object(ga.tgt(al))),
                        )?;
                        Ok(Label::pair(ga.morphism(al).clone(), v))
                    })
                    .collect::<R<Vec<_>>>()?;
                Ok(Label::List(vec![Label::List(objs), Label::List(mors)]))
            }
            Term::App(f, a) => {
                let s = self.tm(ctx, f, rho)?;
                let v = self.tm(ctx, a, rho)?;
                section_at(&s, &v).cloned().ok_or_else(|| internal("application outside the domain"))
            }
            Term::Pair(a, b) => Ok(Label::pair(self.tm(ctx, a, rho)?, self.tm(ctx, b, rho)?)),
            Term::Split { branch, scrutinee, .. } => {
                let p = self.tm(ctx, scrutinee, rho)?;
                let (x, y) = p.as_pair().ok_or_else(|| internal("split of a non-pair"))?;
                let cx = self.split_ctx(ctx, scrutinee)?;
                self.tm(&cx, branch, &push(&push(rho, x), y))
            }
            Term::Ann(t, _) => self.tm(ctx, t, rho),
        }
    }

    fn split_ctx(&self, ctx: &Context, scrutinee: &Term) -> R<Context> {
        let (h, a, b) = self.sigma_parts(ctx, scrutinee)?;
        let mut cx = ctx.clone();
        cx.push(h.clone(), a);
        cx.push(h, b);
        Ok(cx)
    }

    /// The value of a term along `g: rho → rho2`: a morphism
    /// `T(g)(t rho) → t rho2` in the groupoid of its type at `rho2`.
    pub fn tm_mor(&self, ctx: &Context, t: &Term, rho: &[Label], g: &[Label], rho2: &[Label]) -> R<Label> {
        match t {
            Term::Var(i) => g
                .len()
                .checked_sub(i + 1)
                .map(|k| g[k].clone())
                .ok_or_else(|| internal("variable out of range")),
            Term::Const(c) => {
                let (v, gp) = self.const_value(c)?;
                Ok(gp.morphism(gp.id(obj_of(&gp, &v)?)).clone())
            }
            Term::Lam(h, d, b) => {
                let mut cx = ctx.clone();
                cx.push(h.clone(), (**d).clone());
                let cod = self.infer(&cx, b)?;
                let ta = self.tr(ctx, d, rho, g, rho2)?;
                let (io, _) = invert(&ta)?;
                let ga2 = &ta.cod;
                let src = self.pi_move(ctx, (h, d, &cod), rho, g, rho2)?.section(&self.tm(ctx, t, rho)?)?;
                let tgt = self.tm(ctx, t, rho2)?;
                let comps = (0..ga2.obj_count())
                    .map(|a2| {
                        let th = self.tm_mor(
                            &cx,
                            b,
                            &push(rho, ta.dom.object(io[a2])),
                            &push(g, ga2.morphism(ga2.id(a2))),
                            &push(rho2, ga2.object(a2)),
                        )?;
                        Ok(Label::pair(ga2.object(a2).clone(), th))
                    })
                    .collect::<R<Vec<_>>>()?;
                Ok(Label::List(vec![src, tgt, Label::List(comps)]))
            }
            Term::App(f, a) => {
                let (h, da, cb) = self.pi_parts(ctx, f)?;
                let mut cx = ctx.clone();
                cx.push(h, da.clone());
                let th = self.tm_mor(ctx, f, rho, g, rho2)?;
                let al2 = self.tm_mor(ctx, a, rho, g, rho2)?;
                let ga2 = self.ty(ctx, &da, rho2)?;
                let k = mor_of(&ga2, &al2)?;
                let (ahat, a1) = (ga2.object(ga2.src(k)), ga2.object(ga2.tgt(k)));
                let s2 = self.tm(ctx, f, rho2)?;
                let (_, _, th_a) = family_at(&th, ahat).ok_or_else(|| internal("family component"))?;
                let idr2 = self.id_env(ctx, rho2)?;
                let t_al = self.tr(&cx, &cb, &push(rho2, ahat), &push(&idr2, &al2), &push(rho2, a1))?;
                let x = apply_mor(&t_al, th_a)?;
                let y = section_mor_at(&s2, &al2).ok_or_else(|| internal("section morphism"))?;
                let fib = self.ty(&cx, &cb, &push(rho2, a1))?;
                Ok(fib.morphism(fib.compose(mor_of(&fib, y)?, mor_of(&fib, &x)?)).clone())
            }
            Term::Pair(a, b) => Ok(Label::pair(
                self.tm_mor(ctx, a, rho, g, rho2)?,
                self.tm_mor(ctx, b, rho, g, rho2)?,
            )),
            Term::Split { branch, scrutinee, .. } => {
                let pm = self.tm_mor(ctx, scrutinee, rho, g, rho2)?;
                let (al, be) = pm.as_pair().ok_or_else(|| internal("Σ morphism"))?;
                let p = self.tm(ctx, scrutinee, rho)?;
                let p2 = self.tm(ctx, scrutinee, rho2)?;
                let (x, y) = p.as_pair().ok_or_else(|| internal("split of a non-pair"))?;
                let (x2, y2) = p2.as_pair().ok_or_else(|| internal("split of a non-pair"))?;
                let cx = self.split_ctx(ctx, scrutinee)?;
                self.tm_mor(
                    &cx,
                    branch,
                    &push(&push(rho, x), y),
                    &push(&push(g, al), be),
                    &push(&push(rho2, x2), y2),
                )
            }
            Term::Ann(t, _) => self.tm_mor(ctx, t, rho, g, rho2),
        }
    }
}
