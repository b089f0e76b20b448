//! Random models and rule instances for the soundness suite.
//!
//! Every fixture declares
//!
//! ```text
//! base A; base B (x : A);
//! const a0 : A; const f : Pi (x : A). B x; const g : Pi (x : A). A;
//! ```
//!
//! with `A` a small random groupoid and `B` a random family of finite sets
//! (fibers of size 1 to 3) on which `A` acts by permutations.

use super::{ConstBinding, Family, Interp, ModelEnv, RuleInstance};
use crate::gpd::{corpus, FinGroupoid, Functor};
use crate::kernel::{Checker, Signature};
use crate::syntax::{Context, Term, Type};
use crate::Label;
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

pub const MAX_FIBER: usize = 3;

pub struct Fixture {
    pub sig: Signature,
    pub env: ModelEnv,
}

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn perm_label(p: &[usize]) -> String {
    p.iter().map(|d| d.to_string()).collect()
}

/// Finite sets of size `1..=max` and their bijections.
pub fn permutation_groupoid(max: usize) -> FinGroupoid {
    let objects: Vec<Label> = (1..=max).map(|n| Label::atom(format!("n{n}"))).collect();
    let mut morphisms = Vec::new();
    let mut tables = Vec::new();
    let mut id = Vec::new();
    for n in 1..=max {
        for p in perms(n) {
            if p.iter().enumerate().all(|(i, &v)| i == v) {
                id.push(morphisms.len());
            }
            morphisms.push((Label::atom(format!("n{n}:{}", perm_label(&p))), n - 1, n - 1));
            tables.push(p);
        }
    }
    let index: std::collections::HashMap<Vec<usize>, usize> =
        tables.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    FinGroupoid::build(objects, morphisms, id, |g, f| {
        let c: Vec<usize> = tables[f].iter().map(|&v| tables[g][v]).collect();
        index[&c]
    })
    .expect("permutation groupoid")
}

/// The family of finite sets classified by `p: A → Perm`.
pub fn family_of_sets(p: &Functor) -> Family {
    let (a, perm) = (&p.dom, &p.cod);
    let size = |o: usize| perm.object(p.obj[o]).to_string()[1..].parse::<usize>().expect("size");
    let fibers: Vec<Arc<FinGroupoid>> = (0..a.obj_count())
        .map(|o| {
            let names: Vec<String> = (0..size(o)).map(|k| format!("e{k}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            FinGroupoid::discrete(&refs).into_arc()
        })
        .collect();
    let transport = (0..a.mor_count())
        .map(|m| {
            let label = perm.morphism(p.mor[m]).to_string();
            let table: Vec<usize> = label.split(':').nth(1).expect("table").bytes().map(|b| (b - b'0') as usize).collect();
            let (s, t) = (&fibers[a.src(m)], &fibers[a.tgt(m)]);
            Functor {
                dom: s.clone(),
                cod: t.clone(),
                obj: table.clone(),
                mor: table.iter().map(|&v| t.id(v)).collect(),
            }
        })
        .collect();
    Family {
        base: a.clone(),
        fibers,
        transport,
    }
}

pub fn signature() -> Signature {
    let mut sig = Signature::new();
    let a = Type::base("A");
    let b = |t: Term| Type::family("B", vec![t]);
    sig.declare_base("A", Context::empty()).expect("fresh");
    sig.declare_base("B", Context::empty().extend("x", a.clone())).expect("fresh");
    sig.declare_const("a0", a.clone()).expect("fresh");
    sig.declare_const("f", Type::pi("x", a.clone(), b(Term::var(0)))).expect("fresh");
    sig.declare_const("g", Type::pi("x", a.clone(), a)).expect("fresh");
    sig
}

/// A random model of [`signature`] with `A` of at most `max_objects`
/// objects.
pub fn fixture(rng: &mut impl Rng, max_objects: usize) -> Fixture {
    let sig = signature();
    let perm = permutation_groupoid(MAX_FIBER).into_arc();
    loop {
        let a = corpus::groupoid(rng, max_objects, 8).into_arc();
        if a.obj_count() == 0 {
            continue;
        }
        let Some(p) = corpus::functor(rng, &a, &perm) else {
            continue;
        };
        let mut env = ModelEnv::new();
        env.bind_groupoid("A", a.clone());
        env.bind_family("B", "A", family_of_sets(&p));
        let sizes: Option<Vec<usize>> = {
            let ip = Interp::new(&sig, &env);
            ["a0", "f", "g"]
                .iter()
                .map(|c| ip.ty(&Context::empty(), sig.constant(c).expect("declared"), &[]).ok().map(|g| g.obj_count()))
                .collect()
        };
        let Some(sizes) = sizes else { continue };
        if sizes.contains(&0) {
            continue;
        }
        for (c, n) in ["a0", "f", "g"].iter().zip(sizes) {
            env.bind_const(c, ConstBinding::Index(rng.gen_range(0..n)));
        }
        return Fixture { sig, env };
    }
}

fn a_ty() -> Type {
    Type::base("A")
}

fn b_of(t: Term) -> Type {
    Type::family("B", vec![t])
}

fn sigma_ab() -> Type {
    Type::sigma("x", a_ty(), b_of(Term::var(0)))
}

/// A term of type `A` built from the given variables (each of type `A`).
fn a_term(rng: &mut impl Rng, vars: &[usize], fuel: usize) -> Term {
    match rng.gen_range(0..if fuel == 0 { 2 } else { 3 }) {
        0 if !vars.is_empty() => Term::var(*vars.choose(rng).expect("nonempty")),
        0 | 1 => Term::constant("a0"),
        _ => Term::app(Term::constant("g"), a_term(rng, vars, fuel - 1)),
    }
}

fn f_of(t: Term) -> Term {
    Term::app(Term::constant("f"), t)
}

/// Either the empty context or `u : A`.
fn context(rng: &mut impl Rng) -> Context {
    if rng.gen_bool(0.5) {
        Context::empty()
    } else {
        Context::empty().extend("u", a_ty())
    }
}

fn well_typed(sig: &Signature, ctx: &Context, t: &Term) -> bool {
    Checker::new(sig).infer_type(ctx, t).is_ok()
}

pub fn pi_comp_instance(rng: &mut impl Rng, fx: &Fixture) -> RuleInstance {
    loop {
        let ctx = context(rng);
        let outer: Vec<usize> = (0..ctx.len()).collect();
        // Inside the body `x` is 0 and the context's `u` moves to 1.
        let inner: Vec<usize> = std::iter::once(0).chain(outer.iter().map(|v| v + 1)).collect();
        let t = a_term(rng, &inner, 2);
        let body = match rng.gen_range(0..5) {
            0 => t,
            1 => f_of(t),
            2 => Term::ann(Term::pair(t.clone(), f_of(t)), sigma_ab()),
            3 => Term::lam("y", a_ty(), f_of(Term::app(Term::constant("g"), Term::var(0)))),
            _ => Term::split(
                a_ty(),
                Term::var(1),
                Term::ann(Term::pair(t.clone(), f_of(t)), sigma_ab()),
            ),
        };
        let arg = a_term(rng, &outer, 2);
        let inst = RuleInstance::PiComp {
            ctx: ctx.clone(),
            dom: a_ty(),
            body: body.clone(),
            arg: arg.clone(),
        };
        let redex = Term::app(Term::lam("x", a_ty(), body), arg);
        if well_typed(&fx.sig, &ctx, &redex) {
            return inst;
        }
    }
}

pub fn sigma_comp_instance(rng: &mut impl Rng, fx: &Fixture) -> RuleInstance {
    loop {
        let ctx = context(rng);
        let outer: Vec<usize> = (0..ctx.len()).collect();
        // In the branch `y` is 0, `x` is 1 and `u` moves to 2.
        let inner: Vec<usize> = std::iter::once(1).chain(outer.iter().map(|v| v + 2)).collect();
        let (motive, branch) = match rng.gen_range(0..5) {
            0 => (a_ty(), a_term(rng, &inner, 2)),
            // The first projection, spelled with a nested split.
            1 => (b_of(Term::split(a_ty(), Term::var(1), Term::var(0))), Term::var(0)),
            2 => (sigma_ab(), Term::ann(Term::pair(Term::var(1), Term::var(0)), sigma_ab())),
            3 => (Type::pi("w", a_ty(), b_of(Term::var(0))), Term::constant("f")),
            _ => (b_of(Term::app(Term::constant("g"), Term::split(a_ty(), Term::var(1), Term::var(0)))), f_of(Term::app(Term::constant("g"), Term::var(1)))),
        };
        let fst = a_term(rng, &outer, 2);
        let snd = f_of(fst.clone());
        let sigma = sigma_ab();
        let p = Term::ann(Term::pair(fst.clone(), snd.clone()), sigma.clone());
        let lhs = Term::split(motive.clone(), branch.clone(), p);
        if well_typed(&fx.sig, &ctx, &lhs) {
            return RuleInstance::SigmaComp {
                ctx,
                sigma,
                motive,
                branch,
                fst,
                snd,
            };
        }
    }
}

/// The Π, Σ and base formation instances over the fixture signature.
pub fn formation_instances() -> Vec<RuleInstance> {
    let u = Context::empty().extend("u", a_ty());
    let mut out = Vec::new();
    for ctx in [Context::empty(), u] {
        for ty in [
            a_ty(),
            b_of(Term::constant("a0")),
            Type::pi("x", a_ty(), b_of(Term::var(0))),
            sigma_ab(),
            Type::pi("x", a_ty(), a_ty()),
            Type::sigma("x", a_ty(), Type::pi("y", a_ty(), b_of(Term::var(0)))),
        ] {
            out.push(RuleInstance::Formation { ctx: ctx.clone(), ty });
        }
    }
    out.push(RuleInstance::Formation {
        ctx: Context::empty().extend("u", a_ty()),
        ty: b_of(Term::var(0)),
    });
    out
}

/// Substitution and weakening instances.
pub fn structural_instances(rng: &mut impl Rng) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    for target in [
        b_of(Term::var(0)),
        Type::pi("y", a_ty(), b_of(Term::var(1))),
        Type::sigma("y", b_of(Term::var(0)), a_ty()),
        a_ty(),
    ] {
        out.push(RuleInstance::Subst {
            ctx: Context::empty(),
            dom: a_ty(),
            arg: a_term(rng, &[], 2),
            target: target.clone(),
        });
        out.push(RuleInstance::Weakening {
            ctx: Context::empty().extend("u", a_ty()),
            ext: a_ty(),
            target: crate::syntax::substitute(&crate::syntax::lift(&target, 1, 1), &Term::var(0), 0),
        });
    }
    out
}
