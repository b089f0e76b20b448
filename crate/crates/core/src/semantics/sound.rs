//! Per-rule soundness checks. Each check interprets both sides of a rule
//! instance and compares them, and where the rule has a categorical
//! reading (dependent product, sum, pullback) also computes that reading
//! with [`crate::gpd`] and compares through the canonical relabeling.

use super::{
    interp_context, interp_judgement, interp_term, interp_type, term_in, type_over, Interp, SemError, SemanticContext,
    SemanticTerm, SemanticValue,
};
use crate::gpd::{
    choose_cleavage, find_slice_iso, is_slice_morphism, pi_counit_apply, pi_f, pi_transpose, pullback,
    pullback_functor, sigma_f, Functor, SliceObject,
};
use crate::kernel::expr::instantiate_branch;
use crate::syntax::print::{print_context, print_term_in, print_type_in};
use crate::syntax::{lift, print_judgement, substitute, Context, Hint, Judgement, Term, Type};
use crate::Label;
use std::fmt;

#[derive(Clone, Debug)]
pub enum RuleInstance {
    /// Formation of a type in a context.
    Formation { ctx: Context, ty: Type },
    /// `app(λx:A.b, a) ≡ b[a/x]`.
    PiComp { ctx: Context, dom: Type, body: Term, arg: Term },
    /// `split_d((pair(a, b) : sigma)) ≡ d[a, b]`; the motive binds `z`.
    SigmaComp {
        ctx: Context,
        sigma: Type,
        motive: Type,
        branch: Term,
        fst: Term,
        snd: Term,
    },
    /// A type in `ctx, x:dom` with `arg` substituted for `x`.
    Subst { ctx: Context, dom: Type, arg: Term, target: Type },
    /// A type in `ctx` weakened by `ext`.
    Weakening { ctx: Context, ext: Type, target: Type },
    /// A definitional equation of types or terms.
    Equation(Judgement),
}

impl RuleInstance {
    pub fn name(&self) -> &'static str {
        match self {
            RuleInstance::Formation { .. } => "formation",
            RuleInstance::PiComp { .. } => "pi-comp",
            RuleInstance::SigmaComp { .. } => "sigma-comp",
            RuleInstance::Subst { .. } => "subst",
            RuleInstance::Weakening { .. } => "weakening",
            RuleInstance::Equation(_) => "equation",
        }
    }

    pub fn describe(&self) -> String {
        let cx = print_context;
        match self {
            RuleInstance::Formation { ctx, ty } => format!("{} ; {}", cx(ctx), print_type_in(ty, &names(ctx))),
            RuleInstance::PiComp { ctx, dom, body, arg } => {
                let n = names(ctx);
                let mut nb = n.clone();
                nb.push("x".into());
                format!(
                    "{} ; lam x : {} . {} ; {}",
                    cx(ctx),
                    print_type_in(dom, &n),
                    print_term_in(body, &nb),
                    print_term_in(arg, &n)
                )
            }
            RuleInstance::SigmaComp {
                ctx,
                sigma,
                motive,
                branch,
                fst,
                snd,
            } => {
                let n = names(ctx);
                let mut nz = n.clone();
                nz.push("z".into());
                let mut nxy = n.clone();
                nxy.extend(["x".to_string(), "y".to_string()]);
                format!(
                    "{} ; {} ; z. {} ; x y. {} ; {} ; {}",
                    cx(ctx),
                    print_type_in(sigma, &n),
                    print_type_in(motive, &nz),
                    print_term_in(branch, &nxy),
                    print_term_in(fst, &n),
                    print_term_in(snd, &n)
                )
            }
            RuleInstance::Subst { ctx, dom, arg, target } => {
                let n = names(ctx);
                let mut nx = n.clone();
                nx.push("x".into());
                format!(
                    "{} ; x : {} ; {} ; {}",
                    cx(ctx),
                    print_type_in(dom, &n),
                    print_term_in(arg, &n),
                    print_type_in(target, &nx)
                )
            }
            RuleInstance::Weakening { ctx, ext, target } => {
                let n = names(ctx);
                format!("{} ; {} ; {}", cx(ctx), print_type_in(ext, &n), print_type_in(target, &n))
            }
            RuleInstance::Equation(j) => print_judgement(j),
        }
    }
}

fn names(ctx: &Context) -> Vec<String> {
    ctx.entries.iter().map(|e| e.name.as_str().to_string()).collect()
}

/// How the two sides were matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Equal on the nose.
    Identity,
    /// Related by the canonical relabeling between the two constructions.
    Canonical,
    /// Isomorphic, with the isomorphism found by search.
    Searched,
    /// Too large to search; isomorphism invariants of the fibers agree.
    Invariants,
    /// No comparison found.
    Failed,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Identity => "identity",
            Comparison::Canonical => "canonical",
            Comparison::Searched => "searched",
            Comparison::Invariants => "invariants",
            Comparison::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub rule: &'static str,
    pub instance: String,
    pub passed: bool,
    pub comparison: Comparison,
    pub detail: String,
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({}) {}",
            self.rule,
            if self.passed { "PASS" } else { "FAIL" },
            self.comparison,
            self.instance
        )?;
        if !self.detail.is_empty() {
            write!(f, " :: {}", self.detail)?;
        }
        Ok(())
    }
}

type R<T> = Result<T, SemError>;

pub fn verify_rule_soundness(ip: &Interp, inst: &RuleInstance) -> SoundnessReport {
    let out = match inst {
        RuleInstance::Formation { ctx, ty } => formation(ip, ctx, ty),
        RuleInstance::PiComp { ctx, dom, body, arg } => pi_comp(ip, ctx, dom, body, arg),
        RuleInstance::SigmaComp {
            ctx,
            sigma,
            motive,
            branch,
            fst,
            snd,
        } => sigma_comp(ip, ctx, sigma, motive, branch, fst, snd),
        RuleInstance::Subst { ctx, dom, arg, target } => interp_subst(ip, ctx, dom, arg, target).map(|c| (c, String::new())),
        RuleInstance::Weakening { ctx, ext, target } => weakening(ip, ctx, ext, target),
        RuleInstance::Equation(j) => equation(ip, j),
    };
    let (passed, comparison, detail) = match out {
        Ok((c, d)) => (c != Comparison::Failed, c, d),
        Err(e) => (false, Comparison::Failed, e.to_string()),
    };
    SoundnessReport {
        rule: inst.name(),
        instance: inst.describe(),
        passed,
        comparison,
        detail,
    }
}

fn fail(why: impl Into<String>) -> R<(Comparison, String)> {
    Ok((Comparison::Failed, why.into()))
}

fn extend(ctx: &Context, name: &str, ty: &Type) -> Context {
    let mut c = ctx.clone();
    c.push(Hint::new(name), ty.clone());
    c
}

fn last_projection(sc: &SemanticContext) -> R<Functor> {
    sc.tower
        .last()
        .cloned()
        .ok_or_else(|| SemError::Internal("extended context has no projection".into()))
}

/// Formation: the projection is a fibration and the total agrees with the
/// dependent product or sum computed from the fibration of the domain.
fn formation(ip: &Interp, ctx: &Context, ty: &Type) -> R<(Comparison, String)> {
    let st = interp_type(ip, ctx, ty)?;
    if !st.slice.is_fibration() {
        return fail("projection is not a fibration");
    }
    let (h, dom, cod, pi) = match ty {
        Type::Pi(h, d, c) => (h, d, c, true),
        Type::Sigma(h, d, c) => (h, d, c, false),
        Type::Base(..) => return Ok((Comparison::Identity, String::new())),
    };
    let mut cx = ctx.clone();
    cx.push(h.clone(), (**dom).clone());
    let sc = interp_context(ip, &cx)?;
    let proj = last_projection(&sc)?;
    let x = type_over(ip, sc, cod)?.slice;
    let other = if pi {
        let cl = choose_cleavage(&proj).map_err(SemError::Gpd)?;
        pi_f(&proj, &x, &cl).map_err(SemError::Gpd)?.slice
    } else {
        sigma_f(&proj, &x).map_err(SemError::Gpd)?
    };
    if !other.is_fibration() {
        return fail("the categorical construction is not a fibration");
    }
    if st.slice.total.mor_count() > SEARCH_BUDGET || other.total.mor_count() > SEARCH_BUDGET {
        return match invariants(&st.slice) == invariants(&other) {
            true => Ok((Comparison::Invariants, "too large to search; fiber invariants agree".into())),
            false => fail("fiber invariants differ from the categorical construction"),
        };
    }
    match find_slice_iso(&st.slice, &other) {
        Some(_) => Ok((Comparison::Searched, String::new())),
        None => fail("no isomorphism with the categorical construction"),
    }
}

/// Largest total (in morphisms) for which formation searches for an
/// isomorphism.
pub const SEARCH_BUDGET: usize = 400;

/// Per base object: object count, morphism count and sorted hom sizes of
/// the fiber, plus the sorted out-degrees over each base morphism.
fn invariants(x: &SliceObject) -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
    let (t, p) = (&x.total, &x.proj);
    let base = &p.cod;
    (0..base.obj_count())
        .map(|b| {
            let objs: Vec<usize> = (0..t.obj_count()).filter(|&o| p.obj[o] == b).collect();
            let vert: Vec<usize> = (0..t.mor_count())
                .filter(|&m| p.obj[t.src(m)] == b && base.is_identity(p.mor[m]))
                .collect();
            let mut homs: Vec<usize> = objs
                .iter()
                .flat_map(|&o| objs.iter().map(move |&o2| (o, o2)))
                .map(|(o, o2)| vert.iter().filter(|&&m| t.src(m) == o && t.tgt(m) == o2).count())
                .collect();
            homs.sort_unstable();
            let mut over: Vec<usize> = base
                .out_of(b)
                .iter()
                .map(|&al| (0..t.mor_count()).filter(|&m| p.mor[m] == al).count())
                .collect();
            over.sort_unstable();
            (objs.len(), vert.len(), homs, over)
        })
        .collect()
}

/// `γ ↦ (γ, a γ)` as a functor into the extended context.
fn extend_by(sc: &SemanticContext, ext: &SemanticContext, a: &SemanticTerm) -> R<Functor> {
    let g = &sc.groupoid;
    let cons = |v: &[Label], l: &Label| {
        let mut v = v.to_vec();
        v.push(l.clone());
        v
    };
    let missing = || SemError::Internal("substituted environment missing".into());
    let obj = (0..g.obj_count())
        .map(|o| ext.object_at(&cons(sc.env(o), a.value(o))).ok_or_else(missing))
        .collect::<R<Vec<_>>>()?;
    let total = &a.section.cod;
    let mor = (0..g.mor_count())
        .map(|m| {
            let v = total.morphism(a.section.mor[m]).as_pair().expect("total morphism").1;
            ext.morphism_at(&cons(sc.menv(m), v)).ok_or_else(missing)
        })
        .collect::<R<Vec<_>>>()?;
    Functor::new(g.clone(), ext.groupoid.clone(), obj, mor).map_err(SemError::Gpd)
}

/// Compares a functor `G → X.total` into the extended total with a
/// section `s: G → ∫F` through `(γ, v) ↦ ((γ, a γ), v)`.
fn matches_through(k: &Functor, s: &SemanticTerm, abar: &Functor) -> Result<(), String> {
    let (g, xt) = (&k.dom, &k.cod);
    for o in 0..g.obj_count() {
        let (c, v) = xt.object(k.obj[o]).as_pair().expect("total object");
        if c != abar.cod.object(abar.obj[o]) || v != s.value(o) {
            return Err(format!("values differ at {}", g.object(o)));
        }
    }
    for m in 0..g.mor_count() {
        let (c, v) = xt.morphism(k.mor[m]).as_pair().expect("total morphism");
        let w = s.section.cod.morphism(s.section.mor[m]).as_pair().expect("total morphism").1;
        if c != abar.cod.morphism(abar.mor[m]) || v != w {
            return Err(format!("values differ along {}", g.morphism(m)));
        }
    }
    Ok(())
}

/// Largest dependent product the adjunction route will build.
pub const PI_BUDGET: usize = 256;

/// An upper bound on the number of objects of a fiber of `Π_f X`: the
/// product of the fiber sizes of `X` over each `f`-fiber.
fn pi_size_bound(f: &Functor, x: &SliceObject) -> usize {
    let mut over = vec![0usize; x.proj.cod.obj_count()];
    for &o in &x.proj.obj {
        over[o] += 1;
    }
    let mut per_base = vec![1usize; f.cod.obj_count()];
    for (a, &b) in f.obj.iter().enumerate() {
        per_base[b] = per_base[b].saturating_mul(over[a]);
    }
    per_base.into_iter().max().unwrap_or(1)
}

fn pi_comp(ip: &Interp, ctx: &Context, dom: &Type, body: &Term, arg: &Term) -> R<(Comparison, String)> {
    let cx = extend(ctx, "x", dom);
    let cod = ip.infer(&cx, body)?;
    let lam = Term::Lam(Hint::new("x"), Box::new(dom.clone()), Box::new(body.clone()));
    let lhs = Term::App(Box::new(lam), Box::new(arg.clone()));
    let rhs = substitute(body, arg, 0);
    let ty = substitute(&cod, arg, 0);
    let sl = interp_term(ip, ctx, &lhs, &ty)?;
    let sr = interp_term(ip, ctx, &rhs, &ty)?;
    if sl.section != sr.section {
        return fail("β-redex and contractum interpret differently");
    }
    // The same value through the adjunction: transpose the body, apply the
    // counit, and restrict along the argument.
    let sc = sl.ty.context.clone();
    let sx = interp_context(ip, &cx)?;
    let proj = last_projection(&sx)?;
    let xt = type_over(ip, sx.clone(), &cod)?;
    let sb = term_in(ip, xt.clone(), body)?;
    let bound = pi_size_bound(&proj, &xt.slice);
    if bound > PI_BUDGET {
        return Ok((Comparison::Identity, format!("adjunction route skipped, up to {bound} sections per fiber")));
    }
    let y = SliceObject::terminal(&sc.groupoid);
    let pb = pullback(&proj, &y.proj).map_err(SemError::Gpd)?;
    let h = sb.section.compose(&pb.p1).map_err(SemError::Gpd)?;
    let cl = choose_cleavage(&proj).map_err(SemError::Gpd)?;
    let pi = pi_f(&proj, &xt.slice, &cl).map_err(SemError::Gpd)?;
    let g = pi_transpose(&pi, &y, &h).map_err(SemError::Gpd)?;
    let k = pi_counit_apply(&pi, &y, &g).map_err(SemError::Gpd)?;
    if k != h {
        return fail("counit after transpose is not the identity");
    }
    let sa = interp_term(ip, ctx, arg, dom)?;
    let abar = extend_by(&sc, &sx, &sa)?;
    // `γ ↦ (abar γ, γ)` in the pullback `f*Y`.
    let pt = &pb.total;
    let lookup_o = |o: usize| pt.object_index(&Label::pair(abar.cod.object(abar.obj[o]).clone(), sc.groupoid.object(o).clone()));
    let lookup_m = |m: usize| pt.morphism_index(&Label::pair(abar.cod.morphism(abar.mor[m]).clone(), sc.groupoid.morphism(m).clone()));
    let obj = (0..sc.groupoid.obj_count()).map(lookup_o).collect::<Option<Vec<_>>>();
    let mor = (0..sc.groupoid.mor_count()).map(lookup_m).collect::<Option<Vec<_>>>();
    let (Some(obj), Some(mor)) = (obj, mor) else {
        return fail("argument does not land in the pullback");
    };
    let into_pb = Functor::new(sc.groupoid.clone(), pt.clone(), obj, mor).map_err(SemError::Gpd)?;
    let applied = k.compose(&into_pb).map_err(SemError::Gpd)?;
    match matches_through(&applied, &sr, &abar) {
        Ok(()) => Ok((Comparison::Canonical, String::new())),
        Err(e) => fail(format!("counit route: {e}")),
    }
}

fn sigma_comp(
    ip: &Interp,
    ctx: &Context,
    sigma: &Type,
    motive: &Type,
    branch: &Term,
    fst: &Term,
    snd: &Term,
) -> R<(Comparison, String)> {
    let Type::Sigma(h, a_ty, b_ty) = sigma else {
        return Err(SemError::Unsupported("Σ-computation needs a Σ type".into()));
    };
    let p = Term::Ann(Box::new(Term::Pair(Box::new(fst.clone()), Box::new(snd.clone()))), Box::new(sigma.clone()));
    let lhs = Term::split(motive.clone(), branch.clone(), p.clone());
    let rhs = instantiate_branch(branch, fst, snd);
    let ty = substitute(motive, &p, 0);
    let sl = interp_term(ip, ctx, &lhs, &ty)?;
    let sr = interp_term(ip, ctx, &rhs, &ty)?;
    if sl.section != sr.section {
        return fail("split of a pair and the instantiated branch interpret differently");
    }
    // The universal property of the sum: the branch, interpreted over
    // `Γ, x:A, y:B`, restricted along the pair.
    let mut cxy = ctx.clone();
    cxy.push(h.clone(), (**a_ty).clone());
    cxy.push(h.clone(), (**b_ty).clone());
    let pair_xy = Term::Pair(Box::new(Term::Var(1)), Box::new(Term::Var(0)));
    let branch_ty = substitute(&lift(motive, 1, 2), &pair_xy, 0);
    let sxy = interp_context(ip, &cxy)?;
    let sd = term_in(ip, type_over(ip, sxy.clone(), &branch_ty)?, branch)?;
    let sp = interp_term(ip, ctx, &p, sigma)?;
    let sc = &sl.ty.context;
    let g = &sc.groupoid;
    let split_env = |v: &[Label], l: &Label| -> Option<Vec<Label>> {
        let (x, y) = l.as_pair()?;
        let mut v = v.to_vec();
        v.extend([x.clone(), y.clone()]);
        Some(v)
    };
    let obj = (0..g.obj_count())
        .map(|o| split_env(sc.env(o), sp.value(o)).and_then(|e| sxy.object_at(&e)))
        .collect::<Option<Vec<_>>>();
    let mor = (0..g.mor_count())
        .map(|m| {
            let v = sp.section.cod.morphism(sp.section.mor[m]).as_pair()?.1;
            split_env(sc.menv(m), v).and_then(|e| sxy.morphism_at(&e))
        })
        .collect::<Option<Vec<_>>>();
    let (Some(obj), Some(mor)) = (obj, mor) else {
        return fail("pair does not land in the extended context");
    };
    let into = Functor::new(g.clone(), sxy.groupoid.clone(), obj, mor).map_err(SemError::Gpd)?;
    let via = sd.section.compose(&into).map_err(SemError::Gpd)?;
    let ok_o = (0..g.obj_count()).all(|o| via.cod.object(via.obj[o]).as_pair().map(|p| p.1) == Some(sr.value(o)));
    let ok_m = (0..g.mor_count()).all(|m| {
        via.cod.morphism(via.mor[m]).as_pair().map(|p| p.1)
            == sr.section.cod.morphism(sr.section.mor[m]).as_pair().map(|p| p.1)
    });
    if ok_o && ok_m {
        Ok((Comparison::Canonical, String::new()))
    } else {
        fail("the branch restricted along the pair differs")
    }
}

/// Compares `⟦T[a/x]⟧` with the pullback of `⟦T⟧` along `γ ↦ (γ, a γ)`.
/// Returns the comparison used: identity when the families agree on the
/// nose and the canonical relabeling of totals is an isomorphism.
pub fn interp_subst(ip: &Interp, ctx: &Context, dom: &Type, arg: &Term, target: &Type) -> R<Comparison> {
    let direct = interp_type(ip, ctx, &substitute(target, arg, 0))?;
    let sx = interp_context(ip, &extend(ctx, "x", dom))?;
    let tt = type_over(ip, sx.clone(), target)?;
    let sa = interp_term(ip, ctx, arg, dom)?;
    let abar = extend_by(&direct.context, &sx, &sa)?;
    let pulled = pullback_functor(&abar, &tt.slice).map_err(SemError::Gpd)?;
    compare_with_pullback(&direct, &tt.family.reindex(&abar), &abar, &pulled)
}

fn compare_with_pullback(
    direct: &super::SemanticType,
    reindexed: &super::Family,
    along: &Functor,
    pulled: &SliceObject,
) -> R<Comparison> {
    let strict = direct.family == *reindexed;
    let (g, dt, pt) = (&direct.context.groupoid, &direct.slice.total, &pulled.total);
    let canon_o = (0..dt.obj_count())
        .map(|o| {
            let (c, v) = dt.object(o).as_pair()?;
            let k = g.object_index(c)?;
            pt.object_index(&Label::pair(
                c.clone(),
                Label::pair(along.cod.object(along.obj[k]).clone(), v.clone()),
            ))
        })
        .collect::<Option<Vec<_>>>();
    let canon_m = (0..dt.mor_count())
        .map(|m| {
            let (c, v) = dt.morphism(m).as_pair()?;
            let k = g.morphism_index(c)?;
            pt.morphism_index(&Label::pair(
                c.clone(),
                Label::pair(along.cod.morphism(along.mor[k]).clone(), v.clone()),
            ))
        })
        .collect::<Option<Vec<_>>>();
    if let (Some(obj), Some(mor)) = (canon_o, canon_m) {
        if let Ok(c) = Functor::new(dt.clone(), pt.clone(), obj, mor) {
            if c.is_isomorphism() && is_slice_morphism(&c, &direct.slice, pulled) {
                return Ok(if strict { Comparison::Identity } else { Comparison::Canonical });
            }
        }
    }
    Ok(match find_slice_iso(&direct.slice, pulled) {
        Some(_) => Comparison::Searched,
        None => Comparison::Failed,
    })
}

fn weakening(ip: &Interp, ctx: &Context, ext: &Type, target: &Type) -> R<(Comparison, String)> {
    let cx = extend(ctx, "w", ext);
    let direct = interp_type(ip, &cx, &lift(target, 0, 1))?;
    let base = interp_type(ip, ctx, target)?;
    let proj = last_projection(&direct.context)?;
    let pulled = pullback_functor(&proj, &base.slice).map_err(SemError::Gpd)?;
    let c = compare_with_pullback(&direct, &base.family.reindex(&proj), &proj, &pulled)?;
    Ok((c, String::new()))
}

fn equation(ip: &Interp, j: &Judgement) -> R<(Comparison, String)> {
    if !matches!(j, Judgement::TypeEq { .. } | Judgement::TermEq { .. } | Judgement::CtxEq { .. }) {
        return Err(SemError::Unsupported("not an equation".into()));
    }
    match interp_judgement(ip, j)? {
        SemanticValue::Equal(w) if w.strict => Ok((Comparison::Identity, String::new())),
        SemanticValue::Equal(w) if w.holds() => Ok((Comparison::Searched, String::new())),
        _ => fail("the two sides are not isomorphic"),
    }
}
