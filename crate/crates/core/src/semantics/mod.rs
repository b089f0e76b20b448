//! Interpretation of checked judgements in finite groupoids.
//!
//! Types are evaluated as strictly functorial families over the context
//! groupoid and packaged as their Grothendieck totals; substitution is then
//! precomposition on the nose. The dependent products and sums of
//! [`crate::gpd`] are used to cross-check the result up to a comparison
//! isomorphism (see [`sound`]).

mod eval;
mod family;
pub mod corpus;
pub mod sound;
#[cfg(test)]
mod tests;

pub use eval::Interp;
pub use family::Family;
pub use sound::{
    interp_subst, verify_rule_soundness, Comparison, RuleInstance, SoundnessReport,
};

use crate::gpd::{find_slice_iso, functor_from_json, groupoid_from_json, FinGroupoid, Functor, GpdError, SliceObject};
use crate::kernel::KernelError;
use crate::syntax::{Context, Judgement, Term, Type};
use crate::Label;
use family::grothendieck;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SemError {
    #[error("base type `{0}` has no binding in the model environment")]
    MissingBaseBinding(String),
    #[error("constant `{0}` has no binding in the model environment")]
    MissingConstBinding(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("family is not split: {0}")]
    NotSplit(String),
    #[error("not a fibration: {0}")]
    NotAFibration(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("comparison failed: {0}")]
    ComparisonFailed(String),
    #[error("model environment: {0}")]
    Format(String),
    #[error(transparent)]
    Kernel(KernelError),
    #[error(transparent)]
    Gpd(GpdError),
    #[error("interpretation bug: {0}")]
    Internal(String),
}

impl SemError {
    pub(crate) fn missing(name: &str) -> SemError {
        if name == "Nat" {
            SemError::Unsupported(
                "`Nat` has no finite model; base types must be bound to finite groupoids".into(),
            )
        } else {
            SemError::MissingBaseBinding(name.to_string())
        }
    }
}

#[derive(Clone, Debug)]
pub enum BaseBinding {
    Groupoid(Arc<FinGroupoid>),
    /// A family indexed by the groupoid bound to `over`.
    Family { over: String, family: Family },
}

/// How a constant's value is given: an object of the groupoid its type
/// denotes in the empty context.
#[derive(Clone, Debug)]
pub enum ConstBinding {
    Label(Label),
    /// Matched against the printed labels.
    Named(String),
    Index(usize),
}

#[derive(Clone, Debug, Default)]
pub struct ModelEnv {
    pub bases: BTreeMap<String, BaseBinding>,
    pub consts: BTreeMap<String, ConstBinding>,
}

impl ModelEnv {
    pub fn new() -> ModelEnv {
        ModelEnv::default()
    }

    pub fn bind_groupoid(&mut self, name: &str, g: Arc<FinGroupoid>) -> &mut Self {
        self.bases.insert(name.to_string(), BaseBinding::Groupoid(g));
        self
    }

    pub fn bind_family(&mut self, name: &str, over: &str, family: Family) -> &mut Self {
        self.bases.insert(
            name.to_string(),
            BaseBinding::Family {
                over: over.to_string(),
                family,
            },
        );
        self
    }

    pub fn bind_const(&mut self, name: &str, value: ConstBinding) -> &mut Self {
        self.consts.insert(name.to_string(), value);
        self
    }

    /// `{"bases": {...}, "consts": {...}}`. A base is an inline groupoid,
    /// a path to one, or `{"over": A, "fibration": F}` with `F` an inline
    /// functor or a path to one whose codomain is the groupoid bound to
    /// `A`. A constant is an object label (as printed) or an index.
    pub fn from_json(text: &str, base_dir: Option<&Path>) -> Result<ModelEnv, SemError> {
        let fmt = |e: String| SemError::Format(e);
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| fmt(e.to_string()))?;
        let read = |p: &str| -> Result<String, SemError> {
            let path = base_dir.map(|d| d.join(p)).unwrap_or_else(|| p.into());
            std::fs::read_to_string(&path).map_err(|e| fmt(format!("{}: {e}", path.display())))
        };
        let mut env = ModelEnv::new();
        let mut families = Vec::new();
        if let Some(bases) = v.get("bases") {
            let bases = bases.as_object().ok_or_else(|| fmt("`bases` must be an object".into()))?;
            for (name, b) in bases {
                if let Some(over) = b.get("over") {
                    let over = over.as_str().ok_or_else(|| fmt(format!("`{name}.over` must be a name")))?;
                    let f = b.get("fibration").ok_or_else(|| fmt(format!("`{name}` needs a fibration")))?;
                    let text = match f.as_str() {
                        Some(p) => read(p)?,
                        None => f.to_string(),
                    };
                    let p = functor_from_json(&text, base_dir).map_err(SemError::Gpd)?;
                    families.push((name.clone(), over.to_string(), p));
                } else {
                    let text = match b.as_str() {
                        Some(p) => read(p)?,
                        None => b.to_string(),
                    };
                    let g = groupoid_from_json(&text).map_err(SemError::Gpd)?;
                    env.bind_groupoid(name, g.into_arc());
                }
            }
        }
        for (name, over, p) in families {
            match env.bases.get(&over) {
                Some(BaseBinding::Groupoid(g)) if **g == *p.cod => {}
                Some(BaseBinding::Groupoid(_)) => {
                    return Err(fmt(format!("the fibration for `{name}` is not over the groupoid bound to `{over}`")))
                }
                _ => return Err(fmt(format!("`{name}` is over `{over}`, which is not bound to a groupoid"))),
            }
            if !p.is_fibration() {
                return Err(SemError::NotAFibration(format!("the map bound to `{name}`")));
            }
            let family = Family::from_fibration(&p)?;
            env.bind_family(&name, &over, family);
        }
        if let Some(consts) = v.get("consts") {
            let consts = consts.as_object().ok_or_else(|| fmt("`consts` must be an object".into()))?;
            for (name, c) in consts {
                let b = match c {
                    serde_json::Value::String(s) => ConstBinding::Named(s.clone()),
                    serde_json::Value::Number(n) => ConstBinding::Index(
                        n.as_u64().ok_or_else(|| fmt(format!("`{name}` must be a non-negative index")))? as usize,
                    ),
                    _ => return Err(fmt(format!("`{name}` must be a label or an index"))),
                };
                env.bind_const(name, b);
            }
        }
        Ok(env)
    }

    pub fn load(path: &Path) -> Result<ModelEnv, SemError> {
        let text = std::fs::read_to_string(path).map_err(|e| SemError::Format(format!("{}: {e}", path.display())))?;
        ModelEnv::from_json(&text, path.parent())
    }
}

/// A context as an iterated fibration tower. Objects of the groupoid are
/// named by the list of entry values, morphisms by the list of components.
#[derive(Clone, Debug)]
pub struct SemanticContext {
    pub ctx: Context,
    pub groupoid: Arc<FinGroupoid>,
    /// `⟦Γ_k⟧ → ⟦Γ_{k-1}⟧` for each entry, outermost first.
    pub tower: Vec<Functor>,
}

impl SemanticContext {
    /// The environment an object stands for.
    pub fn env(&self, o: usize) -> &[Label] {
        self.groupoid.object(o).as_list().expect("context object")
    }

    pub fn menv(&self, m: usize) -> &[Label] {
        self.groupoid.morphism(m).as_list().expect("context morphism")
    }

    /// Object named by an environment.
    pub fn object_at(&self, env: &[Label]) -> Option<usize> {
        self.groupoid.object_index(&Label::List(env.to_vec()))
    }

    pub fn morphism_at(&self, menv: &[Label]) -> Option<usize> {
        self.groupoid.morphism_index(&Label::List(menv.to_vec()))
    }
}

/// A type over a context: a strict family and its total, whose projection
/// is a fibration.
#[derive(Clone, Debug)]
pub struct SemanticType {
    pub context: SemanticContext,
    pub ty: Type,
    pub family: Family,
    pub slice: SliceObject,
}

/// A section of a type's projection.
#[derive(Clone, Debug)]
pub struct SemanticTerm {
    pub ty: SemanticType,
    pub term: Term,
    pub section: Functor,
}

impl SemanticTerm {
    /// The value at a context object, as a label of the fiber.
    pub fn value(&self, o: usize) -> &Label {
        let l = self.section.cod.object(self.section.obj[o]);
        l.as_pair().expect("total object").1
    }
}

pub fn interp_context(ip: &Interp, ctx: &Context) -> Result<SemanticContext, SemError> {
    ip.checker().check_context(ctx).map_err(SemError::Kernel)?;
    let mut g = FinGroupoid::build(vec![Label::List(vec![])], vec![(Label::List(vec![]), 0, 0)], vec![0], |_, _| 0)
        .map_err(SemError::Gpd)?
        .into_arc();
    let mut tower = Vec::new();
    for k in 0..ctx.len() {
        let pre = ctx.prefix(k);
        let sc = SemanticContext {
            ctx: pre.clone(),
            groupoid: g.clone(),
            tower: Vec::new(),
        };
        let fam = family_over(ip, &sc, &ctx.entries[k].ty)?;
        let total = grothendieck(&g, &fam.fibers, &fam.transport, &|b, e| {
            let mut v = b.as_list().expect("context label").to_vec();
            v.push(e.clone());
            Label::List(v)
        });
        if !total.is_fibration() {
            return Err(SemError::NotAFibration(format!("context entry {k}")));
        }
        g = total.total.clone();
        tower.push(total.proj);
    }
    Ok(SemanticContext {
        ctx: ctx.clone(),
        groupoid: g,
        tower,
    })
}

fn family_over(ip: &Interp, sc: &SemanticContext, a: &Type) -> Result<Family, SemError> {
    let g = &sc.groupoid;
    let fibers = (0..g.obj_count())
        .map(|o| ip.ty(&sc.ctx, a, sc.env(o)))
        .collect::<Result<Vec<_>, _>>()?;
    let transport = (0..g.mor_count())
        .map(|m| ip.tr(&sc.ctx, a, sc.env(g.src(m)), sc.menv(m), sc.env(g.tgt(m))))
        .collect::<Result<Vec<_>, _>>()?;
    let fam = Family {
        base: g.clone(),
        fibers,
        transport,
    };
    fam.validate()?;
    Ok(fam)
}

pub fn interp_type(ip: &Interp, ctx: &Context, a: &Type) -> Result<SemanticType, SemError> {
    ip.checker().check_type(ctx, a).map_err(SemError::Kernel)?;
    let context = interp_context(ip, ctx)?;
    type_over(ip, context, a)
}

pub(crate) fn type_over(ip: &Interp, context: SemanticContext, a: &Type) -> Result<SemanticType, SemError> {
    let family = family_over(ip, &context, a)?;
    let slice = family.total();
    if !slice.is_fibration() {
        return Err(SemError::NotAFibration(format!("projection of {a:?}")));
    }
    Ok(SemanticType {
        context,
        ty: a.clone(),
        family,
        slice,
    })
}

pub fn interp_term(ip: &Interp, ctx: &Context, t: &Term, a: &Type) -> Result<SemanticTerm, SemError> {
    ip.checker().check_term(ctx, t, a).map_err(SemError::Kernel)?;
    let ty = interp_type(ip, ctx, a)?;
    term_in(ip, ty, t)
}

pub(crate) fn term_in(ip: &Interp, ty: SemanticType, t: &Term) -> Result<SemanticTerm, SemError> {
    let sc = &ty.context;
    let (g, total) = (&sc.groupoid, &ty.slice.total);
    let lookup = |l: Label| total.object_index(&l).ok_or_else(|| SemError::NotASection(format!("{l} is not in the total")));
    let obj = (0..g.obj_count())
        .map(|o| lookup(Label::pair(g.object(o).clone(), ip.tm(&sc.ctx, t, sc.env(o))?)))
        .collect::<Result<Vec<_>, _>>()?;
    let mor = (0..g.mor_count())
        .map(|m| {
            let v = ip.tm_mor(&sc.ctx, t, sc.env(g.src(m)), sc.menv(m), sc.env(g.tgt(m)))?;
            let l = Label::pair(g.morphism(m).clone(), v);
            total
                .morphism_index(&l)
                .ok_or_else(|| SemError::NotASection(format!("{l} is not in the total")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let section = Functor::new(g.clone(), total.clone(), obj, mor).map_err(|e| SemError::NotASection(e.to_string()))?;
    if ty.slice.proj.compose(&section).map_err(SemError::Gpd)? != Functor::identity(g) {
        return Err(SemError::NotASection("projection after the section is not the identity".into()));
    }
    Ok(SemanticTerm {
        ty,
        term: t.clone(),
        section,
    })
}

/// Evidence for a semantic equation: strict equality of the
/// interpretations, or else a comparison isomorphism.
#[derive(Clone, Debug)]
pub struct EqualityWitness {
    pub strict: bool,
    pub comparison: Option<Functor>,
}

impl EqualityWitness {
    pub fn holds(&self) -> bool {
        self.strict || self.comparison.is_some()
    }
}

#[derive(Clone, Debug)]
pub enum SemanticValue {
    Context(SemanticContext),
    Type(SemanticType),
    Term(SemanticTerm),
    Equal(EqualityWitness),
}

fn slices_equal(x: &SliceObject, y: &SliceObject) -> EqualityWitness {
    if x == y {
        EqualityWitness {
            strict: true,
            comparison: None,
        }
    } else {
        EqualityWitness {
            strict: false,
            comparison: find_slice_iso(x, y),
        }
    }
}

pub fn interp_judgement(ip: &Interp, j: &Judgement) -> Result<SemanticValue, SemError> {
    ip.checker().check_judgement(j).map_err(SemError::Kernel)?;
    Ok(match j {
        Judgement::CtxForm { ctx, ext } => SemanticValue::Context(interp_context(ip, &ctx.concat(ext))?),
        Judgement::CtxEq { ctx, lhs, rhs } => {
            let a = interp_context(ip, &ctx.concat(lhs))?;
            let b = interp_context(ip, &ctx.concat(rhs))?;
            let strict = a.groupoid == b.groupoid;
            let comparison = if strict {
                None
            } else {
                crate::gpd::find_isomorphism(&a.groupoid, &b.groupoid, None)
            };
            SemanticValue::Equal(EqualityWitness { strict, comparison })
        }
        Judgement::TypeForm { ctx, ty } => SemanticValue::Type(interp_type(ip, ctx, ty)?),
        Judgement::TypeEq { ctx, lhs, rhs } => {
            let a = interp_type(ip, ctx, lhs)?;
            let b = interp_type(ip, ctx, rhs)?;
            if a.family == b.family {
                SemanticValue::Equal(EqualityWitness {
                    strict: true,
                    comparison: None,
                })
            } else {
                SemanticValue::Equal(slices_equal(&a.slice, &b.slice))
            }
        }
        Judgement::TermForm { ctx, term, ty } => SemanticValue::Term(interp_term(ip, ctx, term, ty)?),
        Judgement::TermEq { ctx, lhs, rhs, ty } => {
            let a = interp_term(ip, ctx, lhs, ty)?;
            let b = interp_term(ip, ctx, rhs, ty)?;
            SemanticValue::Equal(EqualityWitness {
                strict: a.section == b.section,
                comparison: None,
            })
        }
    })
}
