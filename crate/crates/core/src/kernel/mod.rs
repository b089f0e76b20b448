//! Type checker and derivation validator.

mod check;
mod derivation;
pub mod expr;
mod script;

pub use check::Checker;
pub use derivation::{validate_derivation, Derivation, Rule};
pub use expr::{normalize_term, normalize_type};
pub use script::{run_script, CheckOutcome, ScriptReport};

use crate::syntax::ops::max_free;
use crate::syntax::{Context, Term, Type};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown base type `{0}`")]
    UnknownBase(String),
    #[error("unknown constant `{0}`")]
    UnknownConst(String),
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("declaration of `{0}` must be closed")]
    NotClosed(String),
    #[error("variable index {0} is out of scope")]
    UnboundIndex(usize),
    #[error("context entry {entry} (`{name}`) is ill-formed: {reason}")]
    IllFormedContext {
        entry: usize,
        name: String,
        reason: Box<KernelError>,
    },
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch { path: String, expected: String, found: String },
    #[error("cannot infer a type for {0}; add an annotation `(t : T)`")]
    CannotInfer(String),
    #[error("{0} is applied but its type is not a Π type")]
    NotAFunction(String),
    #[error("{0} is split but its type is not a Σ type")]
    NotASigma(String),
    #[error("{lhs} and {rhs} are not definitionally equal")]
    NotDefEqual { lhs: String, rhs: String },
    #[error("normalization did not finish within {bound} steps")]
    NonTermination { bound: usize },
    #[error("exchange at position {position}: the second entry depends on the first")]
    ExchDependency { position: usize },
    #[error("exchange position {position} is out of range for a context of length {len}")]
    ExchOutOfRange { position: usize, len: usize },
    #[error("contexts have different lengths ({0} and {1})")]
    ContextLength(usize, usize),
    #[error("rule {rule} does not apply at {path}: {reason}")]
    RuleMismatch { path: String, rule: String, reason: String },
}

/// Declared base types (with parameter telescopes) and constants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    bases: BTreeMap<String, Context>,
    consts: BTreeMap<String, Type>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn base(&self, name: &str) -> Option<&Context> {
        self.bases.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<&Type> {
        self.consts.get(name)
    }

    pub fn bases(&self) -> impl Iterator<Item = (&String, &Context)> {
        self.bases.iter()
    }

    pub fn consts(&self) -> impl Iterator<Item = (&String, &Type)> {
        self.consts.iter()
    }

    fn taken(&self, name: &str) -> bool {
        self.bases.contains_key(name) || self.consts.contains_key(name)
    }

    /// Declares a base type family over a closed telescope.
    pub fn declare_base(&mut self, name: &str, params: Context) -> Result<(), KernelError> {
        if self.taken(name) {
            return Err(KernelError::Duplicate(name.to_string()));
        }
        Checker::new(self).check_context(&params)?;
        self.bases.insert(name.to_string(), params);
        Ok(())
    }

    /// Declares a constant of a closed type.
    pub fn declare_const(&mut self, name: &str, ty: Type) -> Result<(), KernelError> {
        if self.taken(name) {
            return Err(KernelError::Duplicate(name.to_string()));
        }
        if max_free(&ty).is_some() {
            return Err(KernelError::NotClosed(name.to_string()));
        }
        Checker::new(self).check_type(&Context::empty(), &ty)?;
        self.consts.insert(name.to_string(), ty);
        Ok(())
    }

    /// Convenience: a signature of nullary base types.
    pub fn with_bases(names: &[&str]) -> Self {
        let mut s = Signature::new();
        for n in names {
            s.declare_base(n, Context::empty()).expect("fresh base");
        }
        s
    }
}

/// β-normalizes both sides and compares them up to α.
pub fn def_equal(lhs: &Term, rhs: &Term) -> Result<bool, KernelError> {
    Ok(lhs == rhs || normalize_term(lhs)? == normalize_term(rhs)?)
}

pub fn def_equal_types(lhs: &Type, rhs: &Type) -> Result<bool, KernelError> {
    Ok(lhs == rhs || normalize_type(lhs)? == normalize_type(rhs)?)
}

/// Names of a context's variables, outermost first, for error messages.
pub(crate) fn ctx_names(ctx: &Context) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for e in &ctx.entries {
        let base = if e.name.as_str().is_empty() { "x" } else { e.name.as_str() };
        let mut n = base.to_string();
        let mut k = 1;
        while names.contains(&n) {
            n = format!("{base}{k}");
            k += 1;
        }
        names.push(n);
    }
    names
}

#[cfg(test)]
mod tests;
