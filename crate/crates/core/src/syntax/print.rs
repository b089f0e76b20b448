//! Pretty printer producing text that parses back to the same syntax.

use super::ast::{Context, Judgement, Term, Type};
use super::parse::is_keyword;
use std::collections::BTreeSet;

struct Printer {
    /// Names of variables in scope, outermost first.
    scope: Vec<String>,
    /// Global names the printed text refers to; binders must avoid them.
    reserved: BTreeSet<String>,
}

fn collect_globals_ty(t: &Type, out: &mut BTreeSet<String>) {
    match t {
        Type::Base(n, args) => {
            out.insert(n.clone());
            args.iter().for_each(|a| collect_globals_tm(a, out));
        }
        Type::Pi(_, a, b) | Type::Sigma(_, a, b) => {
            collect_globals_ty(a, out);
            collect_globals_ty(b, out);
        }
    }
}

fn collect_globals_tm(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(_) => {}
        Term::Const(c) => {
            out.insert(c.clone());
        }
        Term::Lam(_, a, b) => {
            collect_globals_ty(a, out);
            collect_globals_tm(b, out);
        }
        Term::App(f, a) | Term::Pair(f, a) => {
            collect_globals_tm(f, out);
            collect_globals_tm(a, out);
        }
        Term::Split {
            motive,
            branch,
            scrutinee,
            ..
        } => {
            collect_globals_ty(motive, out);
            collect_globals_tm(branch, out);
            collect_globals_tm(scrutinee, out);
        }
        Term::Ann(t, ty) => {
            collect_globals_tm(t, out);
            collect_globals_ty(ty, out);
        }
    }
}

impl Printer {
    fn fresh(&self, hint: &str) -> String {
        let base: String = {
            let h: String = hint
                .chars()
                .filter(|c| c.is_alphanumeric() || *c == '_' || *c == '\'')
                .collect();
            if h.is_empty() || !h.chars().next().unwrap().is_alphabetic() || is_keyword(&h) {
                "x".to_string()
            } else {
                h
            }
        };
        let taken = |s: &str| self.scope.iter().any(|v| v == s) || self.reserved.contains(s) || is_keyword(s);
        if !taken(&base) {
            return base;
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|c| !taken(c))
            .unwrap()
    }

    fn with_binders<R>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> R) -> R {
        let n = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    fn var(&self, i: usize) -> String {
        if i < self.scope.len() {
            self.scope[self.scope.len() - 1 - i].clone()
        } else {
            // Ill-scoped input; print something that will not parse silently.
            format!("#{i}")
        }
    }

    fn ty(&mut self, t: &Type) -> String {
        match t {
            Type::Base(n, args) => {
                let mut s = n.clone();
                for a in args {
                    s.push(' ');
                    s.push_str(&self.tm_atom(a));
                }
                s
            }
            Type::Pi(h, a, b) | Type::Sigma(h, a, b) => {
                let kw = if matches!(t, Type::Pi(..)) { "Pi" } else { "Sigma" };
                let x = self.fresh(h.as_str());
                let dom = self.ty(a);
                let body = self.with_binders(std::slice::from_ref(&x), |p| p.ty(b));
                format!("{kw} ({x} : {dom}) . {body}")
            }
        }
    }

    fn tm(&mut self, t: &Term) -> String {
        match t {
            Term::Lam(h, a, b) => {
                let x = self.fresh(h.as_str());
                let dom = self.ty(a);
                let body = self.with_binders(std::slice::from_ref(&x), |p| p.tm(b));
                format!("lam ({x} : {dom}) . {body}")
            }
            Term::App(f, a) => {
                let fs = match f.as_ref() {
                    Term::App(..) => self.tm(f),
                    _ => self.tm_atom(f),
                };
                format!("{fs} {}", self.tm_atom(a))
            }
            _ => self.tm_atom(t),
        }
    }

    fn tm_atom(&mut self, t: &Term) -> String {
        match t {
            Term::Var(i) => self.var(*i),
            Term::Const(c) => c.clone(),
            Term::Pair(a, b) => format!("pair({}, {})", self.tm(a), self.tm(b)),
            Term::Split {
                motive_hint,
                motive,
                hints,
                branch,
                scrutinee,
            } => {
                let z = self.fresh(motive_hint.as_str());
                let m = self.with_binders(std::slice::from_ref(&z), |p| p.ty(motive));
                let x = self.fresh(hints.0.as_str());
                let y = self.with_binders(std::slice::from_ref(&x), |p| p.fresh(hints.1.as_str()));
                let d = self.with_binders(&[x.clone(), y.clone()], |p| p.tm(branch));
                let s = self.tm(scrutinee);
                format!("split[{z}. {m}]({x} {y}. {d}, {s})")
            }
            Term::Ann(t, ty) => format!("({} : {})", self.tm(t), self.ty(ty)),
            Term::Lam(..) | Term::App(..) => format!("({})", self.tm(t)),
        }
    }

    fn ctx(&mut self, c: &Context) -> (String, Vec<String>) {
        let mut parts = Vec::new();
        let mut names = Vec::new();
        for e in &c.entries {
            let ty = self.ty(&e.ty);
            let x = self.fresh(e.name.as_str());
            parts.push(format!("{x} : {ty}"));
            self.scope.push(x.clone());
            names.push(x);
        }
        (parts.join(", "), names)
    }
}

fn printer_for(globals: BTreeSet<String>, vars: &[String]) -> Printer {
    Printer {
        scope: vars.to_vec(),
        reserved: globals,
    }
}

pub fn print_type(t: &Type) -> String {
    print_type_in(t, &[])
}

pub fn print_term(t: &Term) -> String {
    print_term_in(t, &[])
}

/// Prints with the given variable names in scope (outermost first).
pub fn print_type_in(t: &Type, vars: &[String]) -> String {
    let mut g = BTreeSet::new();
    collect_globals_ty(t, &mut g);
    printer_for(g, vars).ty(t)
}

pub fn print_term_in(t: &Term, vars: &[String]) -> String {
    let mut g = BTreeSet::new();
    collect_globals_tm(t, &mut g);
    printer_for(g, vars).tm(t)
}

pub fn print_context(c: &Context) -> String {
    let mut g = BTreeSet::new();
    c.entries.iter().for_each(|e| collect_globals_ty(&e.ty, &mut g));
    printer_for(g, &[]).ctx(c).0
}

fn judgement_globals(j: &Judgement) -> BTreeSet<String> {
    let mut g = BTreeSet::new();
    let ctxg = |c: &Context, g: &mut BTreeSet<String>| c.entries.iter().for_each(|e| collect_globals_ty(&e.ty, g));
    ctxg(j.ctx(), &mut g);
    match j {
        Judgement::TypeForm { ty, .. } => collect_globals_ty(ty, &mut g),
        Judgement::TypeEq { lhs, rhs, .. } => {
            collect_globals_ty(lhs, &mut g);
            collect_globals_ty(rhs, &mut g);
        }
        Judgement::TermForm { term, ty, .. } => {
            collect_globals_tm(term, &mut g);
            collect_globals_ty(ty, &mut g);
        }
        Judgement::TermEq { lhs, rhs, ty, .. } => {
            collect_globals_tm(lhs, &mut g);
            collect_globals_tm(rhs, &mut g);
            collect_globals_ty(ty, &mut g);
        }
        Judgement::CtxForm { ext, .. } => ctxg(ext, &mut g),
        Judgement::CtxEq { lhs, rhs, .. } => {
            ctxg(lhs, &mut g);
            ctxg(rhs, &mut g);
        }
    }
    g
}

/// `Γ |- J` in the surface syntax (without the `check` keyword).
pub fn print_judgement(j: &Judgement) -> String {
    let mut p = printer_for(judgement_globals(j), &[]);
    let (ctx, _) = p.ctx(j.ctx());
    let body = match j {
        Judgement::TypeForm { ty, .. } => format!("{} type", p.ty(ty)),
        Judgement::TypeEq { lhs, rhs, .. } => format!("{} = {} type", p.ty(lhs), p.ty(rhs)),
        Judgement::TermForm { term, ty, .. } => format!("{} : {}", p.tm(term), p.ty(ty)),
        Judgement::TermEq { lhs, rhs, ty, .. } => format!("{} = {} : {}", p.tm(lhs), p.tm(rhs), p.ty(ty)),
        Judgement::CtxForm { ext, .. } => {
            let n = p.scope.len();
            let (e, _) = p.ctx(ext);
            p.scope.truncate(n);
            format!("ctx ({e})")
        }
        Judgement::CtxEq { lhs, rhs, .. } => {
            let n = p.scope.len();
            let (l, _) = p.ctx(lhs);
            p.scope.truncate(n);
            let (r, _) = p.ctx(rhs);
            p.scope.truncate(n);
            format!("ctx ({l}) = ({r})")
        }
    };
    if ctx.is_empty() {
        format!("|- {body}")
    } else {
        format!("{ctx} |- {body}")
    }
}
