//! Printer/parser round trip and the index calculus against a named-variable
//! oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tt_core::syntax::ops::{lift, shift, substitute};
use tt_core::syntax::print::{print_term_in, print_type_in};
use tt_core::syntax::{parse_term, parse_type, Scope, Term, Type};

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn ty(&mut self, n: usize, depth: u32) -> Type {
        match if depth == 0 { 0 } else { self.rng.gen_range(0..4) } {
            0 => Type::base("A"),
            1 => Type::family("B", vec![self.tm(n, depth - 1)]),
            2 => Type::pi("x", self.ty(n, depth - 1), self.ty(n + 1, depth - 1)),
            _ => Type::sigma("y", self.ty(n, depth - 1), self.ty(n + 1, depth - 1)),
        }
    }

    fn tm(&mut self, n: usize, depth: u32) -> Term {
        let leaf = |g: &mut Gen| {
            if n > 0 && g.rng.gen_bool(0.7) {
                Term::Var(g.rng.gen_range(0..n))
            } else {
                Term::constant("c")
            }
        };
        if depth == 0 {
            return leaf(self);
        }
        match self.rng.gen_range(0..7) {
            0 => leaf(self),
            1 => Term::lam("x", self.ty(n, depth - 1), self.tm(n + 1, depth - 1)),
            2 => Term::app(self.tm(n, depth - 1), self.tm(n, depth - 1)),
            3 => Term::pair(self.tm(n, depth - 1), self.tm(n, depth - 1)),
            4 => Term::split(self.ty(n + 1, depth - 1), self.tm(n + 2, depth - 1), self.tm(n, depth - 1)),
            5 => Term::ann(self.tm(n, depth - 1), self.ty(n, depth - 1)),
            _ => Term::app(Term::app(self.tm(n, depth - 1), leaf(self)), leaf(self)),
        }
    }
}

fn scope(n: usize) -> Scope {
    Scope {
        bases: vec!["A".into(), "B".into()],
        consts: vec!["c".into()],
        vars: (0..n).map(|i| format!("v{i}")).collect(),
    }
}

#[test]
fn print_then_parse_is_identity() {
    for seed in 0..500 {
        let mut g = Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        let n = g.rng.gen_range(0..3);
        let s = scope(n);
        let t = g.tm(n, 4);
        let text = print_term_in(&t, &s.vars);
        let back = parse_term(&text, &s).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(back, t, "seed {seed}: {text}");
        let ty = g.ty(n, 3);
        let text = print_type_in(&ty, &s.vars);
        assert_eq!(parse_type(&text, &s).unwrap(), ty, "seed {seed}: {text}");
    }
}

// ---- named oracle ----

#[derive(Clone, Debug, PartialEq)]
enum NTy {
    Base(String, Vec<N>),
    Pi(String, Box<NTy>, Box<NTy>),
    Sigma(String, Box<NTy>, Box<NTy>),
}

#[derive(Clone, Debug, PartialEq)]
enum N {
    Var(String),
    Const(String),
    Lam(String, Box<NTy>, Box<N>),
    App(Box<N>, Box<N>),
    Pair(Box<N>, Box<N>),
    Split(String, Box<NTy>, String, String, Box<N>, Box<N>),
    Ann(Box<N>, Box<NTy>),
}

struct Namer(usize);

impl Namer {
    fn fresh(&mut self) -> String {
        self.0 += 1;
        format!("_b{}", self.0)
    }

    fn ty(&mut self, t: &Type, env: &mut Vec<String>) -> NTy {
        match t {
            Type::Base(b, args) => NTy::Base(b.clone(), args.iter().map(|a| self.tm(a, env)).collect()),
            Type::Pi(_, a, b) | Type::Sigma(_, a, b) => {
                let a = self.ty(a, env);
                let x = self.fresh();
                env.push(x.clone());
                let b = self.ty(b, env);
                env.pop();
                if matches!(t, Type::Pi(..)) {
                    NTy::Pi(x, Box::new(a), Box::new(b))
                } else {
                    NTy::Sigma(x, Box::new(a), Box::new(b))
                }
            }
        }
    }

    fn tm(&mut self, t: &Term, env: &mut Vec<String>) -> N {
        match t {
            Term::Var(i) => N::Var(env[env.len() - 1 - i].clone()),
            Term::Const(c) => N::Const(c.clone()),
            Term::Lam(_, a, b) => {
                let a = self.ty(a, env);
                let x = self.fresh();
                env.push(x.clone());
                let b = self.tm(b, env);
                env.pop();
                N::Lam(x, Box::new(a), Box::new(b))
            }
            Term::App(f, a) => N::App(Box::new(self.tm(f, env)), Box::new(self.tm(a, env))),
            Term::Pair(f, a) => N::Pair(Box::new(self.tm(f, env)), Box::new(self.tm(a, env))),
            Term::Split {
                motive,
                branch,
                scrutinee,
                ..
            } => {
                let z = self.fresh();
                env.push(z.clone());
                let m = self.ty(motive, env);
                env.pop();
                let (x, y) = (self.fresh(), self.fresh());
                env.push(x.clone());
                env.push(y.clone());
                let d = self.tm(branch, env);
                env.truncate(env.len() - 2);
                let s = self.tm(scrutinee, env);
                N::Split(z, Box::new(m), x, y, Box::new(d), Box::new(s))
            }
            Term::Ann(t, ty) => N::Ann(Box::new(self.tm(t, env)), Box::new(self.ty(ty, env))),
        }
    }
}

/// Binders are globally unique, so plain replacement cannot capture.
fn nsubst(t: &N, x: &str, r: &N) -> N {
    let s = |e: &N| Box::new(nsubst(e, x, r));
    match t {
        N::Var(v) if v == x => r.clone(),
        N::Var(_) | N::Const(_) => t.clone(),
        N::Lam(y, a, b) => N::Lam(y.clone(), Box::new(nsubst_ty(a, x, r)), s(b)),
        N::App(f, a) => N::App(s(f), s(a)),
        N::Pair(f, a) => N::Pair(s(f), s(a)),
        N::Split(z, m, a, b, d, sc) => N::Split(
            z.clone(),
            Box::new(nsubst_ty(m, x, r)),
            a.clone(),
            b.clone(),
            s(d),
            s(sc),
        ),
        N::Ann(e, ty) => N::Ann(s(e), Box::new(nsubst_ty(ty, x, r))),
    }
}

fn nsubst_ty(t: &NTy, x: &str, r: &N) -> NTy {
    match t {
        NTy::Base(b, args) => NTy::Base(b.clone(), args.iter().map(|a| nsubst(a, x, r)).collect()),
        NTy::Pi(y, a, b) => NTy::Pi(y.clone(), Box::new(nsubst_ty(a, x, r)), Box::new(nsubst_ty(b, x, r))),
        NTy::Sigma(y, a, b) => NTy::Sigma(y.clone(), Box::new(nsubst_ty(a, x, r)), Box::new(nsubst_ty(b, x, r))),
    }
}

/// Named terms up to renaming of bound variables: compare by converting
/// both to de Bruijn form through the same free-variable environment.
fn back(t: &N, env: &mut Vec<String>) -> Term {
    match t {
        N::Var(v) => {
            let i = env.iter().rev().position(|e| e == v).expect("scoped");
            Term::Var(i)
        }
        N::Const(c) => Term::constant(c),
        N::Lam(x, a, b) => {
            let a = back_ty(a, env);
            env.push(x.clone());
            let b = back(b, env);
            env.pop();
            Term::lam("x", a, b)
        }
        N::App(f, a) => Term::app(back(f, env), back(a, env)),
        N::Pair(f, a) => Term::pair(back(f, env), back(a, env)),
        N::Split(z, m, x, y, d, s) => {
            env.push(z.clone());
            let m = back_ty(m, env);
            env.pop();
            env.push(x.clone());
            env.push(y.clone());
            let d = back(d, env);
            env.truncate(env.len() - 2);
            Term::split(m, d, back(s, env))
        }
        N::Ann(e, ty) => Term::ann(back(e, env), back_ty(ty, env)),
    }
}

fn back_ty(t: &NTy, env: &mut Vec<String>) -> Type {
    match t {
        NTy::Base(b, args) => Type::family(b, args.iter().map(|a| back(a, env)).collect()),
        NTy::Pi(x, a, b) | NTy::Sigma(x, a, b) => {
            let a = back_ty(a, env);
            env.push(x.clone());
            let b = back_ty(b, env);
            env.pop();
            if matches!(t, NTy::Pi(..)) {
                Type::pi("x", a, b)
            } else {
                Type::sigma("x", a, b)
            }
        }
    }
}

#[test]
fn substitution_agrees_with_named_oracle() {
    for seed in 0..500 {
        let mut g = Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        let n = g.rng.gen_range(1..4);
        let i = g.rng.gen_range(0..n);
        let t = g.tm(n, 4);
        let r = g.tm(n - 1, 3);
        let names: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
        let target = names[n - 1 - i].clone();
        let mut rest = names.clone();
        rest.remove(n - 1 - i);
        let mut namer = Namer(0);
        let nt = namer.tm(&t, &mut names.clone());
        let nr = namer.tm(&r, &mut rest.clone());
        let oracle = back(&nsubst(&nt, &target, &nr), &mut rest.clone());
        assert_eq!(substitute(&t, &r, i), oracle, "seed {seed}");
    }
}

#[test]
fn shift_and_substitution_commute_as_expected() {
    for seed in 0..500 {
        let mut g = Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        let n = g.rng.gen_range(0..3);
        let t = g.tm(n, 4);
        let r = g.tm(n, 2);
        // Substituting for a variable that does not occur undoes a lift.
        assert_eq!(substitute(&lift(&t, 0, 1), &r, 0), t);
        // Shifting up and back down is the identity.
        let k = g.rng.gen_range(0..=n);
        assert_eq!(shift(&shift(&t, k, 2).unwrap(), k, -2).unwrap(), t);
        // Lifting distributes over substitution.
        if n > 0 {
            let r0 = g.tm(n - 1, 2);
            assert_eq!(
                lift(&substitute(&t, &r0, 0), 0, 1),
                substitute(&lift(&t, 1, 1), &lift(&r0, 0, 1), 0)
            );
        }
    }
}
