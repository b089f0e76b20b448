//! Randomized properties of the checker over generated well-typed terms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tt_core::kernel::{def_equal, normalize_term, run_script, validate_derivation, Checker, Signature};
use tt_core::syntax::ops::{lift, substitute};
use tt_core::syntax::{parse_script, Context, Entry, Judgement, Term, Type};

const PRELUDE: &str = "
base A;
base B (x : A);
const a : A;
const a2 : A;
const g : Pi (x : A) . A;
const f : Pi (x : A) . B x;
";

fn signature() -> Signature {
    run_script(&parse_script(PRELUDE).unwrap(), false).signature
}

fn ta() -> Type {
    Type::base("A")
}

fn tb(t: Term) -> Type {
    Type::family("B", vec![t])
}

fn sigma_ab() -> Type {
    Type::sigma("x", ta(), tb(Term::Var(0)))
}

/// Type-directed generator of well-typed terms.
struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn vars_of(&self, ctx: &Context, ty: &Type) -> Vec<Term> {
        (0..ctx.len())
            .filter(|&i| lift(&ctx.lookup(i).unwrap().ty, 0, i + 1) == *ty)
            .map(Term::Var)
            .collect()
    }

    fn term_a(&mut self, ctx: &Context, depth: u32) -> Term {
        let vars = self.vars_of(ctx, &ta());
        let pick = if depth == 0 { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..6) };
        match pick {
            0 if !vars.is_empty() => vars[self.rng.gen_range(0..vars.len())].clone(),
            0 | 1 => Term::constant(if self.rng.gen() { "a" } else { "a2" }),
            2 => Term::app(Term::constant("g"), self.term_a(ctx, depth - 1)),
            3 => {
                // Π-redex returning A.
                let inner = ctx.extend("y", ta());
                let body = self.term_a(&inner, depth - 1);
                Term::app(Term::lam("y", ta(), body), self.term_a(ctx, depth - 1))
            }
            4 => {
                // Σ-redex or neutral split returning A.
                // A bare pair only infers a non-dependent Σ, so the branch
                // may then use its components at type A alone.
                if self.rng.gen() {
                    let scrut = Term::ann(self.pair_ab(ctx, depth - 1), sigma_ab());
                    let inner = ctx.extend("x", ta()).extend("y", tb(Term::Var(0)));
                    let branch = self.term_a(&inner, depth - 1);
                    Term::split(ta(), branch, scrut)
                } else {
                    let scrut = Term::pair(self.term_a(ctx, depth - 1), self.term_a(ctx, depth - 1));
                    let inner = ctx.extend("x", ta()).extend("y", ta());
                    let branch = self.term_a(&inner, depth - 1);
                    Term::split(ta(), branch, scrut)
                }
            }
            _ => Term::ann(self.term_a(ctx, depth - 1), ta()),
        }
    }

    /// A term of type `B t`.
    fn term_b(&mut self, ctx: &Context, t: &Term, depth: u32) -> Term {
        if depth > 0 && self.rng.gen_bool(0.3) {
            let inner = ctx.extend("y", tb(t.clone()));
            let body = self.term_b(&inner, &lift(t, 0, 1), depth - 1);
            let arg = self.term_b(ctx, t, depth - 1);
            return Term::app(Term::lam("y", tb(t.clone()), body), arg);
        }
        let vars = self.vars_of(ctx, &tb(t.clone()));
        if !vars.is_empty() && self.rng.gen() {
            return vars[0].clone();
        }
        Term::app(Term::constant("f"), t.clone())
    }

    fn pair_ab(&mut self, ctx: &Context, depth: u32) -> Term {
        let x = self.term_a(ctx, depth);
        let y = self.term_b(ctx, &x, depth);
        Term::pair(x, y)
    }

    fn context(&mut self) -> Context {
        let mut ctx = Context::empty();
        for i in 0..self.rng.gen_range(0..3) {
            let ty = match self.rng.gen_range(0..3) {
                0 => ta(),
                1 => sigma_ab(),
                _ => {
                    let t = self.term_a(&ctx, 1);
                    tb(t)
                }
            };
            ctx.entries.push(Entry::new(&format!("v{i}"), ty));
        }
        ctx
    }
}

fn gen(seed: u64) -> Gen {
    Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    }
}

#[test]
fn checker_derivations_validate_and_conclude_the_judgement() {
    let sig = signature();
    for seed in 0..150 {
        let mut g = gen(seed);
        let ctx = g.context();
        let t = g.term_a(&ctx, 3);
        let pair = g.pair_ab(&ctx, 2);
        let judgements = [
            Judgement::TermForm {
                ctx: ctx.clone(),
                term: t.clone(),
                ty: ta(),
            },
            Judgement::TermForm {
                ctx: ctx.clone(),
                term: pair.clone(),
                ty: sigma_ab(),
            },
            Judgement::TermEq {
                ctx: ctx.clone(),
                lhs: t.clone(),
                rhs: normalize_term(&t).unwrap(),
                ty: ta(),
            },
            Judgement::TypeEq {
                ctx: ctx.clone(),
                lhs: tb(t.clone()),
                rhs: tb(normalize_term(&t).unwrap()),
            },
        ];
        for j in judgements {
            let checker = Checker::new(&sig);
            let d = checker
                .check_judgement(&j)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}\n{j:?}"));
            validate_derivation(&sig, &d).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert_eq!(d.conclusion, j, "seed {seed}");
        }
    }
}

#[test]
fn def_equal_is_an_equivalence_and_a_congruence() {
    for seed in 0..200 {
        let mut g = gen(seed);
        let ctx = g.context();
        let t = g.term_a(&ctx, 3);
        let u = g.term_a(&ctx, 3);
        let n = normalize_term(&t).unwrap();
        let wrapped = Term::app(Term::lam("z", ta(), Term::Var(0)), t.clone());
        assert!(def_equal(&t, &t).unwrap());
        assert!(def_equal(&t, &n).unwrap() && def_equal(&n, &t).unwrap());
        assert!(def_equal(&wrapped, &t).unwrap() && def_equal(&wrapped, &n).unwrap());
        assert_eq!(def_equal(&t, &u).unwrap(), def_equal(&u, &t).unwrap());
        // Congruence under application and pairing.
        let gt = Term::app(Term::constant("g"), t.clone());
        let gn = Term::app(Term::constant("g"), n.clone());
        assert!(def_equal(&gt, &gn).unwrap());
        assert!(def_equal(&Term::pair(t.clone(), u.clone()), &Term::pair(n.clone(), u.clone())).unwrap());
        // Normal forms are fixed points.
        assert_eq!(normalize_term(&n).unwrap(), n);
    }
}

#[test]
fn substitution_is_admissible() {
    let sig = signature();
    for seed in 0..150 {
        let mut g = gen(seed);
        let ctx = g.context();
        let a = g.term_a(&ctx, 2);
        let ext = ctx.extend("x", ta());
        let t = g.term_a(&ext, 3);
        let y = g.term_b(&ext, &Term::Var(0), 2);
        let checker = Checker::new(&sig);
        checker.check_term(&ext, &t, &ta()).unwrap();
        checker.check_term(&ext, &y, &tb(Term::Var(0))).unwrap();
        checker.check_term(&ctx, &a, &ta()).unwrap();
        checker
            .check_term(&ctx, &substitute(&t, &a, 0), &ta())
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        checker
            .check_term(&ctx, &substitute(&y, &a, 0), &tb(a.clone()))
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn mismatched_pairs_are_rejected() {
    let sig = signature();
    let checker = Checker::new(&sig);
    let bad = Term::pair(Term::constant("a"), Term::app(Term::constant("f"), Term::constant("a2")));
    assert!(checker.check_term(&Context::empty(), &bad, &sigma_ab()).is_err());
    let good = Term::pair(Term::constant("a"), Term::app(Term::constant("f"), Term::constant("a")));
    assert!(checker.check_term(&Context::empty(), &good, &sigma_ab()).is_ok());
}
