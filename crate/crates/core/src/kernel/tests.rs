use super::*;
use crate::syntax::{parse_script, Judgement, Statement};

const PRELUDE: &str = "
base A;
base B (x : A);
const a : A;
const f : Pi (x : A) . B x;
";

fn run(body: &str) -> ScriptReport {
    let script = parse_script(&format!("{PRELUDE}{body}")).expect("parses");
    run_script(&script, true)
}

fn single(body: &str) -> Result<Rc<Derivation>, KernelError> {
    let mut r = run(body);
    assert!(r.declaration_error.is_none(), "{:?}", r.declaration_error);
    assert_eq!(r.outcomes.len(), 1);
    r.outcomes.remove(0).result
}

use std::rc::Rc;

#[test]
fn every_rule_is_exercised() {
    let r = run("
check x : A |- x : A;
check x : A, y : A |- x : A;
check |- B a type;
check |- lam (x : A) . f x : Pi (x : A) . B x;
check |- (lam (x : A) . f x) a = f a : B a;
check |- pair(a, f a) : Sigma (x : A) . B x;
check p : Sigma (x : A) . B x |- split[z. A](x y. x, p) : A;
check |- split[z. A](x y. x, (pair(a, f a) : Sigma (x : A) . B x)) = a : A;
check y : A, x : A |- x : A by exch 0;
check |- ctx (x : A, y : B x);
check |- ctx (x : A) = (y : A);
check |- Pi (x : A) . B ((lam (y : A) . y) x) = Pi (x : A) . B x type;
check |- f ((lam (y : A) . y) a) : B a;
check |- (a : A) : A;
");
    let mut used = std::collections::BTreeSet::new();
    for o in &r.outcomes {
        let d = o.result.as_ref().unwrap_or_else(|e| panic!("{}: {e}", o.text));
        used.extend(d.rules_used());
    }
    for rule in [
        "Vble", "Subst", "Weak", "Exch", "TyRefl", "TySym", "TyTrans", "TmRefl", "TmSym", "TmTrans",
        "Pi-form", "Pi-intro", "Pi-elim", "Pi-comp", "Sigma-form", "Sigma-intro", "Sigma-elim", "Sigma-comp",
        "Base-form", "Const", "Conv", "Cong", "Ann", "Ann-erase", "Ctx-empty", "Ctx-ext", "CtxEq-empty",
        "CtxEq-ext",
    ] {
        assert!(used.contains(rule), "rule {rule} unused: {used:?}");
    }
}

#[test]
fn derivation_conclusion_is_the_judgement() {
    let script = parse_script(&format!("{PRELUDE}check |- (lam (x : A) . f x) a = f a : B a;")).unwrap();
    let r = run_script(&script, true);
    let Statement::Check { judgement, .. } = &script.statements.last().unwrap().item else {
        panic!()
    };
    assert_eq!(r.outcomes[0].result.as_ref().unwrap().conclusion, *judgement);
}

#[test]
fn rejects_ill_typed() {
    assert!(matches!(single("check |- f f : B a;"), Err(KernelError::TypeMismatch { .. })));
    assert!(matches!(single("check |- a a : A;"), Err(KernelError::NotAFunction(_))));
    assert!(single("check |- pair(a, a) : A;").is_err());
    assert!(matches!(single("check |- B type;"), Err(KernelError::ArityMismatch { .. })));
    assert!(matches!(
        single("check |- f a = a : B a;"),
        Err(KernelError::TypeMismatch { .. })
    ));
}

#[test]
fn no_eta_equality() {
    assert!(matches!(
        single("check |- lam (x : A) . f x = f : Pi (x : A) . B x;"),
        Err(KernelError::NotDefEqual { .. })
    ));
}

#[test]
fn exchange_requires_independence() {
    assert!(matches!(
        single("check x : A, y : B x |- x : A by exch 0;"),
        Err(KernelError::ExchDependency { position: 0 })
    ));
    assert!(single("check x : A, y : A, z : B y |- z : B y by exch 0;").is_ok());
}

#[test]
fn context_errors_name_the_entry() {
    let sig = Signature::with_bases(&["A"]);
    let ctx = Context::from_entries(vec![
        crate::syntax::Entry::new("x", Type::base("A")),
        crate::syntax::Entry::new("y", Type::family("A", vec![Term::Var(0)])),
    ]);
    match Checker::new(&sig).check_context(&ctx) {
        Err(KernelError::IllFormedContext { entry: 1, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn tampered_derivations_fail_validation() {
    let d = single("check |- (lam (x : A) . f x) a = f a : B a;").unwrap();
    let sig = run("").signature;
    validate_derivation(&sig, &d).unwrap();
    // Change the conclusion.
    let mut bad = (*d).clone();
    if let Judgement::TermEq { rhs, .. } = &mut bad.conclusion {
        *rhs = Term::constant("a");
    }
    assert!(validate_derivation(&sig, &bad).is_err());
    // Drop a premise.
    let mut bad = (*d).clone();
    bad.premises.pop();
    assert!(validate_derivation(&sig, &bad).is_err());
    // Relabel the rule.
    let mut bad = (*d).clone();
    bad.rule = Rule::TmSym;
    assert!(validate_derivation(&sig, &bad).is_err());
}

#[test]
fn sigma_comp_with_dependent_branch() {
    let d = single(
        "check |- split[z. Sigma (u : A) . B u](x y. pair(x, y), (pair(a, f a) : Sigma (u : A) . B u)) \
         = pair(a, f a) : Sigma (u : A) . B u;",
    );
    assert!(d.is_ok(), "{d:?}");
}

#[test]
fn split_motive_depends_on_scrutinee() {
    let d = single(
        "const g : Pi (p : Sigma (x : A) . B x) . A;
check p : Sigma (x : A) . B x |- split[z. B (g z)](x y. f (g pair(x, y)), p) : B (g p);",
    );
    assert!(d.is_ok(), "{d:?}");
}

#[test]
fn def_equal_is_an_equivalence_on_samples() {
    let a = Type::base("A");
    let id = Term::lam("x", a.clone(), Term::Var(0));
    let c = Term::constant("c");
    let t1 = Term::app(id.clone(), c.clone());
    let t2 = Term::app(id.clone(), Term::app(id, c.clone()));
    assert!(def_equal(&t1, &t1).unwrap());
    assert!(def_equal(&t1, &t2).unwrap() && def_equal(&t2, &t1).unwrap());
    assert!(def_equal(&t2, &c).unwrap() && def_equal(&t1, &c).unwrap());
    assert!(!def_equal(&c, &Term::constant("d")).unwrap());
}

#[test]
fn duplicate_and_open_declarations() {
    let mut sig = Signature::with_bases(&["A"]);
    assert!(matches!(
        sig.declare_base("A", Context::empty()),
        Err(KernelError::Duplicate(_))
    ));
    assert!(matches!(
        sig.declare_const("c", Type::family("A", vec![Term::Var(0)])),
        Err(KernelError::NotClosed(_))
    ));
}
