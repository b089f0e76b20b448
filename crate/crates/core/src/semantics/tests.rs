use super::corpus::{self, fixture, signature};
use super::*;
use crate::gpd::{functor_to_json, groupoid_to_json, FinGroupoid};
use crate::kernel::Signature;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn a() -> Type {
    Type::base("A")
}

fn b(t: Term) -> Type {
    Type::family("B", vec![t])
}

/// A = {p, q} discrete, B p = {e0, e1}, B q = {e0, e1, e2}.
fn discrete_model() -> (Signature, ModelEnv) {
    let sig = signature();
    let ga = FinGroupoid::discrete(&["p", "q"]).into_arc();
    let fam = Family {
        base: ga.clone(),
        fibers: vec![
            FinGroupoid::discrete(&["e0", "e1"]).into_arc(),
            FinGroupoid::discrete(&["e0", "e1", "e2"]).into_arc(),
        ],
        transport: (0..2)
            .map(|k| {
                let g = if k == 0 { 2 } else { 3 };
                let fib = FinGroupoid::discrete(&["e0", "e1", "e2"][..g]).into_arc();
                Functor::identity(&fib)
            })
            .collect(),
    };
    let mut env = ModelEnv::new();
    env.bind_groupoid("A", ga);
    env.bind_family("B", "A", fam);
    env.bind_const("a0", ConstBinding::Index(0));
    env.bind_const("f", ConstBinding::Index(0));
    env.bind_const("g", ConstBinding::Index(1));
    (sig, env)
}

#[test]
fn empty_context_is_terminal() {
    let (sig, env) = discrete_model();
    let ip = Interp::new(&sig, &env);
    let sc = interp_context(&ip, &Context::empty()).unwrap();
    assert_eq!((sc.groupoid.obj_count(), sc.groupoid.mor_count()), (1, 1));
    assert!(sc.tower.is_empty());
}

#[test]
fn two_variable_context() {
    let (sig, env) = discrete_model();
    let ip = Interp::new(&sig, &env);
    let ctx = Context::empty().extend("x", a()).extend("y", a());
    let sc = interp_context(&ip, &ctx).unwrap();
    assert_eq!(sc.groupoid.obj_count(), 4);
    assert_eq!(sc.tower.len(), 2);
}

#[test]
fn sigma_and_pi_sizes() {
    let (sig, env) = discrete_model();
    let ip = Interp::new(&sig, &env);
    let s = interp_type(&ip, &Context::empty(), &Type::sigma("x", a(), b(Term::var(0)))).unwrap();
    assert_eq!(s.slice.total.obj_count(), 5);
    let p = interp_type(&ip, &Context::empty(), &Type::pi("x", a(), b(Term::var(0)))).unwrap();
    assert_eq!(p.slice.total.obj_count(), 6);
}

#[test]
fn identity_lambda_is_identity_section() {
    let (sig, env) = discrete_model();
    let ip = Interp::new(&sig, &env);
    let ty = Type::pi("x", a(), a());
    let t = interp_term(&ip, &Context::empty(), &Term::lam("x", a(), Term::var(0)), &ty).unwrap();
    let v = t.value(0);
    let g = ip.ty(&Context::empty(), &ty, &[]).unwrap();
    assert!(g.object_index(v).is_some());
    // Applying the function to each point gives the point back.
    for x in ["p", "q"] {
        let arg = Term::ann(Term::lam("x", a(), Term::var(0)), ty.clone());
        let cst = match x {
            "p" => Term::constant("a0"),
            _ => Term::app(Term::constant("g"), Term::constant("a0")),
        };
        let val = ip.tm(&Context::empty(), &Term::app(arg, cst.clone()), &[]).unwrap();
        assert_eq!(val, ip.tm(&Context::empty(), &cst, &[]).unwrap());
    }
}

#[test]
fn sigma_pairs_over_variable() {
    let (sig, env) = discrete_model();
    let ip = Interp::new(&sig, &env);
    let ctx = Context::empty().extend("u", a());
    let t = Term::ann(Term::pair(Term::var(0), Term::app(Term::constant("f"), Term::var(0))), Type::sigma("x", a(), b(Term::var(0))));
    let st = interp_term(&ip, &ctx, &t, &Type::sigma("x", a(), b(Term::var(0)))).unwrap();
    assert_eq!(st.section.dom.obj_count(), 2);
}

#[test]
fn nat_is_rejected() {
    let mut sig = Signature::new();
    sig.declare_base("Nat", Context::empty()).unwrap();
    let env = ModelEnv::new();
    let ip = Interp::new(&sig, &env);
    let e = interp_type(&ip, &Context::empty(), &Type::base("Nat")).unwrap_err();
    assert!(matches!(e, SemError::Unsupported(_)), "{e}");
    let e = interp_type(&ip, &Context::empty(), &Type::base("Nat")).unwrap_err().to_string();
    assert!(e.contains("finite"));
}

#[test]
fn missing_binding_is_reported() {
    let mut sig = Signature::new();
    sig.declare_base("C", Context::empty()).unwrap();
    let env = ModelEnv::new();
    let ip = Interp::new(&sig, &env);
    assert!(matches!(
        interp_type(&ip, &Context::empty(), &Type::base("C")),
        Err(SemError::MissingBaseBinding(_))
    ));
}

#[test]
fn json_environment() {
    let ga = FinGroupoid::discrete(&["p", "q"]).into_arc();
    let gb = FinGroupoid::discrete(&["x", "y", "z"]).into_arc();
    let p = Functor::new(gb, ga.clone(), vec![0, 1, 1], vec![0, 1, 1]).unwrap();
    let text = format!(
        r#"{{"bases": {{"A": {}, "B": {{"over": "A", "fibration": {}}}}}, "consts": {{"a0": "q", "f": 0, "g": 1}}}}"#,
        groupoid_to_json(&ga),
        functor_to_json(&p)
    );
    let env = match ModelEnv::from_json(&text, None) {
        Ok(e) => e,
        Err(e) => panic!("{e}"),
    };
    let sig = signature();
    let ip = Interp::new(&sig, &env);
    let p = interp_type(&ip, &Context::empty(), &Type::pi("x", a(), b(Term::var(0)))).unwrap();
    assert_eq!(p.slice.total.obj_count(), 2);
    assert_eq!(ip.tm(&Context::empty(), &Term::constant("a0"), &[]).unwrap().to_string(), "q");
}

#[test]
fn type_equation_holds() {
    let (sig, env) = discrete_model();
    let ip = Interp::new(&sig, &env);
    let lhs = b(Term::app(Term::ann(Term::lam("x", a(), Term::var(0)), Type::pi("x", a(), a())), Term::constant("a0")));
    let j = Judgement::TypeEq {
        ctx: Context::empty(),
        lhs,
        rhs: b(Term::constant("a0")),
    };
    match interp_judgement(&ip, &j).unwrap() {
        SemanticValue::Equal(w) => assert!(w.strict),
        other => panic!("{other:?}"),
    }
}

#[test]
fn rule_instances_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let fx = fixture(&mut rng, 2);
        let ip = Interp::new(&fx.sig, &fx.env);
        let mut insts: Vec<RuleInstance> = Vec::new();
        for _ in 0..4 {
            insts.push(corpus::pi_comp_instance(&mut rng, &fx));
            insts.push(corpus::sigma_comp_instance(&mut rng, &fx));
        }
        insts.extend(corpus::formation_instances());
        insts.extend(corpus::structural_instances(&mut rng));
        for inst in &insts {
            let r = verify_rule_soundness(&ip, inst);
            assert!(r.passed, "{r}");
        }
    }
}

