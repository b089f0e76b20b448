use super::*;
use crate::gpd::{FinGroupoid, Functor};
use std::sync::Arc;

fn minimal() -> FinSetEngine {
    FinSetEngine {
        structure: FinSetStructure::Minimal,
    }
}

#[test]
fn minimal_classification_examples() {
    assert_eq!(classify_finset_minimal(&FinSetMap::new(1, vec![])), (false, true, true));
    assert_eq!(classify_finset_minimal(&FinSetMap::new(1, vec![0, 0])), (true, false, true));
    assert_eq!(classify_finset_minimal(&FinSetMap::new(0, vec![])), (true, true, true));
}

#[test]
fn finset_lifting_examples() {
    let e = minimal();
    let f = FinSetMap::new(2, vec![0]);
    let g = FinSetMap::new(1, vec![0, 0]);
    let sq = squares(&e, &f, &g, 100);
    assert!(!sq.is_empty());
    for (u, v) in sq {
        assert!(has_lifting(&e, &f, &g, &u, &v).unwrap().is_some());
    }
    let id = e.identity(&2);
    let fillers: Vec<_> = e
        .hom_over(&id, &id, 100)
        .into_iter()
        .filter(|j| e.compose(j, &id) == id)
        .collect();
    assert_eq!(fillers.len(), 1);
    // A non-commuting square is an error.
    assert!(has_lifting(&e, &f, &id, &FinSetMap::new(2, vec![1]), &id).is_err());
}

#[test]
fn gpd_square_without_filler() {
    let e = GpdEngine;
    let t = FinGroupoid::terminal().into_arc();
    let i = FinGroupoid::interval().into_arc();
    let endpoint = Functor::new(t.clone(), i.clone(), vec![0], vec![0]).unwrap();
    // p: the point into I is not a fibration; the square (id, id_I) has no
    // filler j: I → • with j ∘ endpoint = id and endpoint ∘ j = id_I.
    let u = e.identity(&t);
    let v = e.identity(&i);
    assert_eq!(has_lifting(&e, &endpoint, &endpoint, &u, &v).unwrap(), None);
}

#[test]
fn swapped_mono_epi_classes_fail() {
    let e = minimal();
    let corpus = Corpus::exhaustive(&e, (0..=2).collect());
    let epi = Classifier::new("epi", Role::Cofibration, |m: &FinSetMap| m.is_surjective());
    let mono = Classifier::new("mono", Role::Fibration, |m: &FinSetMap| m.is_injective());
    let r = check_wfs(&e, "swapped", &|m| e.factor_cof_tfib(m), &epi, &mono, &corpus, 1000);
    assert!(!r[0].passed());
    let mono = Classifier::new("mono", Role::Cofibration, |m: &FinSetMap| m.is_injective());
    let epi = Classifier::new("epi", Role::Fibration, |m: &FinSetMap| m.is_surjective());
    let corpus = Corpus::exhaustive(&e, (0..=3).collect());
    for c in check_wfs(&e, "mono-epi", &|m| e.factor_cof_tfib(m), &mono, &epi, &corpus, usize::MAX) {
        assert!(c.passed(), "{c}");
    }
}

#[test]
fn finset_engines_pass() {
    for (name, size) in [("finset-minimal", 4), ("finset-discrete", 3)] {
        let r = run_engine(name, 0, size).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn broken_weak_equivalences_fail_right_properness() {
    let e = GpdEngine;
    let corpus = Corpus::generate(&e, 0, 3, 4, 2);
    let even = Classifier::new("even", Role::WeakEquivalence, |f: &Functor| f.dom.obj_count().is_multiple_of(2));
    let fib = Classifier::new("F", Role::Fibration, |f: &Functor| f.is_fibration());
    let r = check_right_proper(&e, &even, &fib, &corpus);
    assert!(!r.passed());
    assert!(r.failures[0].contains("pulled_back"));
}

#[test]
fn fibrancy() {
    let e = GpdEngine;
    assert!(is_fibrant(&e, &Arc::new(FinGroupoid::interval())));
    let f = minimal();
    assert!(is_cofibrant(&f, &0));
    assert!(is_fibrant(&f, &3));
}

#[test]
fn gpd_engine_small_run() {
    let e = GpdEngine;
    let corpus = Corpus::generate(&e, 1, 2, 3, 1);
    for c in run_suite(&e, &corpus, 60, 6) {
        assert!(c.passed(), "{c}");
    }
}

#[test]
fn reports_are_deterministic() {
    let a = run_engine("finset-discrete", 3, 2).unwrap().to_string();
    let b = run_engine("finset-discrete", 3, 2).unwrap().to_string();
    assert_eq!(a, b);
    assert!(run_engine("nope", 0, 1).is_none());
}
