use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arc(g: FinGroupoid) -> Arc<FinGroupoid> {
    g.into_arc()
}

fn endpoint() -> Functor {
    let t = arc(FinGroupoid::terminal());
    let i = arc(FinGroupoid::interval());
    Functor::new(t, i, vec![0], vec![0]).unwrap()
}

#[test]
fn examples_validate() {
    for g in [
        FinGroupoid::terminal(),
        FinGroupoid::interval(),
        FinGroupoid::connected("c", 2, &groups::s3()),
        FinGroupoid::connected("k", 1, &groups::klein()),
        FinGroupoid::disjoint_union(&[FinGroupoid::interval(), FinGroupoid::discrete(&["p", "q"])]),
    ] {
        g.validate().unwrap();
    }
}

#[test]
fn endpoint_inclusion() {
    let e = endpoint();
    assert!(!e.is_fibration());
    assert!(e.is_injective_equivalence());
}

#[test]
fn codiagonal_is_not_injective() {
    let i = FinGroupoid::interval();
    let ii = arc(FinGroupoid::disjoint_union(&[i.clone(), i.clone()]));
    let i = arc(i);
    let n = i.mor_count();
    let f = Functor::new(ii.clone(), i, vec![0, 1, 0, 1], (0..2 * n).map(|m| m % n).collect()).unwrap();
    assert!(!f.is_injective_equivalence());
    assert!(f.is_fibration());
}

#[test]
fn functors_to_terminal_are_fibrations() {
    let t = arc(FinGroupoid::terminal());
    let g = arc(FinGroupoid::connected("c", 2, &groups::cyclic(3)));
    assert!(Functor::to_terminal(&g, &t).is_fibration());
    assert!(Functor::identity(&g).is_fibration());
}

#[test]
fn enumeration_matches_brute_force() {
    // Functors Z2 → Z4 are homomorphisms: 2 of them. Interval to itself: 4.
    let z2 = arc(FinGroupoid::connected("a", 1, &groups::cyclic(2)));
    let z4 = arc(FinGroupoid::connected("b", 1, &groups::cyclic(4)));
    assert_eq!(enumerate_functors(&z2, &z4, None, 100).len(), 2);
    let i = arc(FinGroupoid::interval());
    assert_eq!(enumerate_functors(&i, &i, None, 100).len(), 4);
    let s3 = arc(FinGroupoid::connected("s", 1, &groups::s3()));
    // Homomorphisms S3 → S3: 1 trivial + 3 onto Z2 images + 6 automorphisms.
    assert_eq!(enumerate_functors(&s3, &s3, None, 100).len(), 10);
    for f in enumerate_functors(&s3, &s3, None, 100) {
        f.validate().unwrap();
    }
}

#[test]
fn factorization_of_endpoint() {
    let (i, p) = factorize(&endpoint());
    assert_eq!(i.cod.obj_count(), 2);
    assert!(i.is_injective_equivalence() && p.is_fibration());
    assert_eq!(p.compose(&i).unwrap(), endpoint());
}

#[test]
fn factorization_on_random_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let f = corpus::random_functor(&mut rng, 3, 12);
        let (i, p) = factorize(&f);
        i.cod.validate().unwrap();
        i.validate().unwrap();
        p.validate().unwrap();
        assert!(i.is_injective_equivalence() && p.is_fibration());
        assert_eq!(p.compose(&i).unwrap(), f);
    }
}

#[test]
fn pullback_counts() {
    let t = arc(FinGroupoid::terminal());
    let pt = Functor::identity(&t);
    assert_eq!(pullback(&pt, &pt).unwrap().total.obj_count(), 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let a = arc(corpus::groupoid(&mut rng, 2, 8));
        let x = arc(corpus::groupoid(&mut rng, 2, 8));
        let y = arc(corpus::groupoid(&mut rng, 2, 8));
        let (Some(f), Some(g)) = (corpus::functor(&mut rng, &x, &a), corpus::functor(&mut rng, &y, &a)) else {
            continue;
        };
        let pb = pullback(&f, &g).unwrap();
        pb.total.validate().unwrap();
        let direct = (0..x.obj_count())
            .flat_map(|u| (0..y.obj_count()).map(move |v| (u, v)))
            .filter(|&(u, v)| f.obj[u] == g.obj[v])
            .count();
        assert_eq!(pb.total.obj_count(), direct);
        assert_eq!(f.compose(&pb.p1).unwrap(), g.compose(&pb.p2).unwrap());
    }
}

fn discrete_example() -> (Functor, SliceObject) {
    let a = arc(FinGroupoid::terminal());
    let b = arc(FinGroupoid::discrete(&["b1", "b2"]));
    let e = arc(FinGroupoid::discrete(&["x1", "x2", "y1", "y2", "y3"]));
    let f = Functor::to_terminal(&b, &a);
    let proj = Functor::new(e, b, vec![0, 0, 1, 1, 1], vec![0, 0, 1, 1, 1]).unwrap();
    (f, SliceObject::new(proj))
}

#[test]
fn discrete_pi_has_six_objects() {
    let (f, x) = discrete_example();
    let cl = choose_cleavage(&f).unwrap();
    let pi = pi_f(&f, &x, &cl).unwrap();
    assert_eq!(pi.slice.total.obj_count(), 6);
    let y = SliceObject::terminal(&f.cod);
    let check = verify_pi_adjunction(&pi, &y, 4).unwrap();
    assert_eq!((check.left, check.right), (6, 6));
    assert!(check.holds());
}

#[test]
fn pi_along_identity_is_isomorphic() {
    let g = arc(FinGroupoid::connected("c", 2, &groups::cyclic(2)));
    let b = arc(FinGroupoid::disjoint_union(&[
        FinGroupoid::connected("c", 2, &groups::cyclic(2)),
        FinGroupoid::terminal(),
    ]));
    let id = Functor::identity(&g);
    let any = enumerate_functors(&b, &g, None, 10).pop().unwrap();
    let x = SliceObject::new(factorize(&any).1);
    let pi = pi_f(&id, &x, &choose_cleavage(&id).unwrap()).unwrap();
    pi.slice.total.validate().unwrap();
    assert!(find_slice_iso(&pi.slice, &x).is_some());
}

#[test]
fn pi_adjunction_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 15 {
        let a = arc(corpus::groupoid(&mut rng, 2, 6));
        let Some(f) = corpus::fibration_over(&mut rng, &a, 2, 6, 5) else { continue };
        let Some(p) = corpus::fibration_over(&mut rng, &f.dom, 2, 6, 5) else { continue };
        let x = SliceObject::new(p);
        let cl = choose_cleavage(&f).unwrap();
        let pi = pi_f(&f, &x, &cl).unwrap();
        pi.slice.total.validate().unwrap();
        assert!(pi.slice.proj.is_fibration());
        let yt = arc(corpus::groupoid(&mut rng, 2, 6));
        let Some(q) = corpus::functor(&mut rng, &yt, &a) else { continue };
        let y = SliceObject::new(q);
        let check = verify_pi_adjunction(&pi, &y, 3).unwrap();
        assert!(check.holds(), "{check:?}");
        // Cleavage independence.
        let cl2 = Cleavage::build(&f, |c| *c.iter().max_by_key(|&&m| f.dom.morphism(m)).unwrap()).unwrap();
        let pi2 = pi_f(&f, &x, &cl2).unwrap();
        assert!(find_slice_iso(&pi.slice, &pi2.slice).is_some());
        done += 1;
    }
}

#[test]
fn sigma_adjunction_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 20 {
        let a = arc(corpus::groupoid(&mut rng, 2, 6));
        let b = arc(corpus::groupoid(&mut rng, 3, 8));
        let Some(f) = corpus::functor(&mut rng, &b, &a) else { continue };
        let (xt, yt) = (arc(corpus::groupoid(&mut rng, 3, 8)), arc(corpus::groupoid(&mut rng, 3, 8)));
        let Some(xp) = corpus::functor(&mut rng, &xt, &b) else { continue };
        let Some(yp) = corpus::functor(&mut rng, &yt, &a) else { continue };
        let check = verify_sigma_adjunction(&f, &SliceObject::new(xp), &SliceObject::new(yp)).unwrap();
        assert!(check.holds(), "{check:?}");
        done += 1;
    }
}

#[test]
fn cleavage_of_product_projection() {
    let a = FinGroupoid::interval();
    // A × F as a disjoint union of two copies of A.
    let prod = arc(FinGroupoid::disjoint_union(&[a.clone(), a.clone()]));
    let a = arc(a);
    let n = a.mor_count();
    let f = Functor::new(prod.clone(), a.clone(), vec![0, 1, 0, 1], (0..2 * n).map(|m| m % n).collect()).unwrap();
    let cl = choose_cleavage(&f).unwrap();
    assert!(cl.check(&f));
    for x in 0..prod.obj_count() {
        for &alpha in a.out_of(f.obj[x]) {
            let l = cl.lift(x, alpha);
            // The lift stays in the copy of x.
            assert_eq!(l / n, x / 2);
        }
    }
    assert!(choose_cleavage(&endpoint()).is_err());
}

#[test]
fn json_round_trip() {
    let g = FinGroupoid::connected("c", 2, &groups::cyclic(2));
    let back = groupoid_from_json(&groupoid_to_json(&g)).unwrap();
    assert_eq!(back.obj_count(), 2);
    assert_eq!(back.mor_count(), 8);
    let f = endpoint();
    let back = functor_from_json(&functor_to_json(&f), None).unwrap();
    assert_eq!(back.obj, f.obj);
    assert!(groupoid_from_json(r#"{"objects":["a"],"morphisms":[],"compose":[],"identities":{},"inverses":{}}"#).is_err());
}

#[test]
fn isomorphism_search_scales() {
    // 16 objects with a Z4 vertex group: 256 morphisms per component.
    let a = arc(FinGroupoid::connected("a", 16, &groups::cyclic(4)));
    let b = arc(FinGroupoid::connected("b", 16, &groups::cyclic(4)));
    let iso = find_isomorphism(&a, &b, None).unwrap();
    iso.validate().unwrap();
    assert!(iso.is_isomorphism());
    // Same counts, different vertex groups.
    let c = arc(FinGroupoid::connected("c", 8, &groups::cyclic(2)));
    let d = arc(FinGroupoid::disjoint_union(&[
        FinGroupoid::connected("d", 4, &groups::cyclic(2)),
        FinGroupoid::connected("e", 4, &groups::cyclic(2)),
    ]));
    assert_eq!(c.obj_count(), d.obj_count());
    assert!(find_isomorphism(&c, &d, None).is_none());
    let s = arc(FinGroupoid::connected("s", 2, &groups::s3()));
    let z = arc(FinGroupoid::connected("z", 2, &groups::cyclic(6)));
    assert!(find_isomorphism(&s, &z, None).is_none());
}

#[test]
fn extensions_respect_the_fixed_part() {
    let t = arc(FinGroupoid::terminal());
    let i = arc(FinGroupoid::interval());
    let g = arc(FinGroupoid::connected("g", 3, &groups::cyclic(2)));
    let along = endpoint();
    for u in enumerate_functors(&t, &g, None, 100) {
        let fixed = Extending::new(&along, &u).unwrap();
        let all = enumerate_extensions(&i, &g, None, &fixed, 100);
        // The free endpoint goes to any of 3 objects, along any of 2 arrows.
        assert_eq!(all.len(), 6);
        for h in all {
            assert_eq!(h.compose(&along).unwrap(), u);
        }
    }
    // Not injective on objects.
    let to_t = Functor::new(i.clone(), t.clone(), vec![0, 0], vec![0; i.mor_count()]).unwrap();
    let u = enumerate_functors(&i, &t, None, 1).pop().unwrap();
    assert!(Extending::new(&to_t, &u).is_none());
}
