use super::corpus::{self, discrete_instance};
use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn standard_simplex_counts() {
    let d0 = TruncatedSSet::standard_simplex(0, 2).unwrap();
    assert_eq!(d0.counts(), vec![1, 1, 1]);
    let d1 = TruncatedSSet::standard_simplex(1, 1).unwrap();
    assert_eq!(d1.count(1), 3);
    assert_eq!((0..3).filter(|&x| d1.is_degenerate(1, x)).count(), 2);
    for n in 0..=3 {
        let d = TruncatedSSet::standard_simplex(n, 3).unwrap();
        for k in 0..=3 {
            assert_eq!(d.count(k), monotone_maps(k, n).len());
            assert_eq!(d.count(k), binomial(n + k + 1, k + 1), "Δ^{n} level {k}");
        }
    }
    assert_eq!(
        TruncatedSSet::standard_simplex(3, 2),
        Err(SSetError::TruncationTooLow { n: 3, trunc: 2 })
    );
}

#[test]
fn act_agrees_with_tables() {
    let d = TruncatedSSet::standard_simplex(2, 3).unwrap();
    for k in 0..=3 {
        for x in 0..d.count(k) {
            for th in monotone_maps(1, k) {
                let expect: Vec<usize> = {
                    let v: Vec<usize> = d.simplex(k, x).to_string().bytes().map(|c| (c - b'0') as usize).collect();
                    th.iter().map(|&i| v[i]).collect()
                };
                let got = d.act(k, x, &th);
                let lab: String = expect.iter().map(|v| v.to_string()).collect();
                assert_eq!(d.simplex(1, got).to_string(), lab);
            }
        }
    }
}

#[test]
fn broken_identity_is_caught() {
    let d = TruncatedSSet::standard_simplex(1, 1).unwrap();
    let mut faces = d.d.clone();
    // d0 of the degenerate edge on vertex 0 now points at vertex 1.
    faces[1][0][0] = 1;
    let r = TruncatedSSet::new(1, d.simplices.clone(), faces, d.s.clone());
    assert!(matches!(r, Err(SSetError::Identity(_))));
}

#[test]
fn graphs_and_nerves_are_simplicial() {
    let g = corpus::Graph {
        vertices: vec!["u".into(), "v".into()],
        edges: vec![("e".into(), 0, 1), ("l".into(), 1, 1)],
    };
    let x = g.sset(3);
    assert_eq!(x.nondegenerate_count(), 4);
    assert_eq!(x.dimension(), 1);
    let grp = crate::gpd::FinGroupoid::connected("o", 2, &crate::gpd::groups::cyclic(2));
    let nv = TruncatedSSet::nerve(&grp, 3).unwrap();
    assert_eq!(nv.count(0), 2);
    assert_eq!(nv.count(1), grp.mor_count());
    // A nerve of a groupoid is Kan.
    assert!(is_fibration_truncated(&SimplicialMap::to_point(&nv.into_arc()), 3));
}

#[test]
fn pullback_examples() {
    let pt = TruncatedSSet::point(2).into_arc();
    let a = SimplicialMap::identity(&pt);
    let pb = pullback_sset(&a, &a).unwrap();
    assert_eq!(pb.total.counts(), vec![1, 1, 1]);
    let g = corpus::Graph {
        vertices: vec!["u".into(), "v".into()],
        edges: vec![("e".into(), 0, 1)],
    };
    let x = g.sset(2);
    let id = SimplicialMap::identity(&x);
    let pb = pullback_sset(&id, &id).unwrap();
    assert_eq!(pb.total.counts(), x.counts());
    // Brute-force pair counts.
    let to = SimplicialMap::to_point(&x);
    let pb = pullback_sset(&to, &to).unwrap();
    for k in 0..=2 {
        assert_eq!(pb.total.count(k), x.count(k) * x.count(k));
    }
    let other = SimplicialMap::identity(&TruncatedSSet::point(3).into_arc());
    assert!(matches!(pullback_sset(&to, &other), Err(SSetError::LevelMismatch(..))));
}

#[test]
fn endpoint_inclusion_is_not_a_fibration() {
    let d1 = TruncatedSSet::standard_simplex(1, 2).unwrap().into_arc();
    let v = SimplicialMap::classifying(&d1, 0, 0).unwrap();
    assert!(!is_fibration_truncated(&v, 2));
    assert!(is_fibration_truncated(&SimplicialMap::identity(&d1), 2));
    // Δ^1 is not Kan.
    assert!(!is_fibration_truncated(&SimplicialMap::to_point(&d1), 2));
}

#[test]
fn discrete_fibers_give_six() {
    let inst = discrete_instance(3);
    let pi = pi_f_formula(&inst.f, &inst.p).unwrap();
    assert_eq!(pi.total.count(0), 6);
    let r = verify_sset_adjunction(&inst.f, &inst.p, &inst.q).unwrap();
    assert_eq!((r.lhs, r.rhs), (6, 6));
    assert!(r.holds());
}

#[test]
fn discrete_fibers_match_groupoid_pi() {
    use crate::gpd::{choose_cleavage, pi_f, FinGroupoid, Functor, SliceObject};
    let a = FinGroupoid::terminal().into_arc();
    let b = FinGroupoid::discrete(&["b0", "b1"]).into_arc();
    let x = FinGroupoid::discrete(&["x0", "x1", "y0", "y1", "y2"]).into_arc();
    let f = Functor::new(b.clone(), a.clone(), vec![0, 0], vec![0, 0]).unwrap();
    let p = Functor::new(x.clone(), b.clone(), vec![0, 0, 1, 1, 1], vec![0, 0, 1, 1, 1]).unwrap();
    let gp = pi_f(&f, &SliceObject::new(p), &choose_cleavage(&f).unwrap()).unwrap();
    let nerve = TruncatedSSet::nerve(&gp.slice.total, 3).unwrap();
    let inst = discrete_instance(3);
    let pi = pi_f_formula(&inst.f, &inst.p).unwrap();
    assert_eq!(pi.total.counts(), nerve.counts());
}

#[test]
fn identity_base_gives_back_x() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ag = corpus::random_graph(&mut rng, "a", 3);
    let a = ag.sset(3);
    let (_, x, p) = corpus::random_cover(&mut rng, &ag, &a, 4);
    let pi = pi_f_formula(&SimplicialMap::identity(&a), &p).unwrap();
    assert_eq!(pi.total.counts(), x.counts());
}

#[test]
fn random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
        let inst = corpus::instance(&mut rng);
        assert!(is_fibration_truncated(&inst.f, 3));
        assert!(is_fibration_truncated(&inst.p, 3));
        let r = verify_sset_adjunction(&inst.f, &inst.p, &inst.q).unwrap();
        assert!(r.holds(), "{r:?}");
    }
}

#[test]
fn json_round_trip() {
    let inst = discrete_instance(2);
    let text = map_to_json(&inst.p);
    let p = map_from_json(&text, None).unwrap();
    assert_eq!(p.dom.counts(), inst.p.dom.counts());
    let d = TruncatedSSet::standard_simplex(2, 3).unwrap();
    let back = sset_from_json(&sset_to_json(&d)).unwrap();
    assert_eq!(back, d);
}
