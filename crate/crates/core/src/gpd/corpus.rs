//! Seeded random groupoids and functors for the property checks.

use super::{enumerate_functors, groups, FinGroupoid, Functor};
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

/// Per-enumeration cap when picking a random functor.
const PICK_LIMIT: usize = 4096;

fn group_tables() -> Vec<Vec<Vec<usize>>> {
    vec![
        groups::cyclic(1),
        groups::cyclic(2),
        groups::cyclic(3),
        groups::cyclic(4),
        groups::klein(),
        groups::s3(),
    ]
}

/// A disjoint union of connected groupoids with at most `max_objects`
/// objects and `max_morphisms` morphisms, and at least one object.
pub fn groupoid(rng: &mut impl Rng, max_objects: usize, max_morphisms: usize) -> FinGroupoid {
    let tables = group_tables();
    let total_objects = rng.gen_range(1..=max_objects.max(1));
    let mut parts = Vec::new();
    let (mut objs, mut mors) = (0, 0);
    while objs < total_objects {
        let room = total_objects - objs;
        let k = rng.gen_range(1..=room);
        let fitting: Vec<&Vec<Vec<usize>>> = tables
            .iter()
            .filter(|t| mors + k * k * t.len() <= max_morphisms)
            .collect();
        if fitting.is_empty() {
            if mors + 1 > max_morphisms {
                break;
            }
            parts.push(FinGroupoid::connected("o", 1, &tables[0]));
            objs += 1;
            mors += 1;
            continue;
        }
        let t = fitting[rng.gen_range(0..fitting.len())];
        parts.push(FinGroupoid::connected("o", k, t));
        objs += k;
        mors += k * k * t.len();
    }
    FinGroupoid::disjoint_union(&parts)
}

/// A uniformly chosen functor among the first few enumerated.
pub fn functor(rng: &mut impl Rng, x: &Arc<FinGroupoid>, y: &Arc<FinGroupoid>) -> Option<Functor> {
    enumerate_functors(x, y, None, PICK_LIMIT).choose(rng).cloned()
}

/// A random functor between two random small groupoids.
pub fn random_functor(rng: &mut impl Rng, max_objects: usize, max_morphisms: usize) -> Functor {
    loop {
        let x = groupoid(rng, max_objects, max_morphisms).into_arc();
        let y = groupoid(rng, max_objects, max_morphisms).into_arc();
        if let Some(f) = functor(rng, &x, &y) {
            return f;
        }
    }
}

/// A fibration into `a` from a random small groupoid, if one is found.
pub fn fibration_over(
    rng: &mut impl Rng,
    a: &Arc<FinGroupoid>,
    max_objects: usize,
    max_morphisms: usize,
    tries: usize,
) -> Option<Functor> {
    for _ in 0..tries {
        let b = groupoid(rng, max_objects, max_morphisms).into_arc();
        let fibs: Vec<Functor> = enumerate_functors(&b, a, None, PICK_LIMIT)
            .into_iter()
            .filter(Functor::is_fibration)
            .collect();
        if let Some(f) = fibs.choose(rng) {
            return Some(f.clone());
        }
    }
    None
}
