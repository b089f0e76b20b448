use super::functor::same;
use super::{FinGroupoid, Functor, GpdError};
use crate::Label;
use std::collections::HashMap;
use std::sync::Arc;

/// A pullback square: `total` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub total: Arc<FinGroupoid>,
    pub p1: Functor,
    pub p2: Functor,
}

/// Canonical pullback of `f: X → A` and `g: Y → A`. Objects are the pairs
/// `(x, y)` with `f x = g y` in index order, morphisms likewise.
pub fn pullback(f: &Functor, g: &Functor) -> Result<Pullback, GpdError> {
    if !same(&f.cod, &g.cod) {
        return Err(GpdError::DomainMismatch("pullback legs have different codomains".into()));
    }
    let (x, y) = (&f.dom, &g.dom);
    let mut objects = Vec::new();
    let mut obj_at = HashMap::new();
    let mut p1o = Vec::new();
    let mut p2o = Vec::new();
    for a in 0..x.obj_count() {
        for b in 0..y.obj_count() {
            if f.obj[a] == g.obj[b] {
                obj_at.insert((a, b), objects.len());
                objects.push(Label::pair(x.object(a).clone(), y.object(b).clone()));
                p1o.push(a);
                p2o.push(b);
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_at = HashMap::new();
    let mut p1m = Vec::new();
    let mut p2m = Vec::new();
    for u in 0..x.mor_count() {
        for v in 0..y.mor_count() {
            if f.mor[u] == g.mor[v] {
                mor_at.insert((u, v), morphisms.len());
                morphisms.push((
                    Label::pair(x.morphism(u).clone(), y.morphism(v).clone()),
                    obj_at[&(x.src(u), y.src(v))],
                    obj_at[&(x.tgt(u), y.tgt(v))],
                ));
                p1m.push(u);
                p2m.push(v);
            }
        }
    }
    let id = (0..objects.len()).map(|o| mor_at[&(x.id(p1o[o]), y.id(p2o[o]))]).collect();
    let total = FinGroupoid::build(objects, morphisms, id, |h, k| {
        mor_at[&(x.compose(p1m[h], p1m[k]), y.compose(p2m[h], p2m[k]))]
    })?
    .into_arc();
    Ok(Pullback {
        p1: Functor {
            dom: total.clone(),
            cod: x.clone(),
            obj: p1o,
            mor: p1m,
        },
        p2: Functor {
            dom: total.clone(),
            cod: y.clone(),
            obj: p2o,
            mor: p2m,
        },
        total,
    })
}

/// Factors `F: X → Y` as an injective equivalence followed by a fibration,
/// through the groupoid of triples `(x, y, φ: Fx → y)`.
pub fn factorize(f: &Functor) -> (Functor, Functor) {
    let (x, y) = (&f.dom, &f.cod);
    // Objects are indexed by (x, φ); φ determines y.
    let mut objects = Vec::new();
    let mut obj_at = HashMap::new();
    let mut obj_data = Vec::new();
    for a in 0..x.obj_count() {
        for &phi in y.out_of(f.obj[a]) {
            obj_at.insert((a, phi), objects.len());
            objects.push(Label::List(vec![
                x.object(a).clone(),
                y.object(y.tgt(phi)).clone(),
                y.morphism(phi).clone(),
            ]));
            obj_data.push((a, phi));
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_at = HashMap::new();
    let mut mor_data = Vec::new();
    for (o, &(a, phi)) in obj_data.iter().enumerate() {
        for &u in x.out_of(a) {
            for &v in y.out_of(y.tgt(phi)) {
                let phi2 = y.compose(v, y.compose(phi, y.inv(f.mor[u])));
                mor_at.insert((u, v, phi), morphisms.len());
                morphisms.push((
                    Label::List(vec![x.morphism(u).clone(), y.morphism(v).clone(), y.morphism(phi).clone()]),
                    o,
                    obj_at[&(x.tgt(u), phi2)],
                ));
                mor_data.push((u, v, phi));
            }
        }
    }
    let id = obj_data.iter().map(|&(a, phi)| mor_at[&(x.id(a), y.id(y.tgt(phi)), phi)]).collect();
    let middle = FinGroupoid::build(objects, morphisms, id, |h, k| {
        let (u2, v2, _) = mor_data[h];
        let (u1, v1, phi) = mor_data[k];
        mor_at[&(x.compose(u2, u1), y.compose(v2, v1), phi)]
    })
    .expect("factorization groupoid")
    .into_arc();
    let i = Functor {
        dom: x.clone(),
        cod: middle.clone(),
        obj: (0..x.obj_count()).map(|a| obj_at[&(a, y.id(f.obj[a]))]).collect(),
        mor: (0..x.mor_count())
            .map(|u| mor_at[&(u, f.mor[u], y.id(f.obj[x.src(u)]))])
            .collect(),
    };
    let p = Functor {
        dom: middle.clone(),
        cod: y.clone(),
        obj: obj_data.iter().map(|&(_, phi)| y.tgt(phi)).collect(),
        mor: mor_data.iter().map(|&(_, v, _)| v).collect(),
    };
    (i, p)
}
