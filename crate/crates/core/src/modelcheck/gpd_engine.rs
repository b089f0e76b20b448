use super::Engine;
use crate::gpd::{
    choose_cleavage, corpus, enumerate_extensions, enumerate_functors, Extending, factorize, functor_to_json, pi_f, pullback, verify_pi_adjunction,
    FinGroupoid, Functor, OverConstraint, SliceObject,
};
use crate::Label;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// Finite groupoids with the isofibration model structure.
pub struct GpdEngine;

/// Factors `F: X → Y` as an injective-on-objects functor followed by a
/// surjective equivalence, through the groupoid on `ob X ⊔ ob Y` with
/// hom-sets borrowed from `Y`.
pub fn factor_cofibration(f: &Functor) -> (Functor, Functor) {
    let (x, y) = (&f.dom, &f.cod);
    let mut objects = Vec::new();
    let mut rho = Vec::new();
    for o in 0..x.obj_count() {
        objects.push(Label::pair(Label::atom("x"), x.object(o).clone()));
        rho.push(f.obj[o]);
    }
    for o in 0..y.obj_count() {
        objects.push(Label::pair(Label::atom("y"), y.object(o).clone()));
        rho.push(o);
    }
    let n = objects.len();
    let mut morphisms = Vec::new();
    let mut at = HashMap::new();
    let mut data = Vec::new();
    for u in 0..n {
        for v in 0..n {
            for m in y.hom(rho[u], rho[v]) {
                at.insert((u, v, m), morphisms.len());
                morphisms.push((
                    Label::List(vec![objects[u].clone(), objects[v].clone(), y.morphism(m).clone()]),
                    u,
                    v,
                ));
                data.push((u, v, m));
            }
        }
    }
    let id = (0..n).map(|u| at[&(u, u, y.id(rho[u]))]).collect();
    let mid = FinGroupoid::build(objects, morphisms, id, |g, h| {
        let (_, w, mg) = data[g];
        let (u, _, mh) = data[h];
        at[&(u, w, y.compose(mg, mh))]
    })
    .expect("cylinder groupoid")
    .into_arc();
    let i = Functor {
        dom: x.clone(),
        cod: mid.clone(),
        obj: (0..x.obj_count()).collect(),
        mor: (0..x.mor_count())
            .map(|m| at[&(x.src(m), x.tgt(m), f.mor[m])])
            .collect(),
    };
    let p = Functor {
        dom: mid.clone(),
        cod: y.clone(),
        obj: rho,
        mor: data.iter().map(|d| d.2).collect(),
    };
    (i, p)
}

fn compact(json: String) -> String {
    serde_json::from_str::<serde_json::Value>(&json)
        .map(|v| v.to_string())
        .unwrap_or(json)
}

/// Restricts `f` to full subgroupoids, given old-to-new index maps.
fn restrict(
    f: &Functor,
    dom: &Arc<FinGroupoid>,
    dmaps: &(Vec<usize>, Vec<usize>),
    cod: &Arc<FinGroupoid>,
    cmaps: &(Vec<usize>, Vec<usize>),
) -> Functor {
    let obj = (0..f.dom.obj_count())
        .filter(|&o| dmaps.0[o] != usize::MAX)
        .map(|o| cmaps.0[f.obj[o]])
        .collect();
    let mor = (0..f.dom.mor_count())
        .filter(|&m| dmaps.1[m] != usize::MAX)
        .map(|m| cmaps.1[f.mor[m]])
        .collect();
    Functor {
        dom: dom.clone(),
        cod: cod.clone(),
        obj,
        mor,
    }
}

type Sub = (Arc<FinGroupoid>, (Vec<usize>, Vec<usize>));

fn sub(g: &Arc<FinGroupoid>, keep: &[bool]) -> Sub {
    let (s, om, mm) = g.full_subgroupoid(keep);
    (s.into_arc(), (om, mm))
}

fn whole(g: &Arc<FinGroupoid>) -> Sub {
    (g.clone(), ((0..g.obj_count()).collect(), (0..g.mor_count()).collect()))
}

impl Engine for GpdEngine {
    type Obj = Arc<FinGroupoid>;
    type Map = Functor;

    fn name(&self) -> String {
        "gpd".into()
    }

    fn dom(&self, f: &Functor) -> Arc<FinGroupoid> {
        f.dom.clone()
    }

    fn cod(&self, f: &Functor) -> Arc<FinGroupoid> {
        f.cod.clone()
    }

    fn same_obj(&self, a: &Arc<FinGroupoid>, b: &Arc<FinGroupoid>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    fn compose(&self, g: &Functor, f: &Functor) -> Functor {
        g.compose(f).expect("composable")
    }

    fn identity(&self, x: &Arc<FinGroupoid>) -> Functor {
        Functor::identity(x)
    }

    fn hom(&self, x: &Arc<FinGroupoid>, y: &Arc<FinGroupoid>, limit: usize) -> Vec<Functor> {
        enumerate_functors(x, y, None, limit)
    }

    fn hom_over(&self, p: &Functor, q: &Functor, limit: usize) -> Vec<Functor> {
        enumerate_functors(&p.dom, &q.dom, Some(OverConstraint { p, q }), limit)
    }

    fn diagonal(&self, i: &Functor, p: &Functor, u: &Functor, v: &Functor) -> Option<Functor> {
        match Extending::new(i, u) {
            // Both constraints are local to a component, so the first
            // extension found per component assembles into a diagonal.
            Some(fixed) => enumerate_extensions(&i.cod, &p.dom, Some(OverConstraint { p: v, q: p }), &fixed, 1)
                .pop()
                .filter(|j| j.compose(i).as_ref() == Ok(u)),
            None => self
                .hom_over(v, p, usize::MAX)
                .into_iter()
                .find(|j| j.compose(i).as_ref() == Ok(u)),
        }
    }

    fn pullback(&self, f: &Functor, g: &Functor) -> (Arc<FinGroupoid>, Functor, Functor) {
        let pb = pullback(f, g).expect("cospan");
        (pb.total, pb.p1, pb.p2)
    }

    fn terminal(&self) -> Arc<FinGroupoid> {
        FinGroupoid::terminal().into_arc()
    }

    fn initial(&self) -> Arc<FinGroupoid> {
        FinGroupoid::empty().into_arc()
    }

    fn to_terminal(&self, x: &Arc<FinGroupoid>) -> Functor {
        Functor::to_terminal(x, &self.terminal())
    }

    fn from_initial(&self, x: &Arc<FinGroupoid>) -> Functor {
        Functor {
            dom: self.initial(),
            cod: x.clone(),
            obj: Vec::new(),
            mor: Vec::new(),
        }
    }

    fn is_weq(&self, f: &Functor) -> bool {
        f.is_equivalence()
    }

    fn is_cof(&self, f: &Functor) -> bool {
        f.is_injective_on_objects()
    }

    fn is_fib(&self, f: &Functor) -> bool {
        f.is_fibration()
    }

    fn factor_cof_tfib(&self, f: &Functor) -> (Functor, Functor) {
        factor_cofibration(f)
    }

    fn factor_tcof_fib(&self, f: &Functor) -> (Functor, Functor) {
        factorize(f)
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, size: usize) -> Arc<FinGroupoid> {
        corpus::groupoid(rng, size, 12).into_arc()
    }

    fn fixed_objects(&self, _size: usize) -> Vec<Arc<FinGroupoid>> {
        vec![self.terminal(), FinGroupoid::interval().into_arc()]
    }

    fn describe(&self, f: &Functor) -> String {
        compact(functor_to_json(f))
    }

    /// Drops one object of the apex (with its preimages) or of either leg.
    fn shrink(&self, cs: &(Functor, Functor)) -> Vec<(Functor, Functor)> {
        let (c, p) = cs;
        let (x, y, a) = (&c.dom, &p.dom, &c.cod);
        let mut out = Vec::new();
        let build = |ka: Vec<bool>, kx: Vec<bool>, ky: Vec<bool>| {
            let sa = if ka.iter().all(|&k| k) { whole(a) } else { sub(a, &ka) };
            let sx = if kx.iter().all(|&k| k) { whole(x) } else { sub(x, &kx) };
            let sy = if ky.iter().all(|&k| k) { whole(y) } else { sub(y, &ky) };
            (restrict(c, &sx.0, &sx.1, &sa.0, &sa.1), restrict(p, &sy.0, &sy.1, &sa.0, &sa.1))
        };
        for o in 0..a.obj_count() {
            let ka: Vec<bool> = (0..a.obj_count()).map(|k| k != o).collect();
            let kx = (0..x.obj_count()).map(|k| c.obj[k] != o).collect();
            let ky = (0..y.obj_count()).map(|k| p.obj[k] != o).collect();
            out.push(build(ka, kx, ky));
        }
        for o in 0..x.obj_count() {
            out.push(build(
                vec![true; a.obj_count()],
                (0..x.obj_count()).map(|k| k != o).collect(),
                vec![true; y.obj_count()],
            ));
        }
        for o in 0..y.obj_count() {
            out.push(build(
                vec![true; a.obj_count()],
                vec![true; x.obj_count()],
                (0..y.obj_count()).map(|k| k != o).collect(),
            ));
        }
        out
    }

    fn pi_adjunction(&self, f: &Functor, x: &Functor, y: &Functor) -> Option<Result<bool, String>> {
        let run = || -> Result<bool, crate::gpd::GpdError> {
            let cl = choose_cleavage(f)?;
            let pi = pi_f(f, &SliceObject::new(x.clone()), &cl)?;
            Ok(pi.slice.proj.is_fibration() && verify_pi_adjunction(&pi, &SliceObject::new(y.clone()), 2)?.holds())
        };
        Some(run().map_err(|e| e.to_string()))
    }
}
