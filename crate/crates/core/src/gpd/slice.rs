use super::construct::pullback;
use super::functor::{enumerate_functors, find_isomorphism, same, OverConstraint};
use super::{FinGroupoid, Functor, GpdError};
use crate::Label;
use std::sync::Arc;

/// An object of the slice over `proj.cod`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceObject {
    pub total: Arc<FinGroupoid>,
    pub proj: Functor,
}

/// A morphism in a slice: a functor between totals commuting with the
/// projections.
pub type SliceMorphism = Functor;

/// Enumeration cap for hom-set searches.
pub const HOM_LIMIT: usize = 200_000;

impl SliceObject {
    pub fn new(proj: Functor) -> SliceObject {
        SliceObject {
            total: proj.dom.clone(),
            proj,
        }
    }

    pub fn base(&self) -> &Arc<FinGroupoid> {
        &self.proj.cod
    }

    /// The identity on the base, terminal in the slice.
    pub fn terminal(base: &Arc<FinGroupoid>) -> SliceObject {
        SliceObject::new(Functor::identity(base))
    }

    pub fn is_fibration(&self) -> bool {
        self.proj.is_fibration()
    }
}

pub fn is_slice_morphism(h: &Functor, x: &SliceObject, y: &SliceObject) -> bool {
    same(&h.dom, &x.total)
        && same(&h.cod, &y.total)
        && h.validate().is_ok()
        && h.obj.iter().enumerate().all(|(o, &t)| y.proj.obj[t] == x.proj.obj[o])
        && h.mor.iter().enumerate().all(|(m, &t)| y.proj.mor[t] == x.proj.mor[m])
}

/// All slice morphisms `x → y`, up to `limit`.
pub fn slice_homs(x: &SliceObject, y: &SliceObject, limit: usize) -> Vec<SliceMorphism> {
    if !same(x.base(), y.base()) {
        return Vec::new();
    }
    enumerate_functors(
        &x.total,
        &y.total,
        Some(OverConstraint {
            p: &x.proj,
            q: &y.proj,
        }),
        limit,
    )
}

/// `f*(x)` for `f: B → A`: the canonical pullback, projected to `B`.
pub fn pullback_functor(f: &Functor, x: &SliceObject) -> Result<SliceObject, GpdError> {
    Ok(SliceObject::new(pullback(f, &x.proj)?.p1))
}

/// `Σ_f(x)`: compose the projection with `f`.
pub fn sigma_f(f: &Functor, x: &SliceObject) -> Result<SliceObject, GpdError> {
    Ok(SliceObject::new(f.compose(&x.proj)?))
}

/// Index of the pullback object `(b, y)` in `f*Y`.
pub(crate) fn pair_object(pb: &FinGroupoid, left: &FinGroupoid, b: usize, right: &FinGroupoid, y: usize) -> usize {
    pb.object_index(&Label::pair(left.object(b).clone(), right.object(y).clone()))
        .expect("pullback object")
}

pub(crate) fn pair_morphism(pb: &FinGroupoid, left: &FinGroupoid, u: usize, right: &FinGroupoid, v: usize) -> usize {
    pb.morphism_index(&Label::pair(left.morphism(u).clone(), right.morphism(v).clone()))
        .expect("pullback morphism")
}

/// Sizes of the two hom-sets of an adjunction and whether the transposes
/// are mutually inverse between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionCheck {
    pub left: usize,
    pub right: usize,
    pub bijective: bool,
    pub natural: bool,
}

impl AdjunctionCheck {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.bijective && self.natural
    }
}

/// Checks `Hom_{/A}(Σ_f X, Y) ≅ Hom_{/B}(X, f*Y)` by enumerating both sides.
pub fn verify_sigma_adjunction(f: &Functor, x: &SliceObject, y: &SliceObject) -> Result<AdjunctionCheck, GpdError> {
    let sx = sigma_f(f, x)?;
    let fy = pullback(f, &y.proj)?;
    let fy_slice = SliceObject::new(fy.p1.clone());
    let left = slice_homs(&sx, y, HOM_LIMIT);
    let right = slice_homs(x, &fy_slice, HOM_LIMIT);
    let (b, yt, pb) = (&f.dom, &y.total, &fy.total);
    let forward = |h: &Functor| Functor {
        dom: x.total.clone(),
        cod: pb.clone(),
        obj: (0..x.total.obj_count())
            .map(|o| pair_object(pb, b, x.proj.obj[o], yt, h.obj[o]))
            .collect(),
        mor: (0..x.total.mor_count())
            .map(|m| pair_morphism(pb, b, x.proj.mor[m], yt, h.mor[m]))
            .collect(),
    };
    let mut bijective = true;
    for h in &left {
        let k = forward(h);
        bijective &= is_slice_morphism(&k, x, &fy_slice) && right.contains(&k);
        let back = fy.p2.compose(&k)?;
        bijective &= Functor { cod: y.total.clone(), ..back } == *h;
    }
    for k in &right {
        let h = fy.p2.compose(k)?;
        let h = Functor {
            dom: sx.total.clone(),
            ..h
        };
        bijective &= is_slice_morphism(&h, &sx, y) && forward(&h) == *k;
    }
    Ok(AdjunctionCheck {
        left: left.len(),
        right: right.len(),
        bijective,
        natural: true,
    })
}

/// An isomorphism of slice objects, found by search.
pub fn find_slice_iso(x: &SliceObject, y: &SliceObject) -> Option<SliceMorphism> {
    if !same(x.base(), y.base()) {
        return None;
    }
    find_isomorphism(
        &x.total,
        &y.total,
        Some(OverConstraint {
            p: &x.proj,
            q: &y.proj,
        }),
    )
}
