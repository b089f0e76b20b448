//! Finite groupoids, functors between them, and the constructions of the
//! groupoid model: pullbacks, the factorization, and the adjoint triple
//! Σ_f ⊣ f* ⊣ Π_f along fibrations.

mod construct;
pub mod corpus;
mod functor;
mod io;
mod pi;
mod slice;

pub use construct::{factorize, pullback, Pullback};
pub use functor::{enumerate_extensions, enumerate_functors, find_isomorphism, Extending, Functor, OverConstraint};
pub use io::{functor_from_json, functor_to_json, groupoid_from_json, groupoid_to_json};
pub use pi::{
    choose_cleavage, pi_counit_apply, pi_f, pi_transpose, verify_pi_adjunction, Cleavage, PiMorphism, PiObject,
    PiProduct,
};
pub use slice::{
    find_slice_iso, is_slice_morphism, pullback_functor, sigma_f, slice_homs, verify_sigma_adjunction,
    AdjunctionCheck, SliceMorphism, SliceObject, HOM_LIMIT,
};

use crate::Label;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpdError {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("not a fibration: {0}")]
    NotAFibration(String),
    #[error("not a slice morphism: {0}")]
    NotASliceMorphism(String),
    #[error("invalid groupoid: {0}")]
    Invalid(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("malformed input: {0}")]
    Format(String),
}

const NONE: usize = usize::MAX;

/// A finite groupoid with dense indices. Objects and morphisms carry labels;
/// all structure maps are tables.
#[derive(Clone, Debug)]
pub struct FinGroupoid {
    objects: Vec<Label>,
    morphisms: Vec<Label>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    /// `comp[f][pos[g]] = g ∘ f` when `src g == tgt f`.
    comp: Vec<Vec<usize>>,
    /// Position of each morphism in the out-list of its source.
    pos: Vec<usize>,
    id: Vec<usize>,
    inv: Vec<usize>,
    /// Morphisms out of each object.
    out: Vec<Vec<usize>>,
    obj_index: HashMap<Label, usize>,
    mor_index: HashMap<Label, usize>,
}

impl PartialEq for FinGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.src == other.src
            && self.tgt == other.tgt
            && self.comp == other.comp
    }
}

impl Eq for FinGroupoid {}

impl FinGroupoid {
    /// Builds a groupoid from its objects, morphisms (label, source, target),
    /// identities, and a composition function `compose(g, f) = g ∘ f` that
    /// is called on composable pairs only. Inverses are found by search.
    /// The laws are checked by [`FinGroupoid::validate`], not here.
    pub fn build(
        objects: Vec<Label>,
        morphisms: Vec<(Label, usize, usize)>,
        id: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<FinGroupoid, GpdError> {
        let n = objects.len();
        let m = morphisms.len();
        if id.len() != n {
            return Err(GpdError::Invalid("one identity per object required".into()));
        }
        let mut labels = Vec::with_capacity(m);
        let mut src = Vec::with_capacity(m);
        let mut tgt = Vec::with_capacity(m);
        for (l, s, t) in morphisms {
            if s >= n || t >= n {
                return Err(GpdError::Invalid(format!("morphism {l} has an unknown endpoint")));
            }
            labels.push(l);
            src.push(s);
            tgt.push(t);
        }
        let mut out = vec![Vec::new(); n];
        for f in 0..m {
            out[src[f]].push(f);
        }
        let mut pos = vec![0; m];
        for o in &out {
            for (k, &f) in o.iter().enumerate() {
                pos[f] = k;
            }
        }
        let mut comp = vec![Vec::new(); m];
        for f in 0..m {
            comp[f].reserve(out[tgt[f]].len());
            for &g in &out[tgt[f]] {
                let gf = compose(g, f);
                if gf >= m || src[gf] != src[f] || tgt[gf] != tgt[g] {
                    return Err(GpdError::Invalid(format!(
                        "composite of {} and {} has the wrong endpoints",
                        labels[g], labels[f]
                    )));
                }
                comp[f].push(gf);
            }
        }
        let mut inv = vec![NONE; m];
        for f in 0..m {
            for &g in &out[tgt[f]] {
                if tgt[g] == src[f] && comp[f][pos[g]] == id[src[f]] && comp[g][pos[f]] == id[tgt[f]] {
                    inv[f] = g;
                    break;
                }
            }
            if inv[f] == NONE {
                return Err(GpdError::Invalid(format!("morphism {} has no inverse", labels[f])));
            }
        }
        let obj_index = objects.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect::<HashMap<_, _>>();
        let mor_index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect::<HashMap<_, _>>();
        if obj_index.len() != n || mor_index.len() != m {
            return Err(GpdError::Invalid("labels must be distinct".into()));
        }
        Ok(FinGroupoid {
            objects,
            morphisms: labels,
            src,
            tgt,
            comp,
            pos,
            id,
            inv,
            out,
            obj_index,
            mor_index,
        })
    }

    /// Checks identity, associativity and inverse laws exhaustively.
    pub fn validate(&self) -> Result<(), GpdError> {
        let m = self.mor_count();
        for x in 0..self.obj_count() {
            let i = self.id[x];
            if self.src[i] != x || self.tgt[i] != x {
                return Err(GpdError::Invalid(format!("identity of {} is not an endomorphism", self.objects[x])));
            }
        }
        for f in 0..m {
            if self.compose(self.id[self.tgt[f]], f) != f || self.compose(f, self.id[self.src[f]]) != f {
                return Err(GpdError::Invalid(format!("unit law fails at {}", self.morphisms[f])));
            }
            for &g in &self.out[self.tgt[f]] {
                for &h in &self.out[self.tgt[g]] {
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f) {
                        return Err(GpdError::Invalid(format!(
                            "associativity fails at {}, {}, {}",
                            self.morphisms[h], self.morphisms[g], self.morphisms[f]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn obj_count(&self) -> usize {
        self.objects.len()
    }

    pub fn mor_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object(&self, x: usize) -> &Label {
        &self.objects[x]
    }

    pub fn morphism(&self, f: usize) -> &Label {
        &self.morphisms[f]
    }

    pub fn objects(&self) -> &[Label] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Label] {
        &self.morphisms
    }

    pub fn object_index(&self, l: &Label) -> Option<usize> {
        self.obj_index.get(l).copied()
    }

    pub fn morphism_index(&self, l: &Label) -> Option<usize> {
        self.mor_index.get(l).copied()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn id(&self, x: usize) -> usize {
        self.id[x]
    }

    pub fn inv(&self, f: usize) -> usize {
        self.inv[f]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.id[self.src[f]] == f
    }

    /// `g ∘ f`; panics unless `src g == tgt f`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        assert!(self.src[g] == self.tgt[f], "composing non-composable morphisms");
        self.comp[f][self.pos[g]]
    }

    /// Morphisms with the given source.
    pub fn out_of(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[x].iter().copied().filter(move |&f| self.tgt[f] == y)
    }

    /// Connected component representative (least index) of every object.
    pub fn components(&self) -> Vec<usize> {
        (0..self.obj_count())
            .map(|x| self.out[x].iter().map(|&f| self.tgt[f]).min().unwrap_or(x).min(x))
            .collect()
    }

    pub fn isomorphic_objects(&self, x: usize, y: usize) -> bool {
        self.hom(x, y).next().is_some()
    }

    // ---- small examples ----

    /// Discrete groupoid on the given object names.
    pub fn discrete(names: &[&str]) -> FinGroupoid {
        let objects: Vec<Label> = names.iter().map(|n| Label::atom(*n)).collect();
        let morphisms = names
            .iter()
            .enumerate()
            .map(|(i, n)| (Label::atom(format!("id_{n}")), i, i))
            .collect();
        let id = (0..names.len()).collect();
        FinGroupoid::build(objects, morphisms, id, |g, f| if g == f { f } else { g.min(f) })
            .expect("discrete groupoid")
    }

    /// One object, one morphism.
    pub fn terminal() -> FinGroupoid {
        FinGroupoid::discrete(&["*"])
    }

    /// No objects.
    pub fn empty() -> FinGroupoid {
        FinGroupoid::discrete(&[])
    }

    /// Connected groupoid: `k` objects, all hom-sets a copy of the group
    /// with the given multiplication table (element 0 is the unit).
    pub fn connected(prefix: &str, k: usize, group: &[Vec<usize>]) -> FinGroupoid {
        let g = group.len();
        let objects = (0..k).map(|i| Label::atom(format!("{prefix}{i}"))).collect();
        let mut morphisms = Vec::new();
        let idx = |i: usize, j: usize, e: usize| (i * k + j) * g + e;
        for i in 0..k {
            for j in 0..k {
                for e in 0..g {
                    let name = if i == j && e == 0 {
                        format!("id_{prefix}{i}")
                    } else {
                        format!("{prefix}{i}>{prefix}{j}#{e}")
                    };
                    morphisms.push((Label::atom(name), i, j));
                }
            }
        }
        let id = (0..k).map(|i| idx(i, i, 0)).collect();
        FinGroupoid::build(objects, morphisms, id, |gm, fm| {
            let (fi, fj, fe) = (fm / g / k, fm / g % k, fm % g);
            let (gj, gl, ge) = (gm / g / k, gm / g % k, gm % g);
            debug_assert_eq!(fj, gj);
            idx(fi, gl, group[ge][fe])
        })
        .expect("connected groupoid")
    }

    /// The interval groupoid: two objects and one isomorphism between them.
    pub fn interval() -> FinGroupoid {
        FinGroupoid::connected("i", 2, &[vec![0]])
    }

    /// Disjoint union, relabelling by component index.
    pub fn disjoint_union(parts: &[FinGroupoid]) -> FinGroupoid {
        let mut objects = Vec::new();
        let mut morphisms = Vec::new();
        let mut id = Vec::new();
        let mut obj_off = Vec::new();
        let mut mor_off = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            obj_off.push(objects.len());
            mor_off.push(morphisms.len());
            let tag = |l: &Label| Label::pair(Label::atom(k.to_string()), l.clone());
            for x in 0..p.obj_count() {
                objects.push(tag(p.object(x)));
                id.push(mor_off[k] + p.id(x));
            }
            for f in 0..p.mor_count() {
                morphisms.push((tag(p.morphism(f)), obj_off[k] + p.src(f), obj_off[k] + p.tgt(f)));
            }
        }
        let owner: Vec<usize> = parts
            .iter()
            .enumerate()
            .flat_map(|(k, p)| std::iter::repeat_n(k, p.mor_count()))
            .collect();
        FinGroupoid::build(objects, morphisms, id, |g, f| {
            let k = owner[f];
            mor_off[k] + parts[k].compose(g - mor_off[k], f - mor_off[k])
        })
        .expect("disjoint union")
    }

    /// The full subgroupoid on the kept objects, with old-to-new index maps
    /// (`usize::MAX` for dropped entries).
    pub fn full_subgroupoid(&self, keep: &[bool]) -> (FinGroupoid, Vec<usize>, Vec<usize>) {
        let mut obj_map = vec![NONE; self.obj_count()];
        let mut objects = Vec::new();
        for x in 0..self.obj_count() {
            if keep[x] {
                obj_map[x] = objects.len();
                objects.push(self.objects[x].clone());
            }
        }
        let mut mor_map = vec![NONE; self.mor_count()];
        let mut back = Vec::new();
        let mut morphisms = Vec::new();
        for f in 0..self.mor_count() {
            if keep[self.src[f]] && keep[self.tgt[f]] {
                mor_map[f] = morphisms.len();
                back.push(f);
                morphisms.push((self.morphisms[f].clone(), obj_map[self.src[f]], obj_map[self.tgt[f]]));
            }
        }
        let id = (0..self.obj_count()).filter(|&x| keep[x]).map(|x| mor_map[self.id[x]]).collect();
        let sub = FinGroupoid::build(objects, morphisms, id, |g, f| mor_map[self.compose(back[g], back[f])])
            .expect("full subgroupoid");
        (sub, obj_map, mor_map)
    }

    pub fn into_arc(self) -> Arc<FinGroupoid> {
        Arc::new(self)
    }
}

/// Multiplication tables of small groups used by the corpus.
pub mod groups {
    pub fn cyclic(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    pub fn klein() -> Vec<Vec<usize>> {
        (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
    }

    /// S3 as permutations of {0,1,2}, element 0 the identity.
    pub fn s3() -> Vec<Vec<usize>> {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        // (a * b)(i) = a(b(i))
                        let p = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
                        find(p)
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests;
