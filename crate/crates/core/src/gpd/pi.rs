use super::construct::pullback;
use super::functor::{enumerate_functors, same, OverConstraint};
use super::slice::{is_slice_morphism, pair_morphism, pair_object, slice_homs, AdjunctionCheck, HOM_LIMIT};
use super::{FinGroupoid, Functor, GpdError, SliceObject, NONE};
use crate::Label;
use std::collections::HashMap;
use std::sync::Arc;

/// A chosen lift for every object of `B` and morphism of `A` out of its
/// image, along a fibration `f: B → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cleavage {
    lifts: Vec<usize>,
    base_mors: usize,
}

impl Cleavage {
    /// Builds a cleavage, letting `choose` pick among the candidate lifts of
    /// each non-identity morphism. Identities always lift to identities.
    pub fn build(f: &Functor, mut choose: impl FnMut(&[usize]) -> usize) -> Result<Cleavage, GpdError> {
        let (b, a) = (&f.dom, &f.cod);
        let mut lifts = vec![NONE; b.obj_count() * a.mor_count()];
        for x in 0..b.obj_count() {
            for &alpha in a.out_of(f.obj[x]) {
                let slot = x * a.mor_count() + alpha;
                if a.is_identity(alpha) {
                    lifts[slot] = b.id(x);
                    continue;
                }
                let cands: Vec<usize> = b.out_of(x).iter().copied().filter(|&m| f.mor[m] == alpha).collect();
                if cands.is_empty() {
                    return Err(GpdError::NotAFibration(format!(
                        "{} has no lift at {}",
                        a.morphism(alpha),
                        b.object(x)
                    )));
                }
                lifts[slot] = choose(&cands);
            }
        }
        Ok(Cleavage {
            lifts,
            base_mors: a.mor_count(),
        })
    }

    pub fn lift(&self, b: usize, alpha: usize) -> usize {
        let l = self.lifts[b * self.base_mors + alpha];
        assert!(l != NONE, "lift requested off the image");
        l
    }

    /// Source is `b`, image is `alpha`, identities lift to identities.
    pub fn check(&self, f: &Functor) -> bool {
        let (b, a) = (&f.dom, &f.cod);
        (0..b.obj_count()).all(|x| {
            a.out_of(f.obj[x]).iter().all(|&alpha| {
                let l = self.lift(x, alpha);
                b.src(l) == x && f.mor[l] == alpha && (!a.is_identity(alpha) || l == b.id(x))
            })
        })
    }
}

/// The lexicographically least lift by morphism label.
pub fn choose_cleavage(f: &Functor) -> Result<Cleavage, GpdError> {
    let b = f.dom.clone();
    Cleavage::build(f, |c| *c.iter().min_by_key(|&&m| b.morphism(m)).unwrap())
}

/// A point of `Π_f X` over `a`: a section of `X` over the fiber `B_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiObject {
    pub a: usize,
    /// Functor from the fiber groupoid `B_a` to the total of `X`.
    pub section: Functor,
}

/// A morphism of `Π_f X` over `alpha`: one component per object of the
/// source fiber, in fiber order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMorphism {
    pub alpha: usize,
    pub src: usize,
    pub tgt: usize,
    pub components: Vec<usize>,
}

struct Fiber {
    objs: Vec<usize>,
    mors: Vec<usize>,
    gpd: Arc<FinGroupoid>,
}

/// `Π_f X` with the data needed for transposition.
pub struct PiProduct {
    pub slice: SliceObject,
    pub points: Vec<PiObject>,
    pub families: Vec<PiMorphism>,
    f: Functor,
    x: SliceObject,
    cl: Cleavage,
    fibers: Vec<Fiber>,
    /// Position of each object (morphism) of `B` in its fiber.
    fpos: Vec<usize>,
    mpos: Vec<usize>,
    point_at: HashMap<(usize, Vec<usize>, Vec<usize>), usize>,
    family_at: HashMap<(usize, usize, usize, Vec<usize>), usize>,
}

fn fiber(f: &Functor, a: usize) -> Fiber {
    let b = &f.dom;
    let objs: Vec<usize> = (0..b.obj_count()).filter(|&x| f.obj[x] == a).collect();
    let mors: Vec<usize> = (0..b.mor_count())
        .filter(|&m| f.obj[b.src(m)] == a && f.cod.is_identity(f.mor[m]))
        .collect();
    let op: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mp: HashMap<usize, usize> = mors.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let gpd = FinGroupoid::build(
        objs.iter().map(|&x| b.object(x).clone()).collect(),
        mors.iter().map(|&m| (b.morphism(m).clone(), op[&b.src(m)], op[&b.tgt(m)])).collect(),
        objs.iter().map(|&x| mp[&b.id(x)]).collect(),
        |g, h| mp[&b.compose(mors[g], mors[h])],
    )
    .expect("fiber groupoid")
    .into_arc();
    Fiber { objs, mors, gpd }
}

fn list(ls: impl Iterator<Item = Label>) -> Label {
    Label::List(ls.collect())
}

/// The dependent product along a fibration, built from sections over the
/// fibers and transport along the cleavage.
pub fn pi_f(f: &Functor, x: &SliceObject, cl: &Cleavage) -> Result<PiProduct, GpdError> {
    if !same(&x.proj.cod, &f.dom) {
        return Err(GpdError::DomainMismatch("slice object is not over the domain of f".into()));
    }
    if !f.is_fibration() {
        return Err(GpdError::NotAFibration("f".into()));
    }
    if !x.proj.is_fibration() {
        return Err(GpdError::NotAFibration("projection of the slice object".into()));
    }
    if !cl.check(f) {
        return Err(GpdError::Invalid("cleavage does not fit f".into()));
    }
    let (a, b, e) = (&f.cod, &f.dom, &x.total);
    let fibers: Vec<Fiber> = (0..a.obj_count()).map(|o| fiber(f, o)).collect();
    let mut fpos = vec![NONE; b.obj_count()];
    let mut mpos = vec![NONE; b.mor_count()];
    for fb in &fibers {
        for (i, &o) in fb.objs.iter().enumerate() {
            fpos[o] = i;
        }
        for (i, &m) in fb.mors.iter().enumerate() {
            mpos[m] = i;
        }
    }

    // Points.
    let mut points = Vec::new();
    let mut point_at = HashMap::new();
    for (ao, fb) in fibers.iter().enumerate() {
        let incl = Functor {
            dom: fb.gpd.clone(),
            cod: b.clone(),
            obj: fb.objs.clone(),
            mor: fb.mors.clone(),
        };
        let sections = enumerate_functors(
            &fb.gpd,
            e,
            Some(OverConstraint {
                p: &incl,
                q: &x.proj,
            }),
            HOM_LIMIT,
        );
        for s in sections {
            point_at.insert((ao, s.obj.clone(), s.mor.clone()), points.len());
            points.push(PiObject { a: ao, section: s });
        }
    }
    let point_label = |p: &PiObject| {
        list(
            [
                a.object(p.a).clone(),
                list(p.section.obj.iter().map(|&o| e.object(o).clone())),
                list(p.section.mor.iter().map(|&m| e.morphism(m).clone())),
            ]
            .into_iter(),
        )
    };

    // Families over each base morphism.
    let s_obj = |p: &PiObject, bo: usize| p.section.obj[fpos[bo]];
    let s_mor = |p: &PiObject, bm: usize| p.section.mor[mpos[bm]];
    let mut families = Vec::new();
    let mut family_at = HashMap::new();
    for (pi, p) in points.iter().enumerate() {
        let fb = &fibers[p.a];
        for &alpha in a.out_of(p.a) {
            let a2 = a.tgt(alpha);
            for (qi, q) in points.iter().enumerate().filter(|(_, q)| q.a == a2) {
                let lifts: Vec<usize> = fb.objs.iter().map(|&bo| cl.lift(bo, alpha)).collect();
                let cands: Vec<Vec<usize>> = fb
                    .objs
                    .iter()
                    .zip(&lifts)
                    .map(|(&bo, &l)| {
                        e.hom(s_obj(p, bo), s_obj(q, b.tgt(l)))
                            .filter(|&m| x.proj.mor[m] == l)
                            .collect()
                    })
                    .collect();
                let natural = |phi: &[usize], upto: usize| {
                    fb.mors.iter().all(|&mu| {
                        let (i, j) = (fpos[b.src(mu)], fpos[b.tgt(mu)]);
                        if i.max(j) != upto {
                            return true;
                        }
                        let mu2 = b.compose(lifts[j], b.compose(mu, b.inv(lifts[i])));
                        e.compose(phi[j], s_mor(p, mu)) == e.compose(s_mor(q, mu2), phi[i])
                    })
                };
                let mut phi = Vec::with_capacity(cands.len());
                search(&cands, &mut phi, &natural, &mut |phi| {
                    family_at.insert((pi, alpha, qi, phi.to_vec()), families.len());
                    families.push(PiMorphism {
                        alpha,
                        src: pi,
                        tgt: qi,
                        components: phi.to_vec(),
                    });
                });
            }
        }
    }

    let family_label = |m: &PiMorphism| {
        list(
            [
                a.morphism(m.alpha).clone(),
                point_label(&points[m.src]),
                point_label(&points[m.tgt]),
                list(m.components.iter().map(|&c| e.morphism(c).clone())),
            ]
            .into_iter(),
        )
    };
    let id: Vec<usize> = points
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let comps = fibers[p.a].objs.iter().map(|&bo| e.id(s_obj(p, bo))).collect();
            family_at[&(pi, a.id(p.a), pi, comps)]
        })
        .collect();
    let total = FinGroupoid::build(
        points.iter().map(point_label).collect(),
        families.iter().map(|m| (family_label(m), m.src, m.tgt)).collect(),
        id,
        |g, h| {
            let (second, first) = (&families[g], &families[h]);
            let (alpha, beta) = (first.alpha, second.alpha);
            let ba = a.compose(beta, alpha);
            let last = &points[second.tgt];
            let comps = fibers[points[first.src].a]
                .objs
                .iter()
                .enumerate()
                .map(|(i, &bo)| {
                    let l1 = cl.lift(bo, alpha);
                    let b1 = b.tgt(l1);
                    let l2 = cl.lift(b1, beta);
                    let kappa = b.compose(cl.lift(bo, ba), b.inv(b.compose(l2, l1)));
                    e.compose(
                        s_mor(last, kappa),
                        e.compose(second.components[fpos[b1]], first.components[i]),
                    )
                })
                .collect();
            family_at[&(first.src, ba, second.tgt, comps)]
        },
    )?
    .into_arc();
    let proj = Functor {
        dom: total.clone(),
        cod: a.clone(),
        obj: points.iter().map(|p| p.a).collect(),
        mor: families.iter().map(|m| m.alpha).collect(),
    };
    Ok(PiProduct {
        slice: SliceObject::new(proj),
        points,
        families,
        f: f.clone(),
        x: x.clone(),
        cl: cl.clone(),
        fibers,
        fpos,
        mpos,
        point_at,
        family_at,
    })
}

fn search(
    cands: &[Vec<usize>],
    phi: &mut Vec<usize>,
    natural: &dyn Fn(&[usize], usize) -> bool,
    emit: &mut dyn FnMut(&[usize]),
) {
    let k = phi.len();
    if k == cands.len() {
        emit(phi);
        return;
    }
    for &c in &cands[k] {
        phi.push(c);
        if natural(phi, k) {
            search(cands, phi, natural, emit);
        }
        phi.pop();
    }
}

impl PiProduct {
    fn s_obj(&self, p: usize, bo: usize) -> usize {
        self.points[p].section.obj[self.fpos[bo]]
    }

    fn s_mor(&self, p: usize, bm: usize) -> usize {
        self.points[p].section.mor[self.mpos[bm]]
    }

    pub fn base_map(&self) -> &Functor {
        &self.f
    }
}

/// The forward transpose: a slice morphism `f*Y → X` to `Y → Π_f X`.
pub fn pi_transpose(pi: &PiProduct, y: &SliceObject, h: &Functor) -> Result<Functor, GpdError> {
    let (f, b) = (&pi.f, &pi.f.dom);
    let fy = pullback(f, &y.proj)?;
    let fy_slice = SliceObject::new(fy.p1.clone());
    if !is_slice_morphism(h, &fy_slice, &pi.x) {
        return Err(GpdError::NotASliceMorphism("h is not a map f*Y → X over B".into()));
    }
    let (yt, pb) = (&y.total, &fy.total);
    let mut obj = Vec::with_capacity(yt.obj_count());
    for yo in 0..yt.obj_count() {
        let ao = y.proj.obj[yo];
        let fb = &pi.fibers[ao];
        let so: Vec<usize> = fb.objs.iter().map(|&bo| h.obj[pair_object(pb, b, bo, yt, yo)]).collect();
        let sm: Vec<usize> = fb
            .mors
            .iter()
            .map(|&mu| h.mor[pair_morphism(pb, b, mu, yt, yt.id(yo))])
            .collect();
        obj.push(pi.point_at[&(ao, so, sm)]);
    }
    let mut mor = Vec::with_capacity(yt.mor_count());
    for m in 0..yt.mor_count() {
        let alpha = y.proj.mor[m];
        let fb = &pi.fibers[y.proj.obj[yt.src(m)]];
        let comps: Vec<usize> = fb
            .objs
            .iter()
            .map(|&bo| h.mor[pair_morphism(pb, b, pi.cl.lift(bo, alpha), yt, m)])
            .collect();
        let key = (obj[yt.src(m)], alpha, obj[yt.tgt(m)], comps);
        match pi.family_at.get(&key) {
            Some(&i) => mor.push(i),
            None => {
                return Err(GpdError::NotASliceMorphism(format!(
                    "transpose at {} is not natural",
                    yt.morphism(m)
                )))
            }
        }
    }
    Ok(Functor {
        dom: yt.clone(),
        cod: pi.slice.total.clone(),
        obj,
        mor,
    })
}

/// The backward transpose: a slice morphism `Y → Π_f X` to `f*Y → X`.
pub fn pi_counit_apply(pi: &PiProduct, y: &SliceObject, g: &Functor) -> Result<Functor, GpdError> {
    if !is_slice_morphism(g, y, &pi.slice) {
        return Err(GpdError::NotASliceMorphism("g is not a map Y → Π_f X over A".into()));
    }
    let (f, b) = (&pi.f, &pi.f.dom);
    let fy = pullback(f, &y.proj)?;
    let pb = &fy.total;
    let obj = (0..pb.obj_count())
        .map(|o| pi.s_obj(g.obj[fy.p2.obj[o]], fy.p1.obj[o]))
        .collect();
    let mor = (0..pb.mor_count())
        .map(|k| {
            let (beta, m) = (fy.p1.mor[k], fy.p2.mor[k]);
            let fam = &pi.families[g.mor[m]];
            let bo = b.src(beta);
            let l = pi.cl.lift(bo, fam.alpha);
            let mu = b.compose(beta, b.inv(l));
            pi.x.total.compose(pi.s_mor(fam.tgt, mu), fam.components[pi.fpos[bo]])
        })
        .collect();
    Ok(Functor {
        dom: pb.clone(),
        cod: pi.x.total.clone(),
        obj,
        mor,
    })
}

/// Enumerates `Hom_{/B}(f*Y, X)` and `Hom_{/A}(Y, Π_f X)`, checks that the
/// transposes are mutually inverse, and spot-checks naturality in `Y`
/// against up to `spot` endomorphisms of `Y`.
pub fn verify_pi_adjunction(pi: &PiProduct, y: &SliceObject, spot: usize) -> Result<AdjunctionCheck, GpdError> {
    let fy = pullback(&pi.f, &y.proj)?;
    let fy_slice = SliceObject::new(fy.p1.clone());
    let left = slice_homs(&fy_slice, &pi.x, HOM_LIMIT);
    let right = slice_homs(y, &pi.slice, HOM_LIMIT);
    let mut bijective = true;
    let mut images = Vec::with_capacity(left.len());
    for h in &left {
        let g = pi_transpose(pi, y, h)?;
        bijective &= is_slice_morphism(&g, y, &pi.slice);
        bijective &= pi_counit_apply(pi, y, &g)? == *h;
        images.push(g);
    }
    let mut sorted: Vec<(Vec<usize>, Vec<usize>)> = images.iter().map(|g| (g.obj.clone(), g.mor.clone())).collect();
    sorted.sort();
    sorted.dedup();
    bijective &= sorted.len() == images.len();
    for g in &right {
        let h = pi_counit_apply(pi, y, g)?;
        bijective &= is_slice_morphism(&h, &fy_slice, &pi.x);
        bijective &= pi_transpose(pi, y, &h)? == *g;
    }
    // Naturality: transpose(h ∘ f*k) = transpose(h) ∘ k.
    let mut natural = true;
    let (b, yt, pb) = (&pi.f.dom, &y.total, &fy.total);
    for k in slice_homs(y, y, spot) {
        let fk = Functor {
            dom: pb.clone(),
            cod: pb.clone(),
            obj: (0..pb.obj_count())
                .map(|o| pair_object(pb, b, fy.p1.obj[o], yt, k.obj[fy.p2.obj[o]]))
                .collect(),
            mor: (0..pb.mor_count())
                .map(|m| pair_morphism(pb, b, fy.p1.mor[m], yt, k.mor[fy.p2.mor[m]]))
                .collect(),
        };
        for (h, g) in left.iter().zip(&images).take(64) {
            let lhs = pi_transpose(pi, y, &h.compose(&fk)?)?;
            natural &= lhs == g.compose(&k)?;
        }
    }
    Ok(AdjunctionCheck {
        left: left.len(),
        right: right.len(),
        bijective,
        natural,
    })
}
