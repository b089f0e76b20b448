use super::{FinGroupoid, GpdError};
use std::collections::HashMap;
use std::sync::Arc;

/// A functor between finite groupoids, as index maps.
#[derive(Clone, Debug)]
pub struct Functor {
    pub dom: Arc<FinGroupoid>,
    pub cod: Arc<FinGroupoid>,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.obj == other.obj
            && self.mor == other.mor
            && (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }
}

impl Eq for Functor {}

pub(crate) fn same(a: &Arc<FinGroupoid>, b: &Arc<FinGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Functor {
    /// Builds and validates a functor.
    pub fn new(dom: Arc<FinGroupoid>, cod: Arc<FinGroupoid>, obj: Vec<usize>, mor: Vec<usize>) -> Result<Functor, GpdError> {
        let f = Functor { dom, cod, obj, mor };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(g: &Arc<FinGroupoid>) -> Functor {
        Functor {
            dom: g.clone(),
            cod: g.clone(),
            obj: (0..g.obj_count()).collect(),
            mor: (0..g.mor_count()).collect(),
        }
    }

    /// The unique functor to the terminal groupoid.
    pub fn to_terminal(g: &Arc<FinGroupoid>, terminal: &Arc<FinGroupoid>) -> Functor {
        Functor {
            dom: g.clone(),
            cod: terminal.clone(),
            obj: vec![0; g.obj_count()],
            mor: vec![0; g.mor_count()],
        }
    }

    /// Checks source/target, identity and composition preservation.
    pub fn validate(&self) -> Result<(), GpdError> {
        let (d, c) = (&self.dom, &self.cod);
        let bad = |msg: String| Err(GpdError::InvalidFunctor(msg));
        if self.obj.len() != d.obj_count() || self.mor.len() != d.mor_count() {
            return bad("maps must be total".into());
        }
        if self.obj.iter().any(|&y| y >= c.obj_count()) || self.mor.iter().any(|&g| g >= c.mor_count()) {
            return bad("image outside the codomain".into());
        }
        for f in 0..d.mor_count() {
            let g = self.mor[f];
            if c.src(g) != self.obj[d.src(f)] || c.tgt(g) != self.obj[d.tgt(f)] {
                return bad(format!("{} is not sent between the images of its endpoints", d.morphism(f)));
            }
        }
        for x in 0..d.obj_count() {
            if self.mor[d.id(x)] != c.id(self.obj[x]) {
                return bad(format!("identity of {} is not preserved", d.object(x)));
            }
        }
        for f in 0..d.mor_count() {
            for &g in d.out_of(d.tgt(f)) {
                if self.mor[d.compose(g, f)] != c.compose(self.mor[g], self.mor[f]) {
                    return bad(format!("composite {} ∘ {} is not preserved", d.morphism(g), d.morphism(f)));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Functor) -> Result<Functor, GpdError> {
        if !same(&g.cod, &self.dom) {
            return Err(GpdError::DomainMismatch("codomain of the first functor is not the domain of the second".into()));
        }
        Ok(Functor {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            obj: g.obj.iter().map(|&x| self.obj[x]).collect(),
            mor: g.mor.iter().map(|&f| self.mor[f]).collect(),
        })
    }

    /// Every morphism of the codomain out of an image object lifts.
    pub fn is_fibration(&self) -> bool {
        let (d, c) = (&self.dom, &self.cod);
        (0..d.obj_count()).all(|x| {
            let mut lifted = vec![false; c.mor_count()];
            for &f in d.out_of(x) {
                lifted[self.mor[f]] = true;
            }
            c.out_of(self.obj[x]).iter().all(|&a| lifted[a])
        })
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.cod.obj_count()];
        self.obj.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.cod.obj_count()];
        self.obj.iter().for_each(|&y| seen[y] = true);
        seen.into_iter().all(|b| b)
    }

    pub fn is_surjective_on_morphisms(&self) -> bool {
        let mut seen = vec![false; self.cod.mor_count()];
        self.mor.iter().for_each(|&y| seen[y] = true);
        seen.into_iter().all(|b| b)
    }

    /// Bijective on every hom-set.
    pub fn is_fully_faithful(&self) -> bool {
        let (d, c) = (&self.dom, &self.cod);
        for x in 0..d.obj_count() {
            for y in 0..d.obj_count() {
                let mut imgs: Vec<usize> = d.hom(x, y).map(|f| self.mor[f]).collect();
                let n = imgs.len();
                imgs.sort_unstable();
                imgs.dedup();
                if imgs.len() != n || n != c.hom(self.obj[x], self.obj[y]).count() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let c = &self.cod;
        let comp = c.components();
        let mut hit = vec![false; c.obj_count()];
        for &x in &self.obj {
            hit[comp[x]] = true;
        }
        (0..c.obj_count()).all(|y| hit[comp[y]])
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_fully_faithful() && self.is_essentially_surjective()
    }

    pub fn is_injective_equivalence(&self) -> bool {
        self.is_injective_on_objects() && self.is_equivalence()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective_on_objects() && self.is_surjective_on_objects() && self.is_fully_faithful()
    }
}

/// Restricts enumeration to functors `h` with `q ∘ h = p`.
#[derive(Clone, Copy)]
pub struct OverConstraint<'a> {
    pub p: &'a Functor,
    pub q: &'a Functor,
}

/// Restricts enumeration to functors `h` with `h ∘ along = values`.
#[derive(Clone, Debug)]
pub struct Extending {
    obj: Vec<Option<usize>>,
    mor: Vec<Option<usize>>,
}

impl Extending {
    /// `None` when `along` is not injective on objects and morphisms, or the
    /// two functors do not share a domain.
    pub fn new(along: &Functor, values: &Functor) -> Option<Extending> {
        if along.dom.obj_count() != values.dom.obj_count() || along.dom.mor_count() != values.dom.mor_count() {
            return None;
        }
        let mut obj = vec![None; along.cod.obj_count()];
        for (a, &b) in along.obj.iter().enumerate() {
            if obj[b].replace(values.obj[a]).is_some() {
                return None;
            }
        }
        let mut mor = vec![None; along.cod.mor_count()];
        for (a, &b) in along.mor.iter().enumerate() {
            if mor[b].replace(values.mor[a]).is_some() {
                return None;
            }
        }
        Some(Extending { obj, mor })
    }
}

/// Choices for one connected component of the domain.
type Assignment = (Vec<(usize, usize)>, Vec<(usize, usize)>);

/// All functors `x → y` (subject to `over`), in a deterministic order, at
/// most `limit` of them.
///
/// A functor on a connected groupoid is fixed by the image of a root object,
/// the images of one morphism from the root to every other object, and a
/// homomorphism out of the root's automorphism group; only those are
/// enumerated.
pub fn enumerate_functors(
    x: &Arc<FinGroupoid>,
    y: &Arc<FinGroupoid>,
    over: Option<OverConstraint<'_>>,
    limit: usize,
) -> Vec<Functor> {
    enumerate_inner(x, y, over, None, limit)
}

/// Functors `h: x → y` (subject to `over`) with `h ∘ along = values`, where
/// `fixed` is built from `along` and `values`. Each component is rooted in
/// the image of `along` when it meets it, so the fixed part prunes the
/// search early.
pub fn enumerate_extensions(
    x: &Arc<FinGroupoid>,
    y: &Arc<FinGroupoid>,
    over: Option<OverConstraint<'_>>,
    fixed: &Extending,
    limit: usize,
) -> Vec<Functor> {
    if fixed.obj.len() != x.obj_count() || fixed.mor.len() != x.mor_count() {
        return Vec::new();
    }
    enumerate_inner(x, y, over, Some(fixed), limit)
}

fn enumerate_inner(
    x: &Arc<FinGroupoid>,
    y: &Arc<FinGroupoid>,
    over: Option<OverConstraint<'_>>,
    fixed: Option<&Extending>,
    limit: usize,
) -> Vec<Functor> {
    let comp = x.components();
    let reps: Vec<usize> = (0..x.obj_count()).filter(|&o| comp[o] == o).collect();
    let mut per_component: Vec<Vec<Assignment>> = Vec::new();
    for &c in &reps {
        let r = fixed
            .and_then(|f| (0..x.obj_count()).find(|&o| comp[o] == c && f.obj[o].is_some()))
            .unwrap_or(c);
        let choices = component_choices(x, y, over, fixed, (c, r), &comp, limit);
        if choices.is_empty() {
            return Vec::new();
        }
        per_component.push(choices);
    }
    let mut out = Vec::new();
    let mut obj = vec![usize::MAX; x.obj_count()];
    let mut mor = vec![usize::MAX; x.mor_count()];
    product(&per_component, 0, &mut obj, &mut mor, &mut |o, m| {
        out.push(Functor {
            dom: x.clone(),
            cod: y.clone(),
            obj: o.to_vec(),
            mor: m.to_vec(),
        });
        out.len() < limit
    });
    out
}

/// An isomorphism `x → y` (subject to `over`), if one exists.
///
/// Components are matched by backtracking. Within a component the root
/// image and the vertex group isomorphism are enumerated, then tree edges
/// are assigned one object at a time, checking every morphism between
/// assigned objects as soon as both ends are placed. Tree edge images that
/// differ by a vertical automorphism give the same verdict, so only one per
/// target (and base morphism) is tried.
pub fn find_isomorphism(x: &Arc<FinGroupoid>, y: &Arc<FinGroupoid>, over: Option<OverConstraint<'_>>) -> Option<Functor> {
    if x.obj_count() != y.obj_count() || x.mor_count() != y.mor_count() {
        return None;
    }
    let comp = x.components();
    let ycomp = y.components();
    let mut ysize = vec![0usize; y.obj_count()];
    for &c in &ycomp {
        ysize[c] += 1;
    }
    let parts: Vec<Part> = (0..x.obj_count())
        .filter(|&o| comp[o] == o)
        .map(|r| Part::new(x, r, &comp))
        .collect();
    let mut search = IsoSearch {
        x,
        y,
        over,
        ycomp,
        ysize,
        used: vec![false; y.obj_count()],
        obj: vec![usize::MAX; x.obj_count()],
        mor: vec![usize::MAX; x.mor_count()],
    };
    if search.components(&parts, 0) {
        Some(Functor {
            dom: x.clone(),
            cod: y.clone(),
            obj: search.obj,
            mor: search.mor,
        })
    } else {
        None
    }
}

/// One connected component of the domain with its spanning tree.
struct Part {
    r: usize,
    objs: Vec<usize>,
    tree: Vec<usize>,
    gens: Vec<usize>,
    aut: usize,
    /// Morphisms whose later end (in `objs` order) is the object at each
    /// position.
    closing: Vec<Vec<usize>>,
}

impl Part {
    fn new(x: &FinGroupoid, r: usize, comp: &[usize]) -> Part {
        let objs: Vec<usize> = (0..x.obj_count()).filter(|&o| comp[o] == r).collect();
        let pos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let tree = objs.iter().map(|&o| if o == r { x.id(r) } else { x.hom(r, o).next().unwrap() }).collect();
        let mut closing = vec![Vec::new(); objs.len()];
        for f in 0..x.mor_count() {
            if comp[x.src(f)] == r {
                closing[pos[&x.src(f)].max(pos[&x.tgt(f)])].push(f);
            }
        }
        Part {
            r,
            objs,
            tree,
            gens: generators(x, r),
            aut: x.hom(r, r).count(),
            closing,
        }
    }
}

struct IsoSearch<'a, 'c> {
    x: &'a FinGroupoid,
    y: &'a FinGroupoid,
    over: Option<OverConstraint<'c>>,
    ycomp: Vec<usize>,
    ysize: Vec<usize>,
    used: Vec<bool>,
    obj: Vec<usize>,
    mor: Vec<usize>,
}

impl IsoSearch<'_, '_> {
    fn ok_obj(&self, xo: usize, yo: usize) -> bool {
        self.over.is_none_or(|c| c.q.obj[yo] == c.p.obj[xo])
    }

    fn ok_mor(&self, xf: usize, yf: usize) -> bool {
        self.over.is_none_or(|c| c.q.mor[yf] == c.p.mor[xf])
    }

    fn components(&mut self, parts: &[Part], k: usize) -> bool {
        let Some(part) = parts.get(k) else {
            return true;
        };
        let (x, y) = (self.x, self.y);
        let r = part.r;
        for yr in 0..y.obj_count() {
            if self.used[yr]
                || !self.ok_obj(r, yr)
                || self.ysize[self.ycomp[yr]] != part.objs.len()
                || y.hom(yr, yr).count() != part.aut
            {
                continue;
            }
            let slots: Vec<Vec<usize>> = part
                .gens
                .iter()
                .map(|&s| y.hom(yr, yr).filter(|&g| self.ok_mor(s, g)).collect())
                .collect();
            if slots.iter().any(|s| s.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; slots.len()];
            loop {
                let gen_img: Vec<usize> = pick.iter().zip(&slots).map(|(&i, s)| s[i]).collect();
                if let Some(phi) = vertex_iso(x, y, r, yr, &part.gens, &gen_img, part.aut) {
                    let mut timg = vec![usize::MAX; part.objs.len()];
                    if self.place(parts, k, &phi, &mut timg, 0, yr) {
                        return true;
                    }
                }
                if !advance(&mut pick, &slots) {
                    break;
                }
            }
        }
        false
    }

    /// Assigns the tree edge of `part.objs[i]`, then continues.
    fn place(&mut self, parts: &[Part], k: usize, phi: &HashMap<usize, usize>, timg: &mut [usize], i: usize, yr: usize) -> bool {
        let part = &parts[k];
        if i == part.objs.len() {
            return self.components(parts, k + 1);
        }
        let (x, y) = (self.x, self.y);
        let (o, t) = (part.objs[i], part.tree[i]);
        let cands: Vec<usize> = if o == part.r {
            vec![y.id(yr)]
        } else {
            let mut seen = Vec::new();
            y.out_of(yr)
                .iter()
                .copied()
                .filter(|&g| !self.used[y.tgt(g)] && self.ok_obj(o, y.tgt(g)) && self.ok_mor(t, g))
                .filter(|&g| {
                    let key = (y.tgt(g), self.over.map(|c| c.q.mor[g]));
                    let fresh = !seen.contains(&key);
                    seen.push(key);
                    fresh
                })
                .collect()
        };
        let pos = |ob: usize| part.objs.iter().position(|&p| p == ob).unwrap();
        for g in cands {
            let yo = y.tgt(g);
            timg[i] = g;
            self.used[yo] = true;
            self.obj[o] = yo;
            let mut ok = true;
            for &m in &part.closing[i] {
                let (a, b) = (pos(x.src(m)), pos(x.tgt(m)));
                let lp = x.compose(x.inv(part.tree[b]), x.compose(m, part.tree[a]));
                let img = y.compose(timg[b], y.compose(phi[&lp], y.inv(timg[a])));
                if !self.ok_mor(m, img) {
                    ok = false;
                    break;
                }
                self.mor[m] = img;
            }
            if ok && self.place(parts, k, phi, timg, i + 1, yr) {
                return true;
            }
            self.used[yo] = false;
        }
        false
    }
}

/// The homomorphism on the vertex group at `r` sending the generators to
/// `gen_img`, if it is well defined and injective.
fn vertex_iso(x: &FinGroupoid, y: &FinGroupoid, r: usize, yr: usize, gens: &[usize], gen_img: &[usize], aut: usize) -> Option<HashMap<usize, usize>> {
    let mut phi: HashMap<usize, usize> = HashMap::new();
    phi.insert(x.id(r), y.id(yr));
    let mut queue = vec![x.id(r)];
    while let Some(e) = queue.pop() {
        for (&s, &si) in gens.iter().zip(gen_img) {
            let n = x.compose(s, e);
            let img = y.compose(si, phi[&e]);
            match phi.get(&n) {
                Some(&prev) if prev != img => return None,
                Some(_) => {}
                None => {
                    phi.insert(n, img);
                    queue.push(n);
                }
            }
        }
    }
    let mut vals: Vec<usize> = phi.values().copied().collect();
    vals.sort_unstable();
    vals.dedup();
    (phi.len() == aut && vals.len() == aut).then_some(phi)
}

/// Steps an odometer over `slots`; false once it wraps around.
fn advance(pick: &mut [usize], slots: &[Vec<usize>]) -> bool {
    for k in (0..pick.len()).rev() {
        pick[k] += 1;
        if pick[k] < slots[k].len() {
            return true;
        }
        pick[k] = 0;
    }
    false
}

fn product(
    parts: &[Vec<Assignment>],
    k: usize,
    obj: &mut Vec<usize>,
    mor: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], &[usize]) -> bool,
) -> bool {
    if k == parts.len() {
        return emit(obj, mor);
    }
    for (os, ms) in &parts[k] {
        for &(a, b) in os {
            obj[a] = b;
        }
        for &(a, b) in ms {
            mor[a] = b;
        }
        if !product(parts, k + 1, obj, mor, emit) {
            return false;
        }
    }
    true
}

fn generators(x: &FinGroupoid, r: usize) -> Vec<usize> {
    let aut: Vec<usize> = x.hom(r, r).collect();
    let mut gens = Vec::new();
    let mut closure = vec![x.id(r)];
    for &e in &aut {
        if closure.contains(&e) {
            continue;
        }
        gens.push(e);
        let mut i = 0;
        closure = vec![x.id(r)];
        while i < closure.len() {
            let c = closure[i];
            for &s in &gens {
                let n = x.compose(s, c);
                if !closure.contains(&n) {
                    closure.push(n);
                }
            }
            i += 1;
        }
    }
    gens
}

fn component_choices(
    x: &FinGroupoid,
    y: &FinGroupoid,
    over: Option<OverConstraint<'_>>,
    fixed: Option<&Extending>,
    (c, r): (usize, usize),
    comp: &[usize],
    limit: usize,
) -> Vec<Assignment> {
    let objs: Vec<usize> = (0..x.obj_count()).filter(|&o| comp[o] == c).collect();
    let mors: Vec<usize> = (0..x.mor_count()).filter(|&f| comp[x.src(f)] == c).collect();
    // Tree morphisms r → o.
    let tree: Vec<usize> = objs.iter().map(|&o| if o == r { x.id(r) } else { x.hom(r, o).next().unwrap() }).collect();
    let gens = generators(x, r);
    let aut: Vec<usize> = x.hom(r, r).collect();
    let ok_obj = |xo: usize, yo: usize| {
        over.is_none_or(|c| c.q.obj[yo] == c.p.obj[xo]) && fixed.is_none_or(|f| f.obj[xo].is_none_or(|v| v == yo))
    };
    let ok_mor = |xf: usize, yf: usize| {
        over.is_none_or(|c| c.q.mor[yf] == c.p.mor[xf]) && fixed.is_none_or(|f| f.mor[xf].is_none_or(|v| v == yf))
    };

    let mut out = Vec::new();
    for yr in 0..y.obj_count() {
        if !ok_obj(r, yr) {
            continue;
        }
        // Candidate images for each tree edge and each generator.
        let mut slots: Vec<Vec<usize>> = Vec::new();
        for (i, &t) in tree.iter().enumerate() {
            if objs[i] == r {
                slots.push(vec![y.id(yr)]);
            } else {
                slots.push(
                    y.out_of(yr)
                        .iter()
                        .copied()
                        .filter(|&g| ok_mor(t, g) && ok_obj(objs[i], y.tgt(g)))
                        .collect(),
                );
            }
        }
        for &s in &gens {
            slots.push(y.hom(yr, yr).filter(|&g| ok_mor(s, g)).collect());
        }
        let mut pick = vec![0usize; slots.len()];
        if slots.iter().any(|s| s.is_empty()) {
            continue;
        }
        loop {
            let chosen: Vec<usize> = pick.iter().zip(&slots).map(|(&i, s)| s[i]).collect();
            if let Some(a) = extend(x, y, r, &objs, &mors, &tree, &gens, &aut, &chosen, over, fixed) {
                out.push(a);
                if out.len() >= limit {
                    return out;
                }
            }
            // Odometer.
            let mut k = pick.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < slots[k].len() {
                    break;
                }
                pick[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || pick.iter().all(|&p| p == 0) {
                break;
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    x: &FinGroupoid,
    y: &FinGroupoid,
    r: usize,
    objs: &[usize],
    mors: &[usize],
    tree: &[usize],
    gens: &[usize],
    aut: &[usize],
    chosen: &[usize],
    over: Option<OverConstraint<'_>>,
    fixed: Option<&Extending>,
) -> Option<Assignment> {
    let (tree_img, gen_img) = chosen.split_at(tree.len());
    // Homomorphism on the vertex group, checked on the Cayley graph.
    let mut phi: HashMap<usize, usize> = HashMap::new();
    let yr = y.src(tree_img[0]);
    phi.insert(x.id(r), y.id(yr));
    let mut queue = vec![x.id(r)];
    while let Some(e) = queue.pop() {
        for (&s, &si) in gens.iter().zip(gen_img) {
            let n = x.compose(s, e);
            let img = y.compose(si, phi[&e]);
            match phi.get(&n) {
                Some(&prev) if prev != img => return None,
                Some(_) => {}
                None => {
                    phi.insert(n, img);
                    queue.push(n);
                }
            }
        }
    }
    debug_assert_eq!(phi.len(), aut.len());
    let pos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let obj_img: Vec<(usize, usize)> = objs.iter().zip(tree_img).map(|(&o, &t)| (o, y.tgt(t))).collect();
    let mut mor_img = Vec::with_capacity(mors.len());
    for &m in mors {
        let (i, j) = (pos[&x.src(m)], pos[&x.tgt(m)]);
        let loop_ = x.compose(x.inv(tree[j]), x.compose(m, tree[i]));
        let img = y.compose(tree_img[j], y.compose(phi[&loop_], y.inv(tree_img[i])));
        if let Some(c) = over {
            if c.q.mor[img] != c.p.mor[m] {
                return None;
            }
        }
        if fixed.is_some_and(|f| f.mor[m].is_some_and(|v| v != img)) {
            return None;
        }
        mor_img.push((m, img));
    }
    Some((obj_img, mor_img))
}
