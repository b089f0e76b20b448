use super::SemError;
use crate::gpd::{choose_cleavage, enumerate_functors, FinGroupoid, Functor, OverConstraint, SliceObject};
use crate::Label;
use std::collections::HashMap;
use std::sync::Arc;

/// A strictly functorial family of groupoids over `base`: a fiber per
/// object and a transport functor per morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub base: Arc<FinGroupoid>,
    pub fibers: Vec<Arc<FinGroupoid>>,
    pub transport: Vec<Functor>,
}

impl Family {
    pub fn constant(base: &Arc<FinGroupoid>, g: &Arc<FinGroupoid>) -> Family {
        Family {
            base: base.clone(),
            fibers: vec![g.clone(); base.obj_count()],
            transport: vec![Functor::identity(g); base.mor_count()],
        }
    }

    /// Transport preserves identities and composition on the nose.
    pub fn validate(&self) -> Result<(), SemError> {
        let b = &self.base;
        if self.fibers.len() != b.obj_count() || self.transport.len() != b.mor_count() {
            return Err(SemError::NotSplit("family has the wrong shape".into()));
        }
        for m in 0..b.mor_count() {
            let t = &self.transport[m];
            if t.dom != self.fibers[b.src(m)] || t.cod != self.fibers[b.tgt(m)] {
                return Err(SemError::NotSplit(format!("transport along {} has the wrong endpoints", b.morphism(m))));
            }
            if b.is_identity(m) && *t != Functor::identity(&self.fibers[b.src(m)]) {
                return Err(SemError::NotSplit(format!("transport along {} is not the identity", b.morphism(m))));
            }
            for &g in b.out_of(b.tgt(m)) {
                let comp = self.transport[g].compose(t).map_err(SemError::Gpd)?;
                if comp != self.transport[b.compose(g, m)] {
                    return Err(SemError::NotSplit(format!(
                        "transport along {} ∘ {} is not the composite",
                        b.morphism(g),
                        b.morphism(m)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Precomposition with `f: C → base`.
    pub fn reindex(&self, f: &Functor) -> Family {
        Family {
            base: f.dom.clone(),
            fibers: f.obj.iter().map(|&o| self.fibers[o].clone()).collect(),
            transport: f.mor.iter().map(|&m| self.transport[m].clone()).collect(),
        }
    }

    /// The Grothendieck construction, with objects `(γ, e)` labelled as
    /// pairs.
    pub fn total(&self) -> SliceObject {
        grothendieck(&self.base, &self.fibers, &self.transport, &|b, e| Label::pair(b.clone(), e.clone()))
    }

    /// Splits a fibration `p: E → A` along its least cleavage. Fails when
    /// that cleavage does not compose strictly.
    pub fn from_fibration(p: &Functor) -> Result<Family, SemError> {
        let cl = choose_cleavage(p).map_err(SemError::Gpd)?;
        let (e, a) = (&p.dom, &p.cod);
        for b in 0..e.obj_count() {
            let x = p.obj[b];
            for &al in a.out_of(x) {
                let l = cl.lift(b, al);
                for &be in a.out_of(a.tgt(al)) {
                    if cl.lift(b, a.compose(be, al)) != e.compose(cl.lift(e.tgt(l), be), l) {
                        return Err(SemError::NotSplit(format!(
                            "chosen lifts at {} do not compose along {} then {}",
                            e.object(b),
                            a.morphism(al),
                            a.morphism(be)
                        )));
                    }
                }
            }
        }
        let mut fibers = Vec::new();
        let mut pos_o = vec![0; e.obj_count()];
        let mut pos_m = vec![usize::MAX; e.mor_count()];
        let mut vert: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for x in 0..a.obj_count() {
            let objs: Vec<usize> = (0..e.obj_count()).filter(|&b| p.obj[b] == x).collect();
            let mors: Vec<usize> = (0..e.mor_count())
                .filter(|&m| p.obj[e.src(m)] == x && a.is_identity(p.mor[m]))
                .collect();
            for (i, &b) in objs.iter().enumerate() {
                pos_o[b] = i;
            }
            for (i, &m) in mors.iter().enumerate() {
                pos_m[m] = i;
            }
            let g = FinGroupoid::build(
                objs.iter().map(|&b| e.object(b).clone()).collect(),
                mors.iter().map(|&m| (e.morphism(m).clone(), pos_o[e.src(m)], pos_o[e.tgt(m)])).collect(),
                objs.iter().map(|&b| pos_m[e.id(b)]).collect(),
                |g, h| pos_m[e.compose(mors[g], mors[h])],
            )
            .map_err(SemError::Gpd)?;
            fibers.push(g.into_arc());
            vert.push((objs, mors));
        }
        let transport = (0..a.mor_count())
            .map(|al| {
                let (s, t) = (a.src(al), a.tgt(al));
                let (objs, mors) = &vert[s];
                let obj = objs.iter().map(|&b| pos_o[e.tgt(cl.lift(b, al))]).collect();
                let mor = mors
                    .iter()
                    .map(|&mu| {
                        let l0 = cl.lift(e.src(mu), al);
                        let l1 = cl.lift(e.tgt(mu), al);
                        pos_m[e.compose(e.compose(l1, mu), e.inv(l0))]
                    })
                    .collect();
                Functor {
                    dom: fibers[s].clone(),
                    cod: fibers[t].clone(),
                    obj,
                    mor,
                }
            })
            .collect();
        let fam = Family {
            base: a.clone(),
            fibers,
            transport,
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// `∫F` over `base` with projection; `label` names the object `(γ, e)`.
/// Morphisms `(g, β)` with `β: F(g)(e) → e'` are named by applying `label`
/// to the morphism labels.
pub(crate) fn grothendieck(
    base: &Arc<FinGroupoid>,
    fibers: &[Arc<FinGroupoid>],
    transport: &[Functor],
    label: &dyn Fn(&Label, &Label) -> Label,
) -> SliceObject {
    let mut objects = Vec::new();
    let mut obj_at = HashMap::new();
    let mut obj_base = Vec::new();
    for o in 0..base.obj_count() {
        for e in 0..fibers[o].obj_count() {
            obj_at.insert((o, e), objects.len());
            objects.push(label(base.object(o), fibers[o].object(e)));
            obj_base.push(o);
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_at = HashMap::new();
    let mut data = Vec::new();
    for g in 0..base.mor_count() {
        let (s, t) = (base.src(g), base.tgt(g));
        let (fs, ft) = (&fibers[s], &fibers[t]);
        for e in 0..fs.obj_count() {
            for &be in ft.out_of(transport[g].obj[e]) {
                mor_at.insert((g, be), morphisms.len());
                morphisms.push((
                    label(base.morphism(g), ft.morphism(be)),
                    obj_at[&(s, e)],
                    obj_at[&(t, ft.tgt(be))],
                ));
                data.push((g, be));
            }
        }
    }
    let id = (0..objects.len())
        .map(|k| {
            let o = obj_base[k];
            let e = k - obj_at[&(o, 0)];
            mor_at[&(base.id(o), fibers[o].id(e))]
        })
        .collect();
    let total = FinGroupoid::build(objects, morphisms, id, |x, y| {
        let (g2, b2) = data[x];
        let (g1, b1) = data[y];
        let t = base.tgt(g2);
        mor_at[&(base.compose(g2, g1), fibers[t].compose(b2, transport[g2].mor[b1]))]
    })
    .expect("Grothendieck construction")
    .into_arc();
    let proj = Functor {
        dom: total.clone(),
        cod: base.clone(),
        obj: obj_base,
        mor: data.iter().map(|d| d.0).collect(),
    };
    SliceObject::new(proj)
}

/// The groupoid of strict sections of a family over `ga`, as built for a
/// `Π` type at one point. Objects are named by the lists of the section's
/// object and morphism images in `∫F`; morphisms by `[src, tgt, θ]` where
/// `θ` lists the components `(a, θ_a)`.
pub(crate) fn sections_groupoid(
    ga: &Arc<FinGroupoid>,
    fibers: &[Arc<FinGroupoid>],
    transport: &[Functor],
) -> Arc<FinGroupoid> {
    let total = grothendieck(ga, fibers, transport, &|b, e| Label::pair(b.clone(), e.clone()));
    let id = Functor::identity(ga);
    let secs = enumerate_functors(
        ga,
        &total.total,
        Some(OverConstraint { p: &id, q: &total.proj }),
        usize::MAX,
    );
    let t = &total.total;
    // Fiber index of the image of `a` under section `s`.
    let fib_obj = |s: &Functor, a: usize| -> usize {
        let (_, e) = t.object(s.obj[a]).as_pair().expect("pair label");
        fibers[a].object_index(e).expect("fiber object")
    };
    let fib_mor = |s: &Functor, al: usize| -> usize {
        let (_, b) = t.morphism(s.mor[al]).as_pair().expect("pair label");
        fibers[ga.tgt(al)].morphism_index(b).expect("fiber morphism")
    };
    let objects: Vec<Label> = secs
        .iter()
        .map(|s| {
            Label::List(vec![
                Label::List(s.obj.iter().map(|&o| t.object(o).clone()).collect()),
                Label::List(s.mor.iter().map(|&m| t.morphism(m).clone()).collect()),
            ])
        })
        .collect();
    let n = ga.obj_count();
    let mut morphisms = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut at: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    for (i, s) in secs.iter().enumerate() {
        for (j, s2) in secs.iter().enumerate() {
            let choices: Vec<Vec<usize>> = (0..n).map(|a| fibers[a].hom(fib_obj(s, a), fib_obj(s2, a)).collect()).collect();
            let mut cur = Vec::new();
            product(&choices, &mut cur, &mut |th: &[usize]| {
                let natural = (0..ga.mor_count()).all(|al| {
                    let (a, b) = (ga.src(al), ga.tgt(al));
                    let fb = &fibers[b];
                    fb.compose(th[b], fib_mor(s, al)) == fb.compose(fib_mor(s2, al), transport[al].mor[th[a]])
                });
                if natural {
                    let lab = Label::List(vec![
                        objects[i].clone(),
                        objects[j].clone(),
                        Label::List(
                            (0..n)
                                .map(|a| Label::pair(ga.object(a).clone(), fibers[a].morphism(th[a]).clone()))
                                .collect(),
                        ),
                    ]);
                    at.insert((i, j, th.to_vec()), morphisms.len());
                    morphisms.push((lab, i, j));
                    comps.push(th.to_vec());
                }
            });
        }
    }
    let id: Vec<usize> = (0..secs.len())
        .map(|i| at[&(i, i, (0..n).map(|a| fibers[a].id(fib_obj(&secs[i], a))).collect())])
        .collect();
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.1, m.2)).collect();
    FinGroupoid::build(objects, morphisms, id, |g, f| {
        let th: Vec<usize> = (0..n).map(|a| fibers[a].compose(comps[g][a], comps[f][a])).collect();
        at[&(ends[f].0, ends[g].1, th)]
    })
    .expect("section groupoid")
    .into_arc()
}

fn product(choices: &[Vec<usize>], cur: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if cur.len() == choices.len() {
        emit(cur);
        return;
    }
    for &c in &choices[cur.len()] {
        cur.push(c);
        product(choices, cur, emit);
        cur.pop();
    }
}

/// The value a `Π` object (as named by [`sections_groupoid`]) takes at the
/// point named `a`.
pub(crate) fn section_at<'l>(s: &'l Label, a: &Label) -> Option<&'l Label> {
    let objs = s.as_list()?.first()?.as_list()?;
    objs.iter().find_map(|l| l.as_pair().filter(|(x, _)| *x == a).map(|(_, v)| v))
}

/// The fiber morphism a `Π` object assigns to the morphism named `al`.
pub(crate) fn section_mor_at<'l>(s: &'l Label, al: &Label) -> Option<&'l Label> {
    let mors = s.as_list()?.get(1)?.as_list()?;
    mors.iter().find_map(|l| l.as_pair().filter(|(x, _)| *x == al).map(|(_, v)| v))
}

/// `(src, tgt, θ_a)` for a `Π` morphism.
pub(crate) fn family_at<'l>(m: &'l Label, a: &Label) -> Option<(&'l Label, &'l Label, &'l Label)> {
    let parts = m.as_list()?;
    let th = parts.get(2)?.as_list()?;
    let c = th.iter().find_map(|l| l.as_pair().filter(|(x, _)| *x == a).map(|(_, v)| v))?;
    Some((&parts[0], &parts[1], c))
}
