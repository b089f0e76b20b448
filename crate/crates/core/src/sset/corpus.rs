//! Seeded instances for the Π formula: small graphs and covering maps
//! between them, truncated at level `N`.
//!
//! Every nondegenerate simplex is a vertex or an edge, so with `N = 3`
//! there is a two-dimension margin above the data. Coverings (each edge
//! permutes the sheets) are exactly the truncated Kan fibrations between
//! such graphs.

use super::{SSetError, SimplicialMap, TruncatedSSet};
use crate::Label;
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

pub const TRUNCATION: usize = 3;
pub const MAX_NONDEGENERATE: usize = 4;

#[derive(Clone, Debug)]
pub struct Graph {
    pub vertices: Vec<Label>,
    pub edges: Vec<(Label, usize, usize)>,
}

impl Graph {
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn sset(&self, n: usize) -> Arc<TruncatedSSet> {
        TruncatedSSet::from_graph(n, &self.vertices, &self.edges).expect("graph").into_arc()
    }

    /// Connected component of each vertex (edges taken undirected).
    fn components(&self) -> Vec<usize> {
        let mut comp: Vec<usize> = (0..self.vertices.len()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for &(_, a, b) in &self.edges {
                let m = comp[a].min(comp[b]);
                if comp[a] != m || comp[b] != m {
                    comp[a] = m;
                    comp[b] = m;
                    changed = true;
                }
            }
        }
        comp
    }
}

pub fn random_graph(rng: &mut impl Rng, prefix: &str, max_size: usize) -> Graph {
    let nv = rng.gen_range(1..=2.min(max_size));
    let ne = rng.gen_range(0..=(max_size - nv).min(2));
    Graph {
        vertices: (0..nv).map(|i| Label::atom(format!("{prefix}{i}"))).collect(),
        edges: (0..ne)
            .map(|i| (Label::atom(format!("{prefix}e{i}")), rng.gen_range(0..nv), rng.gen_range(0..nv)))
            .collect(),
    }
}

/// A covering of `base` with the given number of sheets over each
/// component, edges permuting sheets at random.
pub fn cover(rng: &mut impl Rng, base: &Graph, sheets: &[usize]) -> (Graph, Vec<usize>, Vec<usize>) {
    let comp = base.components();
    let mut vertices = Vec::new();
    let mut vmap = Vec::new();
    let mut first = Vec::new();
    for (v, l) in base.vertices.iter().enumerate() {
        first.push(vertices.len());
        for i in 0..sheets[comp[v]] {
            vertices.push(Label::pair(l.clone(), Label::atom(i.to_string())));
            vmap.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut emap = Vec::new();
    for (e, (l, a, b)) in base.edges.iter().enumerate() {
        let k = sheets[comp[*a]];
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            edges.push((Label::pair(l.clone(), Label::atom(i.to_string())), first[*a] + i, first[*b] + j));
            emap.push(e);
        }
    }
    (Graph { vertices, edges }, vmap, emap)
}

/// The simplicial map induced by a graph map.
pub fn graph_map(
    dom: &Arc<TruncatedSSet>,
    dg: &Graph,
    cod: &Arc<TruncatedSSet>,
    cg: &Graph,
    vmap: &[usize],
    emap: &[usize],
) -> Result<SimplicialMap, SSetError> {
    SimplicialMap::from_nondegenerate(dom.clone(), cod.clone(), |k, x| {
        let l = dom.simplex(k, x);
        let target = if k == 0 {
            let v = dg.vertices.iter().position(|w| w == l).expect("vertex");
            &cg.vertices[vmap[v]]
        } else {
            let e = dg.edges.iter().position(|w| &w.0 == l).expect("edge");
            &cg.edges[emap[e]].0
        };
        cod.index_of(k, target).expect("image")
    })
}

/// A covering over `base` with at most `max` nondegenerate simplices, and
/// its projection.
pub fn random_cover(
    rng: &mut impl Rng,
    base: &Graph,
    base_sset: &Arc<TruncatedSSet>,
    max: usize,
) -> (Graph, Arc<TruncatedSSet>, SimplicialMap) {
    let comp = base.components();
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut sheets;
    loop {
        sheets = (0..ncomp).map(|_| rng.gen_range(1..=2)).collect::<Vec<_>>();
        let size: usize = base
            .vertices
            .iter()
            .enumerate()
            .map(|(v, _)| sheets[comp[v]])
            .chain(base.edges.iter().map(|&(_, a, _)| sheets[comp[a]]))
            .sum();
        if size <= max.max(base.size()) {
            break;
        }
    }
    let (g, vm, em) = cover(rng, base, &sheets);
    let x = g.sset(base_sset.truncation());
    let p = graph_map(&x, &g, base_sset, base, &vm, &em).expect("covering map");
    (g, x, p)
}

/// `f: B → A`, `p: X → B` and `q: Y → A`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub f: SimplicialMap,
    pub p: SimplicialMap,
    pub q: SimplicialMap,
}

pub fn instance(rng: &mut impl Rng) -> Instance {
    let n = TRUNCATION;
    let ag = random_graph(rng, "a", MAX_NONDEGENERATE);
    let a = ag.sset(n);
    let (bg, _, f) = random_cover(rng, &ag, &a, MAX_NONDEGENERATE);
    let b = f.dom.clone();
    let (_, _, p) = random_cover(rng, &bg, &b, MAX_NONDEGENERATE);
    // Y: the identity, a covering, or a simplex of A of dimension ≤ 1.
    let q = match rng.gen_range(0..3) {
        0 => SimplicialMap::identity(&a),
        1 => random_cover(rng, &ag, &a, MAX_NONDEGENERATE).2,
        _ => {
            let k = if ag.edges.is_empty() { 0 } else { rng.gen_range(0..=1) };
            let x = rng.gen_range(0..if k == 0 { ag.vertices.len() } else { ag.edges.len() });
            let idx = a.index_of(k, if k == 0 { &ag.vertices[x] } else { &ag.edges[x].0 }).expect("simplex");
            SimplicialMap::classifying(&a, k, idx).expect("classifying map")
        }
    };
    Instance { f, p, q }
}

/// `A = Δ^0`, `B` two points, `X` with fibers of sizes 2 and 3.
pub fn discrete_instance(n: usize) -> Instance {
    let pt = Arc::new(TruncatedSSet::point(n));
    let bl = [Label::atom("b0"), Label::atom("b1")];
    let b = TruncatedSSet::discrete(n, &bl).expect("discrete").into_arc();
    let xl: Vec<Label> = ["x0", "x1", "y0", "y1", "y2"].iter().map(|s| Label::atom(*s)).collect();
    let x = TruncatedSSet::discrete(n, &xl).expect("discrete").into_arc();
    let f = SimplicialMap::to_point(&b);
    let f = SimplicialMap { cod: pt.clone(), ..f };
    let p = SimplicialMap::from_nondegenerate(x.clone(), b.clone(), |_, i| usize::from(i >= 2)).expect("map");
    Instance {
        f,
        p,
        q: SimplicialMap::identity(&pt),
    }
}
