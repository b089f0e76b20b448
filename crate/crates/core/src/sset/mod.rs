//! Truncated finite simplicial sets.
//!
//! A [`TruncatedSSet`] stores simplices of dimension `0..=N` with explicit
//! face and degeneracy tables. Degenerate simplices are stored like any
//! other; nothing is normalized away.

mod io;
mod pi;
pub mod corpus;
#[cfg(test)]
mod tests;

pub use io::{map_from_json, map_to_json, sset_from_json, sset_to_json};
pub use pi::{
    enumerate_maps, horn_fillers_exist, is_fibration_truncated, pi_f_formula, pullback_sset, verify_sset_adjunction,
    AdjunctionReport, PiFormula, SPullback,
};

use crate::gpd::FinGroupoid;
use crate::Label;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SSetError {
    #[error("Δ^{n} does not fit in truncation level {trunc}")]
    TruncationTooLow { n: usize, trunc: usize },
    #[error("truncation levels differ: {0} and {1}")]
    LevelMismatch(usize, usize),
    #[error("maps do not share a codomain")]
    CodomainMismatch,
    #[error("simplicial identity fails: {0}")]
    Identity(String),
    #[error("not a simplicial map: {0}")]
    NotAMap(String),
    #[error("not a fibration: {0}")]
    NotAFibration(String),
    #[error("malformed input: {0}")]
    Format(String),
}

type R<T> = Result<T, SSetError>;

/// A simplicial set truncated at level `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSSet {
    n: usize,
    simplices: Vec<Vec<Label>>,
    /// `d[k][i][x]` is `d_i x` for `x` of dimension `k ≥ 1`.
    d: Vec<Vec<Vec<usize>>>,
    /// `s[k][j][x]` is `s_j x` for `x` of dimension `k < N`.
    s: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Label, usize>>,
}

/// Is `v` a monotone map `[v.len()-1] → [n]`?
fn monotone(v: &[usize], n: usize) -> bool {
    v.windows(2).all(|w| w[0] <= w[1]) && v.iter().all(|&x| x <= n)
}

/// Monotone maps `[k] → [n]` in lexicographic order.
pub fn monotone_maps(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k + 1);
    fn go(k: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(k, n, v, cur, out);
            cur.pop();
        }
    }
    go(k, n, 0, &mut cur, &mut out);
    out
}

fn digits(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("")
}

impl TruncatedSSet {
    /// Builds and checks every simplicial identity.
    pub fn new(
        n: usize,
        simplices: Vec<Vec<Label>>,
        d: Vec<Vec<Vec<usize>>>,
        s: Vec<Vec<Vec<usize>>>,
    ) -> R<TruncatedSSet> {
        let x = TruncatedSSet::unchecked(n, simplices, d, s)?;
        x.validate()?;
        Ok(x)
    }

    fn unchecked(n: usize, simplices: Vec<Vec<Label>>, d: Vec<Vec<Vec<usize>>>, s: Vec<Vec<Vec<usize>>>) -> R<TruncatedSSet> {
        let bad = |m: String| Err(SSetError::Format(m));
        if simplices.len() != n + 1 || d.len() != n + 1 || s.len() != n + 1 {
            return bad(format!("expected {} levels", n + 1));
        }
        for k in 0..=n {
            let faces = if k == 0 { 0 } else { k + 1 };
            let degens = if k == n { 0 } else { k + 1 };
            if d[k].len() != faces || s[k].len() != degens {
                return bad(format!("wrong number of operators at level {k}"));
            }
            for t in &d[k] {
                if t.len() != simplices[k].len() || t.iter().any(|&y| y >= simplices[k - 1].len()) {
                    return bad(format!("malformed face table at level {k}"));
                }
            }
            for t in &s[k] {
                if t.len() != simplices[k].len() || t.iter().any(|&y| y >= simplices[k + 1].len()) {
                    return bad(format!("malformed degeneracy table at level {k}"));
                }
            }
        }
        let index: Vec<HashMap<Label, usize>> = simplices
            .iter()
            .map(|lv| lv.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect())
            .collect();
        if index.iter().zip(&simplices).any(|(m, lv)| m.len() != lv.len()) {
            return bad("simplex labels must be distinct within a level".into());
        }
        Ok(TruncatedSSet { n, simplices, d, s, index })
    }

    /// Checks all simplicial identities among the stored tables.
    pub fn validate(&self) -> R<()> {
        let fail = |what: String| Err(SSetError::Identity(what));
        for k in 0..=self.n {
            for x in 0..self.count(k) {
                let name = || format!("{} in dimension {k}", self.simplices[k][x]);
                if k >= 2 {
                    for j in 1..=k {
                        for i in 0..j {
                            if self.face(k - 1, i, self.face(k, j, x)) != self.face(k - 1, j - 1, self.face(k, i, x)) {
                                return fail(format!("d{i} d{j} = d{} d{i} at {}", j - 1, name()));
                            }
                        }
                    }
                }
                if k < self.n {
                    for j in 0..=k {
                        let y = self.degen(k, j, x);
                        for i in 0..=k + 1 {
                            let lhs = self.face(k + 1, i, y);
                            let rhs = if i < j {
                                self.degen(k - 1, j - 1, self.face(k, i, x))
                            } else if i == j || i == j + 1 {
                                x
                            } else {
                                self.degen(k - 1, j, self.face(k, i - 1, x))
                            };
                            if lhs != rhs {
                                return fail(format!("d{i} s{j} at {}", name()));
                            }
                        }
                    }
                }
                if k + 2 <= self.n {
                    for j in 0..=k {
                        for i in 0..=j {
                            let lhs = self.degen(k + 1, i, self.degen(k, j, x));
                            let rhs = self.degen(k + 1, j + 1, self.degen(k, i, x));
                            if lhs != rhs {
                                return fail(format!("s{i} s{j} = s{} s{i} at {}", j + 1, name()));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices[k].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.n).map(|k| self.count(k)).collect()
    }

    pub fn simplex(&self, k: usize, x: usize) -> &Label {
        &self.simplices[k][x]
    }

    pub fn level(&self, k: usize) -> &[Label] {
        &self.simplices[k]
    }

    pub fn index_of(&self, k: usize, l: &Label) -> Option<usize> {
        self.index[k].get(l).copied()
    }

    /// `d_i x` for `x` of dimension `k`.
    pub fn face(&self, k: usize, i: usize, x: usize) -> usize {
        self.d[k][i][x]
    }

    /// `s_j x` for `x` of dimension `k`.
    pub fn degen(&self, k: usize, j: usize, x: usize) -> usize {
        self.s[k][j][x]
    }

    pub fn is_degenerate(&self, k: usize, x: usize) -> bool {
        k > 0 && (0..k).any(|j| self.degen(k - 1, j, self.face(k, j, x)) == x)
    }

    /// Some `(j, y)` with `x = s_j y`.
    pub fn degeneracy_of(&self, k: usize, x: usize) -> Option<(usize, usize)> {
        if k == 0 {
            return None;
        }
        (0..k).map(|j| (j, self.face(k, j, x))).find(|&(j, y)| self.degen(k - 1, j, y) == x)
    }

    pub fn nondegenerate_count(&self) -> usize {
        (0..=self.n).map(|k| (0..self.count(k)).filter(|&x| !self.is_degenerate(k, x)).count()).sum()
    }

    /// Highest dimension of a nondegenerate simplex.
    pub fn dimension(&self) -> usize {
        (0..=self.n)
            .rev()
            .find(|&k| (0..self.count(k)).any(|x| !self.is_degenerate(k, x)))
            .unwrap_or(0)
    }

    /// `θ* x` for a monotone `θ: [m] → [k]` given as its value list, with
    /// `x` of dimension `k`.
    pub fn act(&self, k: usize, x: usize, theta: &[usize]) -> usize {
        debug_assert!(monotone(theta, k));
        let m = theta.len() - 1;
        // A missing value i: θ = δ_i θ'.
        if let Some(i) = (0..=k).rev().find(|i| !theta.contains(i)) {
            let t: Vec<usize> = theta.iter().map(|&v| if v < i { v } else { v - 1 }).collect();
            return self.act(k - 1, self.face(k, i, x), &t);
        }
        // A repeated value at j, j+1: θ = θ' σ_j.
        if let Some(j) = (0..m).find(|&j| theta[j] == theta[j + 1]) {
            let t: Vec<usize> = theta.iter().enumerate().filter(|&(p, _)| p != j + 1).map(|(_, &v)| v).collect();
            let y = self.act(k, x, &t);
            return self.degen(m - 1, j, y);
        }
        x
    }

    /// The vertices of a simplex, in order.
    pub fn vertices(&self, k: usize, x: usize) -> Vec<usize> {
        (0..=k).map(|v| self.act(k, x, &[v])).collect()
    }

    pub fn into_arc(self) -> Arc<TruncatedSSet> {
        Arc::new(self)
    }

    /// The same simplices up to level `m ≤ N`.
    pub fn truncate(&self, m: usize) -> R<TruncatedSSet> {
        if m > self.n {
            return Err(SSetError::Format(format!("cannot raise truncation from {} to {m}", self.n)));
        }
        let mut s = self.s[..=m].to_vec();
        s[m] = Vec::new();
        TruncatedSSet::new(m, self.simplices[..=m].to_vec(), self.d[..=m].to_vec(), s)
    }

    /// `Δ^k` truncated at `n`: simplices are monotone maps named by their
    /// value lists.
    pub fn standard_simplex(k: usize, n: usize) -> R<TruncatedSSet> {
        if k > n {
            return Err(SSetError::TruncationTooLow { n: k, trunc: n });
        }
        let maps: Vec<Vec<Vec<usize>>> = (0..=n).map(|m| monotone_maps(m, k)).collect();
        let index: Vec<HashMap<&Vec<usize>, usize>> =
            maps.iter().map(|lv| lv.iter().enumerate().map(|(i, v)| (v, i)).collect()).collect();
        let simplices = maps.iter().map(|lv| lv.iter().map(|v| Label::atom(digits(v))).collect()).collect();
        let d = (0..=n)
            .map(|m| {
                if m == 0 {
                    return Vec::new();
                }
                (0..=m)
                    .map(|i| {
                        maps[m]
                            .iter()
                            .map(|v| {
                                let mut w = v.clone();
                                w.remove(i);
                                index[m - 1][&w]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let s = (0..=n)
            .map(|m| {
                if m == n {
                    return Vec::new();
                }
                (0..=m)
                    .map(|j| {
                        maps[m]
                            .iter()
                            .map(|v| {
                                let mut w = v.clone();
                                w.insert(j, v[j]);
                                index[m + 1][&w]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        TruncatedSSet::new(n, simplices, d, s)
    }

    /// The simplicial set generated by a directed multigraph: vertices,
    /// and edges `(label, source, target)`. The only nondegenerate
    /// simplices are the vertices and edges.
    pub fn from_graph(n: usize, vertices: &[Label], edges: &[(Label, usize, usize)]) -> R<TruncatedSSet> {
        // A k-simplex is a vertex, or an edge with a surjection [k] → [1],
        // written as the position where it jumps.
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Cell {
            Vertex(usize),
            Edge(usize, usize),
        }
        if edges.iter().any(|&(_, a, b)| a >= vertices.len() || b >= vertices.len()) {
            return Err(SSetError::Format("edge endpoint out of range".into()));
        }
        let cells: Vec<Vec<Cell>> = (0..=n)
            .map(|k| {
                let mut lv: Vec<Cell> = (0..vertices.len()).map(Cell::Vertex).collect();
                for e in 0..edges.len() {
                    lv.extend((1..=k).map(|p| Cell::Edge(e, p)));
                }
                lv
            })
            .collect();
        let index: Vec<HashMap<Cell, usize>> =
            cells.iter().map(|lv| lv.iter().enumerate().map(|(i, &c)| (c, i)).collect()).collect();
        let label = |k: usize, c: Cell| match c {
            Cell::Vertex(v) if k == 0 => vertices[v].clone(),
            Cell::Vertex(v) => Label::pair(vertices[v].clone(), Label::atom(digits(&vec![0; k + 1]))),
            Cell::Edge(e, _) if k == 1 => edges[e].0.clone(),
            Cell::Edge(e, p) => {
                let v: Vec<usize> = (0..=k).map(|q| usize::from(q >= p)).collect();
                Label::pair(edges[e].0.clone(), Label::atom(digits(&v)))
            }
        };
        let simplices = (0..=n).map(|k| cells[k].iter().map(|&c| label(k, c)).collect()).collect();
        // d_i drops position i of the jump vector; s_j doubles position j.
        let face = |k: usize, i: usize, c: Cell| -> Cell {
            match c {
                Cell::Vertex(v) => Cell::Vertex(v),
                Cell::Edge(e, p) => {
                    let np = if i < p { p - 1 } else { p };
                    if np == 0 {
                        Cell::Vertex(edges[e].2)
                    } else if np == k {
                        Cell::Vertex(edges[e].1)
                    } else {
                        Cell::Edge(e, np)
                    }
                }
            }
        };
        let degen = |j: usize, c: Cell| -> Cell {
            match c {
                Cell::Vertex(v) => Cell::Vertex(v),
                Cell::Edge(e, p) => Cell::Edge(e, if j < p { p + 1 } else { p }),
            }
        };
        let d = (0..=n)
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                (0..=k)
                    .map(|i| cells[k].iter().map(|&c| index[k - 1][&face(k, i, c)]).collect())
                    .collect()
            })
            .collect();
        let s = (0..=n)
            .map(|k| {
                if k == n {
                    return Vec::new();
                }
                (0..=k).map(|j| cells[k].iter().map(|&c| index[k + 1][&degen(j, c)]).collect()).collect()
            })
            .collect();
        TruncatedSSet::new(n, simplices, d, s)
    }

    /// A finite set as a constant simplicial set.
    pub fn discrete(n: usize, points: &[Label]) -> R<TruncatedSSet> {
        TruncatedSSet::from_graph(n, points, &[])
    }

    pub fn point(n: usize) -> TruncatedSSet {
        TruncatedSSet::discrete(n, &[Label::atom("*")]).expect("point")
    }

    /// The nerve of a groupoid: `k`-simplices are composable strings of
    /// `k` morphisms.
    pub fn nerve(g: &FinGroupoid, n: usize) -> R<TruncatedSSet> {
        let mut strings: Vec<Vec<Vec<usize>>> = vec![(0..g.obj_count()).map(|o| vec![g.id(o)]).collect()];
        for k in 1..=n {
            let mut lv = Vec::new();
            if k == 1 {
                lv = (0..g.mor_count()).map(|m| vec![m]).collect();
            } else {
                for w in &strings[k - 1] {
                    let last = *w.last().expect("nonempty");
                    for &m in g.out_of(g.tgt(last)) {
                        let mut v = w.clone();
                        v.push(m);
                        lv.push(v);
                    }
                }
            }
            strings.push(lv);
        }
        // Level 0 stores the identity of each object.
        let index: Vec<HashMap<&Vec<usize>, usize>> =
            strings.iter().map(|lv| lv.iter().enumerate().map(|(i, v)| (v, i)).collect()).collect();
        let obj_of = |v: &Vec<usize>| vec![g.id(g.src(v[0]))];
        let simplices = strings
            .iter()
            .enumerate()
            .map(|(k, lv)| {
                lv.iter()
                    .map(|v| match k {
                        0 => g.object(g.src(v[0])).clone(),
                        1 => g.morphism(v[0]).clone(),
                        _ => Label::List(v.iter().map(|&m| g.morphism(m).clone()).collect()),
                    })
                    .collect()
            })
            .collect();
        let d = (0..=n)
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                (0..=k)
                    .map(|i| {
                        strings[k]
                            .iter()
                            .map(|v| {
                                let w: Vec<usize> = if k == 1 {
                                    let o = if i == 0 { g.tgt(v[0]) } else { g.src(v[0]) };
                                    vec![g.id(o)]
                                } else if i == 0 {
                                    v[1..].to_vec()
                                } else if i == k {
                                    v[..k - 1].to_vec()
                                } else {
                                    let mut w = v[..i - 1].to_vec();
                                    w.push(g.compose(v[i], v[i - 1]));
                                    w.extend_from_slice(&v[i + 1..]);
                                    w
                                };
                                index[k - 1][&w]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let s = (0..=n)
            .map(|k| {
                if k == n {
                    return Vec::new();
                }
                (0..=k)
                    .map(|j| {
                        strings[k]
                            .iter()
                            .map(|v| {
                                let w: Vec<usize> = if k == 0 {
                                    obj_of(v)
                                } else {
                                    // Insert an identity at position j.
                                    let at = if j == 0 { g.src(v[0]) } else { g.tgt(v[j - 1]) };
                                    let mut w = v.clone();
                                    w.insert(j, g.id(at));
                                    w
                                };
                                index[k + 1][&w]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        TruncatedSSet::new(n, simplices, d, s)
    }
}

/// Level-wise functions commuting with faces and degeneracies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub dom: Arc<TruncatedSSet>,
    pub cod: Arc<TruncatedSSet>,
    pub maps: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(dom: Arc<TruncatedSSet>, cod: Arc<TruncatedSSet>, maps: Vec<Vec<usize>>) -> R<SimplicialMap> {
        let f = SimplicialMap { dom, cod, maps };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(x: &Arc<TruncatedSSet>) -> SimplicialMap {
        SimplicialMap {
            dom: x.clone(),
            cod: x.clone(),
            maps: (0..=x.n).map(|k| (0..x.count(k)).collect()).collect(),
        }
    }

    /// The unique map to the point.
    pub fn to_point(x: &Arc<TruncatedSSet>) -> SimplicialMap {
        let pt = TruncatedSSet::point(x.n).into_arc();
        SimplicialMap {
            dom: x.clone(),
            cod: pt,
            maps: (0..=x.n).map(|k| vec![0; x.count(k)]).collect(),
        }
    }

    pub fn validate(&self) -> R<()> {
        let (x, y) = (&self.dom, &self.cod);
        if x.n != y.n {
            return Err(SSetError::LevelMismatch(x.n, y.n));
        }
        if self.maps.len() != x.n + 1
            || (0..=x.n).any(|k| self.maps[k].len() != x.count(k) || self.maps[k].iter().any(|&v| v >= y.count(k)))
        {
            return Err(SSetError::NotAMap("malformed tables".into()));
        }
        for k in 0..=x.n {
            for s in 0..x.count(k) {
                let fs = self.maps[k][s];
                if k > 0 {
                    for i in 0..=k {
                        if self.maps[k - 1][x.face(k, i, s)] != y.face(k, i, fs) {
                            return Err(SSetError::NotAMap(format!("d{i} at {}", x.simplex(k, s))));
                        }
                    }
                }
                if k < x.n {
                    for j in 0..=k {
                        if self.maps[k + 1][x.degen(k, j, s)] != y.degen(k, j, fs) {
                            return Err(SSetError::NotAMap(format!("s{j} at {}", x.simplex(k, s))));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, k: usize, x: usize) -> usize {
        self.maps[k][x]
    }

    pub fn truncate(&self, m: usize) -> R<SimplicialMap> {
        SimplicialMap::new(
            self.dom.truncate(m)?.into_arc(),
            self.cod.truncate(m)?.into_arc(),
            self.maps[..=m].to_vec(),
        )
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &SimplicialMap) -> R<SimplicialMap> {
        if g.cod != self.dom {
            return Err(SSetError::CodomainMismatch);
        }
        Ok(SimplicialMap {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            maps: g.maps.iter().enumerate().map(|(k, m)| m.iter().map(|&v| self.maps[k][v]).collect()).collect(),
        })
    }

    /// Extends a choice on nondegenerate simplices to all simplices by
    /// `h(s_j y) = s_j h(y)`, then checks the result.
    pub fn from_nondegenerate(
        dom: Arc<TruncatedSSet>,
        cod: Arc<TruncatedSSet>,
        nondeg: impl Fn(usize, usize) -> usize,
    ) -> R<SimplicialMap> {
        let mut maps: Vec<Vec<usize>> = Vec::new();
        for k in 0..=dom.n {
            let lv = (0..dom.count(k))
                .map(|x| match dom.degeneracy_of(k, x) {
                    Some((j, y)) => cod.degen(k - 1, j, maps[k - 1][y]),
                    None => nondeg(k, x),
                })
                .collect();
            maps.push(lv);
        }
        SimplicialMap::new(dom, cod, maps)
    }

    /// The map `Δ^k → X` classifying a `k`-simplex.
    pub fn classifying(x: &Arc<TruncatedSSet>, k: usize, s: usize) -> R<SimplicialMap> {
        let delta = TruncatedSSet::standard_simplex(k, x.n)?.into_arc();
        let maps = (0..=x.n).map(|m| monotone_maps(m, k).iter().map(|th| x.act(k, s, th)).collect()).collect();
        Ok(SimplicialMap { dom: delta, cod: x.clone(), maps })
    }
}
