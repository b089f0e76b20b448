//! Pullbacks, horn filling, and the dependent product
//! `Π_f(X)_n = { (a, h) | a ∈ A_n, h: Δ^n ×_A B → X, p ∘ h = ā }`.

use super::{SSetError, SimplicialMap, TruncatedSSet, R};
use crate::Label;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

fn digits(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("")
}

#[derive(Clone, Debug)]
pub struct SPullback {
    pub total: Arc<TruncatedSSet>,
    pub p1: SimplicialMap,
    pub p2: SimplicialMap,
}

/// Level-wise pairs `(b, c)` with `f b = g c`.
pub fn pullback_sset(f: &SimplicialMap, g: &SimplicialMap) -> R<SPullback> {
    let (b, c) = (&f.dom, &g.dom);
    if f.cod.truncation() != g.cod.truncation() {
        return Err(SSetError::LevelMismatch(f.cod.truncation(), g.cod.truncation()));
    }
    if f.cod != g.cod {
        return Err(SSetError::CodomainMismatch);
    }
    let n = b.truncation();
    let pairs: Vec<Vec<(usize, usize)>> = (0..=n)
        .map(|k| {
            let mut by: HashMap<usize, Vec<usize>> = HashMap::new();
            for y in 0..c.count(k) {
                by.entry(g.apply(k, y)).or_default().push(y);
            }
            (0..b.count(k))
                .flat_map(|x| by.get(&f.apply(k, x)).into_iter().flatten().map(move |&y| (x, y)))
                .collect()
        })
        .collect();
    let index: Vec<HashMap<(usize, usize), usize>> =
        pairs.iter().map(|lv| lv.iter().enumerate().map(|(i, &p)| (p, i)).collect()).collect();
    let simplices = (0..=n)
        .map(|k| pairs[k].iter().map(|&(x, y)| Label::pair(b.simplex(k, x).clone(), c.simplex(k, y).clone())).collect())
        .collect();
    let d = (0..=n)
        .map(|k| {
            if k == 0 {
                return Vec::new();
            }
            (0..=k)
                .map(|i| pairs[k].iter().map(|&(x, y)| index[k - 1][&(b.face(k, i, x), c.face(k, i, y))]).collect())
                .collect()
        })
        .collect();
    let s = (0..=n)
        .map(|k| {
            if k == n {
                return Vec::new();
            }
            (0..=k)
                .map(|j| pairs[k].iter().map(|&(x, y)| index[k + 1][&(b.degen(k, j, x), c.degen(k, j, y))]).collect())
                .collect()
        })
        .collect();
    let total = TruncatedSSet::new(n, simplices, d, s)?.into_arc();
    let proj = |which: usize, cod: &Arc<TruncatedSSet>| SimplicialMap {
        dom: total.clone(),
        cod: cod.clone(),
        maps: pairs
            .iter()
            .map(|lv| lv.iter().map(|&(x, y)| if which == 0 { x } else { y }).collect())
            .collect(),
    };
    Ok(SPullback {
        p1: proj(0, b),
        p2: proj(1, c),
        total,
    })
}

/// All simplicial maps `h: K → X`, optionally with `p ∘ h = a` for
/// `p: X → Y`, `a: K → Y`. Stops after `limit` maps.
pub fn enumerate_maps(
    k: &Arc<TruncatedSSet>,
    x: &Arc<TruncatedSSet>,
    over: Option<(&SimplicialMap, &SimplicialMap)>,
    limit: usize,
) -> Vec<SimplicialMap> {
    let n = k.truncation();
    if x.truncation() != n {
        return Vec::new();
    }
    // Simplices ordered so that faces come first and each simplex follows
    // its last vertex closely; that way faces are checked early.
    let mut order: Vec<(usize, usize, usize)> = (0..=n)
        .flat_map(|l| (0..k.count(l)).map(move |s| (l, s)))
        .map(|(l, s)| (k.vertices(l, s).into_iter().max().unwrap_or(0), l, s))
        .collect();
    order.sort();
    // Candidates in X by their tuple of faces.
    let by_faces: Vec<HashMap<Vec<usize>, Vec<usize>>> = (0..=n)
        .map(|l| {
            let mut m: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            for t in 0..x.count(l) {
                let fs = if l == 0 { Vec::new() } else { (0..=l).map(|i| x.face(l, i, t)).collect() };
                m.entry(fs).or_default().push(t);
            }
            m
        })
        .collect();
    let mut h: Vec<Vec<usize>> = (0..=n).map(|l| vec![usize::MAX; k.count(l)]).collect();
    let mut out = Vec::new();
    fn go(
        pos: usize,
        order: &[(usize, usize, usize)],
        k: &TruncatedSSet,
        x: &TruncatedSSet,
        over: Option<(&SimplicialMap, &SimplicialMap)>,
        by_faces: &[HashMap<Vec<usize>, Vec<usize>>],
        h: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if pos == order.len() {
            out.push(h.clone());
            return;
        }
        let (_, l, s) = order[pos];
        let ok_over = |t: usize| over.is_none_or(|(p, a)| p.apply(l, t) == a.apply(l, s));
        if let Some((j, tau)) = k.degeneracy_of(l, s) {
            let t = x.degen(l - 1, j, h[l - 1][tau]);
            let faces_ok = (0..=l).all(|i| x.face(l, i, t) == h[l - 1][k.face(l, i, s)]);
            if faces_ok && ok_over(t) {
                h[l][s] = t;
                go(pos + 1, order, k, x, over, by_faces, h, out, limit);
                h[l][s] = usize::MAX;
            }
            return;
        }
        let fs: Vec<usize> = if l == 0 { Vec::new() } else { (0..=l).map(|i| h[l - 1][k.face(l, i, s)]).collect() };
        let Some(cands) = by_faces[l].get(&fs) else { return };
        for &t in cands {
            if ok_over(t) {
                h[l][s] = t;
                go(pos + 1, order, k, x, over, by_faces, h, out, limit);
                h[l][s] = usize::MAX;
            }
        }
    }
    let mut raw = Vec::new();
    go(0, &order, k, x, over, &by_faces, &mut h, &mut raw, limit);
    for maps in raw {
        if let Ok(m) = SimplicialMap::new(k.clone(), x.clone(), maps) {
            out.push(m);
        }
    }
    out
}

/// The first horn `Λ^n_k → X` over an `n`-simplex `y` of `Y` with no
/// filler, as `(n, k, y)`.
pub fn horn_fillers_exist(p: &SimplicialMap, upto: usize) -> Option<(usize, usize, usize)> {
    let (x, y) = (&p.dom, &p.cod);
    let upto = upto.min(x.truncation());
    for n in 1..=upto {
        // Fillers are looked up by (faces except k, image).
        for yv in 0..y.count(n) {
            for k in 0..=n {
                let fillers: HashSet<Vec<usize>> = (0..x.count(n))
                    .filter(|&t| p.apply(n, t) == yv)
                    .map(|t| (0..=n).filter(|&i| i != k).map(|i| x.face(n, i, t)).collect())
                    .collect();
                let cands: Vec<Vec<usize>> = (0..=n)
                    .map(|i| {
                        if i == k {
                            return Vec::new();
                        }
                        let want = y.face(n, i, yv);
                        (0..x.count(n - 1)).filter(|&t| p.apply(n - 1, t) == want).collect()
                    })
                    .collect();
                let mut horn = vec![usize::MAX; n + 1];
                if !all_horns_fill(x, n, k, 0, &cands, &mut horn, &fillers) {
                    return Some((n, k, yv));
                }
            }
        }
    }
    None
}

fn all_horns_fill(
    x: &TruncatedSSet,
    n: usize,
    k: usize,
    i: usize,
    cands: &[Vec<usize>],
    horn: &mut Vec<usize>,
    fillers: &HashSet<Vec<usize>>,
) -> bool {
    if i > n {
        let key: Vec<usize> = (0..=n).filter(|&j| j != k).map(|j| horn[j]).collect();
        return fillers.contains(&key);
    }
    if i == k {
        return all_horns_fill(x, n, k, i + 1, cands, horn, fillers);
    }
    for &c in &cands[i] {
        // d_a x_i = d_{i-1} x_a for a < i.
        let compatible = n < 2 || (0..i).filter(|&a| a != k).all(|a| x.face(n - 1, a, c) == x.face(n - 1, i - 1, horn[a]));
        if compatible {
            horn[i] = c;
            if !all_horns_fill(x, n, k, i + 1, cands, horn, fillers) {
                return false;
            }
        }
    }
    horn[i] = usize::MAX;
    true
}

/// Every horn `Λ^n_k → Δ^n` with `1 ≤ n ≤ upto` lifts against `p`.
pub fn is_fibration_truncated(p: &SimplicialMap, upto: usize) -> bool {
    horn_fillers_exist(p, upto).is_none()
}

/// `Π_f X` over `A`, with the data each simplex was built from.
#[derive(Clone, Debug)]
pub struct PiFormula {
    pub total: Arc<TruncatedSSet>,
    pub proj: SimplicialMap,
    /// `Δ^n ×_A B` for each `n`-simplex `a` of `A`.
    pub domains: Vec<Vec<SPullback>>,
    /// `(a, h)` for each simplex of the total.
    pub elements: Vec<Vec<(usize, SimplicialMap)>>,
    index: Vec<HashMap<(usize, Vec<Vec<usize>>), usize>>,
}

impl PiFormula {
    /// The simplex `(a, h)` of dimension `n`, if `h` is a section over `a`.
    pub fn find(&self, n: usize, a: usize, h: &[Vec<usize>]) -> Option<usize> {
        self.index[n].get(&(a, h.to_vec())).copied()
    }

    /// Index of `(φ, b)` in `Δ^n ×_A B` for `a` of dimension `n`.
    fn pair_at(&self, f_dom: &TruncatedSSet, n: usize, a: usize, l: usize, phi: &[usize], b: usize) -> Option<usize> {
        let lab = Label::pair(Label::atom(digits(phi)), f_dom.simplex(l, b).clone());
        self.domains[n][a].total.index_of(l, &lab)
    }
}

/// `Π_f(X, p)` for fibrations `f: B → A` and `p: X → B`.
pub fn pi_f_formula(f: &SimplicialMap, p: &SimplicialMap) -> R<PiFormula> {
    let (a, b, x) = (&f.cod, &f.dom, &p.dom);
    let n = a.truncation();
    if p.cod != f.dom {
        return Err(SSetError::CodomainMismatch);
    }
    if x.truncation() != n || b.truncation() != n {
        return Err(SSetError::LevelMismatch(n, x.truncation()));
    }
    if let Some((d, k, _)) = horn_fillers_exist(f, n) {
        return Err(SSetError::NotAFibration(format!("f has an unfillable horn Λ^{d}_{k}")));
    }
    if let Some((d, k, _)) = horn_fillers_exist(p, n) {
        return Err(SSetError::NotAFibration(format!("p has an unfillable horn Λ^{d}_{k}")));
    }
    let mut domains = Vec::new();
    let mut elements = Vec::new();
    let mut index = Vec::new();
    for m in 0..=n {
        let mut doms = Vec::new();
        let mut els = Vec::new();
        let mut idx = HashMap::new();
        for av in 0..a.count(m) {
            let abar = SimplicialMap::classifying(a, m, av)?;
            let pb = pullback_sset(&abar, f)?;
            for h in enumerate_maps(&pb.total, x, Some((p, &pb.p2)), usize::MAX) {
                idx.insert((av, h.maps.clone()), els.len());
                els.push((av, h));
            }
            doms.push(pb);
        }
        domains.push(doms);
        elements.push(els);
        index.push(idx);
    }
    let mut pi = PiFormula {
        total: TruncatedSSet::point(0).into_arc(),
        proj: SimplicialMap::identity(&TruncatedSSet::point(0).into_arc()),
        domains,
        elements,
        index,
    };
    // θ* (a, h) = (θ* a, h ∘ (θ ×_A B)).
    let restrict = |m: usize, e: usize, theta: &[usize]| -> R<usize> {
        let (av, h) = &pi.elements[m][e];
        let mm = theta.len() - 1;
        let av2 = a.act(m, *av, theta);
        let dom2 = &pi.domains[mm][av2].total;
        let maps: Vec<Vec<usize>> = (0..=n)
            .map(|l| {
                (0..dom2.count(l))
                    .map(|s| {
                        let (phi, bl) = dom2.simplex(l, s).as_pair().expect("pullback label");
                        let phi: Vec<usize> = phi.to_string().bytes().map(|c| (c - b'0') as usize).collect();
                        let bv = b.index_of(l, bl).expect("B simplex");
                        let comp: Vec<usize> = phi.iter().map(|&v| theta[v]).collect();
                        let at = pi.pair_at(b, m, *av, l, &comp, bv).expect("restricted simplex");
                        h.maps[l][at]
                    })
                    .collect()
            })
            .collect();
        pi.find(mm, av2, &maps)
            .ok_or_else(|| SSetError::Identity("restriction leaves the dependent product".into()))
    };
    let mut d = vec![Vec::new(); n + 1];
    let mut s = vec![Vec::new(); n + 1];
    for m in 0..=n {
        let count = pi.elements[m].len();
        if m > 0 {
            for i in 0..=m {
                let delta: Vec<usize> = (0..=m).filter(|&v| v != i).collect();
                d[m].push((0..count).map(|e| restrict(m, e, &delta)).collect::<R<Vec<_>>>()?);
            }
        }
        if m < n {
            for j in 0..=m {
                let sigma: Vec<usize> = (0..=m + 1).map(|v| if v <= j { v } else { v - 1 }).collect();
                s[m].push((0..count).map(|e| restrict(m, e, &sigma)).collect::<R<Vec<_>>>()?);
            }
        }
    }
    let simplices: Vec<Vec<Label>> = pi
        .elements
        .iter()
        .enumerate()
        .map(|(m, els)| {
            els.iter()
                .map(|(av, h)| {
                    let vals = h
                        .maps
                        .iter()
                        .enumerate()
                        .map(|(l, lv)| Label::List(lv.iter().map(|&t| x.simplex(l, t).clone()).collect()))
                        .collect();
                    Label::pair(a.simplex(m, *av).clone(), Label::List(vals))
                })
                .collect()
        })
        .collect();
    let total = TruncatedSSet::new(n, simplices, d, s)?.into_arc();
    let proj = SimplicialMap::new(
        total.clone(),
        a.clone(),
        pi.elements.iter().map(|els| els.iter().map(|(av, _)| *av).collect()).collect(),
    )?;
    pi.total = total;
    pi.proj = proj;
    Ok(pi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// `|Hom_{/B}(f*Y, X)|`.
    pub lhs: usize,
    /// `|Hom_{/A}(Y, Π_f X)|`.
    pub rhs: usize,
    /// The transpose is a bijection with the evident inverse.
    pub bijective: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.lhs == self.rhs
    }
}

/// Checks `Hom_{/B}(f*Y, X) ≅ Hom_{/A}(Y, Π_f X)` by enumerating both
/// sides and transposing each map both ways.
pub fn verify_sset_adjunction(f: &SimplicialMap, p: &SimplicialMap, q: &SimplicialMap) -> R<AdjunctionReport> {
    let pi = pi_f_formula(f, p)?;
    let (a, b, x, y) = (&f.cod, &f.dom, &p.dom, &q.dom);
    if q.cod != *a {
        return Err(SSetError::CodomainMismatch);
    }
    let n = a.truncation();
    let rhs = enumerate_maps(y, &pi.total, Some((&pi.proj, q)), usize::MAX);
    let pb = pullback_sset(q, f)?;
    let lhs = enumerate_maps(&pb.total, x, Some((p, &pb.p2)), usize::MAX);
    let lhs_set: HashSet<&Vec<Vec<usize>>> = lhs.iter().map(|g| &g.maps).collect();

    // k ↦ g with g(y, b) = h_{k y}(id, b).
    let down = |k: &SimplicialMap| -> Option<Vec<Vec<usize>>> {
        (0..=n)
            .map(|l| {
                (0..pb.total.count(l))
                    .map(|s| {
                        let (yv, bv) = (pb.p1.apply(l, s), pb.p2.apply(l, s));
                        let (av, h) = &pi.elements[l][k.apply(l, yv)];
                        let id: Vec<usize> = (0..=l).collect();
                        pi.pair_at(b, l, *av, l, &id, bv).map(|at| h.maps[l][at])
                    })
                    .collect()
            })
            .collect()
    };
    // g ↦ k with h_{k y}(φ, b) = g(φ* y, b).
    let up = |g: &SimplicialMap| -> Option<Vec<Vec<usize>>> {
        (0..=n)
            .map(|l| {
                (0..y.count(l))
                    .map(|yv| {
                        let av = q.apply(l, yv);
                        let dom = &pi.domains[l][av].total;
                        let maps: Option<Vec<Vec<usize>>> = (0..=n)
                            .map(|m| {
                                (0..dom.count(m))
                                    .map(|s| {
                                        let (phi, bl) = dom.simplex(m, s).as_pair()?;
                                        let phi: Vec<usize> = phi.to_string().bytes().map(|c| (c - b'0') as usize).collect();
                                        let y2 = y.act(l, yv, &phi);
                                        let b2 = b.index_of(m, bl)?;
                                        let lab = Label::pair(y.simplex(m, y2).clone(), bl.clone());
                                        let at = pb.total.index_of(m, &lab)?;
                                        debug_assert_eq!(pb.p2.apply(m, at), b2);
                                        Some(g.apply(m, at))
                                    })
                                    .collect()
                            })
                            .collect();
                        pi.find(l, av, &maps?)
                    })
                    .collect()
            })
            .collect()
    };
    let mut seen = HashSet::new();
    let mut bijective = true;
    for k in &rhs {
        match down(k) {
            Some(g) if lhs_set.contains(&g) => {
                let gm = SimplicialMap {
                    dom: pb.total.clone(),
                    cod: x.clone(),
                    maps: g.clone(),
                };
                bijective &= up(&gm).as_ref() == Some(&k.maps);
                bijective &= seen.insert(g);
            }
            _ => bijective = false,
        }
    }
    for g in &lhs {
        match up(g) {
            Some(k) => {
                let km = SimplicialMap {
                    dom: y.clone(),
                    cod: pi.total.clone(),
                    maps: k,
                };
                bijective &= km.validate().is_ok() && down(&km).as_ref() == Some(&g.maps);
            }
            None => bijective = false,
        }
    }
    Ok(AdjunctionReport {
        lhs: lhs.len(),
        rhs: rhs.len(),
        bijective,
    })
}
