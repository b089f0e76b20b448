use super::Engine;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A function `{0..dom} → {0..cod}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinSetMap {
    pub dom: usize,
    pub cod: usize,
    pub table: Vec<usize>,
}

impl FinSetMap {
    pub fn new(cod: usize, table: Vec<usize>) -> FinSetMap {
        assert!(table.iter().all(|&v| v < cod), "value outside the codomain");
        FinSetMap {
            dom: table.len(),
            cod,
            table,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        self.table.iter().for_each(|&v| seen[v] = true);
        seen.into_iter().all(|s| s)
    }
}

/// `(in W, in C, in F)` for the minimal structure on finite sets:
/// cofibrations are the monomorphisms, weak equivalences every map except
/// those from the empty set to a nonempty one, fibrations the epimorphisms
/// and the maps out of the empty set.
pub fn classify_finset_minimal(m: &FinSetMap) -> (bool, bool, bool) {
    let w = !(m.dom == 0 && m.cod > 0);
    let c = m.is_injective();
    let f = m.is_surjective() || m.dom == 0;
    (w, c, f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinSetStructure {
    /// The minimal Cisinski structure.
    Minimal,
    /// Weak equivalences are the bijections; everything is a (co)fibration.
    Discrete,
}

/// Finite sets `{0..n}`, identified with `n`.
pub struct FinSetEngine {
    pub structure: FinSetStructure,
}

fn all_maps(x: usize, y: usize, limit: usize) -> Vec<FinSetMap> {
    let mut out = Vec::new();
    if x > 0 && y == 0 {
        return out;
    }
    let mut t = vec![0; x];
    loop {
        out.push(FinSetMap::new(y, t.clone()));
        if out.len() >= limit {
            return out;
        }
        let mut k = x;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < y {
                break;
            }
            t[k] = 0;
        }
    }
}

/// `A → A ⊔ B → B` with `[f, id]` on the right.
fn through_coproduct(f: &FinSetMap) -> (FinSetMap, FinSetMap) {
    let n = f.dom + f.cod;
    let i = FinSetMap::new(n, (0..f.dom).collect());
    let r = FinSetMap::new(f.cod, f.table.iter().copied().chain(0..f.cod).collect());
    (i, r)
}

impl Engine for FinSetEngine {
    type Obj = usize;
    type Map = FinSetMap;

    fn name(&self) -> String {
        match self.structure {
            FinSetStructure::Minimal => "finset-minimal".into(),
            FinSetStructure::Discrete => "finset-discrete".into(),
        }
    }

    fn dom(&self, f: &FinSetMap) -> usize {
        f.dom
    }

    fn cod(&self, f: &FinSetMap) -> usize {
        f.cod
    }

    fn same_obj(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn compose(&self, g: &FinSetMap, f: &FinSetMap) -> FinSetMap {
        assert_eq!(f.cod, g.dom, "composable");
        FinSetMap::new(g.cod, f.table.iter().map(|&v| g.table[v]).collect())
    }

    fn identity(&self, x: &usize) -> FinSetMap {
        FinSetMap::new(*x, (0..*x).collect())
    }

    fn hom(&self, x: &usize, y: &usize, limit: usize) -> Vec<FinSetMap> {
        all_maps(*x, *y, limit)
    }

    /// Pairs `(i, j)` with `f i = g j`, in lexicographic order.
    fn pullback(&self, f: &FinSetMap, g: &FinSetMap) -> (usize, FinSetMap, FinSetMap) {
        let pairs: Vec<(usize, usize)> = (0..f.dom)
            .flat_map(|i| (0..g.dom).map(move |j| (i, j)))
            .filter(|&(i, j)| f.table[i] == g.table[j])
            .collect();
        (
            pairs.len(),
            FinSetMap::new(f.dom, pairs.iter().map(|p| p.0).collect()),
            FinSetMap::new(g.dom, pairs.iter().map(|p| p.1).collect()),
        )
    }

    fn terminal(&self) -> usize {
        1
    }

    fn initial(&self) -> usize {
        0
    }

    fn to_terminal(&self, x: &usize) -> FinSetMap {
        FinSetMap::new(1, vec![0; *x])
    }

    fn from_initial(&self, x: &usize) -> FinSetMap {
        FinSetMap::new(*x, Vec::new())
    }

    fn is_weq(&self, f: &FinSetMap) -> bool {
        match self.structure {
            FinSetStructure::Minimal => classify_finset_minimal(f).0,
            FinSetStructure::Discrete => f.is_injective() && f.is_surjective(),
        }
    }

    fn is_cof(&self, f: &FinSetMap) -> bool {
        match self.structure {
            FinSetStructure::Minimal => classify_finset_minimal(f).1,
            FinSetStructure::Discrete => true,
        }
    }

    fn is_fib(&self, f: &FinSetMap) -> bool {
        match self.structure {
            FinSetStructure::Minimal => classify_finset_minimal(f).2,
            FinSetStructure::Discrete => true,
        }
    }

    fn factor_cof_tfib(&self, f: &FinSetMap) -> (FinSetMap, FinSetMap) {
        match self.structure {
            FinSetStructure::Minimal => through_coproduct(f),
            FinSetStructure::Discrete => (f.clone(), self.identity(&f.cod)),
        }
    }

    fn factor_tcof_fib(&self, f: &FinSetMap) -> (FinSetMap, FinSetMap) {
        match self.structure {
            FinSetStructure::Minimal if f.dom > 0 => through_coproduct(f),
            _ => (self.identity(&f.dom), f.clone()),
        }
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, size: usize) -> usize {
        rng.gen_range(0..=size)
    }

    fn fixed_objects(&self, _size: usize) -> Vec<usize> {
        vec![0, 1]
    }

    fn describe(&self, f: &FinSetMap) -> String {
        serde_json::to_string(f).expect("serializable")
    }

    fn shrink(&self, cs: &(FinSetMap, FinSetMap)) -> Vec<(FinSetMap, FinSetMap)> {
        let (c, p) = cs;
        let mut out = Vec::new();
        let drop_val = |t: &[usize], o: usize| -> Vec<usize> { t.iter().map(|&v| if v > o { v - 1 } else { v }).collect() };
        for o in 0..c.cod {
            let ct: Vec<usize> = c.table.iter().copied().filter(|&v| v != o).collect();
            let pt: Vec<usize> = p.table.iter().copied().filter(|&v| v != o).collect();
            out.push((
                FinSetMap::new(c.cod - 1, drop_val(&ct, o)),
                FinSetMap::new(c.cod - 1, drop_val(&pt, o)),
            ));
        }
        for k in 0..c.dom {
            let mut t = c.table.clone();
            t.remove(k);
            out.push((FinSetMap::new(c.cod, t), p.clone()));
        }
        for k in 0..p.dom {
            let mut t = p.table.clone();
            t.remove(k);
            out.push((c.clone(), FinSetMap::new(p.cod, t)));
        }
        out
    }

    /// `Π_f X` over `a` is the set of choices of an element of `X` over
    /// each point of the fiber of `f` at `a`; the adjunction is checked by
    /// enumerating both hom-sets and transposing.
    fn pi_adjunction(&self, f: &FinSetMap, x: &FinSetMap, y: &FinSetMap) -> Option<Result<bool, String>> {
        Some(Ok(finset_pi_adjunction(self, f, x, y)))
    }
}

fn finset_pi_adjunction(e: &FinSetEngine, f: &FinSetMap, x: &FinSetMap, y: &FinSetMap) -> bool {
    // Points of Π: (a, section) with section[k] over the k-th fiber point.
    let fiber = |a: usize| -> Vec<usize> { (0..f.dom).filter(|&b| f.table[b] == a).collect() };
    let mut points: Vec<(usize, Vec<usize>)> = Vec::new();
    for a in 0..f.cod {
        let fb = fiber(a);
        let choices: Vec<Vec<usize>> = fb.iter().map(|&b| (0..x.dom).filter(|&e| x.table[e] == b).collect()).collect();
        let mut cur = Vec::new();
        sections(&choices, &mut cur, &mut |s| points.push((a, s.to_vec())));
    }
    let pi = FinSetMap::new(f.cod, points.iter().map(|p| p.0).collect());
    let (pb, p1, p2) = e.pullback(f, y);
    let left = e.hom_over(&p1, x, usize::MAX);
    let right = e.hom_over(y, &pi, usize::MAX);
    let transpose = |h: &FinSetMap| -> FinSetMap {
        let table = (0..y.dom)
            .map(|yo| {
                let a = y.table[yo];
                let s: Vec<usize> = fiber(a)
                    .iter()
                    .map(|&b| h.table[(0..pb).find(|&k| p1.table[k] == b && p2.table[k] == yo).unwrap()])
                    .collect();
                points.iter().position(|p| *p == (a, s.clone())).unwrap()
            })
            .collect();
        FinSetMap::new(points.len(), table)
    };
    let counit = |g: &FinSetMap| -> FinSetMap {
        let table = (0..pb)
            .map(|k| {
                let (b, yo) = (p1.table[k], p2.table[k]);
                let (a, s) = &points[g.table[yo]];
                s[fiber(*a).iter().position(|&c| c == b).unwrap()]
            })
            .collect();
        FinSetMap::new(x.dom, table)
    };
    left.len() == right.len()
        && left.iter().all(|h| counit(&transpose(h)) == *h)
        && right.iter().all(|g| transpose(&counit(g)) == *g)
}

fn sections(choices: &[Vec<usize>], cur: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if cur.len() == choices.len() {
        emit(cur);
        return;
    }
    for &c in &choices[cur.len()] {
        cur.push(c);
        sections(choices, cur, emit);
        cur.pop();
    }
}
