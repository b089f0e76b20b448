//! Brute-force checks of factorization systems, model-structure axioms and
//! the logical conditions, over finite seeded corpora.

mod finset;
mod gpd_engine;
mod slice;

pub use finset::{classify_finset_minimal, FinSetEngine, FinSetMap, FinSetStructure};
pub use gpd_engine::GpdEngine;
pub use slice::{SliceEngine, SliceMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::{self, Debug};

/// Cap on squares enumerated per pair of maps in lifting checks.
pub const SQUARE_CAP: usize = 24;
/// Cap on hom-set enumeration inside the checks.
pub const HOM_CAP: usize = 4096;

/// A finite category with a model structure, as far as the checks need it.
pub trait Engine {
    type Obj: Clone + Debug;
    type Map: Clone + Debug + PartialEq;

    fn name(&self) -> String;
    fn dom(&self, f: &Self::Map) -> Self::Obj;
    fn cod(&self, f: &Self::Map) -> Self::Obj;
    fn same_obj(&self, a: &Self::Obj, b: &Self::Obj) -> bool;
    /// `g ∘ f`; callers guarantee composability.
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Self::Map;
    fn identity(&self, x: &Self::Obj) -> Self::Map;
    fn hom(&self, x: &Self::Obj, y: &Self::Obj, limit: usize) -> Vec<Self::Map>;
    /// Maps `h: dom p → dom q` with `q ∘ h = p`.
    fn hom_over(&self, p: &Self::Map, q: &Self::Map, limit: usize) -> Vec<Self::Map> {
        self.hom(&self.dom(p), &self.dom(q), usize::MAX)
            .into_iter()
            .filter(|h| self.compose(q, h) == *p)
            .take(limit)
            .collect()
    }
    /// A diagonal `j: cod i → dom p` with `p ∘ j = v` and `j ∘ i = u`.
    fn diagonal(&self, i: &Self::Map, p: &Self::Map, u: &Self::Map, v: &Self::Map) -> Option<Self::Map> {
        self.hom_over(v, p, usize::MAX).into_iter().find(|j| self.compose(j, i) == *u)
    }
    /// Pullback of `f` and `g` with its two projections.
    fn pullback(&self, f: &Self::Map, g: &Self::Map) -> (Self::Obj, Self::Map, Self::Map);
    fn terminal(&self) -> Self::Obj;
    fn initial(&self) -> Self::Obj;
    fn to_terminal(&self, x: &Self::Obj) -> Self::Map;
    fn from_initial(&self, x: &Self::Obj) -> Self::Map;

    fn is_weq(&self, f: &Self::Map) -> bool;
    fn is_cof(&self, f: &Self::Map) -> bool;
    fn is_fib(&self, f: &Self::Map) -> bool;
    /// Factors as a cofibration followed by a trivial fibration.
    fn factor_cof_tfib(&self, f: &Self::Map) -> (Self::Map, Self::Map);
    /// Factors as a trivial cofibration followed by a fibration.
    fn factor_tcof_fib(&self, f: &Self::Map) -> (Self::Map, Self::Map);

    fn random_object(&self, rng: &mut ChaCha8Rng, size: usize) -> Self::Obj;
    /// Extra objects every corpus contains.
    fn fixed_objects(&self, _size: usize) -> Vec<Self::Obj> {
        vec![self.terminal()]
    }
    /// Compact JSON for counterexamples.
    fn describe(&self, f: &Self::Map) -> String;
    /// One-step shrinks of a cospan, for counterexample minimization.
    fn shrink(&self, _cospan: &(Self::Map, Self::Map)) -> Vec<(Self::Map, Self::Map)> {
        Vec::new()
    }
    /// Checks `f* ⊣ Π_f` for a fibration `f`, a fibration `x` into its
    /// domain and any `y` into its codomain; `None` if not provided.
    fn pi_adjunction(&self, _f: &Self::Map, _x: &Self::Map, _y: &Self::Map) -> Option<Result<bool, String>> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    WeakEquivalence,
    Cofibration,
    Fibration,
    TrivialCofibration,
    TrivialFibration,
}

/// A named class of maps.
pub struct Classifier<'a, M> {
    pub name: String,
    pub role: Role,
    pub pred: Box<dyn Fn(&M) -> bool + 'a>,
}

impl<'a, M> Classifier<'a, M> {
    pub fn new(name: &str, role: Role, pred: impl Fn(&M) -> bool + 'a) -> Self {
        Classifier {
            name: name.to_string(),
            role,
            pred: Box::new(pred),
        }
    }

    pub fn test(&self, m: &M) -> bool {
        (self.pred)(m)
    }
}

/// The engine's own classes.
pub fn standard_classes<E: Engine>(e: &E) -> [Classifier<'_, E::Map>; 5] {
    [
        Classifier::new("W", Role::WeakEquivalence, move |f| e.is_weq(f)),
        Classifier::new("C", Role::Cofibration, move |f| e.is_cof(f)),
        Classifier::new("F", Role::Fibration, move |f| e.is_fib(f)),
        Classifier::new("C∩W", Role::TrivialCofibration, move |f| e.is_cof(f) && e.is_weq(f)),
        Classifier::new("F∩W", Role::TrivialFibration, move |f| e.is_fib(f) && e.is_weq(f)),
    ]
}

/// Objects and maps regenerated from `(seed, size)`.
pub struct Corpus<E: Engine> {
    pub seed: u64,
    pub size: usize,
    pub objects: Vec<E::Obj>,
    pub maps: Vec<E::Map>,
}

impl<E: Engine> Corpus<E> {
    /// `count` random objects plus the engine's fixed ones; for every
    /// ordered pair up to `per_pair` random maps, plus one fibration and one
    /// trivial cofibration when the pair has any.
    pub fn generate(e: &E, seed: u64, size: usize, count: usize, per_pair: usize) -> Corpus<E> {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut objects = e.fixed_objects(size);
        for _ in 0..count {
            objects.push(e.random_object(&mut rng, size));
        }
        let mut maps = Vec::new();
        for x in &objects {
            for y in &objects {
                let all = e.hom(x, y, HOM_CAP);
                for m in all.choose_multiple(&mut rng, per_pair) {
                    maps.push(m.clone());
                }
                let fibs: Vec<&E::Map> = all.iter().filter(|m| e.is_fib(m)).collect();
                if let Some(m) = fibs.choose(&mut rng) {
                    maps.push((*m).clone());
                }
                let tcofs: Vec<&E::Map> = all.iter().filter(|m| e.is_cof(m) && e.is_weq(m)).collect();
                if let Some(m) = tcofs.choose(&mut rng) {
                    maps.push((*m).clone());
                }
            }
        }
        let mut dedup: Vec<E::Map> = Vec::new();
        for m in maps {
            if !dedup.contains(&m) {
                dedup.push(m);
            }
        }
        Corpus {
            seed,
            size,
            objects,
            maps: dedup,
        }
    }

    /// Every object and every map between them (small engines only).
    pub fn exhaustive(e: &E, objects: Vec<E::Obj>) -> Corpus<E> {
        let mut maps = Vec::new();
        for x in &objects {
            for y in &objects {
                maps.extend(e.hom(x, y, usize::MAX));
            }
        }
        Corpus {
            seed: 0,
            size: 0,
            objects,
            maps,
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    /// Serialized counterexamples; empty on success.
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, what: String) {
        // Only the first few are kept.
        if self.failures.len() < 3 {
            self.failures.push(what);
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {} ({} cases)", self.name, verdict, self.cases)?;
        for c in &self.failures {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// A full run: a header with the reproducibility data, then the checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub engine: String,
    pub seed: u64,
    pub size: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# modelcheck engine={} seed={} size={}", self.engine, self.seed, self.size)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "RESULT {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

// ---- lifting ----

/// Commuting squares `p ∘ u = v ∘ i`, up to `cap`.
pub fn squares<E: Engine>(e: &E, i: &E::Map, p: &E::Map, cap: usize) -> Vec<(E::Map, E::Map)> {
    let mut out = Vec::new();
    for v in e.hom(&e.cod(i), &e.cod(p), HOM_CAP) {
        let vi = e.compose(&v, i);
        for u in e.hom_over(&vi, p, cap - out.len()) {
            out.push((u, v.clone()));
            if out.len() >= cap {
                return out;
            }
        }
    }
    out
}

/// The first diagonal `j` (in enumeration order) with `j ∘ i = u` and
/// `p ∘ j = v`. Errors if the square does not commute.
pub fn has_lifting<E: Engine>(e: &E, i: &E::Map, p: &E::Map, u: &E::Map, v: &E::Map) -> Result<Option<E::Map>, String> {
    if e.compose(p, u) != e.compose(v, i) {
        return Err("square does not commute".into());
    }
    Ok(e.diagonal(i, p, u, v))
}

/// Whether every enumerated square of `i` against `p` has a filler; the
/// first square without one otherwise.
fn lifts_against<E: Engine>(e: &E, i: &E::Map, p: &E::Map, extra: &[(E::Map, E::Map)]) -> Result<usize, (E::Map, E::Map)> {
    let mut n = 0;
    for (u, v) in extra.iter().cloned().chain(squares(e, i, p, SQUARE_CAP)) {
        n += 1;
        if has_lifting(e, i, p, &u, &v).ok().flatten().is_none() {
            return Err((u, v));
        }
    }
    Ok(n)
}

/// Checks a weak factorization system on the corpus: factorizations land in
/// the classes, left maps lift against right maps, and each class contains
/// every corpus map with the lifting property against the other class's
/// members (the factorization of the map itself included).
pub fn check_wfs<E: Engine>(
    e: &E,
    name: &str,
    factor: &dyn Fn(&E::Map) -> (E::Map, E::Map),
    l: &Classifier<'_, E::Map>,
    r: &Classifier<'_, E::Map>,
    corpus: &Corpus<E>,
    max_pairs: usize,
) -> Vec<CheckResult> {
    let mut fac = CheckResult::new(&format!("{name}.factor"));
    let mut lift = CheckResult::new(&format!("{name}.lift"));
    let mut classes = CheckResult::new(&format!("{name}.classes"));
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for f in &corpus.maps {
        fac.cases += 1;
        let (a, b) = factor(f);
        if e.compose(&b, &a) != *f || !l.test(&a) || !r.test(&b) {
            fac.fail(format!(
                "{{\"map\":{},\"left\":{},\"right\":{}}}",
                e.describe(f),
                e.describe(&a),
                e.describe(&b)
            ));
        }
        if l.test(f) {
            lefts.push(f.clone());
        }
        if r.test(f) {
            rights.push(f.clone());
        }
    }
    'pairs: for i in &lefts {
        for p in &rights {
            if lift.cases >= max_pairs {
                break 'pairs;
            }
            lift.cases += 1;
            if let Err((u, v)) = lifts_against(e, i, p, &[]) {
                lift.fail(format!(
                    "{{\"left\":{},\"right\":{},\"top\":{},\"bottom\":{}}}",
                    e.describe(i),
                    e.describe(p),
                    e.describe(&u),
                    e.describe(&v)
                ));
            }
        }
    }
    // Class equalities, corpus-relative. A map lifting against the right
    // half of its own factorization is a retract of the left half.
    for f in corpus.maps.iter().take(max_pairs) {
        classes.cases += 1;
        let (a, b) = factor(f);
        let own_left = [(a.clone(), e.identity(&e.cod(f)))];
        let lifts_all = lifts_against(e, f, &b, &own_left).is_ok()
            && rights.iter().take(8).all(|p| lifts_against(e, f, p, &[]).is_ok());
        if lifts_all && !l.test(f) {
            classes.fail(format!("{{\"not_left\":{}}}", e.describe(f)));
        }
        let own_right = [(e.identity(&e.dom(f)), b.clone())];
        let lifted_all = lifts_against(e, &a, f, &own_right).is_ok()
            && lefts.iter().take(8).all(|i| lifts_against(e, i, f, &[]).is_ok());
        if lifted_all && !r.test(f) {
            classes.fail(format!("{{\"not_right\":{}}}", e.describe(f)));
        }
    }
    vec![fac, lift, classes]
}

pub fn check_two_of_three<E: Engine>(e: &E, w: &Classifier<'_, E::Map>, corpus: &Corpus<E>) -> CheckResult {
    let mut r = CheckResult::new(&format!("two-of-three[{}]", w.name));
    let ws: Vec<bool> = corpus.maps.iter().map(|m| w.test(m)).collect();
    for (fi, f) in corpus.maps.iter().enumerate() {
        for (gi, g) in corpus.maps.iter().enumerate() {
            if !e.same_obj(&e.cod(f), &e.dom(g)) {
                continue;
            }
            r.cases += 1;
            let h = e.compose(g, f);
            let (a, b, c) = (ws[fi], ws[gi], w.test(&h));
            if (a && b && !c) || (a && c && !b) || (b && c && !a) {
                r.fail(format!("{{\"f\":{},\"g\":{}}}", e.describe(f), e.describe(g)));
            }
        }
    }
    r
}

/// Greedy deterministic shrinking while `fails` holds.
pub fn minimize<E: Engine>(
    e: &E,
    cospan: (E::Map, E::Map),
    fails: &dyn Fn(&(E::Map, E::Map)) -> bool,
) -> (E::Map, E::Map) {
    let mut cur = cospan;
    'outer: loop {
        for cand in e.shrink(&cur) {
            if fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}

fn cospans<'c, E: Engine>(
    e: &'c E,
    corpus: &'c Corpus<E>,
    left: &'c Classifier<'_, E::Map>,
    right: &'c Classifier<'_, E::Map>,
) -> impl Iterator<Item = (E::Map, E::Map)> + 'c {
    let ls: Vec<&E::Map> = corpus.maps.iter().filter(|m| left.test(m)).collect();
    let rs: Vec<&E::Map> = corpus.maps.iter().filter(|m| right.test(m)).collect();
    ls.into_iter().flat_map(move |c| {
        rs.clone()
            .into_iter()
            .filter(move |p| e.same_obj(&e.cod(c), &e.cod(p)))
            .map(move |p| (c.clone(), p.clone()))
    })
}

/// Pulls members of `class` back along members of `along` and re-classifies.
fn stability<E: Engine>(
    e: &E,
    name: String,
    class: &Classifier<'_, E::Map>,
    along: &Classifier<'_, E::Map>,
    corpus: &Corpus<E>,
) -> CheckResult {
    let mut r = CheckResult::new(&name);
    let fails = |cs: &(E::Map, E::Map)| {
        let (_, _, pulled) = e.pullback(&cs.0, &cs.1);
        class.test(&cs.0) && along.test(&cs.1) && !class.test(&pulled)
    };
    for cs in cospans(e, corpus, class, along) {
        r.cases += 1;
        if fails(&cs) {
            let small = minimize(e, cs, &fails);
            let (_, _, pulled) = e.pullback(&small.0, &small.1);
            r.fail(format!(
                "{{\"map\":{},\"along\":{},\"pulled_back\":{}}}",
                e.describe(&small.0),
                e.describe(&small.1),
                e.describe(&pulled)
            ));
        }
    }
    r
}

pub fn check_pullback_stability<E: Engine>(
    e: &E,
    class: &Classifier<'_, E::Map>,
    along: &Classifier<'_, E::Map>,
    corpus: &Corpus<E>,
) -> CheckResult {
    stability(e, format!("pullback-stable[{} along {}]", class.name, along.name), class, along, corpus)
}

pub fn check_right_proper<E: Engine>(
    e: &E,
    w: &Classifier<'_, E::Map>,
    f: &Classifier<'_, E::Map>,
    corpus: &Corpus<E>,
) -> CheckResult {
    stability(e, format!("right-proper[{} along {}]", w.name, f.name), w, f, corpus)
}

pub fn is_fibrant<E: Engine>(e: &E, x: &E::Obj) -> bool {
    e.is_fib(&e.to_terminal(x))
}

pub fn is_cofibrant<E: Engine>(e: &E, x: &E::Obj) -> bool {
    e.is_cof(&e.from_initial(x))
}

/// Corpus objects are all fibrant (reported, not required).
pub fn check_fibrant_objects<E: Engine>(e: &E, corpus: &Corpus<E>) -> CheckResult {
    let mut r = CheckResult::new("fibrant-objects");
    for x in &corpus.objects {
        r.cases += 1;
        if !is_fibrant(e, x) {
            r.fail(e.describe(&e.to_terminal(x)));
        }
    }
    r
}

/// The three conditions for a logical model category: `Π_f` along
/// fibrations (adjunction verified by enumeration), stability of
/// (trivial) cofibrations under pullback along fibrations, and right
/// properness.
pub fn check_logical_conditions<E: Engine>(e: &E, corpus: &Corpus<E>, max_pi: usize) -> Vec<CheckResult> {
    let [w, c, f, tc, _] = standard_classes(e);
    let mut pi = CheckResult::new("logical.pi-adjunction");
    let fibs: Vec<&E::Map> = corpus.maps.iter().filter(|m| e.is_fib(m)).collect();
    'outer: for g in &fibs {
        for x in fibs.iter().filter(|x| e.same_obj(&e.cod(x), &e.dom(g))) {
            for y in corpus.maps.iter().filter(|y| e.same_obj(&e.cod(y), &e.cod(g))) {
                if pi.cases >= max_pi {
                    break 'outer;
                }
                match e.pi_adjunction(g, x, y) {
                    None => break 'outer,
                    Some(Ok(true)) => pi.cases += 1,
                    Some(Ok(false)) => {
                        pi.cases += 1;
                        pi.fail(format!(
                            "{{\"f\":{},\"x\":{},\"y\":{}}}",
                            e.describe(g),
                            e.describe(x),
                            e.describe(y)
                        ))
                    }
                    Some(Err(msg)) => {
                        pi.cases += 1;
                        pi.fail(format!("{{\"error\":{}}}", serde_json::Value::String(msg)))
                    }
                }
            }
        }
    }
    let mut out = vec![pi];
    let mut s = check_pullback_stability(e, &c, &f, corpus);
    s.name = format!("logical.{}", s.name);
    out.push(s);
    let mut s = check_pullback_stability(e, &tc, &f, corpus);
    s.name = format!("logical.{}", s.name);
    out.push(s);
    let mut s = check_right_proper(e, &w, &f, corpus);
    s.name = format!("logical.{}", s.name);
    out.push(s);
    let all = CheckResult {
        name: "logical".into(),
        cases: out.iter().map(|r| r.cases).sum(),
        failures: if out.iter().all(CheckResult::passed) {
            Vec::new()
        } else {
            vec![format!(
                "{{\"failed\":{:?}}}",
                out.iter().filter(|r| !r.passed()).map(|r| r.name.clone()).collect::<Vec<_>>()
            )]
        },
    };
    out.push(all);
    out
}

/// Runs the whole suite on an engine.
pub fn run_suite<E: Engine>(e: &E, corpus: &Corpus<E>, max_pairs: usize, max_pi: usize) -> Vec<CheckResult> {
    let [w, c, f, tc, tf] = standard_classes(e);
    let mut out = Vec::new();
    out.extend(check_wfs(e, "wfs[C,F∩W]", &|m| e.factor_cof_tfib(m), &c, &tf, corpus, max_pairs));
    out.extend(check_wfs(e, "wfs[C∩W,F]", &|m| e.factor_tcof_fib(m), &tc, &f, corpus, max_pairs));
    out.push(check_two_of_three(e, &w, corpus));
    out.push(check_fibrant_objects(e, corpus));
    out.extend(check_logical_conditions(e, corpus, max_pi));
    out
}

/// Re-runs the logical conditions in the slice over `base`.
pub fn check_slice_inheritance<E: Engine>(
    e: &E,
    base: &E::Obj,
    seed: u64,
    size: usize,
    max_pi: usize,
) -> Vec<CheckResult> {
    let se = SliceEngine::new(e, base.clone());
    let corpus = Corpus::generate(&se, seed, size, 4, 2);
    let mut out = check_logical_conditions(&se, &corpus, max_pi);
    for r in &mut out {
        r.name = format!("slice.{}", r.name);
    }
    out
}

/// The named engines of the command line.
pub const ENGINES: [&str; 3] = ["gpd", "finset-minimal", "finset-discrete"];

/// The full report for a named engine.
pub fn run_engine(name: &str, seed: u64, size: usize) -> Option<Report> {
    let checks = match name {
        "gpd" => {
            let e = GpdEngine;
            let corpus = Corpus::generate(&e, seed, size, 4, 2);
            let mut checks = run_suite(&e, &corpus, 400, 40);
            let interval = crate::gpd::FinGroupoid::interval().into_arc();
            checks.extend(check_slice_inheritance(&e, &interval, seed, size.min(2), 20));
            checks
        }
        "finset-minimal" | "finset-discrete" => {
            let structure = if name == "finset-minimal" {
                FinSetStructure::Minimal
            } else {
                FinSetStructure::Discrete
            };
            let e = FinSetEngine { structure };
            let corpus = Corpus::exhaustive(&e, (0..=size).collect());
            let lift_corpus = Corpus::exhaustive(&e, (0..=size.min(3)).collect());
            let [w, c, f, tc, tf] = standard_classes(&e);
            let mut checks = Vec::new();
            checks.extend(check_wfs(&e, "wfs[C,F∩W]", &|m| e.factor_cof_tfib(m), &c, &tf, &lift_corpus, usize::MAX));
            checks.extend(check_wfs(&e, "wfs[C∩W,F]", &|m| e.factor_tcof_fib(m), &tc, &f, &lift_corpus, usize::MAX));
            let mut fac = CheckResult::new("factorizations-land-in-classes");
            for m in &corpus.maps {
                fac.cases += 1;
                let (a, b) = e.factor_cof_tfib(m);
                let (x, y) = e.factor_tcof_fib(m);
                let ok = e.compose(&b, &a) == *m
                    && c.test(&a)
                    && tf.test(&b)
                    && e.compose(&y, &x) == *m
                    && tc.test(&x)
                    && f.test(&y);
                if !ok {
                    fac.fail(e.describe(m));
                }
            }
            checks.push(fac);
            checks.push(check_two_of_three(&e, &w, &corpus));
            checks.push(check_fibrant_objects(&e, &Corpus::exhaustive(&e, (1..=size).collect())));
            checks.extend(check_logical_conditions(&e, &corpus, 200));
            checks
        }
        _ => return None,
    };
    Some(Report {
        engine: name.to_string(),
        seed,
        size,
        checks,
    })
}

#[cfg(test)]
mod tests;
