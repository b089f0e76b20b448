use super::Engine;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

/// A morphism of the slice over a fixed base: `map` with
/// `cod ∘ map = dom` as maps into the base.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceMap<M> {
    pub dom: M,
    pub cod: M,
    pub map: M,
}

/// The slice of an engine over one of its objects. Objects are maps into
/// the base; the classes are those of the underlying maps.
pub struct SliceEngine<'e, E: Engine> {
    pub inner: &'e E,
    pub base: E::Obj,
}

impl<'e, E: Engine> SliceEngine<'e, E> {
    pub fn new(inner: &'e E, base: E::Obj) -> Self {
        SliceEngine { inner, base }
    }

    fn wrap(&self, dom: E::Map, cod: E::Map, map: E::Map) -> SliceMap<E::Map> {
        SliceMap { dom, cod, map }
    }
}

impl<'e, E: Engine> Engine for SliceEngine<'e, E> {
    type Obj = E::Map;
    type Map = SliceMap<E::Map>;

    fn name(&self) -> String {
        format!("{}/slice", self.inner.name())
    }

    fn dom(&self, f: &Self::Map) -> E::Map {
        f.dom.clone()
    }

    fn cod(&self, f: &Self::Map) -> E::Map {
        f.cod.clone()
    }

    fn same_obj(&self, a: &E::Map, b: &E::Map) -> bool {
        let e = self.inner;
        e.same_obj(&e.dom(a), &e.dom(b)) && a == b
    }

    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Self::Map {
        self.wrap(f.dom.clone(), g.cod.clone(), self.inner.compose(&g.map, &f.map))
    }

    fn identity(&self, x: &E::Map) -> Self::Map {
        self.wrap(x.clone(), x.clone(), self.inner.identity(&self.inner.dom(x)))
    }

    fn hom(&self, x: &E::Map, y: &E::Map, limit: usize) -> Vec<Self::Map> {
        self.inner
            .hom_over(x, y, limit)
            .into_iter()
            .map(|m| self.wrap(x.clone(), y.clone(), m))
            .collect()
    }

    fn hom_over(&self, p: &Self::Map, q: &Self::Map, limit: usize) -> Vec<Self::Map> {
        self.inner
            .hom_over(&p.map, &q.map, limit)
            .into_iter()
            .map(|m| self.wrap(p.dom.clone(), q.dom.clone(), m))
            .collect()
    }

    fn pullback(&self, f: &Self::Map, g: &Self::Map) -> (E::Map, Self::Map, Self::Map) {
        let e = self.inner;
        let (_, p1, p2) = e.pullback(&f.map, &g.map);
        let apex = e.compose(&f.dom, &p1);
        (
            apex.clone(),
            self.wrap(apex.clone(), f.dom.clone(), p1),
            self.wrap(apex, g.dom.clone(), p2),
        )
    }

    fn terminal(&self) -> E::Map {
        self.inner.identity(&self.base)
    }

    fn initial(&self) -> E::Map {
        self.inner.from_initial(&self.base)
    }

    fn to_terminal(&self, x: &E::Map) -> Self::Map {
        self.wrap(x.clone(), self.terminal(), x.clone())
    }

    fn from_initial(&self, x: &E::Map) -> Self::Map {
        let e = self.inner;
        self.wrap(self.initial(), x.clone(), e.from_initial(&e.dom(x)))
    }

    fn is_weq(&self, f: &Self::Map) -> bool {
        self.inner.is_weq(&f.map)
    }

    fn is_cof(&self, f: &Self::Map) -> bool {
        self.inner.is_cof(&f.map)
    }

    fn is_fib(&self, f: &Self::Map) -> bool {
        self.inner.is_fib(&f.map)
    }

    fn factor_cof_tfib(&self, f: &Self::Map) -> (Self::Map, Self::Map) {
        let (a, b) = self.inner.factor_cof_tfib(&f.map);
        let mid = self.inner.compose(&f.cod, &b);
        (self.wrap(f.dom.clone(), mid.clone(), a), self.wrap(mid, f.cod.clone(), b))
    }

    fn factor_tcof_fib(&self, f: &Self::Map) -> (Self::Map, Self::Map) {
        let (a, b) = self.inner.factor_tcof_fib(&f.map);
        let mid = self.inner.compose(&f.cod, &b);
        (self.wrap(f.dom.clone(), mid.clone(), a), self.wrap(mid, f.cod.clone(), b))
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, size: usize) -> E::Map {
        loop {
            let x = self.inner.random_object(rng, size);
            if let Some(m) = self.inner.hom(&x, &self.base, 256).choose(rng) {
                return m.clone();
            }
        }
    }

    fn fixed_objects(&self, _size: usize) -> Vec<E::Map> {
        vec![self.terminal()]
    }

    fn describe(&self, f: &Self::Map) -> String {
        let e = self.inner;
        format!(
            "{{\"over_domain\":{},\"over_codomain\":{},\"map\":{}}}",
            e.describe(&f.dom),
            e.describe(&f.cod),
            e.describe(&f.map)
        )
    }

    /// In the slice over `X`, `Π` along `f: (B → X) → (A → X)` is `Π` along
    /// the underlying map, since `(C/X)/(A → X)` is `C/A`.
    fn pi_adjunction(&self, f: &Self::Map, x: &Self::Map, y: &Self::Map) -> Option<Result<bool, String>> {
        self.inner.pi_adjunction(&f.map, &x.map, &y.map)
    }
}
