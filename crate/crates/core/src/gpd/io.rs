//! JSON reading and writing. Labels are written with their display form and
//! read back as atoms.

use super::{FinGroupoid, Functor, GpdError};
use crate::Label;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

#[derive(Serialize, Deserialize)]
struct MorphismRec {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
struct GroupoidRec {
    objects: Vec<String>,
    morphisms: Vec<MorphismRec>,
    compose: Vec<[String; 3]>,
    identities: BTreeMap<String, String>,
    inverses: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupoidRef {
    Inline(GroupoidRec),
    Path(String),
}

#[derive(Serialize, Deserialize)]
struct FunctorRec {
    domain: GroupoidRef,
    codomain: GroupoidRef,
    #[serde(rename = "onObjects")]
    on_objects: BTreeMap<String, String>,
    #[serde(rename = "onMorphisms")]
    on_morphisms: BTreeMap<String, String>,
}

fn fmt<E: std::fmt::Display>(e: E) -> GpdError {
    GpdError::Format(e.to_string())
}

fn rec_of(g: &FinGroupoid) -> GroupoidRec {
    let name = |l: &Label| l.to_string();
    let mut compose = Vec::new();
    for f in 0..g.mor_count() {
        for &h in g.out_of(g.tgt(f)) {
            compose.push([name(g.morphism(h)), name(g.morphism(f)), name(g.morphism(g.compose(h, f)))]);
        }
    }
    GroupoidRec {
        objects: g.objects().iter().map(name).collect(),
        morphisms: (0..g.mor_count())
            .map(|f| MorphismRec {
                id: name(g.morphism(f)),
                src: name(g.object(g.src(f))),
                tgt: name(g.object(g.tgt(f))),
            })
            .collect(),
        compose,
        identities: (0..g.obj_count())
            .map(|x| (name(g.object(x)), name(g.morphism(g.id(x)))))
            .collect(),
        inverses: (0..g.mor_count())
            .map(|f| (name(g.morphism(f)), name(g.morphism(g.inv(f)))))
            .collect(),
    }
}

fn groupoid_of(r: GroupoidRec) -> Result<FinGroupoid, GpdError> {
    let objects: Vec<Label> = r.objects.iter().map(Label::atom).collect();
    let oi = |s: &str| {
        r.objects
            .iter()
            .position(|o| o == s)
            .ok_or_else(|| GpdError::Format(format!("unknown object {s}")))
    };
    let mi = |s: &str| {
        r.morphisms
            .iter()
            .position(|m| m.id == s)
            .ok_or_else(|| GpdError::Format(format!("unknown morphism {s}")))
    };
    let mut morphisms = Vec::new();
    for m in &r.morphisms {
        morphisms.push((Label::atom(&m.id), oi(&m.src)?, oi(&m.tgt)?));
    }
    let mut id = Vec::new();
    for o in &r.objects {
        let m = r
            .identities
            .get(o)
            .ok_or_else(|| GpdError::Format(format!("object {o} has no identity")))?;
        id.push(mi(m)?);
    }
    let n = morphisms.len();
    let mut table = vec![None; n * n];
    for [g, f, gf] in &r.compose {
        table[mi(g)? * n + mi(f)?] = Some(mi(gf)?);
    }
    let mut missing = None;
    let g = FinGroupoid::build(objects, morphisms, id, |g, f| {
        table[g * n + f].unwrap_or_else(|| {
            missing.get_or_insert((g, f));
            f
        })
    });
    if let Some((g, f)) = missing {
        return Err(GpdError::Format(format!(
            "composite of {} and {} is missing",
            r.morphisms[g].id, r.morphisms[f].id
        )));
    }
    let g = g?;
    g.validate()?;
    for (m, i) in &r.inverses {
        if g.inv(mi(m)?) != mi(i)? {
            return Err(GpdError::Invalid(format!("{i} is not the inverse of {m}")));
        }
    }
    Ok(g)
}

pub fn groupoid_to_json(g: &FinGroupoid) -> String {
    serde_json::to_string_pretty(&rec_of(g)).expect("serializable")
}

/// Parses and validates a groupoid.
pub fn groupoid_from_json(text: &str) -> Result<FinGroupoid, GpdError> {
    groupoid_of(serde_json::from_str(text).map_err(fmt)?)
}

pub fn functor_to_json(f: &Functor) -> String {
    let rec = FunctorRec {
        domain: GroupoidRef::Inline(rec_of(&f.dom)),
        codomain: GroupoidRef::Inline(rec_of(&f.cod)),
        on_objects: (0..f.dom.obj_count())
            .map(|x| (f.dom.object(x).to_string(), f.cod.object(f.obj[x]).to_string()))
            .collect(),
        on_morphisms: (0..f.dom.mor_count())
            .map(|m| (f.dom.morphism(m).to_string(), f.cod.morphism(f.mor[m]).to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&rec).expect("serializable")
}

/// Parses and validates a functor. Domain and codomain are inline groupoids
/// or paths, resolved against `base_dir`.
pub fn functor_from_json(text: &str, base_dir: Option<&Path>) -> Result<Functor, GpdError> {
    let rec: FunctorRec = serde_json::from_str(text).map_err(fmt)?;
    let load = |r: GroupoidRef| -> Result<Arc<FinGroupoid>, GpdError> {
        match r {
            GroupoidRef::Inline(g) => Ok(Arc::new(groupoid_of(g)?)),
            GroupoidRef::Path(p) => {
                let path = base_dir.map_or_else(|| Path::new(&p).to_path_buf(), |d| d.join(&p));
                let text = std::fs::read_to_string(&path).map_err(|e| GpdError::Format(format!("{}: {e}", path.display())))?;
                Ok(Arc::new(groupoid_from_json(&text)?))
            }
        }
    };
    let dom = load(rec.domain)?;
    let cod = load(rec.codomain)?;
    let look_obj = |g: &FinGroupoid, s: &str| {
        g.object_index(&Label::atom(s))
            .ok_or_else(|| GpdError::Format(format!("unknown object {s}")))
    };
    let look_mor = |g: &FinGroupoid, s: &str| {
        g.morphism_index(&Label::atom(s))
            .ok_or_else(|| GpdError::Format(format!("unknown morphism {s}")))
    };
    let mut obj = vec![usize::MAX; dom.obj_count()];
    for (k, v) in &rec.on_objects {
        obj[look_obj(&dom, k)?] = look_obj(&cod, v)?;
    }
    let mut mor = vec![usize::MAX; dom.mor_count()];
    for (k, v) in &rec.on_morphisms {
        mor[look_mor(&dom, k)?] = look_mor(&cod, v)?;
    }
    if obj.contains(&usize::MAX) || mor.contains(&usize::MAX) {
        return Err(GpdError::Format("functor maps must be total".into()));
    }
    Functor::new(dom, cod, obj, mor)
}
