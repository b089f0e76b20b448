//! JSON for truncated simplicial sets and maps.
//!
//! ```json
//! {"N": 1,
//!  "simplices": {"0": ["v"], "1": ["v.0"]},
//!  "d": {"1": [["v"], ["v"]]},
//!  "s": {"0": [["v.0"]]}}
//! ```
//!
//! `d[k][i]` lists `d_i x` for each `k`-simplex `x` in order, by label;
//! `s[k][j]` likewise. A map is `{"domain": D, "codomain": C, "map":
//! {"0": {"x": "y", ...}, ...}}` where `D` and `C` are inline or paths.

use super::{SSetError, SimplicialMap, TruncatedSSet, R};
use crate::Label;
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

fn fmt(m: impl Into<String>) -> SSetError {
    SSetError::Format(m.into())
}

pub fn sset_to_json(x: &TruncatedSSet) -> String {
    let n = x.truncation();
    let name = |k: usize, i: usize| Value::String(x.simplex(k, i).to_string());
    let mut simplices = Map::new();
    let mut d = Map::new();
    let mut s = Map::new();
    for k in 0..=n {
        simplices.insert(k.to_string(), (0..x.count(k)).map(|i| name(k, i)).collect());
        if k > 0 {
            let faces: Vec<Value> = (0..=k)
                .map(|i| (0..x.count(k)).map(|t| name(k - 1, x.face(k, i, t))).collect())
                .collect();
            d.insert(k.to_string(), Value::Array(faces));
        }
        if k < n {
            let degs: Vec<Value> = (0..=k)
                .map(|j| (0..x.count(k)).map(|t| name(k + 1, x.degen(k, j, t))).collect())
                .collect();
            s.insert(k.to_string(), Value::Array(degs));
        }
    }
    serde_json::to_string_pretty(&json!({"N": n, "simplices": simplices, "d": d, "s": s})).expect("json")
}

fn sset_of(v: &Value) -> R<TruncatedSSet> {
    let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| fmt("missing `N`"))? as usize;
    let level = |k: usize| -> R<Vec<String>> {
        v.get("simplices")
            .and_then(|s| s.get(k.to_string()))
            .and_then(Value::as_array)
            .ok_or_else(|| fmt(format!("missing simplices of dimension {k}")))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| fmt("simplex names must be strings")))
            .collect()
    };
    let names: Vec<Vec<String>> = (0..=n).map(level).collect::<R<_>>()?;
    let index: Vec<HashMap<&str, usize>> =
        names.iter().map(|lv| lv.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
    let table = |key: &str, k: usize, count: usize, into: usize| -> R<Vec<Vec<usize>>> {
        let rows = v
            .get(key)
            .and_then(|t| t.get(k.to_string()))
            .and_then(Value::as_array)
            .ok_or_else(|| fmt(format!("missing `{key}` at dimension {k}")))?;
        if rows.len() != count {
            return Err(fmt(format!("`{key}` at dimension {k} needs {count} rows")));
        }
        rows.iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| fmt("operator rows must be arrays"))?
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .and_then(|s| index[into].get(s).copied())
                            .ok_or_else(|| fmt(format!("unknown simplex {x} in `{key}`")))
                    })
                    .collect()
            })
            .collect()
    };
    let d = (0..=n).map(|k| if k == 0 { Ok(Vec::new()) } else { table("d", k, k + 1, k - 1) }).collect::<R<_>>()?;
    let s = (0..=n).map(|k| if k == n { Ok(Vec::new()) } else { table("s", k, k + 1, k + 1) }).collect::<R<_>>()?;
    let simplices = names.into_iter().map(|lv| lv.into_iter().map(Label::atom).collect()).collect();
    TruncatedSSet::new(n, simplices, d, s)
}

pub fn sset_from_json(text: &str) -> R<TruncatedSSet> {
    let v: Value = serde_json::from_str(text).map_err(|e| fmt(e.to_string()))?;
    sset_of(&v)
}

pub fn map_to_json(f: &SimplicialMap) -> String {
    let dom: Value = serde_json::from_str(&sset_to_json(&f.dom)).expect("json");
    let cod: Value = serde_json::from_str(&sset_to_json(&f.cod)).expect("json");
    let mut map = Map::new();
    for (k, lv) in f.maps.iter().enumerate() {
        let m: Map<String, Value> = lv
            .iter()
            .enumerate()
            .map(|(s, &t)| (f.dom.simplex(k, s).to_string(), Value::String(f.cod.simplex(k, t).to_string())))
            .collect();
        map.insert(k.to_string(), Value::Object(m));
    }
    serde_json::to_string_pretty(&json!({"domain": dom, "codomain": cod, "map": map})).expect("json")
}

/// Reads a map; `domain` and `codomain` may be paths relative to `base`.
pub fn map_from_json(text: &str, base: Option<&Path>) -> R<SimplicialMap> {
    let v: Value = serde_json::from_str(text).map_err(|e| fmt(e.to_string()))?;
    let side = |key: &str| -> R<Arc<TruncatedSSet>> {
        let x = v.get(key).ok_or_else(|| fmt(format!("missing `{key}`")))?;
        let x = match x.as_str() {
            Some(p) => {
                let path = base.map(|b| b.join(p)).unwrap_or_else(|| p.into());
                let text = std::fs::read_to_string(&path).map_err(|e| fmt(format!("{}: {e}", path.display())))?;
                sset_from_json(&text)?
            }
            None => sset_of(x)?,
        };
        Ok(x.into_arc())
    };
    let (dom, cod) = (side("domain")?, side("codomain")?);
    let table = v.get("map").ok_or_else(|| fmt("missing `map`"))?;
    let maps = (0..=dom.truncation())
        .map(|k| {
            let lv = table.get(k.to_string()).ok_or_else(|| fmt(format!("map missing dimension {k}")))?;
            (0..dom.count(k))
                .map(|s| {
                    let key = dom.simplex(k, s).to_string();
                    lv.get(&key)
                        .and_then(Value::as_str)
                        .and_then(|t| cod.index_of(k, &Label::atom(t)))
                        .ok_or_else(|| fmt(format!("map has no valid image for {key}")))
                })
                .collect::<R<Vec<_>>>()
        })
        .collect::<R<Vec<_>>>()?;
    SimplicialMap::new(dom, cod, maps)
}
