//! JSON documents for Witt and ghost vectors:
//!
//! ```text
//! {"group": <descriptor>, "ring": <descriptor>, "family": "all" | ["c0", ...],
//!  "coords": {"c0": <element>, ...}, "labels": {"c0": "C2#1", ...}}
//! ```
//!
//! Ghost vectors use the key `"ghost"` in place of `"coords"`. `"labels"` is
//! written for readers and ignored on input; `"family"` defaults to `"all"`.

use serde_json::{Map, Value};

use super::{Coords, GhostVector, WittError, WittVector};
use crate::group::{class_table, ClosedFamily, ConjClassTable, GroupDescriptor, DEFAULT_MAX_ORDER};
use crate::ring::Ring;

fn to_json(c: &Coords, key: &str) -> Value {
    let mut entries = Map::new();
    let mut labels = Map::new();
    for (&i, v) in c.family.ids().iter().zip(&c.values) {
        let id = ConjClassTable::class_id(i);
        entries.insert(id.clone(), c.ring.element_to_json(v));
        labels.insert(id, Value::String(c.table.class(i).label.clone()));
    }
    let mut doc = Map::new();
    doc.insert("group".into(), c.table.group().origin().to_json());
    doc.insert("ring".into(), c.ring.to_json());
    doc.insert("family".into(), c.family.to_json());
    doc.insert(key.into(), Value::Object(entries));
    doc.insert("labels".into(), Value::Object(labels));
    Value::Object(doc)
}

fn from_json(v: &Value, key: &str, cap: usize) -> Result<Coords, WittError> {
    let bad = |s: String| WittError::Document(s);
    let obj = v.as_object().ok_or_else(|| bad("expected an object".into()))?;
    let desc = obj.get("group").ok_or_else(|| bad("missing `group`".into()))?;
    let desc = GroupDescriptor::from_json(desc).map_err(|e| bad(format!("group: {e}")))?;
    let table = class_table(&desc, cap)?;
    let ring = Ring::from_json(obj.get("ring").ok_or_else(|| bad("missing `ring`".into()))?)?;
    let family = match obj.get("family") {
        None => ClosedFamily::all(&table),
        Some(f) => ClosedFamily::from_json(&table, f)?,
    };
    let entries = obj
        .get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| bad(format!("missing `{key}` object")))?;
    for k in entries.keys() {
        let c = table.parse_class_id(k)?;
        if !family.contains(c) {
            return Err(bad(format!("{key} entry {k} is outside the family")));
        }
    }
    let values = family
        .ids()
        .iter()
        .map(|&c| {
            let id = ConjClassTable::class_id(c);
            let e = entries
                .get(&id)
                .ok_or_else(|| bad(format!("missing {key} entry {id}")))?;
            Ok(ring.element_from_json(e)?)
        })
        .collect::<Result<Vec<_>, WittError>>()?;
    Coords::new(table, family, ring, values)
}

impl WittVector {
    pub fn to_json(&self) -> Value {
        to_json(&self.0, "coords")
    }

    pub fn from_json(v: &Value) -> Result<WittVector, WittError> {
        Self::from_json_with_cap(v, DEFAULT_MAX_ORDER)
    }

    pub fn from_json_with_cap(v: &Value, cap: usize) -> Result<WittVector, WittError> {
        from_json(v, "coords", cap).map(WittVector)
    }
}

impl GhostVector {
    pub fn to_json(&self) -> Value {
        to_json(&self.0, "ghost")
    }

    pub fn from_json(v: &Value) -> Result<GhostVector, WittError> {
        Self::from_json_with_cap(v, DEFAULT_MAX_ORDER)
    }

    pub fn from_json_with_cap(v: &Value, cap: usize) -> Result<GhostVector, WittError> {
        from_json(v, "ghost", cap).map(GhostVector)
    }
}
