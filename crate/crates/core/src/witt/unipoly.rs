//! Universal polynomials for Witt vector operations over arbitrary rings.
//!
//! For an operation such as addition, take generic vectors `X`, `Y` with
//! coordinates `x_c`, `y_c` in `Z[x_c, y_c]`, combine their ghost components
//! and invert the ghost map. The coordinates of the result are integral
//! polynomials, and evaluating them at elements of any ring `B` computes the
//! operation in `W_G(B)`.
//!
//! Results are memoized per process and, when a cache directory is set, on
//! disk as one JSON document per (group hash, tag).

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use super::WittError;
use crate::group::ConjClassTable;
use crate::ring::{evaluate, Element, Polynomial, Ring};

/// Version of the on-disk document layout.
pub const FORMAT_VERSION: u64 = 1;

/// Default cap on the group order for which polynomials are generated.
pub const DEFAULT_ORDER_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnipolyTag {
    Add,
    Mul,
    Neg,
    /// Frobenius along an embedding, keyed by a digest of the embedding.
    Frobenius(String),
    /// Verschiebung along an embedding, keyed by a digest of the embedding.
    Verschiebung(String),
}

impl UnipolyTag {
    pub fn name(&self) -> &'static str {
        match self {
            UnipolyTag::Add => "add",
            UnipolyTag::Mul => "mul",
            UnipolyTag::Neg => "neg",
            UnipolyTag::Frobenius(_) => "frob",
            UnipolyTag::Verschiebung(_) => "versch",
        }
    }

    /// Stable string form, e.g. `add` or `frob:3fa2...`.
    pub fn key(&self) -> String {
        match self {
            UnipolyTag::Frobenius(k) | UnipolyTag::Verschiebung(k) => format!("{}:{k}", self.name()),
            _ => self.name().to_string(),
        }
    }
}

/// One integral polynomial per output class, in variables `x_c0, x_c1, ...`
/// (and `y_c0, ...` for binary operations) indexed by input classes.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalPolys {
    group_hash: String,
    tag: String,
    input_classes: usize,
    ring: Ring,
    polys: Vec<Polynomial>,
}

impl UniversalPolys {
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn group_hash(&self) -> &str {
        &self.group_hash
    }

    pub fn variables(&self) -> &[String] {
        self.ring.variables()
    }

    /// The polynomial ring the polynomials live in.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Number of classes of the input group; `y_c{i}` is variable
    /// `input_classes + i`.
    pub fn input_classes(&self) -> usize {
        self.input_classes
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn evaluate(&self, class: usize, images: &[Option<Element>], target: &Ring) -> Result<Element, WittError> {
        Ok(evaluate(&self.polys[class], images, target, self.variables())?)
    }

    pub fn to_json(&self) -> Value {
        let polys: serde_json::Map<String, Value> = self
            .polys
            .iter()
            .enumerate()
            .map(|(c, p)| {
                let e = self.ring.poly_element(p.clone()).expect("fits its own ring");
                (ConjClassTable::class_id(c), self.ring.element_to_json(&e))
            })
            .collect();
        json!({
            "format_version": FORMAT_VERSION,
            "group_hash": self.group_hash,
            "tag": self.tag,
            "input_classes": self.input_classes,
            "variables": self.variables(),
            "polys": polys,
        })
    }

    pub fn from_json(v: &Value) -> Result<UniversalPolys, WittError> {
        let bad = |what: &str| WittError::Cache(format!("malformed cache document: {what}"));
        if v.get("format_version").and_then(Value::as_u64) != Some(FORMAT_VERSION) {
            return Err(bad("format_version"));
        }
        let s = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| bad(k))
        };
        let group_hash = s("group_hash")?;
        let tag = s("tag")?;
        let input_classes = v
            .get("input_classes")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("input_classes"))? as usize;
        let vars = v
            .get("variables")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("variables"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("variables")))
            .collect::<Result<Vec<_>, _>>()?;
        let ring = Ring::polynomial(vars)?;
        let obj = v.get("polys").and_then(Value::as_object).ok_or_else(|| bad("polys"))?;
        let mut polys = Vec::with_capacity(obj.len());
        for c in 0..obj.len() {
            let e = obj.get(&ConjClassTable::class_id(c)).ok_or_else(|| bad("polys"))?;
            let e = ring.element_from_json(e)?;
            polys.push(e.as_poly().expect("polynomial ring").clone());
        }
        Ok(UniversalPolys {
            group_hash,
            tag,
            input_classes,
            ring,
            polys,
        })
    }
}

/// Variable names `x_c0..` followed, if `binary`, by `y_c0..`.
pub fn variable_names(classes: usize, binary: bool) -> Vec<String> {
    let mut names: Vec<String> = (0..classes).map(|c| format!("x_c{c}")).collect();
    if binary {
        names.extend((0..classes).map(|c| format!("y_c{c}")));
    }
    names
}

/// The generic vector over the full family of `table` whose coordinates are
/// the variables `prefix_c{i}` of `ring`.
pub(crate) fn generic_vector(table: &Arc<ConjClassTable>, ring: &Ring, prefix: &str) -> super::WittVector {
    let values = (0..table.num_classes())
        .map(|c| ring.var(&format!("{prefix}_c{c}")).expect("variable declared"))
        .collect();
    super::WittVector::full(table.clone(), ring.clone(), values).expect("well-formed")
}

/// One slot per `(group hash, operation key)`; the inner lock serialises
/// generation of that entry.
type Slot = Arc<Mutex<Option<Arc<UniversalPolys>>>>;

struct Cache {
    dir: Mutex<Option<PathBuf>>,
    cap: AtomicUsize,
    entries: Mutex<HashMap<(String, String), Slot>>,
}

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Cache {
        dir: Mutex::new(None),
        cap: AtomicUsize::new(DEFAULT_ORDER_CAP),
        entries: Mutex::new(HashMap::new()),
    })
}

/// Sets (or clears) the on-disk cache directory. It is created on first write.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *cache().dir.lock().expect("cache lock") = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    cache().dir.lock().expect("cache lock").clone()
}

/// Sets the largest group order for which polynomials are generated.
pub fn set_order_cap(cap: usize) {
    cache().cap.store(cap, Ordering::Relaxed);
}

pub fn order_cap() -> usize {
    cache().cap.load(Ordering::Relaxed)
}

/// Forgets every in-memory entry. The disk cache is left alone.
pub fn clear_memory() {
    cache().entries.lock().expect("cache lock").clear();
}

/// The polynomials for `add`, `mul` or `neg` over `table`.
pub fn get(table: &Arc<ConjClassTable>, tag: &UnipolyTag) -> Result<Arc<UniversalPolys>, WittError> {
    let binary = matches!(tag, UnipolyTag::Add | UnipolyTag::Mul);
    if !binary && *tag != UnipolyTag::Neg {
        return Err(WittError::Incompatible(format!("`{}` needs an embedding", tag.key())));
    }
    get_with(table, tag, || {
        let n = table.num_classes();
        let ring = Ring::polynomial(variable_names(n, binary))?;
        let x = generic_vector(table, &ring, "x");
        let out = match tag {
            UnipolyTag::Add => x.try_add(&generic_vector(table, &ring, "y"))?,
            UnipolyTag::Mul => x.try_mul(&generic_vector(table, &ring, "y"))?,
            _ => x.try_neg()?,
        };
        Ok((n, ring, out))
    })
}

/// Looks up `(table, tag)` in memory, then on disk, and otherwise runs
/// `build`, which returns the input class count, the polynomial ring and
/// the generic result vector. At most one build per key runs at a time.
pub(crate) fn get_with(
    table: &Arc<ConjClassTable>,
    tag: &UnipolyTag,
    build: impl FnOnce() -> Result<(usize, Ring, super::WittVector), WittError>,
) -> Result<Arc<UniversalPolys>, WittError> {
    let order = table.group().order();
    let cap = order_cap();
    if order > cap {
        return Err(WittError::UnipolyCapExceeded { order, cap });
    }
    let hash = table.group().canonical_hash();
    let key = tag.key();
    let slot = cache()
        .entries
        .lock()
        .expect("cache lock")
        .entry((hash.clone(), key.clone()))
        .or_default()
        .clone();
    let mut slot = slot.lock().expect("cache entry lock");
    if let Some(p) = slot.as_ref() {
        return Ok(p.clone());
    }
    let dir = cache_dir();
    let path = dir.as_deref().map(|d| file_path(d, &hash, &key));
    if let Some(found) = path.as_deref().and_then(|p| read_file(p, &hash, &key)) {
        let found = Arc::new(found);
        *slot = Some(found.clone());
        return Ok(found);
    }
    let (input_classes, ring, out) = build()?;
    debug_assert!(out.family().is_full());
    let polys = out
        .values()
        .iter()
        .map(|e| {
            e.as_poly()
                .cloned()
                .ok_or_else(|| WittError::Invariant("non-polynomial output".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let polys = Arc::new(UniversalPolys {
        group_hash: hash,
        tag: key,
        input_classes,
        ring,
        polys,
    });
    if let Some(p) = path {
        write_file(&p, &polys)?;
    }
    *slot = Some(polys.clone());
    Ok(polys)
}

fn file_path(dir: &Path, hash: &str, key: &str) -> PathBuf {
    dir.join(format!("{hash}-{}.json", key.replace(':', "-")))
}

/// A cached document, or `None` if it is missing, unreadable or describes a
/// different key (the caller then regenerates and overwrites it).
fn read_file(path: &Path, hash: &str, key: &str) -> Option<UniversalPolys> {
    let text = fs::read_to_string(path).ok()?;
    let v: Value = serde_json::from_str(&text).ok()?;
    let p = UniversalPolys::from_json(&v).ok()?;
    (p.group_hash == hash && p.tag == key).then_some(p)
}

fn write_file(path: &Path, polys: &UniversalPolys) -> Result<(), WittError> {
    let io = |e: std::io::Error| WittError::Cache(format!("{}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    let text = serde_json::to_string(&polys.to_json()).expect("serializable");
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{standard, FiniteGroup};
    use crate::ring::poly::parse_polynomial;

    fn table(d: crate::group::GroupDescriptor) -> Arc<ConjClassTable> {
        Arc::new(ConjClassTable::new(FiniteGroup::build(&d).unwrap()))
    }

    fn parse(p: &UniversalPolys, s: &str) -> Polynomial {
        parse_polynomial(s, p.variables()).unwrap()
    }

    #[test]
    fn cyclic_two_addition() {
        let t = table(standard::cyclic(2));
        let p = get(&t, &UnipolyTag::Add).unwrap();
        assert_eq!(p.polys()[0], parse(&p, "x_c0 + y_c0"));
        assert_eq!(p.polys()[1], parse(&p, "x_c1 + y_c1 - x_c0*y_c0"));
    }

    #[test]
    fn cyclic_two_negation() {
        let t = table(standard::cyclic(2));
        let p = get(&t, &UnipolyTag::Neg).unwrap();
        assert_eq!(p.polys()[0], parse(&p, "-x_c0"));
        assert_eq!(p.polys()[1], parse(&p, "-x_c1 - x_c0^2"));
    }

    #[test]
    fn trivial_group_multiplication() {
        let t = table(standard::cyclic(1));
        let p = get(&t, &UnipolyTag::Mul).unwrap();
        assert_eq!(p.polys(), &[parse(&p, "x_c0*y_c0")]);
    }

    #[test]
    fn json_round_trip() {
        let t = table(standard::symmetric(3));
        let p = get(&t, &UnipolyTag::Mul).unwrap();
        let back = UniversalPolys::from_json(&p.to_json()).unwrap();
        assert_eq!(*p, back);
    }

    #[test]
    fn frobenius_tag_needs_an_embedding() {
        let t = table(standard::cyclic(2));
        assert!(get(&t, &UnipolyTag::Frobenius("k".into())).is_err());
    }
}
