//! Finite groups given by dense Cayley tables, together with the subgroup
//! combinatorics the Burnside-Witt construction is indexed by: the subgroup
//! lattice, conjugacy classes of subgroups, Weyl groups, the table of marks,
//! quotient maps and closed families.

mod classes;
mod embedding;
mod family;
mod lattice;
mod quotient;
pub mod standard;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use classes::{ConjClassTable, SubgroupClass};
pub use embedding::SubgroupEmbedding;
pub use family::ClosedFamily;
pub use lattice::{subgroup_lattice, Subgroup};
pub use quotient::QuotientMap;

/// Default hard cap on group orders.
pub const DEFAULT_MAX_ORDER: usize = 255;
/// Largest permutation degree accepted in descriptors.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderExceedsCap { order: u64, cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a closed family: class c{lower} is in the family but c{upper} is not")]
    NotClosed { lower: usize, upper: usize },
    #[error("family is not contained in the ambient family")]
    NotContained,
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("invalid group map: {0}")]
    InvalidMap(String),
}

/// How a group was constructed. Serialized as the JSON group descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupDescriptor {
    /// Product of cyclic groups of the given orders.
    Abelian(Vec<u64>),
    /// Group generated by permutations, each given by its 1-based one-line images.
    Perm { degree: usize, gens: Vec<Vec<usize>> },
    /// A subgroup of another group, named by a class id (its canonical
    /// representative) or by an explicit element list.
    Subgroup {
        of: Box<GroupDescriptor>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<usize>>,
    },
    /// Quotient by the normal subgroup with the given class id.
    Quotient { of: Box<GroupDescriptor>, by: String },
}

impl GroupDescriptor {
    pub fn from_json(v: &serde_json::Value) -> Result<Self, serde_json::Error> {
        serde_json::from_value(v.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("descriptor serializes")
    }
}

/// A finite group on the elements `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<u32>,
    inverses: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
    origin: GroupDescriptor,
    perms: Option<Vec<Vec<usize>>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.cayley == other.cayley
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("origin", &self.origin)
            .finish()
    }
}

/// The class table of the group described by `desc`, memoized per process
/// since building a subgroup lattice is the expensive step of every command.
pub fn class_table(desc: &GroupDescriptor, cap: usize) -> Result<Arc<ConjClassTable>, GroupError> {
    type Memo = Mutex<HashMap<(GroupDescriptor, usize), Arc<ConjClassTable>>>;
    static TABLES: OnceLock<Memo> = OnceLock::new();
    let memo = TABLES.get_or_init(Default::default);
    let key = (desc.clone(), cap);
    if let Some(t) = memo.lock().expect("table memo").get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(ConjClassTable::new(FiniteGroup::build_with_cap(desc, cap)?));
    Ok(memo.lock().expect("table memo").entry(key).or_insert(t).clone())
}

impl FiniteGroup {
    pub fn build(desc: &GroupDescriptor) -> Result<Arc<FiniteGroup>, GroupError> {
        Self::build_with_cap(desc, DEFAULT_MAX_ORDER)
    }

    pub fn build_with_cap(desc: &GroupDescriptor, cap: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        match desc {
            GroupDescriptor::Abelian(factors) => Self::abelian(factors, cap),
            GroupDescriptor::Perm { degree, gens } => Self::permutations(*degree, gens, cap),
            GroupDescriptor::Subgroup { of, class, elements } => {
                let parent = ConjClassTable::new(Self::build_with_cap(of, cap)?);
                let sub = match (class, elements) {
                    (Some(c), None) => parent.representative(parent.parse_class_id(c)?).clone(),
                    (None, Some(els)) => Subgroup::new(parent.group(), els.clone())?,
                    _ => {
                        return Err(GroupError::NotSubgroup(
                            "give exactly one of `class` or `elements`".into(),
                        ))
                    }
                };
                Ok(Arc::new(Self::from_subgroup(parent.group(), &sub, desc.clone())))
            }
            GroupDescriptor::Quotient { of, by } => {
                let parent = Arc::new(ConjClassTable::new(Self::build_with_cap(of, cap)?));
                let kernel = parent.representative(parent.parse_class_id(by)?).clone();
                Ok(QuotientMap::quotient(&parent, &kernel)?.target().group().clone())
            }
        }
    }

    fn abelian(factors: &[u64], cap: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        let mut order: u64 = 1;
        for &d in factors {
            if d == 0 {
                return Err(GroupError::InvalidTable("invariant factor 0".into()));
            }
            order = order.saturating_mul(d);
        }
        if order > cap as u64 {
            return Err(GroupError::OrderExceedsCap { order, cap });
        }
        let n = order as usize;
        let digits = |mut idx: usize| -> Vec<u64> {
            let mut out = vec![0; factors.len()];
            for (k, &d) in factors.iter().enumerate().rev() {
                out[k] = idx as u64 % d;
                idx /= d as usize;
            }
            out
        };
        let index = |ds: &[u64]| -> usize {
            ds.iter()
                .zip(factors)
                .fold(0, |acc, (&x, &d)| acc * d as usize + x as usize)
        };
        let all: Vec<Vec<u64>> = (0..n).map(digits).collect();
        let mut cayley = Vec::with_capacity(n * n);
        for a in &all {
            for b in &all {
                let s: Vec<u64> = a.iter().zip(b).zip(factors).map(|((x, y), d)| (x + y) % d).collect();
                cayley.push(index(&s) as u32);
            }
        }
        let labels = all
            .iter()
            .map(|ds| format!("({})", ds.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        Self::from_cayley(cayley, 0, labels, GroupDescriptor::Abelian(factors.to_vec()), cap).map(Arc::new)
    }

    fn permutations(degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        if degree > MAX_DEGREE {
            return Err(GroupError::InvalidPermutation(format!(
                "degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let mut gens0 = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != degree {
                return Err(GroupError::InvalidPermutation(format!("{g:?} has length != {degree}")));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x == 0 || x > degree || seen[x - 1] {
                    return Err(GroupError::InvalidPermutation(format!(
                        "{g:?} is not a bijection of 1..={degree}"
                    )));
                }
                seen[x - 1] = true;
            }
            gens0.push(g.iter().map(|x| x - 1).collect::<Vec<usize>>());
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index = std::collections::HashMap::from([(identity, 0usize)]);
        let mut next = 0;
        while next < elements.len() {
            let x = elements[next].clone();
            next += 1;
            for s in &gens0 {
                let y: Vec<usize> = s.iter().map(|&i| x[i]).collect();
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderExceedsCap {
                            order: elements.len() as u64 + 1,
                            cap,
                        });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut cayley = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                // (a * b)(i) = a(b(i))
                let ab: Vec<usize> = b.iter().map(|&i| a[i]).collect();
                cayley.push(index[&ab] as u32);
            }
        }
        let labels = elements
            .iter()
            .map(|p| {
                format!(
                    "[{}]",
                    p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        let desc = GroupDescriptor::Perm {
            degree,
            gens: gens.to_vec(),
        };
        let mut g = Self::from_cayley(cayley, 0, labels, desc, cap)?;
        g.perms = Some(elements);
        Ok(Arc::new(g))
    }

    /// Validates a Cayley table (closure, identity, inverses, associativity).
    pub fn from_cayley(
        cayley: Vec<u32>,
        identity: usize,
        labels: Vec<String>,
        origin: GroupDescriptor,
        cap: usize,
    ) -> Result<FiniteGroup, GroupError> {
        let n = (cayley.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != cayley.len() {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        if n > cap {
            return Err(GroupError::OrderExceedsCap { order: n as u64, cap });
        }
        if labels.len() != n || identity >= n {
            return Err(GroupError::InvalidTable("labels or identity out of range".into()));
        }
        if cayley.iter().any(|&x| x as usize >= n) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let m = |a: usize, b: usize| cayley[a * n + b] as usize;
        if (0..n).any(|a| m(identity, a) != a || m(a, identity) != a) {
            return Err(GroupError::InvalidTable("identity is not two-sided".into()));
        }
        let mut inverses = vec![usize::MAX; n];
        for (a, slot) in inverses.iter_mut().enumerate() {
            let inv = (0..n)
                .find(|&b| m(a, b) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {a} has no inverse")))?;
            if m(inv, a) != identity {
                return Err(GroupError::InvalidTable(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
            *slot = inv;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(GroupError::InvalidTable(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            cayley,
            inverses,
            identity,
            labels,
            origin,
            perms: None,
        })
    }

    /// The subgroup `H` as a group in its own right; element `i` of the
    /// result is `H.elements()[i]`.
    pub fn from_subgroup(parent: &FiniteGroup, h: &Subgroup, origin: GroupDescriptor) -> FiniteGroup {
        let els = h.elements();
        let pos = |x: usize| els.binary_search(&x).expect("subgroup is closed");
        let k = els.len();
        let mut cayley = Vec::with_capacity(k * k);
        for &a in els {
            for &b in els {
                cayley.push(pos(parent.mul(a, b)) as u32);
            }
        }
        FiniteGroup {
            order: k,
            inverses: els.iter().map(|&a| pos(parent.inverse(a))).collect(),
            identity: pos(parent.identity),
            labels: els.iter().map(|&a| parent.labels[a].clone()).collect(),
            perms: parent
                .perms
                .as_ref()
                .map(|ps| els.iter().map(|&a| ps[a].clone()).collect()),
            origin,
            cayley,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b] as usize
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g * x * g^-1`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn origin(&self) -> &GroupDescriptor {
        &self.origin
    }

    /// For permutation groups: the 0-based images of every element.
    pub fn permutations_of_elements(&self) -> Option<&[Vec<usize>]> {
        self.perms.as_deref()
    }

    /// Element indices of the generators named by the descriptor: unit
    /// vectors for abelian groups, the given permutations otherwise. `None`
    /// for subgroup and quotient descriptors.
    pub fn generators(&self) -> Option<Vec<usize>> {
        match &self.origin {
            GroupDescriptor::Abelian(factors) => Some(
                (0..factors.len())
                    .map(|k| match factors[k] {
                        1 => self.identity,
                        _ => factors[k + 1..].iter().product::<u64>() as usize,
                    })
                    .collect(),
            ),
            GroupDescriptor::Perm { gens, .. } => {
                let perms = self.perms.as_ref()?;
                gens.iter()
                    .map(|g| {
                        let g0: Vec<usize> = g.iter().map(|x| x - 1).collect();
                        perms.iter().position(|p| *p == g0)
                    })
                    .collect()
            }
            _ => None,
        }
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Stable content hash of the multiplication table.
    pub fn canonical_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        h.update((self.identity as u64).to_le_bytes());
        for &x in &self.cayley {
            h.update(x.to_le_bytes());
        }
        hex::encode(&h.finalize()[..12])
    }
}
