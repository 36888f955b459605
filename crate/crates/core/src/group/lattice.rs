use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use super::{FiniteGroup, GroupError};

/// A subgroup, stored as its sorted element list plus a membership bitset.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
    bits: FixedBitSet,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Ord for Subgroup {
    /// By order, then by element list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    /// Checks that `elements` is a subgroup of `g`.
    pub fn new(g: &FiniteGroup, mut elements: Vec<usize>) -> Result<Subgroup, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= g.order()) {
            return Err(GroupError::NotSubgroup("element out of range".into()));
        }
        let s = Self::from_sorted(g.order(), elements);
        if !s.contains(g.identity()) {
            return Err(GroupError::NotSubgroup("missing the identity".into()));
        }
        for &a in &s.elements {
            for &b in &s.elements {
                if !s.contains(g.mul(a, b)) {
                    return Err(GroupError::NotSubgroup(format!("not closed: {a} * {b}")));
                }
            }
        }
        if !g.order().is_multiple_of(s.order()) {
            return Err(GroupError::NotSubgroup("order does not divide the group order".into()));
        }
        Ok(s)
    }

    pub(crate) fn from_sorted(n: usize, elements: Vec<usize>) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(n);
        for &x in &elements {
            bits.insert(x);
        }
        Subgroup { elements, bits }
    }

    pub(crate) fn from_bits(bits: FixedBitSet) -> Subgroup {
        Subgroup {
            elements: bits.ones().collect(),
            bits,
        }
    }

    pub fn trivial(g: &FiniteGroup) -> Subgroup {
        Self::from_sorted(g.order(), vec![g.identity()])
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Self::from_sorted(g.order(), (0..g.order()).collect())
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Subgroup {
        Self::from_bits(closure(g, gens))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// `g H g^-1` as a bitset.
    pub fn conjugate_bits(&self, grp: &FiniteGroup, g: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(grp.order());
        for &h in &self.elements {
            out.insert(grp.conjugate(g, h));
        }
        out
    }

    pub fn is_normal(&self, grp: &FiniteGroup) -> bool {
        (0..grp.order()).all(|g| self.conjugate_bits(grp, g) == self.bits)
    }

    pub fn is_cyclic(&self, grp: &FiniteGroup) -> bool {
        self.elements.iter().any(|&x| grp.element_order(x) == self.order())
    }
}

fn closure(g: &FiniteGroup, gens: &[usize]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(g.order());
    bits.insert(g.identity());
    let mut queue = vec![g.identity()];
    while let Some(x) = queue.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !bits.contains(y) {
                bits.insert(y);
                queue.push(y);
            }
        }
    }
    bits
}

/// Every subgroup of `g`, sorted by order and then element list.
///
/// Seeds with the cyclic subgroups and closes under joins. Every subgroup is
/// a join of cyclic ones, so joining each found subgroup with each cyclic
/// seed reaches all of them.
pub fn subgroup_lattice(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut found: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
    let mut seeds: Vec<usize> = Vec::new();
    for x in 0..g.order() {
        let bits = closure(g, &[x]);
        if !seen.contains_key(&bits) {
            seen.insert(bits.clone(), found.len());
            found.push((bits, vec![x]));
            seeds.push(x);
        }
    }
    let mut next = 0;
    while next < found.len() {
        let (bits, gens) = found[next].clone();
        next += 1;
        for &s in &seeds {
            if bits.contains(s) {
                continue;
            }
            let mut joined_gens = gens.clone();
            joined_gens.push(s);
            let joined = closure(g, &joined_gens);
            if !seen.contains_key(&joined) {
                seen.insert(joined.clone(), found.len());
                found.push((joined, joined_gens));
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().map(|(b, _)| Subgroup::from_bits(b)).collect();
    out.sort();
    out
}
