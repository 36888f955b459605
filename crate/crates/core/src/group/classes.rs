use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{subgroup_lattice, FiniteGroup, GroupError, Subgroup};

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Index (into [`ConjClassTable::subgroups`]) of the representative, the
    /// member with the lexicographically smallest element list.
    pub representative: usize,
    /// Indices of all conjugates, ascending.
    pub members: Vec<usize>,
    pub subgroup_order: usize,
    pub normalizer_order: usize,
    /// `|N_G(H) / H|`.
    pub weyl_order: usize,
    pub label: String,
}

impl SubgroupClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Conjugacy classes of subgroups of a group, with the subconjugacy relation
/// and the table of marks.
///
/// Classes are numbered `0..n` by non-increasing subgroup order, ties broken
/// by the representative's element list, so class `0` is the whole group and
/// the last class is the trivial subgroup. Whenever class `i` is properly
/// subconjugate to class `j`, `j < i`.
#[derive(Clone, Debug)]
pub struct ConjClassTable {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    subgroup_class: Vec<usize>,
    lookup: HashMap<FixedBitSet, usize>,
    classes: Vec<SubgroupClass>,
    subconj: Vec<Vec<bool>>,
    marks: Vec<Vec<u64>>,
}

impl ConjClassTable {
    pub fn new(group: Arc<FiniteGroup>) -> ConjClassTable {
        let g = &*group;
        let subgroups = subgroup_lattice(g);
        let lookup: HashMap<FixedBitSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bits().clone(), i))
            .collect();

        let mut subgroup_class = vec![usize::MAX; subgroups.len()];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for (i, h) in subgroups.iter().enumerate() {
            if subgroup_class[i] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..g.order()).map(|x| lookup[&h.conjugate_bits(g, x)]).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                subgroup_class[m] = raw.len();
            }
            raw.push(members);
        }
        // subgroups are sorted by (order, elements), so members[0] is the
        // lexicographically smallest conjugate
        raw.sort_by(|a, b| {
            let (ha, hb) = (&subgroups[a[0]], &subgroups[b[0]]);
            hb.order()
                .cmp(&ha.order())
                .then_with(|| ha.elements().cmp(hb.elements()))
        });
        for (c, members) in raw.iter().enumerate() {
            for &m in members {
                subgroup_class[m] = c;
            }
        }

        let mut classes: Vec<SubgroupClass> = raw
            .into_iter()
            .map(|members| {
                let rep = members[0];
                let order = subgroups[rep].order();
                let normalizer_order = g.order() / members.len();
                SubgroupClass {
                    representative: rep,
                    subgroup_order: order,
                    normalizer_order,
                    weyl_order: normalizer_order / order,
                    label: String::new(),
                    members,
                }
            })
            .collect();

        let n = classes.len();
        let mut subconj = vec![vec![false; n]; n];
        let mut marks = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let upper = &subgroups[classes[j].representative];
                if classes[i].subgroup_order > upper.order() || !upper.order().is_multiple_of(classes[i].subgroup_order)
                {
                    continue;
                }
                // |{g : g^-1 K g <= H}| = #{conjugates of K inside H} * |N_G(K)|
                let inside = classes[i]
                    .members
                    .iter()
                    .filter(|&&m| subgroups[m].is_subgroup_of(upper))
                    .count();
                if inside > 0 {
                    subconj[i][j] = true;
                    let count = inside * classes[i].normalizer_order;
                    debug_assert_eq!(count % upper.order(), 0);
                    marks[i][j] = (count / upper.order()) as u64;
                }
            }
        }

        let mut seen: HashMap<String, usize> = HashMap::new();
        for c in &mut classes {
            let h = &subgroups[c.representative];
            let base = if h.is_cyclic(g) {
                format!("C{}", h.order())
            } else {
                format!("H{}", h.order())
            };
            let k = seen.entry(base.clone()).or_default();
            *k += 1;
            c.label = format!("{base}#{k}");
        }

        ConjClassTable {
            group,
            subgroups,
            subgroup_class,
            lookup,
            classes,
            subconj,
            marks,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &SubgroupClass {
        &self.classes[i]
    }

    pub fn representative(&self, i: usize) -> &Subgroup {
        &self.subgroups[self.classes[i].representative]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Index of a subgroup given by its membership bitset.
    pub fn subgroup_index(&self, bits: &FixedBitSet) -> Option<usize> {
        self.lookup.get(bits).copied()
    }

    pub fn class_of_index(&self, subgroup: usize) -> usize {
        self.subgroup_class[subgroup]
    }

    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroup_index(h.bits()).map(|i| self.subgroup_class[i])
    }

    pub fn class_of_bits(&self, bits: &FixedBitSet) -> Option<usize> {
        self.subgroup_index(bits).map(|i| self.subgroup_class[i])
    }

    /// Whether some conjugate of class `i` lies in the representative of class `j`.
    pub fn subconj(&self, i: usize, j: usize) -> bool {
        self.subconj[i][j]
    }

    pub fn subconj_matrix(&self) -> &[Vec<bool>] {
        &self.subconj
    }

    /// `|(G/H_j)^{K_i}|`.
    pub fn mark(&self, i: usize, j: usize) -> u64 {
        self.marks[i][j]
    }

    pub fn marks(&self) -> &[Vec<u64>] {
        &self.marks
    }

    pub fn weyl_order(&self, i: usize) -> usize {
        self.classes[i].weyl_order
    }

    pub fn subgroup_order(&self, i: usize) -> usize {
        self.classes[i].subgroup_order
    }

    pub fn trivial_class(&self) -> usize {
        self.classes.len() - 1
    }

    /// Stable string id of a class, `c0`, `c1`, ...
    pub fn class_id(i: usize) -> String {
        format!("c{i}")
    }

    pub fn parse_class_id(&self, s: &str) -> Result<usize, GroupError> {
        s.strip_prefix('c')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i < self.classes.len())
            .ok_or_else(|| GroupError::UnknownClass(s.to_string()))
    }

    /// Normal subgroups, as class ids (normal subgroups are their own class).
    pub fn normal_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].size() == 1)
            .collect()
    }
}
