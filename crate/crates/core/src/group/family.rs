use super::{ConjClassTable, GroupError};

/// A set of subgroup classes closed upward under subconjugacy: if `[K]` is in
/// the family and `K` is subconjugate to `H`, then `[H]` is in the family.
///
/// Ids are kept sorted, so iterating a family visits classes in the canonical
/// order of the table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedFamily {
    ids: Vec<usize>,
    num_classes: usize,
}

impl ClosedFamily {
    /// Every class of the table.
    pub fn all(table: &ConjClassTable) -> ClosedFamily {
        ClosedFamily {
            ids: (0..table.num_classes()).collect(),
            num_classes: table.num_classes(),
        }
    }

    /// Checks upward closure, reporting the first violating pair.
    pub fn validate(table: &ConjClassTable, ids: &[usize]) -> Result<ClosedFamily, GroupError> {
        let ids = Self::normalize(table, ids)?;
        for &i in &ids {
            for j in 0..table.num_classes() {
                if table.subconj(i, j) && ids.binary_search(&j).is_err() {
                    return Err(GroupError::NotClosed { lower: i, upper: j });
                }
            }
        }
        Ok(ClosedFamily {
            ids,
            num_classes: table.num_classes(),
        })
    }

    /// The smallest closed family containing `ids`.
    pub fn closure(table: &ConjClassTable, ids: &[usize]) -> Result<ClosedFamily, GroupError> {
        let ids = Self::normalize(table, ids)?;
        let mut member = vec![false; table.num_classes()];
        for &i in &ids {
            for (j, m) in member.iter_mut().enumerate() {
                *m |= table.subconj(i, j);
            }
        }
        Ok(ClosedFamily {
            ids: (0..member.len()).filter(|&j| member[j]).collect(),
            num_classes: table.num_classes(),
        })
    }

    fn normalize(table: &ConjClassTable, ids: &[usize]) -> Result<Vec<usize>, GroupError> {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        if let Some(&bad) = ids.iter().find(|&&i| i >= table.num_classes()) {
            return Err(GroupError::UnknownClass(ConjClassTable::class_id(bad)));
        }
        Ok(ids)
    }

    /// Parses `"all"` or a list of class ids like `["c0","c1"]` and validates.
    pub fn from_json(table: &ConjClassTable, v: &serde_json::Value) -> Result<ClosedFamily, GroupError> {
        match v {
            serde_json::Value::String(s) if s == "all" => Ok(Self::all(table)),
            serde_json::Value::Array(items) => {
                let mut ids = Vec::with_capacity(items.len());
                for it in items {
                    let s = it.as_str().ok_or_else(|| GroupError::UnknownClass(it.to_string()))?;
                    ids.push(table.parse_class_id(s)?);
                }
                Self::validate(table, &ids)
            }
            other => Err(GroupError::UnknownClass(other.to_string())),
        }
    }

    /// `"all"` for the full family, otherwise the list of class ids.
    pub fn to_json(&self) -> serde_json::Value {
        if self.is_full() {
            serde_json::Value::String("all".into())
        } else {
            self.ids
                .iter()
                .map(|&i| serde_json::Value::String(ConjClassTable::class_id(i)))
                .collect()
        }
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.ids.len() == self.num_classes
    }

    /// Number of classes of the ambient table.
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn contains(&self, class: usize) -> bool {
        self.ids.binary_search(&class).is_ok()
    }

    /// Position of `class` within [`ids`](Self::ids).
    pub fn position(&self, class: usize) -> Option<usize> {
        self.ids.binary_search(&class).ok()
    }

    pub fn is_subfamily_of(&self, other: &ClosedFamily) -> bool {
        self.num_classes == other.num_classes && self.ids.iter().all(|&i| other.contains(i))
    }

    /// Every class except the trivial subgroup; closed because nothing but
    /// the trivial class is subconjugate to it.
    pub fn without_trivial(table: &ConjClassTable) -> ClosedFamily {
        let n = table.num_classes();
        ClosedFamily {
            ids: (0..n - 1).collect(),
            num_classes: n,
        }
    }

    /// If `sub ⊆ self` and the two differ by exactly one class, that class.
    pub fn adjacent_class(&self, sub: &ClosedFamily) -> Option<usize> {
        if !sub.is_subfamily_of(self) || self.len() != sub.len() + 1 {
            return None;
        }
        self.ids.iter().copied().find(|&i| !sub.contains(i))
    }
}
