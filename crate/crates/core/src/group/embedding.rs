use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{ClosedFamily, ConjClassTable, FiniteGroup, GroupDescriptor, GroupError, Subgroup};

/// An injective homomorphism `i: H -> G`, with the induced map from
/// `H`-classes of subgroups to `G`-classes.
///
/// Several `H`-classes can map to the same `G`-class when `H` is not normal
/// or when `G` fuses subgroups that `H` does not.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    parent: Arc<ConjClassTable>,
    sub: Arc<ConjClassTable>,
    map: Vec<usize>,
    preimage: Vec<Option<usize>>,
    class_map: Vec<usize>,
    image: Subgroup,
}

impl SubgroupEmbedding {
    /// Checks that `map` (element `h` of `sub` goes to `map[h]`) is an
    /// injective homomorphism.
    pub fn new(parent: Arc<ConjClassTable>, sub: Arc<ConjClassTable>, map: Vec<usize>) -> Result<Self, GroupError> {
        let (g, h) = (parent.group(), sub.group());
        if map.len() != h.order() || map.iter().any(|&x| x >= g.order()) {
            return Err(GroupError::InvalidMap("embedding has the wrong shape".into()));
        }
        let mut preimage = vec![None; g.order()];
        for (a, &x) in map.iter().enumerate() {
            if preimage[x].replace(a).is_some() {
                return Err(GroupError::InvalidMap("not injective".into()));
            }
        }
        for a in 0..h.order() {
            for b in 0..h.order() {
                if map[h.mul(a, b)] != g.mul(map[a], map[b]) {
                    return Err(GroupError::InvalidMap(format!("not a homomorphism at ({a},{b})")));
                }
            }
        }
        let mut image = map.clone();
        image.sort_unstable();
        let image = Subgroup::from_sorted(g.order(), image);
        let class_map = (0..sub.num_classes())
            .map(|c| {
                let img = Self::push(&map, g.order(), sub.representative(c));
                parent.class_of_bits(&img).expect("image of a subgroup is a subgroup")
            })
            .collect();
        Ok(SubgroupEmbedding {
            parent,
            sub,
            map,
            preimage,
            class_map,
            image,
        })
    }

    /// The inclusion of a subgroup `H <= G`, with `H` built as a group in its
    /// own right (element `i` of `H` is `h.elements()[i]`).
    pub fn of_subgroup(parent: &Arc<ConjClassTable>, h: &Subgroup) -> Result<Self, GroupError> {
        let g = parent.group();
        let h = Subgroup::new(g, h.elements().to_vec())?;
        let class = parent
            .class_of(&h)
            .ok_or_else(|| GroupError::NotSubgroup("not in the lattice".into()))?;
        let origin = if parent.representative(class) == &h {
            GroupDescriptor::Subgroup {
                of: Box::new(g.origin().clone()),
                class: Some(ConjClassTable::class_id(class)),
                elements: None,
            }
        } else {
            GroupDescriptor::Subgroup {
                of: Box::new(g.origin().clone()),
                class: None,
                elements: Some(h.elements().to_vec()),
            }
        };
        let sub = FiniteGroup::from_subgroup(g, &h, origin);
        let sub = Arc::new(ConjClassTable::new(Arc::new(sub)));
        Self::new(parent.clone(), sub, h.elements().to_vec())
    }

    /// The inclusion of the representative of class `class`.
    pub fn of_class(parent: &Arc<ConjClassTable>, class: usize) -> Result<Self, GroupError> {
        if class >= parent.num_classes() {
            return Err(GroupError::UnknownClass(ConjClassTable::class_id(class)));
        }
        Self::of_subgroup(parent, &parent.representative(class).clone())
    }

    fn push(map: &[usize], n: usize, k: &Subgroup) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for &x in k.elements() {
            bits.insert(map[x]);
        }
        bits
    }

    pub fn parent(&self) -> &Arc<ConjClassTable> {
        &self.parent
    }

    pub fn sub(&self) -> &Arc<ConjClassTable> {
        &self.sub
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// The image `i(H)` as a subgroup of `G`.
    pub fn image(&self) -> &Subgroup {
        &self.image
    }

    /// `H`-class -> `G`-class of its image.
    pub fn class_map(&self) -> &[usize] {
        &self.class_map
    }

    /// The `H`-class of a subgroup of `G` contained in the image, given by
    /// its membership bitset in `G`.
    pub fn sub_class_of(&self, bits: &FixedBitSet) -> Option<usize> {
        let mut pre = FixedBitSet::with_capacity(self.sub.group().order());
        for x in bits.ones() {
            pre.insert(self.preimage[x]?);
        }
        self.sub.class_of_bits(&pre)
    }

    /// Classes `[L]_H` whose `G`-class lies in `family`. Closed, because
    /// subconjugacy in `H` implies subconjugacy in `G`.
    pub fn induced_family(&self, family: &ClosedFamily) -> ClosedFamily {
        let ids: Vec<usize> = (0..self.sub.num_classes())
            .filter(|&c| family.contains(self.class_map[c]))
            .collect();
        ClosedFamily::validate(&self.sub, &ids).expect("induced family is closed")
    }
}
