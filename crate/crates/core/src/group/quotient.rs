use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{ConjClassTable, FiniteGroup, GroupDescriptor, GroupError, Subgroup};

/// A surjective homomorphism `f: G -> G'` with its kernel, together with the
/// induced map on subgroup classes `[H'] -> [f^-1 H']`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: Arc<ConjClassTable>,
    kernel: Subgroup,
    target: Arc<ConjClassTable>,
    projection: Vec<usize>,
    class_pullback: Vec<usize>,
}

impl QuotientMap {
    /// `G -> G/N` on left cosets. Cosets are numbered by their smallest
    /// element, so the identity coset is element `0` only when the source
    /// identity is element `0`.
    pub fn quotient(source: &Arc<ConjClassTable>, kernel: &Subgroup) -> Result<QuotientMap, GroupError> {
        let g = source.group();
        if kernel.elements().iter().any(|&x| x >= g.order()) || !kernel.contains(g.identity()) {
            return Err(GroupError::NotSubgroup("kernel is not a subgroup of the source".into()));
        }
        if !kernel.is_normal(g) {
            return Err(GroupError::NotNormal);
        }
        let n = g.order();
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if projection[x] != usize::MAX {
                continue;
            }
            for &k in kernel.elements() {
                projection[g.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
        let m = reps.len();
        let mut cayley = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                cayley.push(projection[g.mul(a, b)] as u32);
            }
        }
        let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
        let by = source
            .class_of(kernel)
            .map(ConjClassTable::class_id)
            .ok_or_else(|| GroupError::NotSubgroup("kernel is not a subgroup of the source".into()))?;
        let origin = GroupDescriptor::Quotient {
            of: Box::new(g.origin().clone()),
            by,
        };
        let target = FiniteGroup::from_cayley(cayley, projection[g.identity()], labels, origin, usize::MAX)?;
        let target = Arc::new(ConjClassTable::new(Arc::new(target)));
        Ok(Self::assemble(source.clone(), kernel.clone(), target, projection))
    }

    /// Wraps an explicit surjective homomorphism `proj` (element `x` of the
    /// source maps to `proj[x]`).
    pub fn from_projection(
        source: Arc<ConjClassTable>,
        target: Arc<ConjClassTable>,
        projection: Vec<usize>,
    ) -> Result<QuotientMap, GroupError> {
        let (g, h) = (source.group(), target.group());
        if projection.len() != g.order() || projection.iter().any(|&y| y >= h.order()) {
            return Err(GroupError::InvalidMap("projection has the wrong shape".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if projection[g.mul(a, b)] != h.mul(projection[a], projection[b]) {
                    return Err(GroupError::InvalidMap(format!("not a homomorphism at ({a},{b})")));
                }
            }
        }
        let mut hit = FixedBitSet::with_capacity(h.order());
        projection.iter().for_each(|&y| hit.insert(y));
        if hit.count_ones(..) != h.order() {
            return Err(GroupError::InvalidMap("not surjective".into()));
        }
        let kernel: Vec<usize> = (0..g.order()).filter(|&x| projection[x] == h.identity()).collect();
        let kernel = Subgroup::from_sorted(g.order(), kernel);
        Ok(Self::assemble(source, kernel, target, projection))
    }

    fn assemble(
        source: Arc<ConjClassTable>,
        kernel: Subgroup,
        target: Arc<ConjClassTable>,
        projection: Vec<usize>,
    ) -> QuotientMap {
        let mut map = QuotientMap {
            source,
            kernel,
            target,
            projection,
            class_pullback: Vec::new(),
        };
        map.class_pullback = (0..map.target.num_classes())
            .map(|c| {
                let pre = map.preimage(map.target.representative(c));
                map.source.class_of(&pre).expect("preimage of a subgroup is a subgroup")
            })
            .collect();
        map
    }

    pub fn source(&self) -> &Arc<ConjClassTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ConjClassTable> {
        &self.target
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    /// `[H'] -> [f^-1 H']`, indexed by target class.
    pub fn class_pullback(&self) -> &[usize] {
        &self.class_pullback
    }

    /// `f^-1 H'` for a subgroup `H'` of the target.
    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        let n = self.source.group().order();
        let els = (0..n).filter(|&x| h.contains(self.projection[x])).collect();
        Subgroup::from_sorted(n, els)
    }

    /// `f(H)` for a subgroup `H` of the source.
    pub fn image(&self, h: &Subgroup) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.target.group().order());
        for &x in h.elements() {
            bits.insert(self.projection[x]);
        }
        Subgroup::from_bits(bits)
    }

    /// `g ∘ self`, where `other` starts at this map's target.
    pub fn then(&self, other: &QuotientMap) -> Result<QuotientMap, GroupError> {
        if other.source.group() != self.target.group() {
            return Err(GroupError::InvalidMap("maps do not compose".into()));
        }
        let proj = self.projection.iter().map(|&y| other.projection[y]).collect();
        Self::from_projection(self.source.clone(), other.target.clone(), proj)
    }
}
