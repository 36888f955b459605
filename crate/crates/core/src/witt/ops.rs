//! Frobenius, Verschiebung and restriction.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};

use super::unipoly::{self, generic_vector, variable_names, UnipolyTag};
use super::{same_group, GhostVector, WittError, WittVector};
use crate::group::{ClosedFamily, ConjClassTable, QuotientMap, SubgroupEmbedding};
use crate::ring::{Element, Ring};

fn embedding_key(e: &SubgroupEmbedding) -> String {
    let mut h = Sha256::new();
    h.update(e.sub().group().canonical_hash().as_bytes());
    for &x in e.map() {
        h.update((x as u64).to_le_bytes());
    }
    hex::encode(&h.finalize()[..8])
}

/// Left cosets `gH` of the image of `e`, each as its list of elements.
fn left_cosets(e: &SubgroupEmbedding) -> Vec<usize> {
    let g = e.parent().group();
    let mut seen = FixedBitSet::with_capacity(g.order());
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if seen.contains(x) {
            continue;
        }
        reps.push(x);
        for &h in e.image().elements() {
            seen.insert(g.mul(x, h));
        }
    }
    reps
}

impl WittVector {
    /// `F^G_H`: the unique `y` in `W_H(B)` with `phi^H_L(y) = phi^G_L(x)` for
    /// every `L <= H`. The result is indexed by `H`-classes, over the family
    /// of `H`-classes whose `G`-class lies in the family of `x`.
    pub fn frobenius(&self, e: &SubgroupEmbedding) -> Result<WittVector, WittError> {
        if !same_group(self.table(), e.parent()) {
            return Err(WittError::Incompatible("embedding does not land in this group".into()));
        }
        let out_family = e.induced_family(self.family());
        if self.ring().is_torsion_free() {
            return self
                .frobenius_direct(e, out_family)
                .map_err(|err| err.escalate("Frobenius"));
        }
        let tag = UnipolyTag::Frobenius(embedding_key(e));
        let polys = unipoly::get_with(e.parent(), &tag, || {
            let n = e.parent().num_classes();
            let ring = Ring::polynomial(variable_names(n, false))?;
            let x = generic_vector(e.parent(), &ring, "x");
            let full = ClosedFamily::all(e.sub());
            Ok((
                n,
                ring,
                x.frobenius_direct(e, full).map_err(|err| err.escalate("Frobenius"))?,
            ))
        })?;
        self.specialize(&polys, None, e.sub().clone(), out_family)
    }

    fn frobenius_direct(&self, e: &SubgroupEmbedding, out_family: ClosedFamily) -> Result<WittVector, WittError> {
        let ghost = self.ghost();
        let values = out_family
            .ids()
            .iter()
            .map(|&l| ghost.get(e.class_map()[l]).expect("induced family").clone())
            .collect();
        let w = GhostVector::new(e.sub().clone(), out_family, self.ring().clone(), values)?;
        WittVector::from_ghost(&w)
    }

    /// `V^G_H`: the unique `x` in `W_F(B)` with
    /// `phi^G_K(x) = sum over gH in (G/H)^K of phi^H_{g^-1 K g}(y)`.
    /// `self` must live on the family induced from `target_family`.
    pub fn verschiebung(&self, e: &SubgroupEmbedding, target_family: &ClosedFamily) -> Result<WittVector, WittError> {
        if !same_group(self.table(), e.sub()) {
            return Err(WittError::Incompatible(
                "vector does not live on the embedded group".into(),
            ));
        }
        let target_family = ClosedFamily::validate(e.parent(), target_family.ids())?;
        if *self.family() != e.induced_family(&target_family) {
            return Err(WittError::Incompatible(
                "vector family is not the family induced from the target family".into(),
            ));
        }
        if self.ring().is_torsion_free() {
            return self
                .verschiebung_direct(e, target_family)
                .map_err(|err| err.escalate("Verschiebung"));
        }
        let tag = UnipolyTag::Verschiebung(embedding_key(e));
        let polys = unipoly::get_with(e.parent(), &tag, || {
            let n = e.sub().num_classes();
            let ring = Ring::polynomial(variable_names(n, false))?;
            let y = generic_vector(e.sub(), &ring, "x");
            let full = ClosedFamily::all(e.parent());
            Ok((
                n,
                ring,
                y.verschiebung_direct(e, full)
                    .map_err(|err| err.escalate("Verschiebung"))?,
            ))
        })?;
        self.specialize(&polys, None, e.parent().clone(), target_family)
    }

    fn verschiebung_direct(&self, e: &SubgroupEmbedding, target_family: ClosedFamily) -> Result<WittVector, WittError> {
        let ghost = self.ghost();
        let g = e.parent().group();
        let reps = left_cosets(e);
        let image = e.image();
        let values: Vec<Element> = target_family
            .ids()
            .iter()
            .map(|&k| {
                let kk = e.parent().representative(k);
                let mut acc = self.ring().zero();
                for &x in &reps {
                    // K fixes xH iff x^-1 K x <= H
                    let xi = g.inverse(x);
                    let mut conj = FixedBitSet::with_capacity(g.order());
                    let mut inside = true;
                    for &a in kk.elements() {
                        let c = g.conjugate(xi, a);
                        if !image.contains(c) {
                            inside = false;
                            break;
                        }
                        conj.insert(c);
                    }
                    if inside {
                        let l = e.sub_class_of(&conj).expect("conjugate lies in the image");
                        acc = &acc + ghost.get(l).expect("induced family");
                    }
                }
                acc
            })
            .collect();
        let w = GhostVector::new(e.parent().clone(), target_family, self.ring().clone(), values)?;
        WittVector::from_ghost(&w)
    }

    /// `R^G_N` along `q: G -> G/N`: `y_{H'} = x_{f^-1 H'}`. The result lives
    /// on the family of classes `[H']` with `[f^-1 H']` in the family of `x`.
    pub fn restriction(&self, q: &QuotientMap) -> Result<WittVector, WittError> {
        if !same_group(self.table(), q.source()) {
            return Err(WittError::Incompatible(
                "quotient map starts at a different group".into(),
            ));
        }
        let target = q.target();
        let pb = q.class_pullback();
        let ids: Vec<usize> = (0..target.num_classes())
            .filter(|&c| self.family().contains(pb[c]))
            .collect();
        let family = ClosedFamily::validate(target, &ids)?;
        let values = ids.iter().map(|&c| self.coord(pb[c]).clone()).collect();
        WittVector::new(target.clone(), family, self.ring().clone(), values)
    }

    /// Restriction to `G/N` for the normal subgroup with class id `normal`.
    pub fn restriction_to_quotient(&self, normal: usize) -> Result<(QuotientMap, WittVector), WittError> {
        let table: &Arc<ConjClassTable> = self.table();
        if normal >= table.num_classes() {
            return Err(crate::group::GroupError::UnknownClass(ConjClassTable::class_id(normal)).into());
        }
        let q = QuotientMap::quotient(table, &table.representative(normal).clone())?;
        let y = self.restriction(&q)?;
        Ok((q, y))
    }
}
