use std::sync::Arc;

use burnside_witt::group::{class_table, standard, ClosedFamily, ConjClassTable, GroupDescriptor, QuotientMap};
use burnside_witt::ring::{Ring, RingHom};
use burnside_witt::witt::WittVector;
use proptest::prelude::*;

fn small_groups() -> Vec<GroupDescriptor> {
    vec![
        standard::cyclic(2),
        standard::cyclic(4),
        standard::cyclic(6),
        standard::klein(),
        standard::symmetric(3),
    ]
}

/// Groups of order at most 16 used for the exhaustive restriction checks.
fn groups_to_16() -> Vec<GroupDescriptor> {
    let mut out: Vec<GroupDescriptor> = (1..=16).map(standard::cyclic).collect();
    out.extend([
        standard::klein(),
        standard::abelian(&[2, 4]),
        standard::abelian(&[2, 2, 2]),
        standard::abelian(&[2, 6]),
        standard::abelian(&[4, 4]),
        standard::abelian(&[2, 8]),
        standard::abelian(&[2, 2, 4]),
        standard::abelian(&[2, 2, 2, 2]),
        standard::symmetric(3),
        standard::dihedral(4),
        standard::dihedral(5),
        standard::dihedral(6),
        standard::dihedral(8),
        standard::quaternion(),
        GroupDescriptor::Perm {
            degree: 4,
            gens: vec![vec![2, 3, 1, 4], vec![2, 1, 4, 3]],
        },
    ]);
    out
}

fn table(d: &GroupDescriptor) -> Arc<ConjClassTable> {
    class_table(d, 255).unwrap()
}

fn vector(t: &Arc<ConjClassTable>, ring: &Ring, data: &[i64]) -> WittVector {
    let values = (0..t.num_classes())
        .map(|i| ring.from_i64(data[i % data.len()]))
        .collect();
    WittVector::full(t.clone(), ring.clone(), values).unwrap()
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..6, 1..9)
}

fn torsion_rings() -> Vec<Ring> {
    vec![
        Ring::modulo(4).unwrap(),
        Ring::modulo(2).unwrap(),
        Ring::modulo(3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witt_ring_axioms(g in 0usize..5, r in 0usize..4, a in coords(), b in coords(), c in coords()) {
        let t = table(&small_groups()[g]);
        let ring = if r == 3 { Ring::integers() } else { torsion_rings()[r].clone() };
        let (a, b, c) = (vector(&t, &ring, &a), vector(&t, &ring, &b), vector(&t, &ring, &c));
        let one = WittVector::one(t.clone(), ClosedFamily::all(&t), ring.clone());
        let zero = WittVector::zero(t.clone(), ClosedFamily::all(&t), ring.clone());
        prop_assert_eq!(a.try_add(&b)?.try_add(&c)?, a.try_add(&b.try_add(&c)?)?);
        prop_assert_eq!(a.try_mul(&b)?.try_mul(&c)?, a.try_mul(&b.try_mul(&c)?)?);
        prop_assert_eq!(a.try_add(&b)?, b.try_add(&a)?);
        prop_assert_eq!(a.try_mul(&b)?, b.try_mul(&a)?);
        prop_assert_eq!(a.try_mul(&b.try_add(&c)?)?, a.try_mul(&b)?.try_add(&a.try_mul(&c)?)?);
        prop_assert_eq!(a.try_mul(&one)?, a.clone());
        prop_assert_eq!(a.try_add(&a.try_neg()?)?, zero);
    }

    #[test]
    fn ghost_is_natural_in_the_ring(g in 0usize..5, r in 0usize..3, a in coords()) {
        let t = table(&small_groups()[g]);
        let z = Ring::integers();
        let target = &torsion_rings()[r];
        let h = RingHom::canonical(&z, target).unwrap();
        let x = vector(&t, &z, &a);
        prop_assert_eq!(x.map_coords(&h)?.ghost(), x.ghost().map_coords(&h)?);
    }

    #[test]
    fn torsion_arithmetic_is_the_reduction_of_integral_arithmetic(
        g in 0usize..5, r in 0usize..3, a in coords(), b in coords()
    ) {
        let t = table(&small_groups()[g]);
        let z = Ring::integers();
        let target = &torsion_rings()[r];
        let h = RingHom::canonical(&z, target).unwrap();
        let (x, y) = (vector(&t, &z, &a), vector(&t, &z, &b));
        let (xr, yr) = (x.map_coords(&h)?, y.map_coords(&h)?);
        prop_assert_eq!(x.try_add(&y)?.map_coords(&h)?, xr.try_add(&yr)?);
        prop_assert_eq!(x.try_mul(&y)?.map_coords(&h)?, xr.try_mul(&yr)?);
        prop_assert_eq!(x.try_neg()?.map_coords(&h)?, xr.try_neg()?);
    }

    #[test]
    fn truncation_is_a_ring_homomorphism(g in 0usize..5, r in 0usize..4, a in coords(), b in coords()) {
        let t = table(&small_groups()[g]);
        let ring = if r == 3 { Ring::integers() } else { torsion_rings()[r].clone() };
        let (x, y) = (vector(&t, &ring, &a), vector(&t, &ring, &b));
        let sub = ClosedFamily::without_trivial(&t);
        prop_assert_eq!(x.try_add(&y)?.truncate(&sub)?, x.truncate(&sub)?.try_add(&y.truncate(&sub)?)?);
        prop_assert_eq!(x.try_mul(&y)?.truncate(&sub)?, x.truncate(&sub)?.try_mul(&y.truncate(&sub)?)?);
    }
}

#[test]
fn restriction_commutes_with_ghost_for_groups_up_to_16() {
    let ring = Ring::polynomial(["a", "b", "c"]).unwrap();
    let vars: Vec<_> = ["a", "b", "c"].iter().map(|v| ring.var(v).unwrap()).collect();
    for d in groups_to_16() {
        let t = table(&d);
        let values = (0..t.num_classes())
            .map(|i| vars[i % 3].pow(1 + (i / 3) as u64))
            .collect();
        let x = WittVector::full(t.clone(), ring.clone(), values).unwrap();
        let gx = x.ghost();
        for n in t.normal_classes() {
            let q = QuotientMap::quotient(&t, t.representative(n)).unwrap();
            let gr = x.restriction(&q).unwrap().ghost();
            for c in 0..q.target().num_classes() {
                assert_eq!(gr.get(c), gx.get(q.class_pullback()[c]), "{d:?} / c{n} at c{c}");
            }
        }
    }
}

#[test]
fn restriction_along_the_trivial_and_whole_subgroup() {
    let z = Ring::integers();
    let t = table(&standard::symmetric(3));
    let x = vector(&t, &z, &[3, -1, 4, 1]);
    let (_, same) = x.restriction_to_quotient(t.trivial_class()).unwrap();
    assert_eq!(same.values(), x.values());
    let (_, top) = x.restriction_to_quotient(0).unwrap();
    assert_eq!(top.values(), &[z.from_i64(3)]);
}
