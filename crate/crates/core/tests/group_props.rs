use burnside_witt::group::{class_table, standard, GroupDescriptor, QuotientMap};

fn groups() -> Vec<GroupDescriptor> {
    let mut out: Vec<GroupDescriptor> = [1, 2, 3, 4, 6, 8, 9, 12, 16]
        .into_iter()
        .map(standard::cyclic)
        .collect();
    out.extend([
        standard::klein(),
        standard::abelian(&[2, 4]),
        standard::abelian(&[2, 2, 2]),
        standard::abelian(&[4, 4]),
        standard::abelian(&[2, 2, 4]),
        standard::symmetric(3),
        standard::dihedral(4),
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

#[test]
fn class_order_and_marks_shape() {
    for d in groups().into_iter().chain([standard::symmetric(4)]) {
        let t = class_table(&d, 255).unwrap();
        let n = t.num_classes();
        let order = t.group().order();
        assert_eq!(t.subgroup_order(0), order, "{d:?}");
        assert_eq!(t.subgroup_order(n - 1), 1, "{d:?}");
        for i in 0..n {
            if i + 1 < n {
                assert!(t.subgroup_order(i) >= t.subgroup_order(i + 1), "{d:?}");
            }
            assert_eq!(t.mark(i, i), t.weyl_order(i) as u64, "{d:?}");
            assert_eq!(t.mark(n - 1, i), (order / t.subgroup_order(i)) as u64, "{d:?}");
            for j in 0..n {
                if t.mark(i, j) != 0 {
                    assert!(t.subconj(i, j), "{d:?}: m[{i}][{j}] without subconjugacy");
                }
                if t.subconj(i, j) {
                    assert_eq!(t.subgroup_order(j) % t.subgroup_order(i), 0, "{d:?}");
                    assert!(i >= j, "{d:?}: ordering is not a linear extension");
                }
            }
        }
    }
}

#[test]
fn quotients_preserve_marks() {
    for d in groups() {
        let t = class_table(&d, 255).unwrap();
        for n in t.normal_classes() {
            let q = QuotientMap::quotient(&t, t.representative(n)).unwrap();
            let pb = q.class_pullback();
            let target = q.target();
            for k in 0..target.num_classes() {
                for h in 0..target.num_classes() {
                    assert_eq!(target.mark(k, h), t.mark(pb[k], pb[h]), "{d:?} / c{n}");
                    assert_eq!(target.subconj(k, h), t.subconj(pb[k], pb[h]), "{d:?} / c{n}");
                }
            }
        }
    }
}

#[test]
fn symmetric_four_has_eleven_classes() {
    let t = class_table(&standard::symmetric(4), 255).unwrap();
    assert_eq!(t.num_classes(), 11);
    assert_eq!(t.subgroups().len(), 30);
    let weyl: Vec<usize> = (0..11).map(|i| t.weyl_order(i)).collect();
    assert_eq!(weyl.iter().copied().max(), Some(24));
}

#[test]
fn order_cap_is_enforced() {
    assert!(class_table(&standard::cyclic(300), 255).is_err());
    assert!(class_table(&standard::symmetric(4), 20).is_err());
}
