//! Descriptors for small groups that come up constantly.

use super::GroupDescriptor;

pub fn cyclic(n: u64) -> GroupDescriptor {
    GroupDescriptor::Abelian(vec![n])
}

pub fn abelian(factors: &[u64]) -> GroupDescriptor {
    GroupDescriptor::Abelian(factors.to_vec())
}

/// `C_2 x C_2`.
pub fn klein() -> GroupDescriptor {
    abelian(&[2, 2])
}

/// The symmetric group on `n` points (`n >= 2`), generated by a
/// transposition and an `n`-cycle.
pub fn symmetric(n: usize) -> GroupDescriptor {
    let mut swap: Vec<usize> = (1..=n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
    GroupDescriptor::Perm {
        degree: n,
        gens: vec![swap, cycle],
    }
}

/// The dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> GroupDescriptor {
    let rotation: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
    let reflection: Vec<usize> = (1..=n).rev().collect();
    GroupDescriptor::Perm {
        degree: n,
        gens: vec![rotation, reflection],
    }
}

/// The quaternion group `Q_8` in its regular representation, with points
/// `1, -1, i, -i, j, -j, k, -k` numbered 1 to 8 and generators left
/// multiplication by `i` and `j`.
pub fn quaternion() -> GroupDescriptor {
    GroupDescriptor::Perm {
        degree: 8,
        gens: vec![vec![3, 4, 2, 1, 7, 8, 6, 5], vec![5, 6, 8, 7, 2, 1, 3, 4]],
    }
}
