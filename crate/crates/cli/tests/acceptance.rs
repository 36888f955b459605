//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Every expected value comes from an oracle written here, independent of
//! the library code paths under test.

use std::collections::{HashMap, HashSet};
use std::fmt::Display;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use burnside_witt::group::{
    class_table, standard, ClosedFamily, ConjClassTable, FiniteGroup, GroupDescriptor, QuotientMap, Subgroup,
    SubgroupEmbedding,
};
use burnside_witt::ring::{Element, Ring};
use burnside_witt::spans::{GroupAction, Span};
use burnside_witt::tower::QuotientTower;
use burnside_witt::witt::{burnside_embed, GhostVector, WittVector};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Res<T> = Result<T, String>;

trait Ctx<T> {
    fn ctx(self, what: impl Display) -> Res<T>;
}

impl<T, E: Display> Ctx<T> for Result<T, E> {
    fn ctx(self, what: impl Display) -> Res<T> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Res<()> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn table(d: &GroupDescriptor) -> Arc<ConjClassTable> {
    class_table(d, 255).expect("group builds")
}

fn named(list: &[&str]) -> Vec<(&'static str, GroupDescriptor)> {
    let all: [(&'static str, GroupDescriptor); 10] = [
        ("C2", standard::cyclic(2)),
        ("C4", standard::cyclic(4)),
        ("C6", standard::cyclic(6)),
        ("C8", standard::cyclic(8)),
        ("C2xC2", standard::klein()),
        ("C4xC2", standard::abelian(&[4, 2])),
        ("S3", standard::symmetric(3)),
        ("D4", standard::dihedral(4)),
        ("Q8", standard::quaternion()),
        ("C3", standard::cyclic(3)),
    ];
    list.iter()
        .map(|n| all.iter().find(|(m, _)| m == n).cloned().expect("known group"))
        .collect()
}

const INTEGRAL: [&str; 6] = ["C2", "C4", "C6", "C2xC2", "S3", "D4"];
const TORSION: [&str; 4] = ["C2", "C4", "C2xC2", "S3"];

fn random_vector(rng: &mut ChaCha8Rng, t: &Arc<ConjClassTable>, ring: &Ring, bound: i64) -> WittVector {
    let values = (0..t.num_classes())
        .map(|_| ring.from_i64(rng.gen_range(-bound..=bound)))
        .collect();
    WittVector::full(t.clone(), ring.clone(), values).expect("full vector")
}

fn ints(x: &WittVector) -> Vec<BigInt> {
    x.values()
        .iter()
        .map(|e| e.as_int().expect("integer").clone())
        .collect()
}

// ---------------------------------------------------------------------------
// Brute-force group-theoretic oracles on the raw multiplication table.

/// Left cosets `gH` as sorted element lists, and the coset of each element.
fn cosets(g: &FiniteGroup, h: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut of = vec![usize::MAX; g.order()];
    let mut list = Vec::new();
    for x in 0..g.order() {
        if of[x] != usize::MAX {
            continue;
        }
        let mut c: Vec<usize> = h.iter().map(|&y| g.mul(x, y)).collect();
        c.sort_unstable();
        for &y in &c {
            of[y] = list.len();
        }
        list.push(c);
    }
    (list, of)
}

/// `|(G/K)^H|` by checking every coset.
fn fixed_cosets(g: &FiniteGroup, k: &[usize], h: &[usize]) -> u64 {
    let (list, of) = cosets(g, k);
    list.iter()
        .filter(|c| h.iter().all(|&a| of[g.mul(a, c[0])] == of[c[0]]))
        .count() as u64
}

/// `|N_G(K)| / |K|` by checking every conjugate.
fn weyl(g: &FiniteGroup, k: &[usize]) -> u64 {
    let set: HashSet<usize> = k.iter().copied().collect();
    let normalizing = (0..g.order())
        .filter(|&x| k.iter().all(|&a| set.contains(&g.mul(g.mul(x, a), g.inverse(x)))))
        .count();
    (normalizing / k.len()) as u64
}

// ---------------------------------------------------------------------------
// Classical p-typical Witt vectors over Z.

fn p_ghost(p: u64, a: &[BigInt]) -> Vec<BigInt> {
    (0..a.len())
        .map(|m| {
            (0..=m)
                .map(|i| BigInt::from(p).pow(i as u32) * a[i].pow(p.pow((m - i) as u32) as u32))
                .sum()
        })
        .collect()
}

fn p_from_ghost(p: u64, w: &[BigInt]) -> Res<Vec<BigInt>> {
    let mut a: Vec<BigInt> = Vec::with_capacity(w.len());
    for (m, wm) in w.iter().enumerate() {
        let lower: BigInt = (0..m)
            .map(|i| BigInt::from(p).pow(i as u32) * a[i].pow(p.pow((m - i) as u32) as u32))
            .sum();
        let scale = BigInt::from(p).pow(m as u32);
        let rest = wm - lower;
        ensure(&rest % &scale == BigInt::from(0), || {
            format!("oracle: w_{m} not integral")
        })?;
        a.push(rest / scale);
    }
    Ok(a)
}

fn p_op(p: u64, a: &[BigInt], b: &[BigInt], mul: bool) -> Res<Vec<BigInt>> {
    let (wa, wb) = (p_ghost(p, a), p_ghost(p, b));
    let w: Vec<BigInt> = wa
        .iter()
        .zip(&wb)
        .map(|(x, y)| if mul { x * y } else { x + y })
        .collect();
    p_from_ghost(p, &w)
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Res<String> {
    let z = Ring::integers();
    let mut checks = 0;
    for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        let t = table(&standard::cyclic(p.pow(k)));
        ensure(t.num_classes() == k as usize + 1, || {
            format!("C{}: class count", p.pow(k))
        })?;
        for i in 0..=k as usize {
            ensure(t.subgroup_order(i) as u64 == p.pow(k - i as u32), || {
                format!("C{}: class c{i} is not the subgroup of order p^(k-i)", p.pow(k))
            })?;
        }
        for _ in 0..100 {
            let (x, y) = (random_vector(rng, &t, &z, 10), random_vector(rng, &t, &z, 10));
            let (a, b) = (ints(&x), ints(&y));
            let sum = x.try_add(&y).ctx("witt add")?;
            let prod = x.try_mul(&y).ctx("witt mul")?;
            ensure(ints(&sum) == p_op(p, &a, &b, false)?, || {
                format!("C{}: add {a:?} {b:?}", p.pow(k))
            })?;
            ensure(ints(&prod) == p_op(p, &a, &b, true)?, || {
                format!("C{}: mul {a:?} {b:?}", p.pow(k))
            })?;
            checks += 2;
        }
    }
    Ok(format!("{checks} operations"))
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Res<String> {
    let mut cases: Vec<(Ring, Vec<(&str, GroupDescriptor)>)> = vec![(Ring::integers(), named(&INTEGRAL))];
    for m in [4, 2] {
        cases.push((Ring::modulo(m).unwrap(), named(&TORSION)));
    }
    let mut checks = 0;
    for (ring, groups) in &cases {
        for (name, d) in groups {
            let t = table(d);
            for _ in 0..200 {
                let (x, y) = (random_vector(rng, &t, ring, 10), random_vector(rng, &t, ring, 10));
                let (gx, gy) = (x.ghost(), y.ghost());
                let add = x.try_add(&y).ctx(format!("{name} over {ring}: add"))?.ghost();
                let mul = x.try_mul(&y).ctx(format!("{name} over {ring}: mul"))?.ghost();
                for c in 0..t.num_classes() {
                    let (a, b) = (gx.get(c).unwrap(), gy.get(c).unwrap());
                    ensure(add.get(c) == Some(&(a + b)), || {
                        format!("{name} over {ring}: ghost of sum at c{c}")
                    })?;
                    ensure(mul.get(c) == Some(&(a * b)), || {
                        format!("{name} over {ring}: ghost of product at c{c}")
                    })?;
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} pairs"))
}

fn generic(t: &Arc<ConjClassTable>, ring: &Ring, prefix: &str) -> WittVector {
    let values = (0..t.num_classes())
        .map(|c| ring.var(&format!("{prefix}{c}")).unwrap())
        .collect();
    WittVector::full(t.clone(), ring.clone(), values).unwrap()
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Res<String> {
    let z = Ring::integers();
    let mut in_domain = 0;
    for (name, d) in named(&INTEGRAL) {
        let t = table(&d);
        for _ in 0..100 {
            let x = random_vector(rng, &t, &z, 10);
            let back = WittVector::from_ghost(&x.ghost()).ctx(format!("{name}: from_ghost"))?;
            ensure(back == x, || format!("{name}: from_ghost(ghost(x)) != x"))?;
            // Arbitrary ghost vectors: wherever from_ghost succeeds it is a section.
            let values = (0..t.num_classes())
                .map(|_| z.from_i64(rng.gen_range(-10..=10)))
                .collect();
            let w = GhostVector::full(t.clone(), z.clone(), values).unwrap();
            if let Ok(v) = WittVector::from_ghost(&w) {
                ensure(v.ghost() == w, || format!("{name}: ghost(from_ghost(w)) != w"))?;
                in_domain += 1;
            }
        }
        let names: Vec<String> = (0..t.num_classes())
            .flat_map(|c| [format!("x{c}"), format!("y{c}")])
            .collect();
        let ring = Ring::polynomial(names).unwrap();
        let (x, y) = (generic(&t, &ring, "x"), generic(&t, &ring, "y"));
        let back = WittVector::from_ghost(&x.ghost()).ctx(format!("{name}: generic from_ghost"))?;
        ensure(back == x, || format!("{name}: generic from_ghost(ghost(x)) != x"))?;
        let w = x.ghost().try_add(&y.ghost()).unwrap();
        let v = WittVector::from_ghost(&w).ctx(format!("{name}: generic sum"))?;
        ensure(v.ghost() == w, || format!("{name}: generic ghost(from_ghost(w)) != w"))?;
        let w = x.ghost().try_mul(&y.ghost()).unwrap();
        let v = WittVector::from_ghost(&w).ctx(format!("{name}: generic product"))?;
        ensure(v.ghost() == w, || format!("{name}: generic ghost(from_ghost(w)) != w"))?;
    }
    Ok(format!("{in_domain} random ghost vectors in the image"))
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Res<String> {
    let mut checks = 0;
    for ring in [Ring::integers(), Ring::modulo(2).unwrap()] {
        for (name, d) in named(&INTEGRAL) {
            let t = table(&d);
            let all = ClosedFamily::all(&t);
            let embeddings: Vec<SubgroupEmbedding> = (0..t.num_classes())
                .map(|k| SubgroupEmbedding::of_class(&t, k).unwrap())
                .collect();
            for _ in 0..100 {
                let x = random_vector(rng, &t, &ring, 10);
                let mut acc = WittVector::zero(t.clone(), all.clone(), ring.clone());
                for (k, e) in embeddings.iter().enumerate() {
                    let teich = WittVector::teichmueller(e.sub().clone(), ClosedFamily::all(e.sub()), x.coord(k))
                        .ctx(format!("{name}: teich"))?;
                    let v = teich
                        .verschiebung(e, &all)
                        .ctx(format!("{name} over {ring}: V at c{k}"))?;
                    acc = acc.try_add(&v).ctx(format!("{name} over {ring}: add"))?;
                }
                ensure(acc == x, || {
                    format!("{name} over {ring}: decomposition of {:?}", x.values())
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} vectors"))
}

fn criterion_5() -> Res<String> {
    let z = Ring::integers();
    let mut checks = 0;
    for (name, d) in named(&INTEGRAL) {
        let t = table(&d);
        let g = t.group();
        let all = ClosedFamily::all(&t);
        for k in 0..t.num_classes() {
            let e = SubgroupEmbedding::of_class(&t, k).unwrap();
            let kk = t.representative(k).elements();
            for b in -3..=3i64 {
                let be = z.from_i64(b);
                let v = WittVector::teichmueller(e.sub().clone(), ClosedFamily::all(e.sub()), &be)
                    .and_then(|y| y.verschiebung(&e, &all))
                    .ctx(format!("{name}: V(teich({b})) at c{k}"))?;
                let ghost = v.ghost();
                for h in 0..t.num_classes() {
                    let hh = t.representative(h).elements();
                    let count = fixed_cosets(g, kk, hh);
                    let expect = if count == 0 {
                        BigInt::from(0)
                    } else {
                        BigInt::from(count) * BigInt::from(b).pow((kk.len() / hh.len()) as u32)
                    };
                    ensure(ghost.get(h) == Some(&z.from_int(&expect)), || {
                        format!("{name}: phi_c{h}(V_c{k}(teich({b}))) != {expect}")
                    })?;
                    checks += 1;
                }
                let (_, r) = v
                    .frobenius(&e)
                    .and_then(|f| f.restriction_to_quotient(0))
                    .ctx(format!("{name}: R F V at c{k}"))?;
                let expect = z.from_int(&(BigInt::from(weyl(g, kk)) * b));
                ensure(r.values() == [expect], || format!("{name}: R F V teich({b}) at c{k}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} identities"))
}

/// `H` (given in `G`'s indexing) as a subgroup of the embedded group.
fn pull_into(e: &SubgroupEmbedding, h: &Subgroup) -> Subgroup {
    let elems: Vec<usize> = (0..e.sub().group().order())
        .filter(|&i| h.contains(e.map()[i]))
        .collect();
    Subgroup::new(e.sub().group(), elems).expect("subgroup")
}

/// The isomorphism `a -> b` of quotient maps with the same source and kernel.
fn iso(a: &QuotientMap, b: &QuotientMap) -> Res<QuotientMap> {
    let mut m = vec![usize::MAX; a.target().group().order()];
    for x in 0..a.source().group().order() {
        m[a.project(x)] = b.project(x);
    }
    QuotientMap::from_projection(a.target().clone(), b.target().clone(), m).ctx("iso")
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Res<String> {
    let z = Ring::integers();
    let (mut chains, mut squares) = (0, 0);
    for (name, d) in named(&["C8", "C4xC2", "D4", "Q8"]) {
        let t = table(&d);
        let x = generic(
            &t,
            &Ring::polynomial((0..t.num_classes()).map(|c| format!("x{c}"))).unwrap(),
            "x",
        );
        let normals = t.normal_classes();
        for &h in &normals {
            let hs = t.representative(h).clone();
            let q_h = QuotientMap::quotient(&t, &hs).ctx("quotient")?;
            for &n in &normals {
                let ns = t.representative(n).clone();
                if !hs.is_subgroup_of(&ns) {
                    continue;
                }
                // Transitivity: R^G_N = R^{G/H}_{N/H} R^G_H.
                let image: Vec<usize> = ns.elements().iter().map(|&a| q_h.project(a)).collect();
                let mut image: Vec<usize> = image.into_iter().collect::<HashSet<_>>().into_iter().collect();
                image.sort_unstable();
                let n_over_h = Subgroup::new(q_h.target().group(), image.clone()).ctx("N/H")?;
                let q_nh = QuotientMap::quotient(q_h.target(), &n_over_h).ctx("quotient")?;
                let composite: Vec<usize> = (0..t.group().order()).map(|a| q_nh.project(q_h.project(a))).collect();
                let q_comp =
                    QuotientMap::from_projection(t.clone(), q_nh.target().clone(), composite).ctx("composite")?;
                let q_n = QuotientMap::quotient(&t, &ns).ctx("quotient")?;
                let two_step = x.restriction(&q_h).and_then(|y| y.restriction(&q_nh)).ctx("R R")?;
                let to_comp = iso(&q_n, &q_comp)?;
                let direct = x.restriction(&q_n).and_then(|y| y.restriction(&to_comp)).ctx("R")?;
                ensure(two_step == direct, || format!("{name}: transitivity for c{h} <= c{n}"))?;
                chains += 1;

                // F/R square: R^N_{N/H} F^G_N = F^{G/H}_{N/H} R^G_H.
                let e_n = SubgroupEmbedding::of_subgroup(&t, &ns).ctx("embed N")?;
                let q_in_n = QuotientMap::quotient(e_n.sub(), &pull_into(&e_n, &hs)).ctx("N -> N/H")?;
                let e_nh = SubgroupEmbedding::of_subgroup(q_h.target(), &n_over_h).ctx("embed N/H")?;
                let mut m = vec![usize::MAX; q_in_n.target().group().order()];
                for i in 0..e_n.sub().group().order() {
                    let img = q_h.project(e_n.map()[i]);
                    m[q_in_n.project(i)] = e_nh.map().iter().position(|&y| y == img).expect("in N/H");
                }
                let to_sub = QuotientMap::from_projection(q_in_n.target().clone(), e_nh.sub().clone(), m).ctx("iso")?;
                let route_a = x
                    .frobenius(&e_n)
                    .and_then(|y| y.restriction(&q_in_n))
                    .and_then(|y| y.restriction(&to_sub))
                    .ctx("F then R")?;
                let route_b = x.restriction(&q_h).and_then(|y| y.frobenius(&e_nh)).ctx("R then F")?;
                ensure(route_a == route_b, || format!("{name}: F/R square for c{h} <= c{n}"))?;
                squares += 1;
            }
            for _ in 0..100 {
                let (a, b) = (random_vector(rng, &t, &z, 10), random_vector(rng, &t, &z, 10));
                let r = |v: &WittVector| v.restriction(&q_h).ctx("R");
                ensure(
                    r(&a.try_add(&b).ctx("add")?)? == r(&a)?.try_add(&r(&b)?).ctx("add")?,
                    || format!("{name}: R_c{h} is not additive"),
                )?;
                ensure(
                    r(&a.try_mul(&b).ctx("mul")?)? == r(&a)?.try_mul(&r(&b)?).ctx("mul")?,
                    || format!("{name}: R_c{h} is not multiplicative"),
                )?;
            }
        }
    }
    Ok(format!("{chains} chains, {squares} squares"))
}

/// Orbit decomposition of `G/H_i x G/H_j` as `(class, multiplicity)` pairs,
/// and the fixed-point count of the product under each class representative.
fn product_gset(t: &ConjClassTable, i: usize, j: usize) -> (Vec<(usize, u64)>, Vec<u64>) {
    let g = t.group();
    let (ci, of_i) = cosets(g, t.representative(i).elements());
    let (cj, of_j) = cosets(g, t.representative(j).elements());
    let act = |a: usize, (x, y): (usize, usize)| (of_i[g.mul(a, ci[x][0])], of_j[g.mul(a, cj[y][0])]);
    let mut seen = HashSet::new();
    let mut orbits: HashMap<usize, u64> = HashMap::new();
    for x in 0..ci.len() {
        for y in 0..cj.len() {
            if seen.contains(&(x, y)) {
                continue;
            }
            for a in 0..g.order() {
                seen.insert(act(a, (x, y)));
            }
            let stab: Vec<usize> = (0..g.order()).filter(|&a| act(a, (x, y)) == (x, y)).collect();
            let class = t.class_of(&Subgroup::new(g, stab).expect("stabilizer")).expect("class");
            *orbits.entry(class).or_default() += 1;
        }
    }
    let marks = (0..t.num_classes())
        .map(|k| {
            let kk = t.representative(k).elements();
            let mut n = 0;
            for x in 0..ci.len() {
                for y in 0..cj.len() {
                    n += u64::from(kk.iter().all(|&a| act(a, (x, y)) == (x, y)));
                }
            }
            n
        })
        .collect();
    let mut orbits: Vec<(usize, u64)> = orbits.into_iter().collect();
    orbits.sort_unstable();
    (orbits, marks)
}

fn criterion_7() -> Res<String> {
    let mut pairs = 0;
    for (name, d) in named(&["S3", "D4"]) {
        let t = table(&d);
        let n = t.num_classes();
        let embed = |m: &[(usize, u64)]| burnside_embed(&t, m).ctx(format!("{name}: embed"));
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (embed(&[(i, 1)])?, embed(&[(j, 1)])?);
                ensure(x.try_add(&y).ctx("add")? == embed(&[(i, 1), (j, 1)])?, || {
                    format!("{name}: embed is not additive on c{i}, c{j}")
                })?;
                let (orbits, marks) = product_gset(&t, i, j);
                let prod = embed(&orbits)?;
                ensure(x.try_mul(&y).ctx("mul")? == prod, || {
                    format!("{name}: embed is not multiplicative on c{i}, c{j}")
                })?;
                let z = Ring::integers();
                let expect: Vec<Element> = marks.iter().map(|&m| z.from_i64(m as i64)).collect();
                ensure(prod.ghost().values() == expect, || {
                    format!("{name}: marks of c{i} x c{j}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

/// A span as its raw legs `X <- A -> Y`.
#[derive(Clone)]
struct Raw {
    dom: usize,
    cod: usize,
    legs: Vec<(usize, usize)>,
}

impl Raw {
    fn random(rng: &mut ChaCha8Rng, dom: usize, cod: usize) -> Raw {
        let n = rng.gen_range(0..=4);
        let legs = (0..n).map(|_| (rng.gen_range(0..dom), rng.gen_range(0..cod))).collect();
        Raw { dom, cod, legs }
    }

    fn span(&self) -> Res<Span> {
        let (l, r): (Vec<usize>, Vec<usize>) = self.legs.iter().copied().unzip();
        Span::canonicalize(self.dom, self.cod, &l, &r).ctx("canonicalize")
    }

    fn pullback(&self, t: &Raw) -> Raw {
        let mut legs = Vec::new();
        for &(x, y) in &self.legs {
            for &(y2, z) in &t.legs {
                if y == y2 {
                    legs.push((x, z));
                }
            }
        }
        Raw {
            dom: self.dom,
            cod: t.cod,
            legs,
        }
    }
}

/// Every action of the cyclic group of order `n` on `points`, as the
/// permutation of the generator.
fn cyclic_actions(n: usize, points: usize) -> Vec<Vec<usize>> {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..k {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    perms(points)
        .into_iter()
        .filter(|s| {
            (0..points).all(|x| {
                let mut y = x;
                for _ in 0..n {
                    y = s[y];
                }
                y == x
            })
        })
        .collect()
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Res<String> {
    for _ in 0..500 {
        let sizes: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=4)).collect();
        let s = Raw::random(rng, sizes[0], sizes[1]);
        let t = Raw::random(rng, sizes[1], sizes[2]);
        let u = Raw::random(rng, sizes[2], sizes[3]);
        let st = s.span()?.compose(&t.span()?).ctx("compose")?;
        ensure(st == s.pullback(&t).span()?, || "composite is not the pullback".into())?;
        let left = st.compose(&u.span()?).ctx("compose")?;
        let right = s
            .span()?
            .compose(&t.span()?.compose(&u.span()?).ctx("compose")?)
            .ctx("compose")?;
        ensure(left == s.pullback(&t).pullback(&u).span()? && left == right, || {
            "triple composite is not the iterated pullback".into()
        })?;
        ensure(
            st.l_image() == s.span()?.l_image().compose_rel(&t.span()?.l_image()).ctx("rel")?,
            || "L is not functorial".into(),
        )?;
    }

    let mut actions = 0;
    let mut fixed_total = 0u64;
    for order in [2u64, 3] {
        let group = burnside_witt::group::FiniteGroup::build(&standard::cyclic(order)).unwrap();
        for points in 1..=4 {
            for sigma in cyclic_actions(order as usize, points) {
                let action =
                    GroupAction::from_generators(group.clone(), points, std::slice::from_ref(&sigma)).ctx("action")?;
                let orbits = action.orbits().len();
                for ys in 1..=3usize {
                    // Independent count of the fixed spans Y => X with entries <= 2.
                    let cells = ys * points;
                    let mut fixed = HashSet::new();
                    for code in 0..3u64.pow(cells as u32) {
                        let mut c = code;
                        let m: Vec<Vec<u64>> = (0..ys)
                            .map(|_| {
                                (0..points)
                                    .map(|_| {
                                        let d = c % 3;
                                        c /= 3;
                                        d
                                    })
                                    .collect()
                            })
                            .collect();
                        if m.iter().all(|row| (0..points).all(|x| row[sigma[x]] == row[x])) {
                            fixed.insert(m);
                        }
                    }
                    let mut image = HashSet::new();
                    for code in 0..3u64.pow((ys * orbits) as u32) {
                        let mut c = code;
                        let m: Vec<Vec<u64>> = (0..ys)
                            .map(|_| {
                                (0..orbits)
                                    .map(|_| {
                                        let d = c % 3;
                                        c /= 3;
                                        d
                                    })
                                    .collect()
                            })
                            .collect();
                        let s = Span::new(ys, orbits, m).ctx("span")?;
                        let f = action.transport(&s).ctx("transport")?;
                        ensure(action.is_fixed(&f), || "transport is not fixed".into())?;
                        ensure(action.transport_inverse(&f).ctx("inverse")? == s, || {
                            "inverse after transport".into()
                        })?;
                        image.insert(f.matrix().to_vec());
                    }
                    ensure(image == fixed, || {
                        format!("C{order} on {points} points, |Y| = {ys}: transport is not onto the fixed spans")
                    })?;
                    fixed_total += fixed.len() as u64;
                }
                actions += 1;
            }
        }
    }
    Ok(format!("500 triples, {actions} actions, {fixed_total} fixed spans"))
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Res<String> {
    for (p, depth) in [(2u64, 3usize), (3, 2)] {
        let tower = QuotientTower::build(1, p, depth, 255).ctx("tower")?;
        let fp = Ring::modulo(p).unwrap();
        for j in 0..=depth {
            let order = tower.additive_order_probe(&fp, j).ctx("probe")?;
            ensure(order == p.pow(j as u32 + 1), || {
                format!("order of one in W_C{}(F_{p}) is {order}", p.pow(j as u32))
            })?;
        }
    }
    let tower = QuotientTower::build(2, 2, 2, 255).ctx("tower")?;
    let top = tower.level(2).ctx("level")?.clone();
    let z = Ring::integers();
    for _ in 0..20 {
        let x = random_vector(rng, &top, &z, 10);
        let (rf, fr) = tower.square(0, &x).ctx("square")?;
        ensure(rf == fr, || "F/R square fails on an integer vector".into())?;
    }
    let ring = Ring::polynomial((0..top.num_classes()).map(|c| format!("x{c}"))).unwrap();
    let (rf, fr) = tower.square(0, &generic(&top, &ring, "x")).ctx("square")?;
    ensure(rf == fr, || "F/R square fails on the generic vector".into())?;
    Ok("probes 2, 4, 8, 16 and 3, 9, 27".into())
}

fn bwitt(args: &[&str], cache: Option<&str>) -> Res<Vec<u8>> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bwitt"));
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("BWITT_")) {
        cmd.env_remove(k);
    }
    if let Some(dir) = cache {
        cmd.env("BWITT_CACHE_DIR", dir);
    }
    let out = cmd.args(args).output().ctx("spawn bwitt")?;
    ensure(out.status.success(), || {
        format!("bwitt {args:?}: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn criterion_10() -> Res<String> {
    const S3: &str = r#"{"perm":{"degree":3,"gens":[[2,1,3],[2,3,1]]}}"#;
    const C2: &str = r#"{"abelian":[2]}"#;
    const Z: &str = r#"{"int":true}"#;
    let teich = r#"{"group":{"abelian":[2]},"ring":{"int":true},"coords":{"c0":"1","c1":"0"}}"#;
    let runs: Vec<Vec<&str>> = vec![
        vec!["selftest"],
        vec!["selftest", "--seed", "12345"],
        vec!["witt", "add", teich, teich],
        vec!["witt", "add", "--output", "text", teich, teich],
        vec!["group", "marks", "--group", S3],
        vec!["group", "classes", "--group", S3],
        vec![
            "witt",
            "ghost",
            r#"{"c0":1,"c1":0,"c2":0,"c3":0}"#,
            "--group",
            S3,
            "--ring",
            Z,
        ],
        vec!["witt", "teich", "1", "--group", C2, "--ring", Z],
    ];
    for args in &runs {
        let (a, b) = (bwitt(args, None)?, bwitt(args, None)?);
        ensure(a == b, || format!("bwitt {args:?} differs between runs"))?;
    }
    let sum: serde_json::Value = serde_json::from_slice(&bwitt(&runs[2], None)?).ctx("json")?;
    ensure(sum["coords"] == serde_json::json!({"c0": "2", "c1": "-1"}), || {
        format!("witt add gave {}", sum["coords"])
    })?;
    let marks: serde_json::Value = serde_json::from_slice(&bwitt(&runs[4], None)?).ctx("json")?;
    let diag: Vec<u64> = (0..4).map(|i| marks["marks"][i][i].as_u64().unwrap_or(0)).collect();
    ensure(diag == [1, 2, 1, 6], || format!("S3 marks diagonal {diag:?}"))?;
    let ghost: serde_json::Value = serde_json::from_slice(&bwitt(&runs[6], None)?).ctx("json")?;
    ensure(
        ghost["ghost"] == serde_json::json!({"c0": "1", "c1": "1", "c2": "1", "c3": "1"}),
        || format!("ghost of one is {}", ghost["ghost"]),
    )?;
    let selftest: serde_json::Value = serde_json::from_slice(&bwitt(&runs[0], None)?).ctx("json")?;
    ensure(selftest["passed"] == true, || "selftest reports a failure".into())?;

    // A cold and a warm universal-polynomial cache give identical bytes.
    let dir = tempfile::tempdir().ctx("tempdir")?;
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let torsion = [
        "witt",
        "mul",
        r#"{"c0":1,"c1":1,"c2":0,"c3":1}"#,
        r#"{"c0":1,"c1":0,"c2":1,"c3":1}"#,
        "--group",
        S3,
        "--ring",
        r#"{"mod":4}"#,
    ];
    let cold = bwitt(&torsion, Some(cache))?;
    let warm = bwitt(&torsion, Some(cache))?;
    let none = bwitt(&torsion, None)?;
    ensure(cold == warm && warm == none, || "cache state changes the output".into())?;
    Ok(format!("{} commands", runs.len() + 1))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    type Criterion<'a> = Box<dyn FnOnce(&mut ChaCha8Rng) -> Res<String> + 'a>;
    let criteria: Vec<(Criterion, Option<Duration>)> = vec![
        (Box::new(criterion_1), Some(Duration::from_secs(30))),
        (Box::new(criterion_2), Some(Duration::from_secs(120))),
        (Box::new(criterion_3), None),
        (Box::new(criterion_4), None),
        (Box::new(|_| criterion_5()), None),
        (Box::new(criterion_6), None),
        (Box::new(|_| criterion_7()), None),
        (Box::new(criterion_8), Some(Duration::from_secs(60))),
        (Box::new(criterion_9), Some(Duration::from_secs(60))),
        (Box::new(|_| criterion_10()), None),
    ];
    let mut failed = 0;
    for (i, (run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = run(&mut rng);
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if elapsed > limit {
                result = Err(format!("took longer than {}s", limit.as_secs()));
            }
        }
        match result {
            Ok(detail) => println!("criterion {}: PASS ({:.2}s) {detail}", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({:.2}s) {why}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
