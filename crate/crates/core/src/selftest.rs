//! Randomized invariant suites run by `bwitt selftest`. Every random choice
//! comes from a ChaCha stream seeded by the caller, so a report is a pure
//! function of the seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::group::{
    class_table, standard, ClosedFamily, ConjClassTable, GroupDescriptor, QuotientMap, SubgroupEmbedding,
};
use crate::ring::{Element, Ring};
use crate::spans::{GroupAction, Span};
use crate::tower::QuotientTower;
use crate::witt::{burnside_embed, WittError, WittVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    /// Message of the first failing check.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

pub const SUITES: [&str; 9] = [
    "ghost_homomorphism",
    "ghost_inversion",
    "ring_axioms",
    "teichmueller_decomposition",
    "transfer_identities",
    "restriction",
    "burnside",
    "spans",
    "tower",
];

struct Suite {
    result: SuiteResult,
}

impl Suite {
    fn new(name: &str) -> Suite {
        Suite {
            result: SuiteResult {
                name: name.into(),
                checks: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn fail(&mut self, msg: String) {
        self.result.failures += 1;
        self.result.first_failure.get_or_insert(msg);
    }

    /// Records one check; errors count as failures.
    fn check<E: std::fmt::Display>(&mut self, what: impl FnOnce() -> String, outcome: Result<bool, E>) {
        self.result.checks += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.fail(what()),
            Err(e) => self.fail(format!("{}: {e}", what())),
        }
    }
}

fn groups() -> Vec<(&'static str, GroupDescriptor)> {
    vec![
        ("C2", standard::cyclic(2)),
        ("C4", standard::cyclic(4)),
        ("C6", standard::cyclic(6)),
        ("C2xC2", standard::klein()),
        ("S3", standard::symmetric(3)),
    ]
}

fn table(d: &GroupDescriptor) -> Arc<ConjClassTable> {
    class_table(d, crate::group::DEFAULT_MAX_ORDER).expect("built-in group")
}

fn random_element(rng: &mut ChaCha8Rng, ring: &Ring) -> Element {
    match ring {
        Ring::IntegersMod(m) => ring.from_i64(rng.gen_range(0..*m as i64)),
        _ => ring.from_i64(rng.gen_range(-5..=5)),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, t: &Arc<ConjClassTable>, ring: &Ring) -> WittVector {
    let values = (0..t.num_classes()).map(|_| random_element(rng, ring)).collect();
    WittVector::full(t.clone(), ring.clone(), values).expect("shape matches")
}

fn rings() -> Vec<Ring> {
    vec![Ring::integers(), Ring::modulo(4).unwrap(), Ring::modulo(2).unwrap()]
}

fn ghost_homomorphism(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("ghost_homomorphism");
    for (name, d) in groups() {
        let t = table(&d);
        for ring in rings() {
            let pairs = if ring.is_torsion_free() { 20 } else { 8 };
            for _ in 0..pairs {
                let x = random_vector(rng, &t, &ring);
                let y = random_vector(rng, &t, &ring);
                s.check(
                    || format!("{name} over {ring}: ghost(x + y)"),
                    x.try_add(&y)
                        .and_then(|z| Ok(z.ghost() == x.ghost().try_add(&y.ghost())?)),
                );
                s.check(
                    || format!("{name} over {ring}: ghost(x * y)"),
                    x.try_mul(&y)
                        .and_then(|z| Ok(z.ghost() == x.ghost().try_mul(&y.ghost())?)),
                );
            }
        }
    }
    s.result
}

fn ghost_inversion(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("ghost_inversion");
    let z = Ring::integers();
    for (name, d) in groups() {
        let t = table(&d);
        for _ in 0..20 {
            let x = random_vector(rng, &t, &z);
            s.check(
                || format!("{name}: from_ghost(ghost(x)) = x"),
                WittVector::from_ghost(&x.ghost()).map(|y| y == x),
            );
        }
        let fam = ClosedFamily::without_trivial(&t);
        let x = random_vector(rng, &t, &z).truncate(&fam).expect("subfamily");
        s.check(
            || format!("{name}: inversion on a truncated family"),
            WittVector::from_ghost(&x.ghost()).map(|y| y == x),
        );
    }
    s.result
}

fn ring_axioms(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("ring_axioms");
    for (name, d) in groups().into_iter().filter(|(n, _)| matches!(*n, "C2" | "C4" | "S3")) {
        let t = table(&d);
        for ring in [Ring::modulo(4).unwrap(), Ring::modulo(3).unwrap()] {
            let one = WittVector::one(t.clone(), ClosedFamily::all(&t), ring.clone());
            for _ in 0..6 {
                let (a, b, c) = (
                    random_vector(rng, &t, &ring),
                    random_vector(rng, &t, &ring),
                    random_vector(rng, &t, &ring),
                );
                let laws = || -> Result<[bool; 5], WittError> {
                    Ok([
                        a.try_add(&b)?.try_add(&c)? == a.try_add(&b.try_add(&c)?)?,
                        a.try_mul(&b)?.try_mul(&c)? == a.try_mul(&b.try_mul(&c)?)?,
                        a.try_mul(&b)? == b.try_mul(&a)?,
                        a.try_mul(&b.try_add(&c)?)? == a.try_mul(&b)?.try_add(&a.try_mul(&c)?)?,
                        a.try_mul(&one)? == a && a.try_add(&a.try_neg()?)?.values().iter().all(Element::is_zero),
                    ])
                };
                match laws() {
                    Ok(results) => {
                        for (i, ok) in results.into_iter().enumerate() {
                            s.check(|| format!("{name} over {ring}: law {i}"), Ok::<_, WittError>(ok));
                        }
                    }
                    Err(e) => s.check(|| format!("{name} over {ring}"), Err::<bool, _>(e)),
                }
            }
        }
    }
    s.result
}

/// `sum over [K] of V^G_K(teich_K(x_K))`.
fn teichmueller_sum(x: &WittVector) -> Result<WittVector, WittError> {
    let t = x.table();
    let mut acc = WittVector::zero(t.clone(), x.family().clone(), x.ring().clone());
    for (&k, xk) in x.family().ids().iter().zip(x.values()) {
        let e = SubgroupEmbedding::of_class(t, k)?;
        let fam = e.induced_family(x.family());
        let v = WittVector::teichmueller(e.sub().clone(), fam, xk)?.verschiebung(&e, x.family())?;
        acc = acc.try_add(&v)?;
    }
    Ok(acc)
}

fn teichmueller_decomposition(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("teichmueller_decomposition");
    for (name, d) in groups() {
        let t = table(&d);
        for ring in [Ring::integers(), Ring::modulo(2).unwrap()] {
            for _ in 0..5 {
                let x = random_vector(rng, &t, &ring);
                s.check(
                    || format!("{name} over {ring}: sum of V(teich(x_K)) = x"),
                    teichmueller_sum(&x).map(|y| y == x),
                );
            }
        }
    }
    s.result
}

fn transfer_identities(_rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("transfer_identities");
    let z = Ring::integers();
    for (name, d) in groups() {
        let t = table(&d);
        let all = ClosedFamily::all(&t);
        for k in 0..t.num_classes() {
            let e = SubgroupEmbedding::of_class(&t, k).expect("class representative");
            let sub_all = ClosedFamily::all(e.sub());
            for b in -2..=2i64 {
                let b = z.from_i64(b);
                let v = WittVector::teichmueller(e.sub().clone(), sub_all.clone(), &b)
                    .and_then(|y| y.verschiebung(&e, &all));
                let v = match v {
                    Ok(v) => v,
                    Err(err) => {
                        s.check(|| format!("{name}: V(teich) at c{k}"), Err::<bool, _>(err));
                        continue;
                    }
                };
                let ghost = v.ghost();
                for h in 0..t.num_classes() {
                    let mark = t.mark(h, k);
                    let expect = if mark == 0 {
                        z.zero()
                    } else {
                        let exp = (t.subgroup_order(k) / t.subgroup_order(h)) as u64;
                        b.pow(exp).scale(&mark.into())
                    };
                    s.check(
                        || format!("{name}: phi_c{h}(V_c{k}(teich({b})))"),
                        Ok::<_, WittError>(ghost.get(h) == Some(&expect)),
                    );
                }
                let composite = v
                    .frobenius(&e)
                    .and_then(|f| f.restriction_to_quotient(0))
                    .map(|(_, r)| r.values()[0] == b.scale(&(t.weyl_order(k) as u64).into()));
                s.check(|| format!("{name}: R F V teich at c{k}"), composite);
            }
        }
    }
    s.result
}

fn restriction(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("restriction");
    let z = Ring::integers();
    let f2 = Ring::modulo(2).unwrap();
    let cases = [
        ("C4", standard::cyclic(4)),
        ("C2xC2", standard::klein()),
        ("S3", standard::symmetric(3)),
        ("D4", standard::dihedral(4)),
    ];
    for (name, d) in cases {
        let t = table(&d);
        for n in t.normal_classes() {
            let q = match QuotientMap::quotient(&t, t.representative(n)) {
                Ok(q) => q,
                Err(e) => {
                    s.check(|| format!("{name}: quotient by c{n}"), Err::<bool, _>(e));
                    continue;
                }
            };
            for ring in [&z, &f2] {
                for _ in 0..4 {
                    let x = random_vector(rng, &t, ring);
                    let y = random_vector(rng, &t, ring);
                    let hom = || -> Result<bool, WittError> {
                        let add = x.try_add(&y)?.restriction(&q)? == x.restriction(&q)?.try_add(&y.restriction(&q)?)?;
                        let mul = x.try_mul(&y)?.restriction(&q)? == x.restriction(&q)?.try_mul(&y.restriction(&q)?)?;
                        let gx = x.ghost();
                        let gr = x.restriction(&q)?.ghost();
                        let ghost = (0..q.target().num_classes()).all(|c| gr.get(c) == gx.get(q.class_pullback()[c]));
                        Ok(add && mul && ghost)
                    };
                    s.check(|| format!("{name} over {ring}: R along c{n}"), hom());
                }
            }
        }
    }
    s.result
}

fn burnside(_rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("burnside");
    for (name, d) in [("S3", standard::symmetric(3)), ("D4", standard::dihedral(4))] {
        let t = table(&d);
        let n = t.num_classes();
        for i in 0..n {
            for j in 0..n {
                let outcome = || -> Result<bool, WittError> {
                    let (a, b) = (burnside_embed(&t, &[(i, 1)])?, burnside_embed(&t, &[(j, 1)])?);
                    let sum = burnside_embed(&t, &[(i, 1), (j, 1)])? == a.try_add(&b)?;
                    let prod = a.try_mul(&b)?;
                    let marks = prod.ghost();
                    let pointwise = (0..n)
                        .all(|k| marks.get(k).and_then(Element::as_int) == Some(&(t.mark(k, i) * t.mark(k, j)).into()));
                    Ok(sum && pointwise)
                };
                s.check(|| format!("{name}: G/c{i} and G/c{j}"), outcome());
            }
        }
    }
    s.result
}

fn random_span(rng: &mut ChaCha8Rng, dom: usize, cod: usize) -> Span {
    let m = (0..dom)
        .map(|_| (0..cod).map(|_| rng.gen_range(0..=2)).collect())
        .collect();
    Span::new(dom, cod, m).expect("shape")
}

/// Expands a span into its apex: one `(x, y)` pair per element.
fn apex(s: &Span) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..s.dom() {
        for y in 0..s.cod() {
            out.extend(std::iter::repeat_n((x, y), s.entry(x, y) as usize));
        }
    }
    out
}

fn pullback(s: &Span, t: &Span) -> Span {
    let (a, b) = (apex(s), apex(t));
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    for &(x, y) in &a {
        for &(y2, z) in &b {
            if y == y2 {
                f1.push(x);
                f2.push(z);
            }
        }
    }
    Span::canonicalize(s.dom(), t.cod(), &f1, &f2).expect("indices in range")
}

fn spans(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("spans");
    for _ in 0..100 {
        let (a, b, c, d) = (
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
        );
        let (f, g, h) = (random_span(rng, a, b), random_span(rng, b, c), random_span(rng, c, d));
        let laws = || -> Result<bool, crate::spans::SpanError> {
            let fg = f.compose(&g)?;
            Ok(fg == pullback(&f, &g)
                && fg.compose(&h)? == f.compose(&g.compose(&h)?)?
                && Span::identity(a).compose(&f)? == f
                && fg.l_image() == f.l_image().compose_rel(&g.l_image())?)
        };
        s.check(|| format!("compose {a}x{b}x{c}x{d}"), laws());
        if a > 0 {
            let at = rng.gen_range(0..=a);
            let round = f
                .split(at)
                .and_then(|(top, bottom)| top.stack(&bottom))
                .map(|st| st == f);
            s.check(|| format!("split {a}x{b} at {at}"), round);
        }
    }
    let g = crate::group::FiniteGroup::build(&standard::cyclic(2)).expect("C2");
    let e = g.identity();
    for points in 2..=3usize {
        let mut swap: Vec<usize> = (0..points).collect();
        swap.swap(0, 1);
        let action = (0..2)
            .map(|x| if x == e { (0..points).collect() } else { swap.clone() })
            .collect();
        let act = GroupAction::new(g.clone(), points, action).expect("valid action");
        let orbits = act.orbits().len();
        for ys in 1..=2usize {
            let mut fixed = 0u64;
            for code in 0..3u64.pow((ys * points) as u32) {
                let m = (0..ys)
                    .map(|y| {
                        (0..points)
                            .map(|x| code / 3u64.pow((y * points + x) as u32) % 3)
                            .collect()
                    })
                    .collect();
                let span = Span::new(ys, points, m).expect("shape");
                if act.is_fixed(&span) {
                    fixed += 1;
                    let round = act
                        .transport_inverse(&span)
                        .and_then(|q| act.transport(&q))
                        .map(|r| r == span);
                    s.check(|| format!("transport round trip on {points} points"), round);
                }
            }
            s.check(
                || format!("fixed spans {ys}x{points} are counted by the orbit spans"),
                Ok::<_, String>(fixed == 3u64.pow((ys * orbits) as u32)),
            );
        }
    }
    s.result
}

fn tower(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("tower");
    for (p, j) in [(2u64, 0usize), (2, 1), (2, 2), (3, 0), (3, 1)] {
        let order =
            QuotientTower::build(1, p, j, 255).and_then(|t| t.additive_order_probe(&Ring::modulo(p).unwrap(), j));
        s.check(
            || format!("order of one in W_C{}(F{p})", p.pow(j as u32)),
            order.map(|o| o == p.pow(j as u32 + 1)),
        );
    }
    let z = Ring::integers();
    for (n, p, depth) in [(1usize, 2u64, 3usize), (1, 3, 2), (2, 2, 2)] {
        let t = match QuotientTower::build(n, p, depth, 255) {
            Ok(t) => t,
            Err(e) => {
                s.check(|| format!("tower ({n},{p},{depth})"), Err::<bool, _>(e));
                continue;
            }
        };
        for j in 0..depth - 1 {
            for _ in 0..3 {
                let x = random_vector(rng, &t.levels()[j + 2], &z);
                s.check(
                    || format!("({n},{p},{depth}): F/R square at level {j}"),
                    t.square(j, &x).map(|(rf, fr)| rf == fr),
                );
            }
        }
        s.check(
            || format!("({n},{p},{depth}): the unit is compatible"),
            t.check_element(&t.one(&z)).map(|r| r.compatible()),
        );
    }
    s.result
}

/// Runs every suite with randomness drawn from `seed`.
pub fn run(seed: u64) -> SelftestReport {
    run_suites(seed, &SUITES)
}

/// Runs the named suites in the given order; unknown names are skipped.
/// Each suite gets its own stream so that selecting a subset does not change
/// the draws of the others.
pub fn run_suites(seed: u64, names: &[&str]) -> SelftestReport {
    type SuiteFn = fn(&mut ChaCha8Rng) -> SuiteResult;
    let table: [(&str, SuiteFn); 9] = [
        ("ghost_homomorphism", ghost_homomorphism),
        ("ghost_inversion", ghost_inversion),
        ("ring_axioms", ring_axioms),
        ("teichmueller_decomposition", teichmueller_decomposition),
        ("transfer_identities", transfer_identities),
        ("restriction", restriction),
        ("burnside", burnside),
        ("spans", spans),
        ("tower", tower),
    ];
    let suites: Vec<SuiteResult> = names
        .iter()
        .filter_map(|n| table.iter().position(|(m, _)| m == n))
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            (table[i].1)(&mut rng)
        })
        .collect();
    SelftestReport {
        seed,
        passed: suites.iter().all(SuiteResult::passed),
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass_and_are_reproducible() {
        let names = ["ghost_inversion", "burnside", "spans"];
        let a = run_suites(7, &names);
        assert!(a.passed, "{a:?}");
        assert_eq!(a, run_suites(7, &names));
        assert_eq!(a.suites.len(), 3);
    }
}
