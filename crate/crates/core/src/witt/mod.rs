//! Burnside-Witt vectors `W_G(B)` and their truncations `W_F(B)` to closed
//! families.
//!
//! A vector has one coordinate per class in its family, stored in the
//! canonical class order. The ghost component at `[K]` is
//!
//! ```text
//! phi_K(x) = sum over [H] of |(G/H)^K| * x_H^(|H|/|K|)
//! ```
//!
//! where terms with a zero mark are skipped (their exponent need not be an
//! integer). Over torsion-free rings the ghost map is injective and the ring
//! operations are computed on ghost components. Over `Z/m` they are computed
//! by specializing integral universal polynomials, see [`unipoly`].

mod io;
mod ops;
pub mod unipoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::group::{ClosedFamily, ConjClassTable, GroupError};
use crate::ring::{Element, Ring, RingError, RingHom};

pub use unipoly::{UnipolyTag, UniversalPolys};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error("ghost vector is not integral at class {class}: {value} is not divisible by {divisor}")]
    NotIntegral { class: String, value: String, divisor: u64 },
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("ghost inversion requires a torsion-free ring, got {0}")]
    NotTorsionFree(String),
    #[error("universal polynomials for a group of order {order} exceed the cap of {cap}")]
    UnipolyCapExceeded { order: usize, cap: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("universal polynomial cache: {0}")]
    Cache(String),
    #[error("invalid document: {0}")]
    Document(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl WittError {
    /// Turns a non-integrality that the theory rules out into an invariant
    /// violation; other errors pass through.
    pub(crate) fn escalate(self, during: &str) -> WittError {
        match self {
            WittError::NotIntegral { class, value, divisor } => WittError::Invariant(format!(
                "{during}: ghost inversion failed at {class} ({value} / {divisor})"
            )),
            other => other,
        }
    }
}

fn same_group(a: &ConjClassTable, b: &ConjClassTable) -> bool {
    std::ptr::eq(a, b) || a.group() == b.group()
}

/// Class-indexed coordinates over a closed family. Shared shape of Witt and
/// ghost vectors.
#[derive(Clone)]
struct Coords {
    table: Arc<ConjClassTable>,
    family: ClosedFamily,
    ring: Ring,
    values: Vec<Element>,
}

impl Coords {
    fn new(
        table: Arc<ConjClassTable>,
        family: ClosedFamily,
        ring: Ring,
        values: Vec<Element>,
    ) -> Result<Self, WittError> {
        if family.num_classes() != table.num_classes() {
            return Err(WittError::Incompatible("family belongs to a different group".into()));
        }
        if values.len() != family.len() {
            return Err(WittError::Incompatible(format!(
                "{} coordinates for a family of {} classes",
                values.len(),
                family.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| v.ring() != &ring) {
            return Err(RingError::Mismatch {
                left: bad.ring().to_string(),
                right: ring.to_string(),
            }
            .into());
        }
        Ok(Coords {
            table,
            family,
            ring,
            values,
        })
    }

    fn check_compatible(&self, other: &Coords) -> Result<(), WittError> {
        if !same_group(&self.table, &other.table) {
            return Err(WittError::Incompatible("different groups".into()));
        }
        if self.family != other.family {
            return Err(WittError::Incompatible("different families".into()));
        }
        if self.ring != other.ring {
            return Err(WittError::Incompatible(format!(
                "rings {} and {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    fn get(&self, class: usize) -> Option<&Element> {
        self.family.position(class).map(|i| &self.values[i])
    }

    fn eq(&self, other: &Coords) -> bool {
        same_group(&self.table, &other.table)
            && self.family == other.family
            && self.ring == other.ring
            && self.values == other.values
    }

    fn fmt(&self, f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
        write!(f, "{name}(")?;
        for (k, (&c, v)) in self.family.ids().iter().zip(&self.values).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "c{c}={v}")?;
        }
        write!(f, ")")
    }
}

/// An element of `W_F(B)`.
#[derive(Clone)]
pub struct WittVector(Coords);

/// Ghost components `(phi_K)` for `[K]` in a family.
#[derive(Clone)]
pub struct GhostVector(Coords);

macro_rules! shared_accessors {
    ($t:ident) => {
        impl $t {
            pub fn new(
                table: Arc<ConjClassTable>,
                family: ClosedFamily,
                ring: Ring,
                values: Vec<Element>,
            ) -> Result<Self, WittError> {
                Coords::new(table, family, ring, values).map($t)
            }

            /// Over the full family of `table`.
            pub fn full(table: Arc<ConjClassTable>, ring: Ring, values: Vec<Element>) -> Result<Self, WittError> {
                let family = ClosedFamily::all(&table);
                Self::new(table, family, ring, values)
            }

            pub fn table(&self) -> &Arc<ConjClassTable> {
                &self.0.table
            }

            pub fn family(&self) -> &ClosedFamily {
                &self.0.family
            }

            pub fn ring(&self) -> &Ring {
                &self.0.ring
            }

            /// Values in the order of `family().ids()`.
            pub fn values(&self) -> &[Element] {
                &self.0.values
            }

            /// The entry at a class, if the class is in the family.
            pub fn get(&self, class: usize) -> Option<&Element> {
                self.0.get(class)
            }

            /// Applies a ring homomorphism entrywise.
            pub fn map_coords(&self, h: &RingHom) -> Result<Self, WittError> {
                let values = self
                    .0
                    .values
                    .iter()
                    .map(|v| h.apply(v))
                    .collect::<Result<_, _>>()?;
                Self::new(
                    self.0.table.clone(),
                    self.0.family.clone(),
                    h.target().clone(),
                    values,
                )
            }
        }

        impl PartialEq for $t {
            fn eq(&self, other: &Self) -> bool {
                self.0.eq(&other.0)
            }
        }

        impl Eq for $t {}

        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f, stringify!($t))
            }
        }
    };
}

shared_accessors!(WittVector);
shared_accessors!(GhostVector);

impl GhostVector {
    pub fn try_add(&self, other: &GhostVector) -> Result<GhostVector, WittError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_mul(&self, other: &GhostVector) -> Result<GhostVector, WittError> {
        self.zip(other, |a, b| a * b)
    }

    pub fn neg(&self) -> GhostVector {
        let mut out = self.clone();
        out.0.values = self.0.values.iter().map(|a| -a).collect();
        out
    }

    fn zip(&self, other: &GhostVector, f: impl Fn(&Element, &Element) -> Element) -> Result<GhostVector, WittError> {
        self.0.check_compatible(&other.0)?;
        let mut out = self.clone();
        out.0.values = self
            .0
            .values
            .iter()
            .zip(&other.0.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(out)
    }

    /// Drops the entries outside `sub`.
    pub fn truncate(&self, sub: &ClosedFamily) -> Result<GhostVector, WittError> {
        truncate_coords(&self.0, sub).map(GhostVector)
    }
}

fn truncate_coords(c: &Coords, sub: &ClosedFamily) -> Result<Coords, WittError> {
    let sub = ClosedFamily::validate(&c.table, sub.ids())?;
    if !sub.is_subfamily_of(&c.family) {
        return Err(GroupError::NotContained.into());
    }
    let values = sub
        .ids()
        .iter()
        .map(|&i| c.get(i).expect("contained").clone())
        .collect();
    Coords::new(c.table.clone(), sub, c.ring.clone(), values)
}

/// `|H| / |K|`, the exponent of `x_H` in `phi_K`, for subconjugate pairs.
fn exponent(table: &ConjClassTable, k: usize, h: usize) -> u64 {
    (table.subgroup_order(h) / table.subgroup_order(k)) as u64
}

impl WittVector {
    pub fn zero(table: Arc<ConjClassTable>, family: ClosedFamily, ring: Ring) -> WittVector {
        let values = vec![ring.zero(); family.len()];
        WittVector::new(table, family, ring, values).expect("well-formed")
    }

    /// The unit: `1` at `[G]`, `0` elsewhere. On a family without `[G]`
    /// (only the empty family) this is the zero vector.
    pub fn one(table: Arc<ConjClassTable>, family: ClosedFamily, ring: Ring) -> WittVector {
        let mut x = Self::zero(table, family, ring);
        if let Some(p) = x.0.family.position(0) {
            x.0.values[p] = x.0.ring.one();
        }
        x
    }

    /// `b` at `[G]`, zero elsewhere; its ghost is `(b^(|G|/|K|))_K`.
    pub fn teichmueller(
        table: Arc<ConjClassTable>,
        family: ClosedFamily,
        b: &Element,
    ) -> Result<WittVector, WittError> {
        if !family.contains(0) {
            return Err(WittError::Incompatible(
                "the Teichmüller map needs [G] in the family".into(),
            ));
        }
        let mut x = Self::zero(table, family, b.ring().clone());
        x.0.values[0] = b.clone();
        Ok(x)
    }

    /// The single-coordinate vector with `b` at `class`.
    pub fn basis(
        table: Arc<ConjClassTable>,
        family: ClosedFamily,
        class: usize,
        b: &Element,
    ) -> Result<WittVector, WittError> {
        let pos = family
            .position(class)
            .ok_or_else(|| WittError::Incompatible(format!("c{class} is not in the family")))?;
        let mut x = Self::zero(table, family, b.ring().clone());
        x.0.values[pos] = b.clone();
        Ok(x)
    }

    pub fn ghost(&self) -> GhostVector {
        let Coords {
            table,
            family,
            ring,
            values,
            ..
        } = &self.0;
        let ghost = family
            .ids()
            .iter()
            .map(|&k| {
                let mut acc = ring.zero();
                for (&h, x) in family.ids().iter().zip(values) {
                    let m = table.mark(k, h);
                    if m != 0 {
                        acc = &acc + &x.pow(exponent(table, k, h)).scale(&BigInt::from(m));
                    }
                }
                acc
            })
            .collect();
        GhostVector(Coords {
            table: table.clone(),
            family: family.clone(),
            ring: ring.clone(),
            values: ghost,
        })
    }

    /// The unique `x` with `ghost(x) == w`. Classes are solved in canonical
    /// order, so every `x_H` entering the equation for `[K]` is known.
    pub fn from_ghost(w: &GhostVector) -> Result<WittVector, WittError> {
        let Coords {
            table,
            family,
            ring,
            values,
            ..
        } = &w.0;
        if !ring.is_torsion_free() {
            return Err(WittError::NotTorsionFree(ring.to_string()));
        }
        let ids = family.ids();
        let mut out: Vec<Element> = Vec::with_capacity(ids.len());
        for (pos, &k) in ids.iter().enumerate() {
            let mut acc = values[pos].clone();
            for (&h, x) in ids[..pos].iter().zip(&out) {
                let m = table.mark(k, h);
                if m != 0 {
                    acc = &acc - &x.pow(exponent(table, k, h)).scale(&BigInt::from(m));
                }
            }
            let weyl = table.weyl_order(k) as u64;
            let x = acc.exact_div(weyl).map_err(|e| match e {
                RingError::NotDivisible { value, divisor } => WittError::NotIntegral {
                    class: ConjClassTable::class_id(k),
                    value,
                    divisor,
                },
                other => other.into(),
            })?;
            out.push(x);
        }
        Ok(WittVector(Coords {
            table: table.clone(),
            family: family.clone(),
            ring: ring.clone(),
            values: out,
        }))
    }

    pub fn try_add(&self, other: &WittVector) -> Result<WittVector, WittError> {
        self.binary(other, UnipolyTag::Add)
    }

    pub fn try_mul(&self, other: &WittVector) -> Result<WittVector, WittError> {
        self.binary(other, UnipolyTag::Mul)
    }

    pub fn try_sub(&self, other: &WittVector) -> Result<WittVector, WittError> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_neg(&self) -> Result<WittVector, WittError> {
        if self.0.ring.is_torsion_free() {
            return Self::from_ghost(&self.ghost().neg()).map_err(|e| e.escalate("negation"));
        }
        let polys = unipoly::get(&self.0.table, &UnipolyTag::Neg)?;
        self.specialize(&polys, None, self.0.table.clone(), self.0.family.clone())
    }

    fn binary(&self, other: &WittVector, tag: UnipolyTag) -> Result<WittVector, WittError> {
        self.0.check_compatible(&other.0)?;
        if self.0.ring.is_torsion_free() {
            let (a, b) = (self.ghost(), other.ghost());
            let w = match tag {
                UnipolyTag::Add => a.try_add(&b)?,
                _ => a.try_mul(&b)?,
            };
            return Self::from_ghost(&w).map_err(|e| e.escalate(tag.name()));
        }
        let polys = unipoly::get(&self.0.table, &tag)?;
        self.specialize(&polys, Some(other), self.0.table.clone(), self.0.family.clone())
    }

    /// Evaluates `polys` at `x = self`, `y = other`, producing a vector over
    /// `out_family` of `out_table`. Variables of classes outside the input
    /// family are never reached, since outputs on a closed family only
    /// depend on inputs on the matching family.
    fn specialize(
        &self,
        polys: &UniversalPolys,
        other: Option<&WittVector>,
        out_table: Arc<ConjClassTable>,
        out_family: ClosedFamily,
    ) -> Result<WittVector, WittError> {
        let mut images: Vec<Option<Element>> = vec![None; polys.variables().len()];
        let n = polys.input_classes();
        for (&c, v) in self.0.family.ids().iter().zip(&self.0.values) {
            images[c] = Some(v.clone());
        }
        if let Some(y) = other {
            for (&c, v) in y.0.family.ids().iter().zip(&y.0.values) {
                images[n + c] = Some(v.clone());
            }
        }
        let values = out_family
            .ids()
            .iter()
            .map(|&c| polys.evaluate(c, &images, &self.0.ring))
            .collect::<Result<Vec<_>, _>>()?;
        WittVector::new(out_table, out_family, self.0.ring.clone(), values)
    }

    /// Drops the coordinates outside `sub`. A ring homomorphism, because
    /// ghost components on `sub` only read coordinates in `sub`.
    pub fn truncate(&self, sub: &ClosedFamily) -> Result<WittVector, WittError> {
        truncate_coords(&self.0, sub).map(WittVector)
    }

    /// The coordinate at `class`, panicking if it is outside the family.
    pub fn coord(&self, class: usize) -> &Element {
        self.get(class)
            .unwrap_or_else(|| panic!("c{class} is not in the family"))
    }
}

/// The Witt vector over `Z` of the finite `G`-set `sum_j n_j G/H_j`: the
/// preimage under the ghost map of its marks `phi_K = sum_j n_j |(G/H_j)^K|`.
/// A single orbit `G/H` has coordinates the indicator of `[H]`; a sum of
/// orbits is the Witt sum of those indicators, which is not coordinatewise.
pub fn burnside_embed(table: &Arc<ConjClassTable>, multiplicities: &[(usize, u64)]) -> Result<WittVector, WittError> {
    let n = table.num_classes();
    let mut counts = vec![0u64; n];
    for &(c, m) in multiplicities {
        if c >= n {
            return Err(GroupError::UnknownClass(ConjClassTable::class_id(c)).into());
        }
        counts[c] += m;
    }
    let z = Ring::integers();
    let marks = (0..n)
        .map(|k| {
            let s: BigInt = (0..n).map(|j| BigInt::from(counts[j]) * table.mark(k, j)).sum();
            z.from_int(&s)
        })
        .collect();
    let w = GhostVector::full(table.clone(), z, marks)?;
    WittVector::from_ghost(&w).map_err(|e| e.escalate("Burnside embedding"))
}
