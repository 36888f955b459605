//! Exact coefficient rings: the integers, `Z/m`, and integer polynomial rings
//! in named variables.
//!
//! An [`Element`] carries its [`Ring`], so mixing rings is detected at runtime.
//! The `try_*` methods report a mismatch as [`RingError::Mismatch`]; the
//! operator impls on references panic instead and are meant for code that
//! has already checked its operands.

mod hom;
pub mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

pub(crate) use hom::evaluate;
pub use hom::RingHom;
pub use poly::{Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("ring mismatch: {left} vs {right}")]
    Mismatch { left: String, right: String },
    #[error("{value} is not divisible by {divisor}")]
    NotDivisible { value: String, divisor: u64 },
    #[error("exact division requires a torsion-free ring, got {0}")]
    NotTorsionFree(String),
    #[error("variable `{0}` has no assigned image")]
    UnassignedVariable(String),
    #[error("no ring homomorphism {source_ring} -> {target}: {reason}")]
    NoHomomorphism {
        source_ring: String,
        target: String,
        reason: String,
    },
    #[error("invalid ring descriptor: {0}")]
    BadDescriptor(String),
    #[error("invalid element for {ring}: {reason}")]
    BadElement { ring: String, reason: String },
}

/// Variable names of a polynomial ring, shared between all of its elements.
#[derive(Clone, Debug, Eq)]
pub struct PolyVars(Arc<Vec<String>>);

impl PartialEq for PolyVars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for PolyVars {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PolyVars {
    pub fn names(&self) -> &[String] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    /// `Z/m` with `m >= 2`.
    IntegersMod(u64),
    Polynomial(PolyVars),
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn integers() -> Ring {
        Ring::Integers
    }

    pub fn modulo(m: u64) -> Result<Ring, RingError> {
        if m < 2 {
            return Err(RingError::BadDescriptor(format!("modulus must be >= 2, got {m}")));
        }
        if m > u32::MAX as u64 {
            return Err(RingError::BadDescriptor(format!("modulus {m} exceeds 2^32 - 1")));
        }
        Ok(Ring::IntegersMod(m))
    }

    /// The ring `Z[v_1, ..., v_n]`. Variable order is the given order.
    pub fn polynomial<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Ring, RingError> {
        let names: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_var_name(n) {
                return Err(RingError::BadDescriptor(format!("bad variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(RingError::BadDescriptor(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Ring::Polynomial(PolyVars(Arc::new(names))))
    }

    pub fn is_torsion_free(&self) -> bool {
        !matches!(self, Ring::IntegersMod(_))
    }

    pub fn variables(&self) -> &[String] {
        match self {
            Ring::Polynomial(v) => v.names(),
            _ => &[],
        }
    }

    pub fn zero(&self) -> Element {
        self.from_i64(0)
    }

    pub fn one(&self) -> Element {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Element {
        self.from_int(&BigInt::from(n))
    }

    /// Image of an integer under the unique ring map `Z -> self`.
    pub fn from_int(&self, n: &BigInt) -> Element {
        let value = match self {
            Ring::Integers => Value_::Int(n.clone()),
            Ring::IntegersMod(m) => Value_::Residue(reduce(n, *m)),
            Ring::Polynomial(_) => Value_::Poly(Polynomial::constant(n.clone())),
        };
        Element {
            ring: self.clone(),
            value,
        }
    }

    /// The variable `name` of a polynomial ring.
    pub fn var(&self, name: &str) -> Result<Element, RingError> {
        let idx = self
            .variables()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| RingError::BadElement {
                ring: self.to_string(),
                reason: format!("no variable `{name}`"),
            })?;
        Ok(self.var_at(idx))
    }

    pub(crate) fn var_at(&self, idx: usize) -> Element {
        debug_assert!(idx < self.variables().len());
        Element {
            ring: self.clone(),
            value: Value_::Poly(Polynomial::var(idx as u32)),
        }
    }

    /// Wraps a polynomial whose variable indices are valid for this ring.
    pub fn poly_element(&self, p: Polynomial) -> Result<Element, RingError> {
        let n = self.variables().len();
        if !matches!(self, Ring::Polynomial(_)) || p.max_var().is_some_and(|v| v as usize >= n) {
            return Err(RingError::BadElement {
                ring: self.to_string(),
                reason: "polynomial does not fit this ring".into(),
            });
        }
        Ok(Element {
            ring: self.clone(),
            value: Value_::Poly(p),
        })
    }

    /// Descriptor in the JSON interchange format.
    pub fn to_json(&self) -> Value {
        match self {
            Ring::Integers => json!({"int": true}),
            Ring::IntegersMod(m) => json!({"mod": m}),
            Ring::Polynomial(v) => json!({"poly": v.names()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Ring, RingError> {
        let bad = || RingError::BadDescriptor(v.to_string());
        let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(bad)?;
        let (key, val) = obj.iter().next().ok_or_else(bad)?;
        match key.as_str() {
            "int" if val == &Value::Bool(true) => Ok(Ring::Integers),
            "mod" => Ring::modulo(val.as_u64().ok_or_else(bad)?),
            "poly" => {
                let names = val
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|n| n.as_str().map(str::to_string).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()?;
                Ring::polynomial(names)
            }
            _ => Err(bad()),
        }
    }

    /// JSON form of an element: decimal strings for integers, numbers for
    /// residues, and for polynomials a list of `{"coef": "...", "mon": [[var, exp], ...]}`
    /// terms from the highest monomial down.
    pub fn element_to_json(&self, e: &Element) -> Value {
        debug_assert_eq!(&e.ring, self);
        match &e.value {
            Value_::Int(n) => Value::String(n.to_string()),
            Value_::Residue(r) => json!(r),
            Value_::Poly(p) => {
                let names = self.variables();
                Value::Array(
                    p.terms()
                        .rev()
                        .map(|(m, c)| {
                            let mon: Vec<Value> =
                                m.powers().iter().map(|&(v, e)| json!([names[v as usize], e])).collect();
                            json!({"coef": c.to_string(), "mon": mon})
                        })
                        .collect(),
                )
            }
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<Element, RingError> {
        let bad = |reason: &str| RingError::BadElement {
            ring: self.to_string(),
            reason: format!("{reason}: {v}"),
        };
        let as_int = |v: &Value| -> Option<BigInt> {
            match v {
                Value::String(s) => s.trim().parse().ok(),
                Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
                _ => None,
            }
        };
        match self {
            Ring::Integers => Ok(self.from_int(&as_int(v).ok_or_else(|| bad("expected integer"))?)),
            Ring::IntegersMod(m) => {
                let n = as_int(v).ok_or_else(|| bad("expected residue"))?;
                if n < BigInt::zero() || n >= BigInt::from(*m) {
                    return Err(bad("residue out of range"));
                }
                Ok(self.from_int(&n))
            }
            Ring::Polynomial(vars) => {
                let p = match v {
                    Value::String(s) => poly::parse_polynomial(s, vars.names()).map_err(|e| bad(&e.to_string()))?,
                    Value::Array(terms) => {
                        let mut out = Vec::with_capacity(terms.len());
                        for t in terms {
                            let coef = t.get("coef").and_then(as_int).ok_or_else(|| bad("bad coef"))?;
                            let mon = t.get("mon").and_then(Value::as_array).ok_or_else(|| bad("bad mon"))?;
                            let mut powers = Vec::with_capacity(mon.len());
                            for pe in mon {
                                let name = pe.get(0).and_then(Value::as_str).ok_or_else(|| bad("bad var"))?;
                                let exp = pe
                                    .get(1)
                                    .and_then(Value::as_u64)
                                    .and_then(|e| u32::try_from(e).ok())
                                    .ok_or_else(|| bad("bad exponent"))?;
                                let idx = vars
                                    .names()
                                    .iter()
                                    .position(|n| n == name)
                                    .ok_or_else(|| bad("unknown variable"))?;
                                powers.push((idx as u32, exp));
                            }
                            out.push((Monomial::from_powers(powers), coef));
                        }
                        Polynomial::from_terms(out)
                    }
                    _ => return Err(bad("expected term list or polynomial string")),
                };
                self.poly_element(p)
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => f.write_str("Z"),
            Ring::IntegersMod(m) => write!(f, "Z/{m}"),
            Ring::Polynomial(v) => write!(f, "Z[{}]", v.names().join(",")),
        }
    }
}

fn reduce(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value_ {
    Int(BigInt),
    Residue(u64),
    Poly(Polynomial),
}

/// An element of a [`Ring`] in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    ring: Ring,
    value: Value_,
}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match &self.value {
            Value_::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.value {
            Value_::Residue(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match &self.value {
            Value_::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value_::Int(n) => n.is_zero(),
            Value_::Residue(r) => *r == 0,
            Value_::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn check(&self, other: &Element) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::Mismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }

    fn with(&self, value: Value_) -> Element {
        Element {
            ring: self.ring.clone(),
            value,
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, RingError> {
        self.check(other)?;
        Ok(self.with(match (&self.value, &other.value) {
            (Value_::Int(a), Value_::Int(b)) => Value_::Int(a + b),
            (Value_::Residue(a), Value_::Residue(b)) => Value_::Residue((a + b) % self.modulus()),
            (Value_::Poly(a), Value_::Poly(b)) => Value_::Poly(a.add(b)),
            _ => unreachable!("payload matches ring"),
        }))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, RingError> {
        self.try_add(&other.neg_())
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, RingError> {
        self.check(other)?;
        Ok(self.with(match (&self.value, &other.value) {
            (Value_::Int(a), Value_::Int(b)) => Value_::Int(a * b),
            (Value_::Residue(a), Value_::Residue(b)) => {
                Value_::Residue(((*a as u128 * *b as u128) % self.modulus() as u128) as u64)
            }
            (Value_::Poly(a), Value_::Poly(b)) => Value_::Poly(a.mul(b)),
            _ => unreachable!("payload matches ring"),
        }))
    }

    fn neg_(&self) -> Element {
        self.with(match &self.value {
            Value_::Int(a) => Value_::Int(-a),
            Value_::Residue(a) => Value_::Residue((self.modulus() - a) % self.modulus()),
            Value_::Poly(a) => Value_::Poly(a.neg()),
        })
    }

    fn modulus(&self) -> u64 {
        match self.ring {
            Ring::IntegersMod(m) => m,
            _ => unreachable!("only residues have a modulus"),
        }
    }

    pub fn pow(&self, e: u64) -> Element {
        match &self.value {
            Value_::Int(a) => self.with(Value_::Int(num_traits::pow::pow(
                a.clone(),
                usize::try_from(e).expect("exponent fits in usize"),
            ))),
            Value_::Residue(a) => {
                let m = self.modulus() as u128;
                let (mut base, mut e, mut acc) = (*a as u128 % m, e, 1u128 % m);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                self.with(Value_::Residue(acc as u64))
            }
            Value_::Poly(a) => self.with(Value_::Poly(a.pow(e))),
        }
    }

    /// Multiplication by an integer scalar.
    pub fn scale(&self, k: &BigInt) -> Element {
        match &self.value {
            Value_::Int(a) => self.with(Value_::Int(a * k)),
            Value_::Poly(a) => self.with(Value_::Poly(a.scale(k))),
            Value_::Residue(_) => self * &self.ring.from_int(k),
        }
    }

    /// The unique `x` with `n * x == self`, in a torsion-free ring.
    pub fn exact_div(&self, n: u64) -> Result<Element, RingError> {
        let not_div = || RingError::NotDivisible {
            value: self.to_string(),
            divisor: n,
        };
        if n == 0 {
            return Err(not_div());
        }
        let d = BigInt::from(n);
        match &self.value {
            Value_::Int(a) => {
                let (q, r) = a.div_rem(&d);
                if r.is_zero() {
                    Ok(self.with(Value_::Int(q)))
                } else {
                    Err(not_div())
                }
            }
            Value_::Poly(p) => p.exact_div(&d).map(|q| self.with(Value_::Poly(q))).ok_or_else(not_div),
            Value_::Residue(_) => Err(RingError::NotTorsionFree(self.ring.to_string())),
        }
    }

    pub fn to_json(&self) -> Value {
        self.ring.element_to_json(self)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value_::Int(a) => write!(f, "{a}"),
            Value_::Residue(a) => write!(f, "{a}"),
            Value_::Poly(p) => write!(f, "{}", p.display(self.ring.variables())),
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_()
    }
}
