//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! Variables are referenced by index into the owning ring's variable list.
//! Terms are kept in a `BTreeMap` under graded lexicographic order, so two
//! polynomials are equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A monomial: sorted `(variable index, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    powers: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(index: u32) -> Self {
        Monomial {
            degree: 1,
            powers: vec![(index, 1)],
        }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated variables
    /// are merged and zero exponents dropped.
    pub fn from_powers(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut merged: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *merged.entry(v).or_default() += e;
        }
        let powers: Vec<(u32, u32)> = merged.into_iter().filter(|&(_, e)| e > 0).collect();
        let degree = powers.iter().map(|&(_, e)| e).sum();
        Monomial { degree, powers }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn powers(&self) -> &[(u32, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.powers
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, b) = (self.powers[i], other.powers[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    powers.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    powers.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    powers.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        powers.extend_from_slice(&self.powers[i..]);
        powers.extend_from_slice(&other.powers[j..]);
        Monomial {
            degree: self.degree + other.degree,
            powers,
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then the exponent of
    /// the earliest variable on which the two monomials differ.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.powers.iter().zip(other.powers.iter()) {
            if a.0 != b.0 {
                // the monomial mentioning the earlier variable is larger
                return b.0.cmp(&a.0);
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.powers.len().cmp(&other.powers.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with integer coefficients; no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(index: u32) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(index), BigInt::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.powers.last().map(|&(v, _)| v)).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: std::collections::HashMap<Monomial, BigInt> =
            std::collections::HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides every coefficient by `n`, or returns `None` if some coefficient
    /// is not a multiple of `n`.
    pub fn exact_div(&self, n: &BigInt) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(Polynomial { terms })
    }

    /// Renders with the given variable names, highest terms first, e.g.
    /// `x^2 + 2*x*y + y^2`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut first = true;
            if !abs.is_one() || m.is_one() {
                write!(f, "{abs}")?;
                first = false;
            }
            for &(v, e) in &m.powers {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(&self.names[v as usize])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct ParsePolyError {
    pub pos: usize,
    pub msg: String,
}

/// Parses the format produced by [`Polynomial::display`]: a sum of terms
/// `c*v1^e1*v2...` separated by `+` or `-`. Whitespace is ignored.
pub fn parse_polynomial(src: &str, names: &[String]) -> Result<Polynomial, ParsePolyError> {
    let bytes: Vec<(usize, char)> = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let err = |pos: usize, msg: &str| ParsePolyError {
        pos,
        msg: msg.to_string(),
    };
    let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    let mut out = Polynomial::zero();
    let mut i = 0;
    if bytes.is_empty() {
        return Err(err(0, "empty input"));
    }
    loop {
        let mut sign = BigInt::one();
        if i < bytes.len() && (bytes[i].1 == '+' || bytes[i].1 == '-') {
            if bytes[i].1 == '-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(err(bytes[i].0, "expected '+' or '-'"));
        }
        let mut coef = BigInt::one();
        let mut powers = Vec::new();
        loop {
            let start = i;
            let pos = bytes.get(i).map(|b| b.0).unwrap_or(src.len());
            if i < bytes.len() && bytes[i].1.is_ascii_digit() {
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                let digits: String = bytes[start..i].iter().map(|b| b.1).collect();
                coef *= digits.parse::<BigInt>().map_err(|_| err(pos, "bad integer"))?;
            } else if i < bytes.len() && is_ident(bytes[i].1) {
                while i < bytes.len() && is_ident(bytes[i].1) {
                    i += 1;
                }
                let name: String = bytes[start..i].iter().map(|b| b.1).collect();
                let var = names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| err(pos, &format!("unknown variable `{name}`")))?;
                let mut exp = 1u32;
                if i < bytes.len() && bytes[i].1 == '^' {
                    i += 1;
                    let es = i;
                    while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = bytes[es..i].iter().map(|b| b.1).collect();
                    exp = digits.parse().map_err(|_| err(pos, "bad exponent"))?;
                }
                powers.push((var as u32, exp));
            } else {
                return Err(err(pos, "expected coefficient or variable"));
            }
            if i < bytes.len() && bytes[i].1 == '*' {
                i += 1;
                continue;
            }
            break;
        }
        out.add_term(Monomial::from_powers(powers), sign * coef);
        if i >= bytes.len() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn binomial_square() {
        let x = Polynomial::var(0);
        let y = Polynomial::var(1);
        let s = x.add(&y).pow(2);
        let n = names(&["x", "y"]);
        assert_eq!(s.display(&n).to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn graded_lex_order() {
        let x2 = Monomial::from_powers([(0, 2)]);
        let xy = Monomial::from_powers([(0, 1), (1, 1)]);
        let y2 = Monomial::from_powers([(1, 2)]);
        let x = Monomial::var(0);
        assert!(x2 > xy && xy > y2 && y2 > x && x > Monomial::one());
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = Polynomial::var(0);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.mul(&Polynomial::zero()), Polynomial::zero());
    }

    #[test]
    fn exact_division() {
        let n = names(&["x"]);
        let p = parse_polynomial("2*x^2 + 4", &n).unwrap();
        let q = p.exact_div(&BigInt::from(2)).unwrap();
        assert_eq!(q.display(&n).to_string(), "x^2 + 2");
        assert!(p.exact_div(&BigInt::from(4)).is_none());
    }

    #[test]
    fn parse_examples() {
        let n = names(&["x", "y"]);
        let p = parse_polynomial("-x*y + 3 - y^2 + x*x", &n).unwrap();
        assert_eq!(p.display(&n).to_string(), "x^2 - x*y - y^2 + 3");
        assert!(parse_polynomial("x + z", &n).is_err());
        assert!(parse_polynomial("", &n).is_err());
        assert!(parse_polynomial("x y", &n).is_err());
        assert_eq!(parse_polynomial("0", &n).unwrap(), Polynomial::zero());
    }
}
