//! Spans of finite sets `X <- A -> Y` up to isomorphism over `X` and `Y`.
//!
//! A span is determined by its fiber counts `M[x][y] = |{a : f1(a) = x, f2(a) = y}|`,
//! so it is stored as that matrix, with rows indexed by the domain `X` and
//! columns by the codomain `Y`. Composition by pullback is the matrix
//! product.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpanError {
    #[error("matrix does not have shape {rows}x{cols}")]
    Shape { rows: usize, cols: usize },
    #[error("cannot compose: codomain has {left} points, domain has {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("map value {value} is outside a set of size {size}")]
    OutOfRange { value: usize, size: usize },
    #[error("split point {at} exceeds the domain size {dom}")]
    SplitOutOfRange { at: usize, dom: usize },
    #[error("fiber count overflows u64")]
    Overflow,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid span document: {0}")]
    Json(String),
    #[error("span is not fixed: row {row} differs at points {a} and {b} of one orbit")]
    NotFixed { row: usize, a: usize, b: usize },
}

/// A span in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    dom: usize,
    cod: usize,
    matrix: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dom_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cod_labels: Option<Vec<String>>,
}

impl Span {
    pub fn new(dom: usize, cod: usize, matrix: Vec<Vec<u64>>) -> Result<Span, SpanError> {
        if matrix.len() != dom || matrix.iter().any(|r| r.len() != cod) {
            return Err(SpanError::Shape { rows: dom, cols: cod });
        }
        Ok(Span {
            dom,
            cod,
            matrix,
            dom_labels: None,
            cod_labels: None,
        })
    }

    /// Attaches point names; lengths must match the two sets.
    pub fn with_labels(mut self, dom: Vec<String>, cod: Vec<String>) -> Result<Span, SpanError> {
        if dom.len() != self.dom || cod.len() != self.cod {
            return Err(SpanError::Shape {
                rows: self.dom,
                cols: self.cod,
            });
        }
        self.dom_labels = Some(dom);
        self.cod_labels = Some(cod);
        Ok(self)
    }

    /// Fiber counts of `X <- A -> Y` given by `f1`, `f2` on `A = {0, .., n-1}`.
    pub fn canonicalize(dom: usize, cod: usize, f1: &[usize], f2: &[usize]) -> Result<Span, SpanError> {
        if f1.len() != f2.len() {
            return Err(SpanError::Shape {
                rows: f1.len(),
                cols: f2.len(),
            });
        }
        let mut m = vec![vec![0u64; cod]; dom];
        for (&x, &y) in f1.iter().zip(f2) {
            if x >= dom {
                return Err(SpanError::OutOfRange { value: x, size: dom });
            }
            if y >= cod {
                return Err(SpanError::OutOfRange { value: y, size: cod });
            }
            m[x][y] += 1;
        }
        Span::new(dom, cod, m)
    }

    pub fn identity(n: usize) -> Span {
        let m = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        Span::new(n, n, m).expect("square")
    }

    pub fn zero(dom: usize, cod: usize) -> Span {
        Span::new(dom, cod, vec![vec![0; cod]; dom]).expect("shaped")
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn entry(&self, x: usize, y: usize) -> u64 {
        self.matrix[x][y]
    }

    /// `self: X => Y` followed by `t: Y => Z`. The pullback `A x_Y B` has
    /// `sum_y M_s[x][y] * M_t[y][z]` points over `(x, z)`.
    pub fn compose(&self, t: &Span) -> Result<Span, SpanError> {
        if self.cod != t.dom {
            return Err(SpanError::SizeMismatch {
                left: self.cod,
                right: t.dom,
            });
        }
        let mut m = vec![vec![0u64; t.cod]; self.dom];
        for (x, row) in m.iter_mut().enumerate() {
            for (y, &a) in self.matrix[x].iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (z, out) in row.iter_mut().enumerate() {
                    let p = a.checked_mul(t.matrix[y][z]).ok_or(SpanError::Overflow)?;
                    *out = out.checked_add(p).ok_or(SpanError::Overflow)?;
                }
            }
        }
        Span::new(self.dom, t.cod, m)
    }

    /// The relation underlying the span: the image of `A -> X x Y`, i.e. the
    /// support of the matrix.
    pub fn l_image(&self) -> Span {
        let m = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&a| u64::from(a != 0)).collect())
            .collect();
        Span {
            matrix: m,
            ..self.clone()
        }
    }

    pub fn is_relation(&self) -> bool {
        self.matrix.iter().flatten().all(|&a| a <= 1)
    }

    /// Composition of relations: `L(t . s)`.
    pub fn compose_rel(&self, t: &Span) -> Result<Span, SpanError> {
        Ok(self.compose(t)?.l_image())
    }

    /// Restricts a span out of `X ⊔ X'` (with `X = {0, .., at-1}`) to the two
    /// summands.
    pub fn split(&self, at: usize) -> Result<(Span, Span), SpanError> {
        if at > self.dom {
            return Err(SpanError::SplitOutOfRange { at, dom: self.dom });
        }
        let (a, b) = self.matrix.split_at(at);
        Ok((
            Span::new(at, self.cod, a.to_vec())?,
            Span::new(self.dom - at, self.cod, b.to_vec())?,
        ))
    }

    /// The span out of `X ⊔ X'` whose restrictions are `self` and `other`.
    pub fn stack(&self, other: &Span) -> Result<Span, SpanError> {
        if self.cod != other.cod {
            return Err(SpanError::SizeMismatch {
                left: self.cod,
                right: other.cod,
            });
        }
        let mut m = self.matrix.clone();
        m.extend(other.matrix.iter().cloned());
        Span::new(self.dom + other.dom, self.cod, m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Parses `{"dom": n, "cod": m, "matrix": [[...]]}` and checks the shape.
    pub fn from_json(v: &serde_json::Value) -> Result<Span, SpanError> {
        let s: Span = serde_json::from_value(v.clone()).map_err(|e| SpanError::Json(e.to_string()))?;
        let checked = Span::new(s.dom, s.cod, s.matrix.clone())?;
        match (s.dom_labels, s.cod_labels) {
            (Some(d), Some(c)) => checked.with_labels(d, c),
            (None, None) => Ok(checked),
            _ => Err(SpanError::Shape {
                rows: s.dom,
                cols: s.cod,
            }),
        }
    }
}

/// A finite group acting on `{0, .., n-1}`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    points: usize,
    action: Vec<Vec<usize>>,
    orbit: Vec<usize>,
    orbits: Vec<Vec<usize>>,
}

impl GroupAction {
    /// `action[g]` is the permutation by which element `g` acts. Checks the
    /// homomorphism property.
    pub fn new(group: Arc<FiniteGroup>, points: usize, action: Vec<Vec<usize>>) -> Result<GroupAction, SpanError> {
        let bad = |s: &str| SpanError::InvalidAction(s.to_string());
        if action.len() != group.order() {
            return Err(bad("need one permutation per group element"));
        }
        for p in &action {
            let mut seen = vec![false; points];
            if p.len() != points {
                return Err(bad("permutation of the wrong length"));
            }
            for &x in p {
                if x >= points || std::mem::replace(&mut seen[x], true) {
                    return Err(bad("not a permutation"));
                }
            }
        }
        if action[group.identity()].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(bad("identity acts non-trivially"));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (0..points).any(|x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(bad("not a homomorphism"));
                }
            }
        }
        let mut orbit = vec![usize::MAX; points];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for x in 0..points {
            if orbit[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = action.iter().map(|p| p[x]).collect();
            members.sort_unstable();
            members.dedup();
            for &y in &members {
                orbit[y] = orbits.len();
            }
            orbits.push(members);
        }
        Ok(GroupAction {
            group,
            points,
            action,
            orbit,
            orbits,
        })
    }

    /// The action determined by the images of the descriptor's generators
    /// (see [`FiniteGroup::generators`]).
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        points: usize,
        images: &[Vec<usize>],
    ) -> Result<GroupAction, SpanError> {
        let gens = group
            .generators()
            .ok_or_else(|| SpanError::InvalidAction("group descriptor names no generators".into()))?;
        if gens.len() != images.len() {
            return Err(SpanError::InvalidAction(format!(
                "{} generator images given, the group has {} generators",
                images.len(),
                gens.len()
            )));
        }
        if images.iter().flatten().any(|&x| x >= points) || images.iter().any(|p| p.len() != points) {
            return Err(SpanError::InvalidAction(
                "generator image is not a map on the points".into(),
            ));
        }
        let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        action[group.identity()] = Some((0..points).collect());
        let mut queue = vec![group.identity()];
        while let Some(x) = queue.pop() {
            let px = action[x].clone().expect("queued elements are assigned");
            for (&s, img) in gens.iter().zip(images) {
                let xs = group.mul(x, s);
                if action[xs].is_none() {
                    action[xs] = Some(img.iter().map(|&p| px[p]).collect());
                    queue.push(xs);
                }
            }
        }
        let action = action
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| SpanError::InvalidAction("generators do not reach every element".into()))?;
        Self::new(group, points, action)
    }

    /// Reads `{"group": <descriptor>, "natural": true}`,
    /// `{"group": .., "points": n, "gens": [[..], ..]}` or
    /// `{"group": .., "points": n, "elements": [[..], ..]}`; images are 0-based.
    pub fn from_json(v: &serde_json::Value, cap: usize) -> Result<GroupAction, SpanError> {
        let bad = |s: String| SpanError::Json(s);
        let desc = v.get("group").ok_or_else(|| bad("missing `group`".into()))?;
        let desc = crate::group::GroupDescriptor::from_json(desc).map_err(|e| bad(e.to_string()))?;
        let group = FiniteGroup::build_with_cap(&desc, cap).map_err(|e| bad(e.to_string()))?;
        if v.get("natural").and_then(serde_json::Value::as_bool) == Some(true) {
            return Self::natural(group);
        }
        let points = v
            .get("points")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| bad("missing `points`".into()))? as usize;
        let perms = |key: &str| -> Result<Option<Vec<Vec<usize>>>, SpanError> {
            v.get(key)
                .map(|x| serde_json::from_value(x.clone()).map_err(|e| bad(format!("{key}: {e}"))))
                .transpose()
        };
        match (perms("gens")?, perms("elements")?) {
            (Some(g), None) => Self::from_generators(group, points, &g),
            (None, Some(e)) => Self::new(group, points, e),
            _ => Err(bad("give exactly one of `natural`, `gens` or `elements`".into())),
        }
    }

    /// A permutation group acting on the points it permutes.
    pub fn natural(group: Arc<FiniteGroup>) -> Result<GroupAction, SpanError> {
        let perms = group
            .permutations_of_elements()
            .ok_or_else(|| SpanError::InvalidAction("group is not given by permutations".into()))?
            .to_vec();
        let points = perms.first().map_or(0, Vec::len);
        Self::new(group, points, perms)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// Orbit index of each point; orbits are numbered by smallest member.
    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit[x]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Whether `s: Y => X` is fixed by the action on `X`, i.e. each row is
    /// constant along orbits.
    pub fn is_fixed(&self, s: &Span) -> bool {
        s.cod == self.points
            && (0..self.group.order()).all(|g| {
                s.matrix
                    .iter()
                    .all(|row| (0..self.points).all(|x| row[self.action[g][x]] == row[x]))
            })
    }

    /// `s: Y => X/G` to the fixed span `[Y <- A x_{X/G} X -> X]`: each orbit's
    /// column is copied to every point of the orbit.
    pub fn transport(&self, s: &Span) -> Result<Span, SpanError> {
        if s.cod != self.orbits.len() {
            return Err(SpanError::SizeMismatch {
                left: s.cod,
                right: self.orbits.len(),
            });
        }
        let m = s
            .matrix
            .iter()
            .map(|row| (0..self.points).map(|x| row[self.orbit[x]]).collect())
            .collect();
        Span::new(s.dom, self.points, m)
    }

    /// Inverse of [`transport`](Self::transport) on fixed spans.
    pub fn transport_inverse(&self, s: &Span) -> Result<Span, SpanError> {
        if s.cod != self.points {
            return Err(SpanError::SizeMismatch {
                left: s.cod,
                right: self.points,
            });
        }
        let mut m = Vec::with_capacity(s.dom);
        for (r, row) in s.matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(self.orbits.len());
            for members in &self.orbits {
                let first = members[0];
                if let Some(&b) = members.iter().find(|&&x| row[x] != row[first]) {
                    return Err(SpanError::NotFixed { row: r, a: first, b });
                }
                out.push(row[first]);
            }
            m.push(out);
        }
        Span::new(s.dom, self.orbits.len(), m)
    }
}
