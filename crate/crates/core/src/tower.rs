//! Towers of finite quotients `(Z/p^j)^n`, `j = 0..=depth`, with the
//! restriction maps `R` along reduction mod `p^j` and the Frobenius maps `F`
//! along the inclusion `a -> p a` of `(Z/p^j)^n` into `(Z/p^(j+1))^n`.
//!
//! A compatible family of Witt vectors along the `R` maps is a finite-depth
//! approximation of an element of the inverse limit `W_{Z_p^n}(B)`.

use std::sync::Arc;

use serde_json::Value;

use crate::group::{ConjClassTable, FiniteGroup, GroupDescriptor, GroupError, QuotientMap, SubgroupEmbedding};
use crate::ring::Ring;
use crate::witt::{WittError, WittVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("level {level} is outside the tower (depth {depth})")]
    Level { level: usize, depth: usize },
    #[error("the additive order probe needs rank 1, got {0}")]
    NotCyclic(usize),
    #[error("additive order exceeds {0}")]
    OrderTooLarge(u64),
    #[error("tower element has {got} levels, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Witt(#[from] WittError),
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The groups `(Z/p^j)^n` with their edge maps.
#[derive(Clone, Debug)]
pub struct QuotientTower {
    n: usize,
    p: u64,
    depth: usize,
    levels: Vec<Arc<ConjClassTable>>,
    projections: Vec<QuotientMap>,
    embeddings: Vec<SubgroupEmbedding>,
}

/// Digits of element `idx` of `(Z/q)^n` (first coordinate most significant).
fn digits(mut idx: usize, q: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for d in out.iter_mut().rev() {
        *d = idx % q;
        idx /= q;
    }
    out
}

fn index(ds: &[usize], q: usize) -> usize {
    ds.iter().fold(0, |acc, &d| acc * q + d)
}

impl QuotientTower {
    /// Builds levels `0..=depth`, computing the class tables concurrently.
    /// `cap` bounds the order of the top level.
    pub fn build(n: usize, p: u64, depth: usize, cap: usize) -> Result<QuotientTower, TowerError> {
        if !is_prime(p) {
            return Err(TowerError::NotPrime(p));
        }
        if n == 0 {
            return Err(TowerError::ZeroRank);
        }
        let top = (p as u128).checked_pow((n * depth) as u32).unwrap_or(u128::MAX);
        if top > cap as u128 {
            return Err(GroupError::OrderExceedsCap {
                order: top.min(u64::MAX as u128) as u64,
                cap,
            }
            .into());
        }
        let groups = (0..=depth)
            .map(|j| FiniteGroup::build_with_cap(&GroupDescriptor::Abelian(vec![p.pow(j as u32); n]), cap))
            .collect::<Result<Vec<_>, _>>()?;
        let levels: Vec<Arc<ConjClassTable>> = std::thread::scope(|s| {
            let handles: Vec<_> = groups
                .into_iter()
                .map(|g| s.spawn(move || Arc::new(ConjClassTable::new(g))))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("class table thread"))
                .collect()
        });
        let mut projections = Vec::with_capacity(depth);
        let mut embeddings = Vec::with_capacity(depth);
        for j in 0..depth {
            let (lo, hi) = (p.pow(j as u32) as usize, p.pow(j as u32 + 1) as usize);
            let proj = (0..levels[j + 1].group().order())
                .map(|x| index(&digits(x, hi, n).iter().map(|d| d % lo).collect::<Vec<_>>(), lo))
                .collect();
            projections.push(QuotientMap::from_projection(
                levels[j + 1].clone(),
                levels[j].clone(),
                proj,
            )?);
            let emb = (0..levels[j].group().order())
                .map(|x| index(&digits(x, lo, n).iter().map(|d| d * p as usize).collect::<Vec<_>>(), hi))
                .collect();
            embeddings.push(SubgroupEmbedding::new(levels[j + 1].clone(), levels[j].clone(), emb)?);
        }
        Ok(QuotientTower {
            n,
            p,
            depth,
            levels,
            projections,
            embeddings,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn level(&self, j: usize) -> Result<&Arc<ConjClassTable>, TowerError> {
        self.levels.get(j).ok_or(TowerError::Level {
            level: j,
            depth: self.depth,
        })
    }

    pub fn levels(&self) -> &[Arc<ConjClassTable>] {
        &self.levels
    }

    /// Reduction `(Z/p^(j+1))^n -> (Z/p^j)^n`.
    pub fn projection(&self, j: usize) -> Result<&QuotientMap, TowerError> {
        self.projections.get(j).ok_or(TowerError::Level {
            level: j,
            depth: self.depth,
        })
    }

    /// `a -> p a` from `(Z/p^j)^n` into `(Z/p^(j+1))^n`.
    pub fn embedding(&self, j: usize) -> Result<&SubgroupEmbedding, TowerError> {
        self.embeddings.get(j).ok_or(TowerError::Level {
            level: j,
            depth: self.depth,
        })
    }

    /// `R`: level `j+1` to level `j`.
    pub fn r_step(&self, j: usize, x: &WittVector) -> Result<WittVector, TowerError> {
        Ok(x.restriction(self.projection(j)?)?)
    }

    /// `F`: level `j+1` to level `j`, Frobenius to the subgroup `p (Z/p^(j+1))^n`
    /// read through its isomorphism with `(Z/p^j)^n`.
    pub fn f_step(&self, j: usize, x: &WittVector) -> Result<WittVector, TowerError> {
        Ok(x.frobenius(self.embedding(j)?)?)
    }

    /// The two routes from level `j+2` to level `j` around the F/R square:
    /// `(R F x, F R x)`.
    pub fn square(&self, j: usize, x: &WittVector) -> Result<(WittVector, WittVector), TowerError> {
        let rf = self.r_step(j, &self.f_step(j + 1, x)?)?;
        let fr = self.f_step(j, &self.r_step(j + 1, x)?)?;
        Ok((rf, fr))
    }

    /// Checks `R(vectors[j+1]) == vectors[j]` for every `j`.
    pub fn check_element(&self, e: &TowerElement) -> Result<TowerReport, TowerError> {
        if e.vectors.len() != self.depth + 1 {
            return Err(TowerError::Shape {
                got: e.vectors.len(),
                expected: self.depth + 1,
            });
        }
        let mut steps = Vec::with_capacity(self.depth);
        for j in 0..self.depth {
            let ok = match self.r_step(j, &e.vectors[j + 1]) {
                Ok(r) => r == e.vectors[j],
                Err(TowerError::Witt(WittError::Incompatible(_))) => false,
                Err(other) => return Err(other),
            };
            steps.push(ok);
        }
        Ok(TowerReport {
            first_failure: steps.iter().position(|ok| !ok),
            steps,
        })
    }

    /// Additive order of the unit in `W_{C_{p^j}}(ring)`, found by repeated
    /// addition. For `ring = Z/p` this is `p^(j+1)`.
    pub fn additive_order_probe(&self, ring: &Ring, j: usize) -> Result<u64, TowerError> {
        const LIMIT: u64 = 1 << 20;
        if self.n != 1 {
            return Err(TowerError::NotCyclic(self.n));
        }
        let t = self.level(j)?.clone();
        let family = crate::group::ClosedFamily::all(&t);
        let one = WittVector::one(t.clone(), family.clone(), ring.clone());
        let zero = WittVector::zero(t, family, ring.clone());
        let mut acc = one.clone();
        let mut k = 1;
        while acc != zero {
            if k >= LIMIT {
                return Err(TowerError::OrderTooLarge(LIMIT));
            }
            acc = acc.try_add(&one)?;
            k += 1;
        }
        Ok(k)
    }

    /// Level `j` unit vectors; a compatible family.
    pub fn one(&self, ring: &Ring) -> TowerElement {
        let vectors = self
            .levels
            .iter()
            .map(|t| WittVector::one(t.clone(), crate::group::ClosedFamily::all(t), ring.clone()))
            .collect();
        TowerElement {
            ring: ring.clone(),
            vectors,
        }
    }
}

/// One Witt vector per level of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElement {
    pub ring: Ring,
    pub vectors: Vec<WittVector>,
}

impl TowerElement {
    pub fn new(vectors: Vec<WittVector>) -> Result<TowerElement, TowerError> {
        let ring = vectors
            .first()
            .map(|v| v.ring().clone())
            .ok_or(TowerError::Shape { got: 0, expected: 1 })?;
        if vectors.iter().any(|v| v.ring() != &ring) {
            return Err(WittError::Incompatible("levels over different rings".into()).into());
        }
        Ok(TowerElement { ring, vectors })
    }

    /// An array of Witt vector documents, lowest level first.
    pub fn to_json(&self) -> Value {
        Value::Array(self.vectors.iter().map(WittVector::to_json).collect())
    }

    pub fn from_json(v: &Value, cap: usize) -> Result<TowerElement, TowerError> {
        let items = v
            .as_array()
            .ok_or_else(|| WittError::Document("a tower element is an array of Witt vectors".into()))?;
        let vectors = items
            .iter()
            .map(|d| WittVector::from_json_with_cap(d, cap))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vectors)
    }
}

/// Result of [`QuotientTower::check_element`]; `steps[j]` is whether
/// `R(level j+1) == level j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub steps: Vec<bool>,
    pub first_failure: Option<usize>,
}

impl TowerReport {
    pub fn compatible(&self) -> bool {
        self.first_failure.is_none()
    }
}
