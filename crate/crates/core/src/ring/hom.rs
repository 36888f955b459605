use num_bigint::BigInt;

use super::{Element, Polynomial, Ring, RingError, Value_};

/// A ring homomorphism between two of the supported rings.
///
/// Maps out of the integers and between `Z/m -> Z/d` (with `d | m`) are
/// canonical; maps out of a polynomial ring are given by the images of the
/// variables. Variables without an image are only an error when an element
/// actually mentions them.
#[derive(Clone, Debug, PartialEq)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<Option<Element>>,
}

impl RingHom {
    /// The unique homomorphism when one exists without further data.
    pub fn canonical(source: &Ring, target: &Ring) -> Result<RingHom, RingError> {
        let fail = |reason: &str| RingError::NoHomomorphism {
            source_ring: source.to_string(),
            target: target.to_string(),
            reason: reason.to_string(),
        };
        match (source, target) {
            (Ring::Integers, _) => {}
            (Ring::IntegersMod(m), Ring::IntegersMod(d)) if m % d == 0 => {}
            (Ring::IntegersMod(_), _) => return Err(fail("target characteristic must divide the modulus")),
            (Ring::Polynomial(_), _) if source == target => {
                let images = (0..source.variables().len()).map(|i| Some(source.var_at(i))).collect();
                return Ok(RingHom {
                    source: source.clone(),
                    target: target.clone(),
                    images,
                });
            }
            (Ring::Polynomial(_), _) => return Err(fail("variables need explicit images")),
        }
        Ok(RingHom {
            source: source.clone(),
            target: target.clone(),
            images: Vec::new(),
        })
    }

    /// Evaluation of a polynomial ring at the given variable images.
    pub fn evaluation<'a>(
        source: &Ring,
        target: &Ring,
        assignment: impl IntoIterator<Item = (&'a str, Element)>,
    ) -> Result<RingHom, RingError> {
        let vars = source.variables();
        if !matches!(source, Ring::Polynomial(_)) {
            return Err(RingError::NoHomomorphism {
                source_ring: source.to_string(),
                target: target.to_string(),
                reason: "evaluation needs a polynomial source".into(),
            });
        }
        let mut images = vec![None; vars.len()];
        for (name, value) in assignment {
            if value.ring() != target {
                return Err(RingError::Mismatch {
                    left: value.ring().to_string(),
                    right: target.to_string(),
                });
            }
            let idx = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| RingError::BadElement {
                    ring: source.to_string(),
                    reason: format!("no variable `{name}`"),
                })?;
            images[idx] = Some(value);
        }
        Ok(RingHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn apply(&self, a: &Element) -> Result<Element, RingError> {
        if a.ring() != &self.source {
            return Err(RingError::Mismatch {
                left: a.ring().to_string(),
                right: self.source.to_string(),
            });
        }
        match &a.value {
            Value_::Int(n) => Ok(self.target.from_int(n)),
            Value_::Residue(r) => Ok(self.target.from_int(&BigInt::from(*r))),
            Value_::Poly(p) => evaluate(p, &self.images, &self.target, self.source.variables()),
        }
    }
}

/// Evaluates `p` in `target`, reading variable `i` from `images[i]`.
pub(crate) fn evaluate(
    p: &Polynomial,
    images: &[Option<Element>],
    target: &Ring,
    names: &[String],
) -> Result<Element, RingError> {
    let mut acc = target.zero();
    for (m, c) in p.terms() {
        let mut term = target.from_int(c);
        for &(v, e) in m.powers() {
            let img = images.get(v as usize).and_then(Option::as_ref).ok_or_else(|| {
                RingError::UnassignedVariable(names.get(v as usize).cloned().unwrap_or_else(|| format!("#{v}")))
            })?;
            term = &term * &img.pow(e as u64);
        }
        acc = &acc + &term;
    }
    Ok(acc)
}
