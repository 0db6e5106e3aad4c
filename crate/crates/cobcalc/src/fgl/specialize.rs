//! Specialization homomorphisms out of the Lazard model.
//!
//! The classifying map for a target law sends each universal coefficient
//! a_ij to the corresponding coefficient of the target. On the polynomial
//! model it is realized by sending b_i to the coefficient of x^(i+1) in the
//! target's logarithm; applied to any series whose coefficients lie in the
//! subring generated by the a_ij, the values land back in the target ring.

use super::{FglError, FormalGroupLaw, LazardModel};
use crate::ring::{Coeff, CoeffError, CoeffRing, Series, SeriesError};
use crate::ring::ExpVec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecializeError {
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("image does not lie in the target ring at {monomial}: {value}")]
    LeavesTargetRing { monomial: String, value: String },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Ring homomorphism from the Lazard model's coefficient ring to a target
/// law's ring, determined by the images of the b-generators.
#[derive(Clone, Debug)]
pub struct SpecializationMap {
    images: Vec<Coeff>,
    source: CoeffRing,
    target: CoeffRing,
}

impl SpecializationMap {
    pub fn images(&self) -> &[Coeff] {
        &self.images
    }

    pub fn target(&self) -> &CoeffRing {
        &self.target
    }

    /// Image of a single coefficient.
    pub fn apply_coeff(&self, c: &Coeff) -> Result<Coeff, SpecializeError> {
        let value = self.source.eval(c, &self.images, &self.target);
        self.target
            .cast(&value, &self.target.rationalized())
            .map_err(|_| SpecializeError::LeavesTargetRing {
                monomial: c.to_string(),
                value: value.to_string(),
            })
    }

    /// Apply coefficientwise to a series, keeping variables and precision.
    pub fn apply(&self, s: &Series) -> Result<Series, SpecializeError> {
        let mut out = Series::zero_with_caps(
            self.target.clone(),
            s.vars().clone(),
            s.precision(),
            s.caps().to_vec(),
        );
        for (e, c) in s.terms() {
            let image = self.apply_coeff(c).map_err(|err| match err {
                SpecializeError::LeavesTargetRing { value, .. } => {
                    SpecializeError::LeavesTargetRing {
                        monomial: s.monomial_string(e),
                        value,
                    }
                }
                other => other,
            })?;
            out.insert_term(e.clone(), image);
        }
        Ok(out)
    }
}

/// The classifying map from the Lazard model onto the target law, sending
/// each a_ij read off the universal F to the target's coefficient.
pub fn specialize_a(
    model: &LazardModel,
    target: &FormalGroupLaw,
) -> Result<SpecializationMap, SpecializeError> {
    if target.precision() < model.degree() {
        return Err(FglError::PrecisionTooLow {
            target: target.precision(),
            model: model.degree(),
        }
        .into());
    }
    let log = target.logarithm()?;
    let work = target.ring().rationalized();
    let gens = model.law().ring().gens();
    let mut images = Vec::with_capacity(gens);
    for i in 1..=gens {
        let c = log.coefficient(&ExpVec::from_exps(vec![i as u32 + 1]));
        images.push(work.cast(&c, log.ring())?);
    }
    Ok(SpecializationMap {
        images,
        source: model.law().ring().clone(),
        target: target.ring().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::universal_fgl;
    use crate::ring::CoeffRing;

    #[test]
    fn additive_target_kills_every_generator() {
        let model = universal_fgl(5).unwrap();
        let target = FormalGroupLaw::additive(CoeffRing::integers(), 5);
        let map = specialize_a(&model, &target).unwrap();
        for img in map.images() {
            assert!(img.is_zero());
        }
    }

    #[test]
    fn multiplicative_target_sends_a11_to_minus_one() {
        let model = universal_fgl(5).unwrap();
        let target = FormalGroupLaw::multiplicative(5);
        let map = specialize_a(&model, &target).unwrap();
        // a11 = -2 b1 maps to the xy-coefficient of x + y - xy
        let a11 = model.law().coefficient(1, 1);
        let image = map.apply_coeff(&a11).unwrap();
        assert_eq!(image, target.ring().from_i64(-1));
        // every other a_ij maps to zero
        for i in 1..=4u32 {
            for j in 1..=4u32 {
                if (i, j) == (1, 1) {
                    continue;
                }
                let a = model.law().coefficient(i, j);
                assert!(map.apply_coeff(&a).unwrap().is_zero(), "a_{i}{j}");
            }
        }
    }

    #[test]
    fn universal_target_is_identity_on_generators() {
        let model = universal_fgl(4).unwrap();
        let map = specialize_a(&model, model.law()).unwrap();
        let ring = model.law().ring();
        for (i, img) in map.images().iter().enumerate() {
            assert_eq!(img, &ring.gen(i + 1));
        }
    }

    #[test]
    fn specialization_reproduces_target_law() {
        let model = universal_fgl(6).unwrap();
        for target in [
            FormalGroupLaw::additive(CoeffRing::integers(), 6),
            FormalGroupLaw::multiplicative(6),
        ] {
            let map = specialize_a(&model, &target).unwrap();
            let image = map.apply(model.law().f()).unwrap();
            assert!(image.compare(target.f()).agrees());
        }
    }

    #[test]
    fn precision_guard() {
        let model = universal_fgl(6).unwrap();
        let target = FormalGroupLaw::multiplicative(4);
        assert!(matches!(
            specialize_a(&model, &target),
            Err(SpecializeError::Fgl(FglError::PrecisionTooLow { .. }))
        ));
    }
}
