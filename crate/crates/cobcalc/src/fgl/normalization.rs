//! Point-bundle normalization tables: the class of the projective space P^n
//! in a theory's coefficient ring, consistent with the law's logarithm via
//! l(x) = sum_n [P^n] x^(n+1) / (n+1).

use super::FormalGroupLaw;
use crate::check::CheckOutcome;
use crate::ring::{Coeff, CoeffRing, ExpVec};
use num_rational::BigRational;

/// Values n -> [P^n]. For the universal model [P^n] = (n+1) b_n, for the
/// multiplicative theory every [P^n] = 1, for the additive theory only
/// [P^0] = 1 survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointBundleTable {
    Additive,
    Multiplicative,
    Universal,
    Custom(Vec<Coeff>),
}

impl PointBundleTable {
    /// The class of P^n in `ring`.
    pub fn value(&self, n: usize, ring: &CoeffRing) -> Coeff {
        match self {
            PointBundleTable::Additive => {
                if n == 0 {
                    ring.one()
                } else {
                    ring.zero()
                }
            }
            PointBundleTable::Multiplicative => ring.one(),
            PointBundleTable::Universal => {
                if n == 0 {
                    ring.one()
                } else if n <= ring.gens() {
                    ring.scale(
                        &ring.gen(n),
                        &BigRational::from_integer((n as i64 + 1).into()),
                    )
                } else {
                    ring.zero()
                }
            }
            PointBundleTable::Custom(values) => {
                values.get(n).cloned().unwrap_or_else(|| ring.zero())
            }
        }
    }

    /// Check sum_n [P^n] x^(n+1)/(n+1) against the law's logarithm.
    pub fn consistent_with_log(&self, law: &FormalGroupLaw) -> CheckOutcome {
        let log = match law.logarithm() {
            Ok(l) => l,
            Err(e) => return CheckOutcome::fail("normalization_consistency", e.to_string()),
        };
        let rat = log.ring().clone();
        let mut series = log.empty_like();
        let precision = log.precision();
        for n in 0..precision as usize {
            let v = self.value(n, law.ring());
            let v_rat = match rat.cast(&v, law.ring()) {
                Ok(v) => v,
                Err(e) => return CheckOutcome::fail("normalization_consistency", e.to_string()),
            };
            let scaled = rat.scale(
                &v_rat,
                &BigRational::new(1.into(), (n as i64 + 1).into()),
            );
            series.insert_term(ExpVec::from_exps(vec![n as u32 + 1]), scaled);
        }
        CheckOutcome::from_comparison("normalization_consistency", &series.compare(&log))
    }
}
