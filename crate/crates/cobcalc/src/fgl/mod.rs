//! Formal group laws: validated bivariate series, formal inverses, n-series
//! and formal sums, the universal law over the Lazard model, and
//! specialization homomorphisms.

mod lazard;
mod normalization;
mod specialize;

pub use lazard::{universal_fgl, LazardModel};
pub use normalization::PointBundleTable;
pub use specialize::{specialize_a, SpecializationMap, SpecializeError};

use crate::check::Comparison;
use crate::ring::{Coeff, CoeffRing, ExpVec, Series, SeriesError, Vars};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FglError {
    #[error("formal group law axiom {axiom} fails at degree {degree}: {witness}")]
    AxiomViolation {
        axiom: &'static str,
        degree: u32,
        witness: String,
    },
    #[error("law must be a series in two variables")]
    NotBivariate,
    #[error("formal sum argument has nonzero constant term {0}")]
    NonNilpotentArgument(String),
    #[error("coefficients are not integral: {0}")]
    IntegralityFailure(String),
    #[error("target law precision {target} is below the model precision {model}")]
    PrecisionTooLow { target: u32, model: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Named laws selectable on the command line. `Universal` carries the degree
/// the model was requested at; contexts may realize it at a higher working
/// precision when exactness demands it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    Additive,
    Multiplicative,
    Universal(u32),
}

impl LawKind {
    pub fn label(&self) -> String {
        match self {
            LawKind::Additive => "add".into(),
            LawKind::Multiplicative => "mult".into(),
            LawKind::Universal(d) => format!("univ({d})"),
        }
    }

    /// Realize the law at working precision at least `precision`.
    pub fn realize(&self, precision: u32) -> Result<FormalGroupLaw, FglError> {
        match self {
            LawKind::Additive => Ok(FormalGroupLaw::additive(CoeffRing::integers(), precision)),
            LawKind::Multiplicative => Ok(FormalGroupLaw::multiplicative(precision)),
            LawKind::Universal(d) => Ok(universal_fgl((*d).max(precision))?.law().clone()),
        }
    }
}

/// A validated formal group law F(x, y) together with its formal inverse and
/// a cache of n-series. Immutable after construction; the cache is guarded,
/// so values are safe to share across threads.
#[derive(Debug)]
pub struct FormalGroupLaw {
    f: Series,
    inverse: Series,
    nseries: Mutex<BTreeMap<i64, Series>>,
}

impl Clone for FormalGroupLaw {
    fn clone(&self) -> Self {
        FormalGroupLaw {
            f: self.f.clone(),
            inverse: self.inverse.clone(),
            nseries: Mutex::new(self.nseries.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for FormalGroupLaw {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl FormalGroupLaw {
    /// Validate the axioms and solve for the formal inverse. Axioms are
    /// checked eagerly so that every downstream module may assume a lawful F;
    /// the first failing axiom and degree are reported.
    pub fn from_series(f: Series) -> Result<FormalGroupLaw, FglError> {
        if f.vars().len() != 2 {
            return Err(FglError::NotBivariate);
        }
        let x_name = f.vars().names()[0].clone();
        let y_name = f.vars().names()[1].clone();
        let x = f.var(&x_name)?;
        let y = f.var(&y_name)?;
        let zero = f.empty_like();

        // unitality: F(x, 0) = x and F(0, y) = y
        let fx0 = f.substitute(&assignment(&x_name, &x, &y_name, &zero))?;
        if let Comparison::DifferAt {
            degree, monomial, ..
        } = fx0.compare(&x)
        {
            return Err(FglError::AxiomViolation {
                axiom: "unitality",
                degree,
                witness: format!("F(x,0) differs from x at {monomial}"),
            });
        }
        let f0y = f.substitute(&assignment(&x_name, &zero, &y_name, &y))?;
        if let Comparison::DifferAt {
            degree, monomial, ..
        } = f0y.compare(&y)
        {
            return Err(FglError::AxiomViolation {
                axiom: "unitality",
                degree,
                witness: format!("F(0,y) differs from y at {monomial}"),
            });
        }

        // commutativity: F(x, y) = F(y, x)
        let swapped = f.permute_vars(&[1, 0]);
        if let Comparison::DifferAt {
            degree, monomial, ..
        } = f.compare(&swapped)
        {
            return Err(FglError::AxiomViolation {
                axiom: "commutativity",
                degree,
                witness: format!("F(x,y) - F(y,x) is nonzero at {monomial}"),
            });
        }

        // associativity: F(F(x,y), z) = F(x, F(y,z)) in three variables
        let tri = Vars::new([x_name.as_str(), y_name.as_str(), "z__assoc"]);
        let tri_zero = Series::zero(f.ring().clone(), Arc::clone(&tri), f.precision());
        let xt = tri_zero.var(&x_name)?;
        let yt = tri_zero.var(&y_name)?;
        let zt = tri_zero.var("z__assoc")?;
        let f3 = |a: &Series, b: &Series| -> Result<Series, FglError> {
            Ok(f.substitute(&assignment(&x_name, a, &y_name, b))?)
        };
        let lhs = f3(&f3(&xt, &yt)?, &zt)?;
        let rhs = f3(&xt, &f3(&yt, &zt)?)?;
        if let Comparison::DifferAt {
            degree, monomial, ..
        } = lhs.compare(&rhs)
        {
            return Err(FglError::AxiomViolation {
                axiom: "associativity",
                degree,
                witness: format!("F(F(x,y),z) - F(x,F(y,z)) is nonzero at {monomial}"),
            });
        }

        let inverse = solve_inverse(&f)?;
        let law = FormalGroupLaw {
            f,
            inverse,
            nseries: Mutex::new(BTreeMap::new()),
        };
        // F(x, inv(x)) = 0 holds by construction of `inverse`; assert anyway
        // since every later module relies on it.
        let x_single = law.inverse.var(&x_name)?;
        let check = law.plus(&x_single, &law.inverse)?;
        if let Comparison::DifferAt {
            degree, monomial, ..
        } = check.compare(&law.inverse.empty_like())
        {
            return Err(FglError::AxiomViolation {
                axiom: "inverse",
                degree,
                witness: format!("F(x, inv(x)) is nonzero at {monomial}"),
            });
        }
        Ok(law)
    }

    /// x + y over the given ring.
    pub fn additive(ring: CoeffRing, precision: u32) -> FormalGroupLaw {
        let vars = Vars::new(["x", "y"]);
        let s = Series::zero(ring, vars, precision);
        let f = s.var("x").unwrap().add(&s.var("y").unwrap()).unwrap();
        FormalGroupLaw::from_series(f).expect("additive law is lawful")
    }

    /// x + y - xy over the integers.
    pub fn multiplicative(precision: u32) -> FormalGroupLaw {
        let vars = Vars::new(["x", "y"]);
        let s = Series::zero(CoeffRing::integers(), vars, precision);
        let x = s.var("x").unwrap();
        let y = s.var("y").unwrap();
        let f = x.add(&y).unwrap().sub(&x.mul(&y).unwrap()).unwrap();
        FormalGroupLaw::from_series(f).expect("multiplicative law is lawful")
    }

    pub fn f(&self) -> &Series {
        &self.f
    }

    /// The formal inverse series inv_F(x) with F(x, inv_F(x)) = 0.
    pub fn inverse(&self) -> &Series {
        &self.inverse
    }

    pub fn ring(&self) -> &CoeffRing {
        self.f.ring()
    }

    pub fn precision(&self) -> u32 {
        self.f.precision()
    }

    /// Coefficient a_ij of x^i y^j in F.
    pub fn coefficient(&self, i: u32, j: u32) -> Coeff {
        self.f.coefficient(&ExpVec::from_exps(vec![i, j]))
    }

    /// F(a, b) for series sharing a common variable set. Both arguments must
    /// have zero constant term.
    pub fn plus(&self, a: &Series, b: &Series) -> Result<Series, FglError> {
        if !a.constant_term().is_zero() {
            return Err(FglError::NonNilpotentArgument(
                a.constant_term().to_string(),
            ));
        }
        if !b.constant_term().is_zero() {
            return Err(FglError::NonNilpotentArgument(
                b.constant_term().to_string(),
            ));
        }
        let mut assign = BTreeMap::new();
        assign.insert(self.f.vars().names()[0].clone(), a.clone());
        assign.insert(self.f.vars().names()[1].clone(), b.clone());
        Ok(self.f.substitute(&assign)?)
    }

    /// inv_F applied to an arbitrary nilpotent series.
    pub fn inverse_of(&self, a: &Series) -> Result<Series, FglError> {
        if !a.constant_term().is_zero() {
            return Err(FglError::NonNilpotentArgument(
                a.constant_term().to_string(),
            ));
        }
        let mut assign = BTreeMap::new();
        assign.insert(self.inverse.vars().names()[0].clone(), a.clone());
        Ok(self.inverse.substitute(&assign)?)
    }

    /// Left fold of F over the parts; the empty sum is 0.
    pub fn formal_sum(&self, parts: &[Series]) -> Result<Series, FglError> {
        let mut iter = parts.iter();
        let first = match iter.next() {
            Some(p) => p,
            None => return Ok(self.inverse.empty_like()),
        };
        if !first.constant_term().is_zero() {
            return Err(FglError::NonNilpotentArgument(
                first.constant_term().to_string(),
            ));
        }
        let mut acc = first.clone();
        for part in iter {
            acc = self.plus(&acc, part)?;
        }
        Ok(acc)
    }

    /// The n-series [n]x: [0]x = 0, [n+1]x = F([n]x, x), negative n through
    /// the formal inverse. Results are cached.
    pub fn n_series(&self, n: i64) -> Series {
        if let Some(hit) = self.nseries.lock().unwrap().get(&n) {
            return hit.clone();
        }
        let x = self
            .inverse
            .var(&self.inverse.vars().names()[0])
            .expect("inverse variable exists");
        let result = if n == 0 {
            x.empty_like()
        } else if n > 0 {
            let prev = self.n_series(n - 1);
            self.plus(&prev, &x).expect("n-series stays nilpotent")
        } else {
            let pos = self.n_series(-n);
            let mut assign = BTreeMap::new();
            assign.insert(
                self.inverse.vars().names()[0].clone(),
                self.inverse.clone(),
            );
            pos.substitute(&assign).expect("inverse substitution")
        };
        self.nseries.lock().unwrap().insert(n, result.clone());
        result
    }

    /// The logarithm over the rationalized ring: the unique l(x) = x + ...
    /// with l(F(x,y)) = l(x) + l(y), computed from l'(x) = 1/(dF/dy)(x,0).
    pub fn logarithm(&self) -> Result<Series, FglError> {
        let ring = self.ring().rationalized();
        let f = self.f.cast_ring(&ring)?;
        // dF/dy at y = 0, a unit series in x
        let x_vars = Vars::new([f.vars().names()[0].as_str()]);
        let mut dfy0 = Series::zero(ring.clone(), Arc::clone(&x_vars), f.precision());
        for (e, c) in f.terms() {
            if e.exps()[1] == 1 {
                dfy0.insert_term(ExpVec::from_exps(vec![e.exps()[0]]), c.clone());
            }
        }
        let recip = dfy0.invert_unit()?;
        // integrate termwise
        let mut log = Series::zero(ring.clone(), x_vars, f.precision());
        for (e, c) in recip.terms() {
            let d = e.exps()[0];
            if d + 1 > log.precision() {
                continue;
            }
            let divided = ring.scale(
                c,
                &num_rational::BigRational::new(1.into(), (i64::from(d) + 1).into()),
            );
            log.insert_term(ExpVec::from_exps(vec![d + 1]), divided);
        }
        Ok(log)
    }
}

fn assignment(
    x_name: &str,
    x_val: &Series,
    y_name: &str,
    y_val: &Series,
) -> BTreeMap<String, Series> {
    let mut assign = BTreeMap::new();
    assign.insert(x_name.to_string(), x_val.clone());
    assign.insert(y_name.to_string(), y_val.clone());
    assign
}

/// Solve F(x, i(x)) = 0 degree by degree for the formal inverse.
fn solve_inverse(f: &Series) -> Result<Series, FglError> {
    let x_name = f.vars().names()[0].clone();
    let y_name = f.vars().names()[1].clone();
    let x_vars = Vars::new([x_name.as_str()]);
    let single = Series::zero(f.ring().clone(), x_vars, f.precision());
    let x = single.var(&x_name)?;
    let mut inv = x.neg();
    for d in 2..=f.precision() {
        let value = f.substitute(&assignment(&x_name, &x, &y_name, &inv))?;
        let err = value.coefficient(&ExpVec::from_exps(vec![d]));
        if err.is_zero() {
            continue;
        }
        // dF/dy has constant term 1, so the degree-d correction is -err
        let mut corr = single.empty_like();
        corr.insert_term(ExpVec::from_exps(vec![d]), f.ring().neg(&err));
        inv = inv.add(&corr)?;
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_law_inverse_is_negation() {
        let law = FormalGroupLaw::additive(CoeffRing::integers(), 6);
        let x = law.inverse().var("x").unwrap();
        assert_eq!(law.inverse(), &x.neg());
    }

    #[test]
    fn multiplicative_inverse_is_geometric() {
        // inv(x) = -x/(1-x) = -x - x^2 - x^3 - ...
        let law = FormalGroupLaw::multiplicative(5);
        let s = law.inverse().empty_like();
        let x = s.var("x").unwrap();
        let mut expected = s.empty_like();
        for d in 1..=5 {
            expected = expected.sub(&x.pow(d).unwrap()).unwrap();
        }
        assert_eq!(law.inverse(), &expected);
    }

    #[test]
    fn noncommutative_series_is_rejected_at_degree_3() {
        let vars = Vars::new(["x", "y"]);
        let s = Series::zero(CoeffRing::integers(), vars, 6);
        let x = s.var("x").unwrap();
        let y = s.var("y").unwrap();
        let f = x
            .add(&y)
            .unwrap()
            .add(&x.pow(2).unwrap().mul(&y).unwrap())
            .unwrap();
        match FormalGroupLaw::from_series(f) {
            Err(FglError::AxiomViolation { axiom, degree, .. }) => {
                assert_eq!(axiom, "commutativity");
                assert_eq!(degree, 3);
            }
            other => panic!("expected axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn nonassociative_series_is_rejected_at_degree_4() {
        // x + y + x^2 y^2 is commutative and unital but not associative
        let vars = Vars::new(["x", "y"]);
        let s = Series::zero(CoeffRing::integers(), vars, 6);
        let x = s.var("x").unwrap();
        let y = s.var("y").unwrap();
        let f = x
            .add(&y)
            .unwrap()
            .add(&x.pow(2).unwrap().mul(&y.pow(2).unwrap()).unwrap())
            .unwrap();
        match FormalGroupLaw::from_series(f) {
            Err(FglError::AxiomViolation { axiom, degree, .. }) => {
                assert_eq!(axiom, "associativity");
                assert_eq!(degree, 4);
            }
            other => panic!("expected axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn n_series_of_multiplicative_law() {
        let law = FormalGroupLaw::multiplicative(6);
        let s = law.inverse().empty_like();
        let x = s.var("x").unwrap();
        // [2]x = 2x - x^2
        let expected = x
            .mul_coeff(&s.ring().from_i64(2))
            .sub(&x.pow(2).unwrap())
            .unwrap();
        assert_eq!(law.n_series(2), expected);
        assert!(law.n_series(0).is_zero());
        assert_eq!(&law.n_series(-1), law.inverse());
    }

    #[test]
    fn formal_sum_folds_left() {
        let law = FormalGroupLaw::multiplicative(6);
        let s = law.inverse().empty_like();
        let x = s.var("x").unwrap();
        let two = law.formal_sum(&[x.clone(), x.clone()]).unwrap();
        assert_eq!(two, law.n_series(2));
        assert!(law.formal_sum(&[]).unwrap().is_zero());
    }

    #[test]
    fn formal_sum_rejects_units() {
        let law = FormalGroupLaw::additive(CoeffRing::integers(), 4);
        let s = law.inverse().empty_like();
        let one = s.scalar(1);
        assert!(matches!(
            law.formal_sum(&[one]),
            Err(FglError::NonNilpotentArgument(_))
        ));
    }

    #[test]
    fn multiplicative_logarithm_is_mercator_series() {
        let law = FormalGroupLaw::multiplicative(5);
        let log = law.logarithm().unwrap();
        // -log(1-x) = x + x^2/2 + x^3/3 + ...
        let ring = CoeffRing::rationals();
        let s = Series::zero(ring.clone(), Vars::new(["x"]), 5);
        let mut expected = s.empty_like();
        for d in 1..=5i64 {
            expected.insert_term(
                ExpVec::from_exps(vec![d as u32]),
                ring.from_rational(num_rational::BigRational::new(1.into(), d.into()))
                    .unwrap(),
            );
        }
        assert_eq!(log, expected);
    }

    #[test]
    fn n_series_additivity() {
        for law in [
            FormalGroupLaw::additive(CoeffRing::integers(), 6),
            FormalGroupLaw::multiplicative(6),
        ] {
            for m in -3i64..=3 {
                for n in -3i64..=3 {
                    let lhs = law.n_series(m + n);
                    let rhs = law.plus(&law.n_series(m), &law.n_series(n)).unwrap();
                    assert!(
                        lhs.compare(&rhs).agrees(),
                        "[{m}+{n}] mismatch: {}",
                        lhs.compare(&rhs)
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_is_an_involution() {
        let law = FormalGroupLaw::multiplicative(7);
        let twice = law.inverse_of(law.inverse()).unwrap();
        let x = law.inverse().var("x").unwrap();
        assert!(twice.compare(&x).agrees());
    }
}
