//! Exact coefficient rings: integers, rationals, and graded polynomial rings
//! in generators b1, b2, ... with deg(b_i) = i, optionally quotiented by
//! per-generator nilpotency caps.
//!
//! Every element is stored as a sparse polynomial with arbitrary-precision
//! rational coefficients; rings declared integral enforce denominator 1 at
//! their boundaries. Monomials are kept in graded-lex order, graded by the
//! weight sum(i * e_i).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("value does not lie in the integral ring: {0}")]
    NotIntegral(String),
    #[error("incompatible coefficient rings: {0}")]
    Incompatible(String),
}

/// Ring descriptor. Generators of `GradedPoly` are named b1..b_gens and
/// carry degree i; `caps[i]` bounds the exponent of b_{i+1}, turning the
/// ring into a quotient with nilpotent generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Rationals,
    GradedPoly {
        gens: usize,
        integral: bool,
        caps: Option<Vec<u32>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRing {
    kind: RingKind,
}

impl CoeffRing {
    pub fn integers() -> Self {
        CoeffRing {
            kind: RingKind::Integers,
        }
    }

    pub fn rationals() -> Self {
        CoeffRing {
            kind: RingKind::Rationals,
        }
    }

    /// Z[b1..b_gens] with deg(b_i) = i.
    pub fn graded_int_poly(gens: usize) -> Self {
        CoeffRing {
            kind: RingKind::GradedPoly {
                gens,
                integral: true,
                caps: None,
            },
        }
    }

    /// Q[b1..b_gens], used internally for logarithm computations.
    pub fn graded_rat_poly(gens: usize) -> Self {
        CoeffRing {
            kind: RingKind::GradedPoly {
                gens,
                integral: false,
                caps: None,
            },
        }
    }

    /// Z[b1..b_gens] / (b_i^(caps_i + 1)), a ring with nilpotents.
    pub fn quotient(gens: usize, caps: Vec<u32>) -> Self {
        assert_eq!(caps.len(), gens, "one cap per generator");
        CoeffRing {
            kind: RingKind::GradedPoly {
                gens,
                integral: true,
                caps: Some(caps),
            },
        }
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn gens(&self) -> usize {
        match &self.kind {
            RingKind::GradedPoly { gens, .. } => *gens,
            _ => 0,
        }
    }

    pub fn is_integral(&self) -> bool {
        match &self.kind {
            RingKind::Integers => true,
            RingKind::Rationals => false,
            RingKind::GradedPoly { integral, .. } => *integral,
        }
    }

    fn caps(&self) -> Option<&[u32]> {
        match &self.kind {
            RingKind::GradedPoly { caps, .. } => caps.as_deref(),
            _ => None,
        }
    }

    /// Same ring with denominators allowed; identity for rational rings.
    pub fn rationalized(&self) -> CoeffRing {
        match &self.kind {
            RingKind::Integers => CoeffRing::rationals(),
            RingKind::Rationals => self.clone(),
            RingKind::GradedPoly { gens, caps, .. } => CoeffRing {
                kind: RingKind::GradedPoly {
                    gens: *gens,
                    integral: false,
                    caps: caps.clone(),
                },
            },
        }
    }

    fn mono_width(&self) -> usize {
        self.gens()
    }

    pub fn zero(&self) -> Coeff {
        Coeff {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
            .expect("integers embed in every ring")
    }

    /// Embed a rational scalar, rejecting denominators in integral rings.
    pub fn from_rational(&self, q: BigRational) -> Result<Coeff, CoeffError> {
        if q.is_zero() {
            return Ok(self.zero());
        }
        if self.is_integral() && !q.denom().is_one() {
            return Err(CoeffError::NotIntegral(q.to_string()));
        }
        let mut terms = BTreeMap::new();
        terms.insert(BMono::unit(self.mono_width()), q);
        Ok(Coeff { terms })
    }

    /// The generator b_i (1-based).
    pub fn gen(&self, i: usize) -> Coeff {
        assert!(i >= 1 && i <= self.gens(), "generator b{i} out of range");
        let mut exps = vec![0u16; self.mono_width()];
        exps[i - 1] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(BMono(exps.into_boxed_slice()), BigRational::one());
        Coeff { terms }
    }

    fn normalize(&self, mut terms: BTreeMap<BMono, BigRational>) -> Coeff {
        if let Some(caps) = self.caps() {
            terms.retain(|m, _| m.0.iter().zip(caps).all(|(&e, &c)| u32::from(e) <= c));
        }
        terms.retain(|_, q| !q.is_zero());
        Coeff { terms }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        let mut terms = a.terms.clone();
        for (m, q) in &b.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += q;
        }
        self.normalize(terms)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        Coeff {
            terms: a.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        let mut terms: BTreeMap<BMono, BigRational> = BTreeMap::new();
        for (ma, qa) in &a.terms {
            for (mb, qb) in &b.terms {
                let m = ma.mul(mb);
                if let Some(caps) = self.caps() {
                    if m.0.iter().zip(caps).any(|(&e, &c)| u32::from(e) > c) {
                        continue;
                    }
                }
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += qa * qb;
            }
        }
        terms.retain(|_, q| !q.is_zero());
        Coeff { terms }
    }

    pub fn scale(&self, a: &Coeff, q: &BigRational) -> Coeff {
        if q.is_zero() {
            return self.zero();
        }
        Coeff {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Units: in Z only +-1, in Q every nonzero scalar, in a polynomial ring
    /// constants that are units in the base, and in a nilpotent quotient any
    /// element whose constant part is a unit.
    pub fn is_unit(&self, a: &Coeff) -> bool {
        let c = a.constant_part();
        let const_ok = match &self.kind {
            RingKind::Integers => c.numer().abs().is_one() && c.denom().is_one(),
            RingKind::Rationals => !c.is_zero(),
            RingKind::GradedPoly { integral, .. } => {
                if *integral {
                    c.numer().abs().is_one() && c.denom().is_one()
                } else {
                    !c.is_zero()
                }
            }
        };
        if !const_ok {
            return false;
        }
        // nonconstant part must be nilpotent, which needs caps
        a.is_constant() || self.caps().is_some()
    }

    pub fn invert(&self, a: &Coeff) -> Result<Coeff, CoeffError> {
        if !self.is_unit(a) {
            return Err(CoeffError::NotAUnit(a.to_string()));
        }
        let c = a.constant_part();
        let c_inv = c.recip();
        if a.is_constant() {
            return self.from_rational(c_inv);
        }
        // (c + n)^-1 = c^-1 * sum_k (-c^-1 n)^k, finite since n is nilpotent
        let c_elem = self
            .from_rational(c.clone())
            .expect("constant part lies in the ring");
        let n = self.sub(a, &c_elem);
        let step = self.scale(&self.neg(&n), &c_inv);
        let mut sum = self.one();
        let mut pow = self.one();
        loop {
            pow = self.mul(&pow, &step);
            if pow.is_zero() {
                break;
            }
            sum = self.add(&sum, &pow);
        }
        Ok(self.scale(&sum, &c_inv))
    }

    /// Evaluate the generators at the given images over the target ring.
    /// Arithmetic happens in the rationalized target; callers cast back.
    pub fn eval(&self, a: &Coeff, images: &[Coeff], target: &CoeffRing) -> Coeff {
        let work = target.rationalized();
        let mut acc = work.zero();
        for (m, q) in &a.terms {
            let mut term = work.from_rational(q.clone()).expect("rational ring");
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = work.mul(&term, &images[i]);
                }
            }
            acc = work.add(&acc, &term);
        }
        acc
    }

    /// Reinterpret an element of `source` in this ring. Requires the same
    /// generator count; going to an integral ring checks denominators.
    pub fn cast(&self, a: &Coeff, source: &CoeffRing) -> Result<Coeff, CoeffError> {
        if self.gens() != source.gens() {
            return Err(CoeffError::Incompatible(format!(
                "{} vs {} generators",
                source.gens(),
                self.gens()
            )));
        }
        if self.is_integral() && !a.is_integral() {
            return Err(CoeffError::NotIntegral(a.to_string()));
        }
        Ok(self.normalize(a.terms.clone()))
    }
}

/// Monomial in the b-generators. Ordered by weight, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMono(Box<[u16]>);

impl BMono {
    fn unit(width: usize) -> Self {
        BMono(vec![0u16; width].into_boxed_slice())
    }

    fn mul(&self, other: &BMono) -> BMono {
        BMono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn weight(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u64 + 1) * u64::from(e))
            .sum()
    }

    pub fn is_unit_mono(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for BMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A ring element: sparse polynomial in the b-generators (a bare scalar when
/// the ring has none). Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff {
    terms: BTreeMap<BMono, BigRational>,
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, q)| m.is_unit_mono() && q.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit_mono())
    }

    /// Image under killing all generators.
    pub fn constant_part(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(m, _)| m.is_unit_mono())
            .map(|(_, q)| q.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return Some(self.constant_part());
        }
        None
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|q| q.denom().is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BMono, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// All b-weights occurring in this element.
    pub fn weights(&self) -> Vec<u64> {
        let mut ws: Vec<u64> = self.terms.keys().map(|m| m.weight()).collect();
        ws.dedup();
        ws
    }
}

pub(crate) fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn mono_string(m: &BMono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 1 {
            parts.push(format!("b{}", i + 1));
        } else if e > 1 {
            parts.push(format!("b{}^{}", i + 1, e));
        }
    }
    parts.join("*")
}

impl fmt::Display for Coeff {
    /// Canonical form: terms in graded-lex order, explicit signs, rational
    /// scalars as `n` or `n/d`, e.g. `1 - 2*b1 + 3/2*b2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, q) in &self.terms {
            let neg = q.is_negative();
            let mag = if neg { -q } else { q.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ms = mono_string(m);
            if ms.is_empty() {
                write!(f, "{}", rational_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{ms}")?;
            } else {
                write!(f, "{}*{}", rational_string(&mag), ms)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_ring_arithmetic_is_exact() {
        let r = CoeffRing::integers();
        let two = r.from_i64(2);
        let three = r.from_i64(3);
        assert_eq!(r.add(&two, &three), r.from_i64(5));
        assert_eq!(r.mul(&two, &three), r.from_i64(6));
        assert_eq!(r.sub(&two, &three), r.from_i64(-1));
    }

    #[test]
    fn integer_units_are_plus_minus_one() {
        let r = CoeffRing::integers();
        assert!(r.is_unit(&r.from_i64(1)));
        assert!(r.is_unit(&r.from_i64(-1)));
        assert!(!r.is_unit(&r.from_i64(2)));
        assert!(matches!(
            r.invert(&r.from_i64(2)),
            Err(CoeffError::NotAUnit(_))
        ));
    }

    #[test]
    fn rationals_invert_everything_nonzero() {
        let r = CoeffRing::rationals();
        let x = r.from_rational(q(3, 7)).unwrap();
        let inv = r.invert(&x).unwrap();
        assert!(r.mul(&x, &inv).is_one());
    }

    #[test]
    fn integral_ring_rejects_denominators() {
        let r = CoeffRing::integers();
        assert!(r.from_rational(q(1, 2)).is_err());
    }

    #[test]
    fn poly_grading_weights() {
        let r = CoeffRing::graded_int_poly(3);
        let b1 = r.gen(1);
        let b3 = r.gen(3);
        let prod = r.mul(&r.mul(&b1, &b1), &b3);
        assert_eq!(prod.weights(), vec![5]);
    }

    #[test]
    fn quotient_ring_kills_capped_powers() {
        let r = CoeffRing::quotient(2, vec![1, 2]);
        let b1 = r.gen(1);
        assert!(r.mul(&b1, &b1).is_zero());
        let b2 = r.gen(2);
        let b2sq = r.mul(&b2, &b2);
        assert!(!b2sq.is_zero());
        assert!(r.mul(&b2sq, &b2).is_zero());
    }

    #[test]
    fn quotient_unit_inversion_by_geometric_series() {
        let r = CoeffRing::quotient(2, vec![2, 2]);
        // 1 + b1 is a unit because b1 is nilpotent
        let u = r.add(&r.one(), &r.gen(1));
        let inv = r.invert(&u).unwrap();
        assert!(r.mul(&u, &inv).is_one());
        // not a unit in the plain polynomial ring
        let poly = CoeffRing::graded_int_poly(2);
        let v = poly.add(&poly.one(), &poly.gen(1));
        assert!(!poly.is_unit(&v));
    }

    #[test]
    fn display_is_canonical() {
        let r = CoeffRing::graded_rat_poly(2);
        let e = r.add(
            &r.sub(&r.one(), &r.scale(&r.gen(1), &q(2, 1))),
            &r.scale(&r.mul(&r.gen(2), &r.gen(2)), &q(3, 2)),
        );
        assert_eq!(e.to_string(), "1 - 2*b1 + 3/2*b2^2");
    }
}
