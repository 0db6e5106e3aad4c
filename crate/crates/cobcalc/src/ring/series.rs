//! Sparse multivariate truncated power series.
//!
//! A `Series` stores finitely many (exponent vector, coefficient) pairs in
//! graded-lex order, together with an explicit total-degree precision N:
//! terms of total degree > N are not represented and are semantically
//! unknown. Optional per-variable exponent caps model nilpotent variables;
//! capped exponents are identically zero rather than unknown.
//!
//! Invariants:
//! - no stored zero coefficients,
//! - no stored term exceeds the precision or a cap,
//! - binary operations require identical variable sets and rings and
//!   truncate to the minimum of the operand precisions.

use super::coeff::{Coeff, CoeffError, CoeffRing};
use crate::check::Comparison;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable sets do not match: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("coefficient rings do not match")]
    RingMismatch,
    #[error("constant term is not a unit: {0}")]
    NotAUnit(String),
    #[error("substitution diverges: series with constant term {0} substituted for unbounded variable {1}")]
    DivergentSubstitution(String, String),
    #[error("compositional inverse needs lowest term exactly x: {0}")]
    BadLowestTerm(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("missing substitution for variable {0}")]
    MissingAssignment(String),
    #[error("expected a series in one variable")]
    NotUnivariate,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Ordered list of named indeterminates shared by a family of series.
#[derive(Debug, PartialEq, Eq)]
pub struct Vars(Vec<String>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Vars> {
        Arc::new(Vars(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

/// Exponent vector of a monomial, ordered graded-lex: by total degree, then
/// lexicographically on the exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpVec(Box<[u32]>);

impl ExpVec {
    pub fn zero(width: usize) -> Self {
        ExpVec(vec![0u32; width].into_boxed_slice())
    }

    pub fn unit(width: usize, var: usize) -> Self {
        let mut e = vec![0u32; width];
        e[var] = 1;
        ExpVec(e.into_boxed_slice())
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        ExpVec(exps.into_boxed_slice())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &ExpVec) -> ExpVec {
        ExpVec(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Variables with positive exponent, as a bitmask over positions.
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    ring: CoeffRing,
    vars: Arc<Vars>,
    precision: u32,
    caps: Arc<Vec<Option<u32>>>,
    terms: BTreeMap<ExpVec, Coeff>,
}

impl Series {
    pub fn zero(ring: CoeffRing, vars: Arc<Vars>, precision: u32) -> Series {
        let caps = Arc::new(vec![None; vars.len()]);
        Series {
            ring,
            vars,
            precision,
            caps,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_with_caps(
        ring: CoeffRing,
        vars: Arc<Vars>,
        precision: u32,
        caps: Vec<Option<u32>>,
    ) -> Series {
        assert_eq!(caps.len(), vars.len(), "one cap slot per variable");
        Series {
            ring,
            vars,
            precision,
            caps: Arc::new(caps),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: Coeff) -> Series {
        let mut s = self.empty_like();
        if !c.is_zero() {
            s.terms.insert(ExpVec::zero(self.vars.len()), c);
        }
        s
    }

    pub fn scalar(&self, n: i64) -> Series {
        self.constant(self.ring.from_i64(n))
    }

    pub fn var(&self, name: &str) -> Result<Series, SeriesError> {
        let idx = self
            .vars
            .index_of(name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.into()))?;
        let mut s = self.empty_like();
        s.insert_term(ExpVec::unit(self.vars.len(), idx), self.ring.one());
        Ok(s)
    }

    /// A fresh zero series sharing this one's ring, variables, precision and
    /// caps. Handy as a builder.
    pub fn empty_like(&self) -> Series {
        Series {
            ring: self.ring.clone(),
            vars: Arc::clone(&self.vars),
            precision: self.precision,
            caps: Arc::clone(&self.caps),
            terms: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn caps(&self) -> &[Option<u32>] {
        &self.caps
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Coeff)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &ExpVec) -> Coeff {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&ExpVec::zero(self.vars.len()))
    }

    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|e| e.total_degree())
    }

    fn admissible(&self, exps: &ExpVec) -> bool {
        if exps.total_degree() > self.precision {
            return false;
        }
        exps.exps()
            .iter()
            .zip(self.caps.iter())
            .all(|(&e, cap)| cap.map_or(true, |c| e <= c))
    }

    /// Add `c` at `exps`, dropping the slot if it cancels to zero or lies
    /// beyond precision or caps.
    pub fn insert_term(&mut self, exps: ExpVec, c: Coeff) {
        if c.is_zero() || !self.admissible(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.ring.add(o.get(), &c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Series) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VariableMismatch(
                self.vars.names().join(","),
                other.vars.names().join(","),
            ));
        }
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch);
        }
        Ok(())
    }

    fn merged_caps(&self, other: &Series) -> Arc<Vec<Option<u32>>> {
        if self.caps == other.caps {
            return Arc::clone(&self.caps);
        }
        Arc::new(
            self.caps
                .iter()
                .zip(other.caps.iter())
                .map(|(a, b)| match (a, b) {
                    (Some(x), Some(y)) => Some(*x.min(y)),
                    (Some(x), None) | (None, Some(x)) => Some(*x),
                    (None, None) => None,
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        let mut out = Series {
            ring: self.ring.clone(),
            vars: Arc::clone(&self.vars),
            precision: self.precision.min(other.precision),
            caps: self.merged_caps(other),
            terms: BTreeMap::new(),
        };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut out = self.empty_like();
        out.terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.ring.neg(c)))
            .collect();
        out
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        let mut out = Series {
            ring: self.ring.clone(),
            vars: Arc::clone(&self.vars),
            precision: self.precision.min(other.precision),
            caps: self.merged_caps(other),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &self.terms {
            let da = ea.total_degree();
            if da > out.precision {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + eb.total_degree() > out.precision {
                    continue;
                }
                let e = ea.mul(eb);
                if !out.admissible(&e) {
                    continue;
                }
                out.insert_term(e, self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn mul_coeff(&self, c: &Coeff) -> Series {
        let mut out = self.empty_like();
        for (e, a) in &self.terms {
            out.insert_term(e.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<Series, SeriesError> {
        let mut acc = self.empty_like().constant(self.ring.one());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn truncate(&self, precision: u32) -> Series {
        let mut out = self.clone();
        out.precision = precision.min(self.precision);
        out.terms.retain(|e, _| e.total_degree() <= out.precision);
        out
    }

    /// Raise the stated precision. Only sound when the caller knows that
    /// every term above the current precision is identically zero, as for
    /// elements of a fully capped ring that already admits all monomials.
    pub fn assume_precision(&self, precision: u32) -> Series {
        let mut out = self.clone();
        out.precision = out.precision.max(precision);
        out
    }

    /// Multiplicative inverse of a series whose constant term is a unit in
    /// the coefficient ring, by the geometric series on the maximal-ideal
    /// part. Exact to the stated precision.
    pub fn invert_unit(&self) -> Result<Series, SeriesError> {
        let c = self.constant_term();
        let c_inv = self
            .ring
            .invert(&c)
            .map_err(|_| SeriesError::NotAUnit(c.to_string()))?;
        // n = 1 - c_inv * self has zero constant term
        let one = self.empty_like().constant(self.ring.one());
        let n = one.sub(&self.mul_coeff(&c_inv))?;
        let mut sum = one.clone();
        let mut pow = one;
        loop {
            pow = pow.mul(&n)?;
            if pow.is_zero() {
                break;
            }
            sum = sum.add(&pow)?;
        }
        Ok(sum.mul_coeff(&c_inv))
    }

    /// Exact composition. Every variable of `self` must be assigned a series;
    /// the assigned series must share one variable set and ring with each
    /// other (and with `self`'s ring). A substituted series with nonzero
    /// constant term is only admitted for variables that `self` caps.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, Series>,
    ) -> Result<Series, SeriesError> {
        let mut values: Vec<&Series> = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let v = assignment
                .get(name)
                .ok_or_else(|| SeriesError::MissingAssignment(name.clone()))?;
            values.push(v);
        }
        let template = match values.first() {
            Some(t) => *t,
            // series in zero variables: nothing to substitute
            None => return Ok(self.clone()),
        };
        let mut precision = self.precision;
        for (idx, v) in values.iter().enumerate() {
            v.check_compatible(template)?;
            if v.ring != self.ring {
                return Err(SeriesError::RingMismatch);
            }
            precision = precision.min(v.precision);
            if !v.constant_term().is_zero() && self.caps[idx].is_none() {
                return Err(SeriesError::DivergentSubstitution(
                    v.constant_term().to_string(),
                    self.vars.names()[idx].clone(),
                ));
            }
        }
        let mut out = template.empty_like();
        out.precision = precision;
        // cache powers per variable
        let mut powers: Vec<Vec<Series>> = values
            .iter()
            .map(|v| vec![v.empty_like().constant(self.ring.one()), (*v).clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut term = out.empty_like().constant(c.clone());
            for (idx, &exp) in e.exps().iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let cache = &mut powers[idx];
                while cache.len() <= exp as usize {
                    let next = cache.last().unwrap().mul(values[idx])?;
                    cache.push(next);
                }
                term = term.mul(&cache[exp as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            for (te, tc) in term.terms {
                out.insert_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Compositional inverse of a single-variable series of the form
    /// x + higher order terms, solved degree by degree.
    pub fn compositional_inverse(&self) -> Result<Series, SeriesError> {
        if self.vars.len() != 1 {
            return Err(SeriesError::NotUnivariate);
        }
        let x = self.var(&self.vars.names()[0])?;
        let lowest_ok = self.constant_term().is_zero()
            && self.coefficient(&ExpVec::unit(1, 0)).is_one();
        if !lowest_ok {
            return Err(SeriesError::BadLowestTerm(self.to_string()));
        }
        let name = self.vars.names()[0].clone();
        let mut g = x.clone();
        for d in 2..=self.precision {
            let mut assignment = BTreeMap::new();
            assignment.insert(name.clone(), self.clone());
            let composed = g.substitute(&assignment)?;
            let err = composed.coefficient(&ExpVec::from_exps(vec![d]));
            if err.is_zero() {
                continue;
            }
            let mut corr = self.empty_like();
            corr.insert_term(ExpVec::from_exps(vec![d]), self.ring.neg(&err));
            g = g.add(&corr)?;
        }
        Ok(g)
    }

    /// Homogeneous part of total degree `d` in the series variables.
    pub fn graded_component(&self, d: u32) -> Series {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            if e.total_degree() == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// The combined degree (monomial degree minus coefficient weight) if it
    /// is the same for every stored term. Under this grading, with
    /// deg b_i = i counted negatively, every formal group law is homogeneous
    /// of degree 1.
    pub fn weighted_homogeneous_degree(&self) -> Option<i64> {
        let mut result: Option<i64> = None;
        for (e, c) in &self.terms {
            let mdeg = i64::from(e.total_degree());
            for w in c.weights() {
                let d = mdeg - w as i64;
                match result {
                    None => result = Some(d),
                    Some(prev) if prev == d => {}
                    Some(_) => return None,
                }
            }
        }
        result
    }

    /// Reinterpret over another coefficient ring (same generator count).
    pub fn cast_ring(&self, ring: &CoeffRing) -> Result<Series, SeriesError> {
        let mut out = Series {
            ring: ring.clone(),
            vars: Arc::clone(&self.vars),
            precision: self.precision,
            caps: Arc::clone(&self.caps),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), ring.cast(c, &self.ring)?);
        }
        Ok(out)
    }

    /// Move the series into a variable set that contains its own, mapping
    /// variables by name. Caps for the new variables come from `caps`.
    pub fn lift(
        &self,
        vars: Arc<Vars>,
        caps: Vec<Option<u32>>,
    ) -> Result<Series, SeriesError> {
        let mut index = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let idx = vars
                .index_of(name)
                .ok_or_else(|| SeriesError::UnknownVariable(name.clone()))?;
            index.push(idx);
        }
        let mut out = Series {
            ring: self.ring.clone(),
            vars,
            precision: self.precision,
            caps: Arc::new(caps),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; out.vars.len()];
            for (i, &ei) in e.exps().iter().enumerate() {
                exps[index[i]] = ei;
            }
            out.insert_term(ExpVec::from_exps(exps), c.clone());
        }
        Ok(out)
    }

    /// Apply a permutation of the variable positions: position i of the
    /// result reads its exponent from position perm[i] of the input.
    pub fn permute_vars(&self, perm: &[usize]) -> Series {
        assert_eq!(perm.len(), self.vars.len());
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            let exps: Vec<u32> = perm.iter().map(|&src| e.exps()[src]).collect();
            out.insert_term(ExpVec::from_exps(exps), c.clone());
        }
        out
    }

    /// Compare up to the shared precision, reporting the first difference in
    /// graded-lex order.
    pub fn compare(&self, other: &Series) -> Comparison {
        let precision = self.precision.min(other.precision);
        let mut keys: Vec<&ExpVec> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| e.total_degree() <= precision)
            .collect();
        keys.sort();
        keys.dedup();
        for e in keys {
            let a = self.coefficient(e);
            let b = other.coefficient(e);
            if a != b {
                return Comparison::DifferAt {
                    degree: e.total_degree(),
                    monomial: self.monomial_string(e),
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                };
            }
        }
        Comparison::AgreeTo(precision)
    }

    pub(crate) fn monomial_string(&self, e: &ExpVec) -> String {
        let mut parts = Vec::new();
        for (name, &exp) in self.vars.names().iter().zip(e.exps()) {
            if exp == 1 {
                parts.push(name.clone());
            } else if exp > 1 {
                parts.push(format!("{name}^{exp}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zvars() -> Arc<Vars> {
        Vars::new(["x", "y"])
    }

    fn zx(prec: u32) -> Series {
        Series::zero(CoeffRing::integers(), Vars::new(["x"]), prec)
    }

    #[test]
    fn add_cancels_and_takes_min_precision() {
        let s5 = zx(5);
        let x = s5.var("x").unwrap();
        let x2 = x.mul(&x).unwrap();
        let a = x.add(&x2).unwrap();
        let sum = a.add(&x.neg()).unwrap();
        assert_eq!(sum.compare(&x2), Comparison::AgreeTo(5));

        let s3 = zx(3);
        let b = s3.var("x").unwrap();
        let mixed = b.add(&x).unwrap();
        assert_eq!(mixed.precision(), 3);
    }

    #[test]
    fn integer_coefficients_add() {
        let s = zx(4);
        let x = s.var("x").unwrap();
        let lhs = x.mul_coeff(&s.ring().from_i64(2));
        let rhs = x.mul_coeff(&s.ring().from_i64(3));
        let sum = lhs.add(&rhs).unwrap();
        assert_eq!(sum, x.mul_coeff(&s.ring().from_i64(5)));
    }

    #[test]
    fn mul_truncates_at_precision() {
        let s = zx(10);
        let x = s.var("x").unwrap();
        let one = s.scalar(1);
        let p = one.add(&x).unwrap();
        let q = one.sub(&x).unwrap();
        let prod = p.mul(&q).unwrap();
        let expected = one.sub(&x.mul(&x).unwrap()).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn caps_kill_overflowing_terms() {
        let s = Series::zero_with_caps(
            CoeffRing::integers(),
            Vars::new(["x"]),
            10,
            vec![Some(2)],
        );
        let x = s.var("x").unwrap();
        let x2 = x.mul(&x).unwrap();
        assert!(!x2.is_zero());
        assert!(x.mul(&x2).unwrap().is_zero());
    }

    #[test]
    fn binomial_square_at_low_precision() {
        let s = Series::zero(CoeffRing::integers(), zvars(), 2);
        let x = s.var("x").unwrap();
        let y = s.var("y").unwrap();
        let sq = x.add(&y).unwrap().pow(2).unwrap();
        let mut expected = s.empty_like();
        expected.insert_term(ExpVec::from_exps(vec![2, 0]), s.ring().from_i64(1));
        expected.insert_term(ExpVec::from_exps(vec![1, 1]), s.ring().from_i64(2));
        expected.insert_term(ExpVec::from_exps(vec![0, 2]), s.ring().from_i64(1));
        assert_eq!(sq, expected);
    }

    #[test]
    fn geometric_series_inverse() {
        let s = zx(4);
        let one = s.scalar(1);
        let x = s.var("x").unwrap();
        let inv = one.sub(&x).unwrap().invert_unit().unwrap();
        let mut expected = s.empty_like();
        for d in 0..=4 {
            expected.insert_term(ExpVec::from_exps(vec![d]), s.ring().from_i64(1));
        }
        assert_eq!(inv, expected);
        let product = inv.mul(&one.sub(&x).unwrap()).unwrap();
        assert_eq!(product.compare(&one), Comparison::AgreeTo(4));
    }

    #[test]
    fn invert_needs_a_unit() {
        let s = zx(4);
        let two = s.scalar(2);
        assert!(matches!(two.invert_unit(), Err(SeriesError::NotAUnit(_))));
    }

    #[test]
    fn substitution_examples() {
        // additive law: x + y with x -> u^2, y -> v
        let f = Series::zero(CoeffRing::integers(), zvars(), 6);
        let fx = f.var("x").unwrap();
        let fy = f.var("y").unwrap();
        let law = fx.add(&fy).unwrap();
        let uv = Series::zero(CoeffRing::integers(), Vars::new(["u", "v"]), 6);
        let u = uv.var("u").unwrap();
        let v = uv.var("v").unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("x".to_string(), u.pow(2).unwrap());
        assign.insert("y".to_string(), v.clone());
        let out = law.substitute(&assign).unwrap();
        let expected = u.pow(2).unwrap().add(&v).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn multiplicative_two_series_by_substitution() {
        // x + y - x*y with y -> x gives 2x - x^2
        let f = Series::zero(CoeffRing::integers(), zvars(), 6);
        let fx = f.var("x").unwrap();
        let fy = f.var("y").unwrap();
        let law = fx.add(&fy).unwrap().sub(&fx.mul(&fy).unwrap()).unwrap();
        let sx = zx(6);
        let x = sx.var("x").unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("x".to_string(), x.clone());
        assign.insert("y".to_string(), x.clone());
        let out = law.substitute(&assign).unwrap();
        let expected = x
            .mul_coeff(&sx.ring().from_i64(2))
            .sub(&x.mul(&x).unwrap())
            .unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn divergent_substitution_is_rejected() {
        let s = zx(5);
        let one = s.scalar(1);
        let x = s.var("x").unwrap();
        let geom = one.sub(&x).unwrap().invert_unit().unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("x".to_string(), one.add(&x).unwrap());
        assert!(matches!(
            geom.substitute(&assign),
            Err(SeriesError::DivergentSubstitution(_, _))
        ));
    }

    #[test]
    fn compositional_inverse_identity() {
        let s = zx(7);
        let x = s.var("x").unwrap();
        assert_eq!(x.compositional_inverse().unwrap(), x);
    }

    #[test]
    fn compositional_inverse_with_lazard_coefficient() {
        // inverse of x + b1*x^2 to degree 3 is x - b1*x^2 + 2*b1^2*x^3
        let ring = CoeffRing::graded_int_poly(1);
        let s = Series::zero(ring.clone(), Vars::new(["x"]), 3);
        let x = s.var("x").unwrap();
        let b1 = ring.gen(1);
        let a = x.add(&x.pow(2).unwrap().mul_coeff(&b1)).unwrap();
        let g = a.compositional_inverse().unwrap();
        let b1sq2 = ring.mul(&ring.from_i64(2), &ring.mul(&b1, &b1));
        let expected = x
            .sub(&x.pow(2).unwrap().mul_coeff(&b1))
            .unwrap()
            .add(&x.pow(3).unwrap().mul_coeff(&b1sq2))
            .unwrap();
        assert_eq!(g, expected);
        // two-sided
        let mut assign = BTreeMap::new();
        assign.insert("x".to_string(), a.clone());
        assert_eq!(g.substitute(&assign).unwrap().compare(&x), Comparison::AgreeTo(3));
        let mut assign2 = BTreeMap::new();
        assign2.insert("x".to_string(), g.clone());
        assert_eq!(a.substitute(&assign2).unwrap().compare(&x), Comparison::AgreeTo(3));
    }

    #[test]
    fn compositional_inverse_cubic() {
        let s = zx(3);
        let x = s.var("x").unwrap();
        let a = x.add(&x.pow(3).unwrap()).unwrap();
        let expected = x.sub(&x.pow(3).unwrap()).unwrap();
        assert_eq!(a.compositional_inverse().unwrap(), expected);
    }

    #[test]
    fn bad_lowest_term_is_rejected() {
        let s = zx(4);
        let x = s.var("x").unwrap();
        let two_x = x.mul_coeff(&s.ring().from_i64(2));
        assert!(matches!(
            two_x.compositional_inverse(),
            Err(SeriesError::BadLowestTerm(_))
        ));
    }

    #[test]
    fn graded_component_picks_monomial_degree() {
        let ring = CoeffRing::graded_int_poly(1);
        let s = Series::zero(ring.clone(), Vars::new(["x"]), 5);
        let x = s.var("x").unwrap();
        let b1 = ring.gen(1);
        let e = x.add(&x.pow(2).unwrap().mul_coeff(&b1)).unwrap();
        assert_eq!(e.graded_component(2), x.pow(2).unwrap().mul_coeff(&b1));
        let one_plus_x = s.scalar(1).add(&x).unwrap();
        assert_eq!(one_plus_x.graded_component(0), s.scalar(1));
    }

    #[test]
    fn precision_monotonicity() {
        let s = zx(8);
        let x = s.var("x").unwrap();
        let a = s.scalar(1).add(&x).unwrap().pow(3).unwrap();
        let b = s.scalar(2).sub(&x.pow(2).unwrap()).unwrap().pow(2).unwrap();
        let full = a.mul(&b).unwrap().truncate(4);
        let trunc = a.truncate(4).mul(&b.truncate(4)).unwrap();
        assert_eq!(full, trunc);
    }
}
