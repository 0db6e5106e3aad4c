//! The universal formal group law over the polynomial model of the Lazard
//! ring.
//!
//! With free generators b_i of degree i, the logarithm
//! l(x) = x + b_1 x^2 + ... + b_{N-1} x^N linearizes a unique law
//! F(x, y) = exp(l(x) + l(y)) over Q[b], and all of F's coefficients are in
//! fact integer polynomials in the b_i. Construction verifies integrality
//! and the group-law axioms; an `IntegralityFailure` would indicate a bug.

use super::{FglError, FormalGroupLaw};
use crate::ring::{CoeffRing, Series, Vars};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Degree-bounded model of the Lazard ring: the logarithm, its compositional
/// inverse, and the universal law over Z[b1..b_{N-1}].
#[derive(Clone, Debug)]
pub struct LazardModel {
    degree: u32,
    log: Series,
    exp: Series,
    law: FormalGroupLaw,
}

impl LazardModel {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// l(x) = x + sum b_i x^(i+1), over Q[b].
    pub fn log(&self) -> &Series {
        &self.log
    }

    /// Compositional inverse of the logarithm, over Q[b] (its coefficients
    /// are integral).
    pub fn exp(&self) -> &Series {
        &self.exp
    }

    /// The universal law over Z[b].
    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn rat_ring(&self) -> &CoeffRing {
        self.log.ring()
    }

    /// l(F(x,y)) = l(x) + l(y) over Q[b], rechecked on demand.
    pub fn log_linearizes_law(&self) -> crate::check::CheckOutcome {
        let rat = self.rat_ring();
        let f_rat = match self.law.f().cast_ring(rat) {
            Ok(f) => f,
            Err(e) => return crate::check::CheckOutcome::fail("log_linearizes_law", e.to_string()),
        };
        let vars = f_rat.vars();
        let lx = lift_univariate(&self.log, vars, 0);
        let ly = lift_univariate(&self.log, vars, 1);
        let mut assign = BTreeMap::new();
        assign.insert(self.log.vars().names()[0].clone(), f_rat.clone());
        let lhs = self.log.substitute(&assign).expect("composition");
        let rhs = lx.add(&ly).expect("same vars");
        crate::check::CheckOutcome::from_comparison("log_linearizes_law", &lhs.compare(&rhs))
    }
}

fn lift_univariate(s: &Series, vars: &Arc<Vars>, position: usize) -> Series {
    let caps = vec![None; vars.len()];
    let name = vars.names()[position].clone();
    let renamed: Vec<String> = vec![name];
    let tmp_vars = Vars::new(renamed);
    // rebuild under the positional name, then lift into the full set
    let mut renamed_series = Series::zero(s.ring().clone(), tmp_vars, s.precision());
    for (e, c) in s.terms() {
        renamed_series.insert_term(e.clone(), c.clone());
    }
    renamed_series
        .lift(Arc::clone(vars), caps)
        .expect("lift into law variables")
}

/// Build the Lazard model to the given total degree. Models are memoized
/// per degree; construction is deterministic, so the cache is sound.
pub fn universal_fgl(degree: u32) -> Result<LazardModel, FglError> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, LazardModel>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&degree) {
        return Ok(hit.clone());
    }
    let model = build_universal(degree)?;
    cache
        .lock()
        .unwrap()
        .insert(degree, model.clone());
    Ok(model)
}

fn build_universal(degree: u32) -> Result<LazardModel, FglError> {
    assert!(degree >= 1, "degree must be at least 1");
    let gens = (degree - 1) as usize;
    let rat = CoeffRing::graded_rat_poly(gens);
    let int = CoeffRing::graded_int_poly(gens);

    let x_vars = Vars::new(["x"]);
    let base = Series::zero(rat.clone(), Arc::clone(&x_vars), degree);
    let mut log = base.var("x")?;
    for i in 1..=gens {
        let term = base.var("x")?.pow(i as u32 + 1)?.mul_coeff(&rat.gen(i));
        log = log.add(&term)?;
    }
    let exp = log.compositional_inverse()?;

    let xy = Vars::new(["x", "y"]);
    let lx = lift_univariate(&log, &xy, 0);
    let ly = lift_univariate(&log, &xy, 1);
    let sum = lx.add(&ly)?;
    let mut assign = BTreeMap::new();
    assign.insert("x".to_string(), sum);
    let f_rat = exp.substitute(&assign)?;

    // Lazard's theorem in this model: no denominators survive
    let f_int = f_rat.cast_ring(&int).map_err(|_| {
        let bad = f_rat
            .terms()
            .find(|(_, c)| !c.is_integral())
            .map(|(e, c)| format!("{} at {}", c, f_rat.monomial_string(e)))
            .unwrap_or_default();
        FglError::IntegralityFailure(bad)
    })?;
    let law = FormalGroupLaw::from_series(f_int)?;

    Ok(LazardModel {
        degree,
        log,
        exp,
        law,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ExpVec;

    #[test]
    fn degree_one_universal_law_is_additive() {
        let model = universal_fgl(1).unwrap();
        let f = model.law().f();
        let x = f.var("x").unwrap();
        let y = f.var("y").unwrap();
        assert_eq!(f, &x.add(&y).unwrap());
    }

    #[test]
    fn degree_two_universal_law() {
        // hand-composed: exp(l(x) + l(y)) with l = x + b1 x^2 gives
        // x + y - 2 b1 x y at degree 2
        let model = universal_fgl(2).unwrap();
        let f = model.law().f();
        let ring = f.ring().clone();
        let expected_xy = ring.scale(
            &ring.gen(1),
            &num_rational::BigRational::from_integer((-2).into()),
        );
        assert_eq!(f.coefficient(&ExpVec::from_exps(vec![1, 1])), expected_xy);
        assert_eq!(f.term_count(), 3);
    }

    #[test]
    fn log_linearizes_to_degree_6() {
        let model = universal_fgl(6).unwrap();
        assert!(model.log_linearizes_law().passed);
    }

    #[test]
    fn universal_law_is_weighted_homogeneous() {
        // under monomial degree minus b-weight, F has pure degree 1
        let model = universal_fgl(6).unwrap();
        assert_eq!(model.law().f().weighted_homogeneous_degree(), Some(1));
    }
}
