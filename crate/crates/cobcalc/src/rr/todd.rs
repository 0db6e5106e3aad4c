//! Todd classes and Hirzebruch-Riemann-Roch on projective spaces.
//!
//! The Todd series x / (1 - exp(-x)) is computed over exact rationals from
//! factorial coefficients. For P^n the Euler sequence gives
//! Td(T_P^n) = td(t)^(n+1) with t the hyperplane class, and the additive
//! pushforward to the point extracts the coefficient of t^n, so
//! chi(P^n, O(d)) = [x^n] e^(dx) (x / (1 - e^(-x)))^(n+1), which must equal
//! binomial(n + d, n).

use super::RrError;
use crate::chern::ChernContext;
use crate::ring::{CoeffRing, ExpVec, Series, Vars};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// exp(c x) over Q to the given precision.
fn exp_series(c: &BigRational, precision: u32) -> Series {
    let ring = CoeffRing::rationals();
    let vars = Vars::new(["x"]);
    let mut out = Series::zero(ring.clone(), vars, precision);
    let mut coeff = BigRational::one();
    out.insert_term(ExpVec::from_exps(vec![0]), ring.from_rational(coeff.clone()).unwrap());
    for d in 1..=precision {
        coeff = coeff * c / BigRational::from_integer(BigInt::from(d));
        out.insert_term(
            ExpVec::from_exps(vec![d]),
            ring.from_rational(coeff.clone()).unwrap(),
        );
    }
    out
}

/// The Todd series x / (1 - exp(-x)) = 1 + x/2 + x^2/12 - x^4/720 + ...
pub fn todd_series(precision: u32) -> Series {
    let minus_one = -BigRational::one();
    let em = exp_series(&minus_one, precision + 1);
    // (1 - e^(-x)) / x, shifted down one degree
    let one = em.empty_like().scalar(1);
    let numer = one.sub(&em).expect("same vars");
    let mut shifted = Series::zero(
        CoeffRing::rationals(),
        Vars::new(["x"]),
        precision,
    );
    for (e, c) in numer.terms() {
        let d = e.exps()[0];
        debug_assert!(d >= 1, "1 - e^(-x) vanishes at 0");
        shifted.insert_term(ExpVec::from_exps(vec![d - 1]), c.clone());
    }
    shifted.invert_unit().expect("constant term 1")
}

/// Total Todd class of a split bundle: the product of td(x_k) over the
/// given roots, inside an additive rational context.
pub fn todd_class(ctx: &ChernContext, roots: &[usize]) -> Result<Series, RrError> {
    let caps_total: u32 = ctx.root_caps().iter().sum();
    let td = todd_series(caps_total.max(1));
    let mut out = ctx.one();
    for &k in roots {
        let mut assign = std::collections::BTreeMap::new();
        assign.insert("x".to_string(), ctx.root(k));
        // substitution is finite: the root is capped
        let factor = td
            .substitute(&assign)
            .map_err(crate::chern::ChernError::from)?;
        out = out.mul(&factor)?;
    }
    Ok(out)
}

/// chi(P^n, O(d)) through the stated Todd series: the coefficient of x^n in
/// e^(dx) td(x)^(n+1), returned as an exact integer.
pub fn hrr_with_todd(todd: &Series, n: u32, d: u32) -> Result<BigInt, RrError> {
    let precision = n;
    let e = exp_series(&BigRational::from_integer(BigInt::from(d)), precision);
    let td = todd.truncate(precision);
    let mut product = e;
    for _ in 0..=n {
        product = product.mul(&td)?;
    }
    let coeff = product.coefficient(&ExpVec::from_exps(vec![n]));
    let q = coeff
        .as_rational()
        .expect("rational scalar coefficient");
    if !q.denom().abs().is_one() {
        return Err(RrError::NonIntegerResult(q.to_string()));
    }
    Ok(q.numer().clone())
}

/// Euler characteristic of O(d) on P^n by the Riemann-Roch computation.
pub fn hrr_projective_space(n: u32, d: u32) -> Result<BigInt, RrError> {
    let todd = todd_series(n.max(1));
    hrr_with_todd(&todd, n, d)
}
