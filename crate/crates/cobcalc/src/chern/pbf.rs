//! Projective-bundle machinery for split bundles.
//!
//! The hyperplane class t = e(O(1)) satisfies the monic relation obtained by
//! expanding prod_k (e(dual root k) - t) = 0, that is
//! t^r = sum_{i=1..r} d_i t^(r-i) with d_i = (-1)^(i+1) s_i of the dual
//! roots. Every element reduces to a unique normal form of t-degree < r.
//!
//! The fundamental-class coefficients u_i come from the expansion of the
//! split bundle's class in the infinite projective model: summing over
//! multi-indices (i_1..i_r) >= 1 the product of
//! (-1)^(i_k - 1) H(t, x_k)^(i_k) x_k^(i_k - 1), attached to index
//! i_1 + ... + i_r - 1, where H(t, x) = 1 / (1 + sum a_ij t^(i-1) x^j).
//! Powers of t shift the index down; the bookkeeping variable z below
//! records the raw index so one sparse product computes every u_i at once.
//! The sum is finite because each root is capped.

use super::matrix::CoefficientMatrix;
use super::{ChernContext, ChernError};
use crate::check::CheckOutcome;
use crate::ring::{ExpVec, Series, Vars};
use std::sync::Arc;

/// The coefficients u_0, u_1, ... of a class in the infinite projective
/// model, each an element of the base context.
#[derive(Clone, Debug)]
pub struct CoefficientVector {
    entries: Vec<Series>,
}

impl CoefficientVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> &Series {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    /// u_{r-1} must be a unit (constant term 1 here) and every other entry
    /// nilpotent.
    pub fn structure_check(&self, rank: usize) -> CheckOutcome {
        for (i, u) in self.entries.iter().enumerate() {
            let c = u.constant_term();
            if i == rank - 1 {
                if !u.ring().is_unit(&c) {
                    return CheckOutcome::fail(
                        "coefficient_structure",
                        format!("u_{i} has non-unit constant term {c}"),
                    );
                }
            } else if !c.is_zero() {
                return CheckOutcome::fail(
                    "coefficient_structure",
                    format!("u_{i} has nonzero constant term {c}, expected nilpotent"),
                );
            }
        }
        CheckOutcome::pass("coefficient_structure")
    }
}

/// Reduction context for the theory of P(E) over the base: polynomials in
/// the hyperplane class t with base-ring coefficients, modulo the monic
/// degree-r relation.
#[derive(Clone, Debug)]
pub struct ProjectiveBundleContext {
    base: ChernContext,
    vars: Arc<Vars>,
    caps: Vec<Option<u32>>,
    precision: u32,
    /// d_1..d_r in the base variables.
    d: Vec<Series>,
    /// sum d_i t^(r-i), lifted to the extended variables.
    relation: Series,
}

impl ProjectiveBundleContext {
    /// Expand prod_k (euler_dual(x_k) - t) = 0 into the monic relation.
    pub fn hyperplane_relation(ctx: &ChernContext) -> Result<Self, ChernError> {
        let duals: Vec<Series> = ctx
            .roots()
            .iter()
            .map(|x| ctx.euler_dual(x))
            .collect::<Result<_, _>>()?;
        let symmetric = elementary_symmetric(ctx, &duals);
        let mut d = Vec::with_capacity(ctx.rank());
        for (i, s_i) in symmetric.iter().enumerate().skip(1) {
            // d_i = (-1)^(i+1) s_i(duals)
            let signed = if i % 2 == 1 { s_i.clone() } else { s_i.neg() };
            d.push(signed);
        }
        Self::with_relation(ctx, d)
    }

    /// Build the context from an explicit coefficient list d_1..d_r (each in
    /// the base variables). Exposed so tests can inject perturbed relations.
    pub fn with_relation(ctx: &ChernContext, d: Vec<Series>) -> Result<Self, ChernError> {
        let r = ctx.rank() as u32;
        let caps_total: u32 = ctx.root_caps().iter().sum();
        // t^a reduces to zero once a > r - 1 + caps_total, so this cap is
        // semantically lossless
        let t_cap = r + caps_total;
        let mut names: Vec<String> = ctx.vars().names().to_vec();
        names.push("t".to_string());
        let vars = Vars::new(names);
        let mut caps: Vec<Option<u32>> =
            ctx.root_caps().iter().map(|&c| Some(c)).collect();
        caps.push(Some(t_cap));
        let precision = caps_total + t_cap;

        let template =
            Series::zero_with_caps(ctx.ring().clone(), Arc::clone(&vars), precision, caps.clone());
        let mut relation = template.clone();
        for (i, di) in d.iter().enumerate() {
            // base elements are exact polynomials under the caps, so the
            // lift may assume the wider precision of the extended ring
            let lifted = di
                .lift(Arc::clone(&vars), caps.clone())?
                .assume_precision(precision);
            let t_power = template
                .var("t")?
                .pow(r - (i as u32 + 1))
                .expect("t power");
            relation = relation.add(&lifted.mul(&t_power)?)?;
        }
        Ok(ProjectiveBundleContext {
            base: ctx.clone(),
            vars,
            caps,
            precision,
            d,
            relation,
        })
    }

    pub fn base(&self) -> &ChernContext {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// d_1..d_r in the base variables.
    pub fn relation_coefficients(&self) -> &[Series] {
        &self.d
    }

    pub fn zero(&self) -> Series {
        Series::zero_with_caps(
            self.base.ring().clone(),
            Arc::clone(&self.vars),
            self.precision,
            self.caps.clone(),
        )
    }

    pub fn one(&self) -> Series {
        self.zero().scalar(1)
    }

    /// The hyperplane class t = e(O(1)).
    pub fn t(&self) -> Series {
        self.zero().var("t").expect("t exists")
    }

    /// Lift a base element into the extended variables. Base elements are
    /// exact polynomials under the caps, so the wider precision applies.
    pub fn lift_base(&self, s: &Series) -> Series {
        s.lift(Arc::clone(&self.vars), self.caps.clone())
            .expect("base variables are a subset")
            .assume_precision(self.precision)
    }

    /// Push the normal form back down to the base variables; the element
    /// must be t-free.
    pub fn project_base(&self, s: &Series) -> Series {
        let t_idx = self.vars.len() - 1;
        let mut out = self.base.zero();
        for (e, c) in s.terms() {
            assert_eq!(e.exps()[t_idx], 0, "element is not t-free");
            out.insert_term(
                ExpVec::from_exps(e.exps()[..t_idx].to_vec()),
                c.clone(),
            );
        }
        out
    }

    /// Rewrite until every term has t-degree < r. Confluent because the
    /// relation is monic in t.
    pub fn reduce(&self, s: &Series) -> Series {
        let r = self.rank() as u32;
        let t_idx = self.vars.len() - 1;
        let mut current = s.clone();
        loop {
            let mut next = current.empty_like();
            let mut changed = false;
            for (e, c) in current.terms() {
                let t_deg = e.exps()[t_idx];
                if t_deg < r {
                    next.insert_term(e.clone(), c.clone());
                    continue;
                }
                changed = true;
                let mut rest = e.exps().to_vec();
                rest[t_idx] = t_deg - r;
                for (re, rc) in self.relation.terms() {
                    let combined = ExpVec::from_exps(rest.clone()).mul(re);
                    next.insert_term(combined, self.base.ring().mul(c, rc));
                }
            }
            if !changed {
                return current;
            }
            current = next;
        }
    }

    /// Coefficients c_0..c_{r-1} of the normal form sum c_i t^i, each in the
    /// base variables.
    pub fn normal_form(&self, s: &Series) -> Vec<Series> {
        let reduced = self.reduce(s);
        let t_idx = self.vars.len() - 1;
        let mut out = vec![self.base.zero(); self.rank()];
        for (e, c) in reduced.terms() {
            let t_deg = e.exps()[t_idx] as usize;
            out[t_deg].insert_term(
                ExpVec::from_exps(e.exps()[..t_idx].to_vec()),
                c.clone(),
            );
        }
        out
    }

    /// Assemble sum c_i t^i from base coefficients.
    pub fn from_normal_form(&self, coeffs: &[Series]) -> Series {
        let mut out = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            let lifted = self.lift_base(c);
            let t_pow = self.t().pow(i as u32).expect("t power");
            out = out
                .add(&lifted.mul(&t_pow).expect("context elements"))
                .expect("context elements");
        }
        out
    }

    /// The coefficients u_0..u_{count-1} of the fundamental class.
    pub fn fundamental_coefficients(&self, count: usize) -> Result<CoefficientVector, ChernError> {
        let r = self.rank();
        let law = self.base.law();
        let root_caps = self.base.root_caps();
        let caps_total: u32 = root_caps.iter().sum();
        // largest useful raw index and t-power
        let z_cap = caps_total + r as u32;
        let t_cap = z_cap.saturating_sub(1);

        let mut names: Vec<String> = self.base.vars().names().to_vec();
        names.push("t".to_string());
        names.push("z".to_string());
        let vars = Vars::new(names);
        let t_idx = r;
        let z_idx = r + 1;
        let mut caps: Vec<Option<u32>> = root_caps.iter().map(|&c| Some(c)).collect();
        caps.push(Some(t_cap));
        caps.push(Some(z_cap));
        let precision = caps_total + t_cap + z_cap;
        let template = Series::zero_with_caps(
            self.base.ring().clone(),
            Arc::clone(&vars),
            precision,
            caps,
        );
        let one = template.scalar(1);
        let t = template.var("t")?;
        let z = template.var("z")?;

        // G = prod_k sum_{i_k >= 1} (-1)^(i_k-1) H_k^(i_k) x_k^(i_k-1) z^(i_k)
        let mut product = one.clone();
        for k in 1..=r {
            let x_k = template.var(&format!("x{k}"))?;
            // denominator 1 + sum a_ij t^(i-1) x_k^j, truncated by the caps
            let mut denom = one.clone();
            for (e, a) in law.f().terms() {
                let (i, j) = (e.exps()[0], e.exps()[1]);
                if i < 1 || j < 1 {
                    continue;
                }
                let term = t
                    .pow(i - 1)?
                    .mul(&x_k.pow(j)?)?
                    .mul_coeff(a);
                denom = denom.add(&term)?;
            }
            let h = denom.invert_unit()?;
            let mut g_k = template.clone();
            let mut h_power = one.clone();
            let mut sign_neg = false;
            for i_k in 1..=(root_caps[k - 1] + 1) {
                h_power = h_power.mul(&h)?;
                let mut term = h_power.mul(&x_k.pow(i_k - 1)?)?.mul(&z.pow(i_k)?)?;
                if sign_neg {
                    term = term.neg();
                }
                g_k = g_k.add(&term)?;
                sign_neg = !sign_neg;
            }
            product = product.mul(&g_k)?;
        }

        // collect: a term t^a z^s x^beta contributes beta to u_(s-1-a)
        let mut entries = vec![self.base.zero(); count];
        for (e, c) in product.terms() {
            let a = e.exps()[t_idx] as i64;
            let s = e.exps()[z_idx] as i64;
            let index = s - 1 - a;
            if index < 0 || index >= count as i64 {
                continue;
            }
            entries[index as usize].insert_term(
                ExpVec::from_exps(e.exps()[..r].to_vec()),
                c.clone(),
            );
        }
        Ok(CoefficientVector { entries })
    }

    /// The r x r matrix A with A[j][i] = u_{i+j} of the fundamental class;
    /// units on the anti-diagonal, nilpotents elsewhere.
    pub fn coefficient_matrix(&self) -> Result<CoefficientMatrix, ChernError> {
        let r = self.rank();
        let u = self.fundamental_coefficients(2 * r - 1)?;
        let mut entries = Vec::with_capacity(r * r);
        for j in 0..r {
            for i in 0..r {
                entries.push(u.entry(i + j).clone());
            }
        }
        let matrix = CoefficientMatrix::from_entries(r, entries);
        matrix.structure_check(&self.base)?;
        Ok(matrix)
    }

    /// u_{r+i} = sum_{j=0..r-1} d_{r-j} u_{j+i} for 0 <= i < depth.
    pub fn recursion_check(&self, depth: usize) -> Result<CheckOutcome, ChernError> {
        let outcome = self.recursion_check_with(depth, &self.d)?;
        Ok(outcome)
    }

    /// Same recursion against an explicit d-vector; lets tests demonstrate
    /// that a perturbed relation is caught.
    pub fn recursion_check_with(
        &self,
        depth: usize,
        d: &[Series],
    ) -> Result<CheckOutcome, ChernError> {
        let r = self.rank();
        let u = self.fundamental_coefficients(r + depth)?;
        let mut checks = Vec::new();
        for i in 0..depth {
            let mut rhs = self.base.zero();
            for j in 0..r {
                let term = d[r - j - 1].mul(u.entry(j + i))?;
                rhs = rhs.add(&term)?;
            }
            let cmp = u.entry(r + i).compare(&rhs);
            checks.push(CheckOutcome::from_comparison(
                format!("u_{} = sum d_(r-j) u_(j+{i})", r + i),
                &cmp,
            ));
        }
        Ok(CheckOutcome::all("coefficient_recursion", checks))
    }
}

/// Elementary symmetric polynomials e_0..e_n of arbitrary context elements.
pub(crate) fn elementary_symmetric(ctx: &ChernContext, elems: &[Series]) -> Vec<Series> {
    let mut symmetric = vec![ctx.one()];
    for x in elems {
        let mut next = Vec::with_capacity(symmetric.len() + 1);
        for i in 0..=symmetric.len() {
            let mut c = if i < symmetric.len() {
                symmetric[i].clone()
            } else {
                ctx.zero()
            };
            if i > 0 {
                c = c
                    .add(&symmetric[i - 1].mul(x).expect("context elements"))
                    .expect("context elements");
            }
            next.push(c);
        }
        symmetric = next;
    }
    symmetric
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::LawKind;

    #[test]
    fn rank_one_additive_relation_is_dual_root() {
        // r = 1: the relation reads t = d_1 = e(dual), which is -x1
        let ctx = ChernContext::new(LawKind::Additive, &[2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        assert_eq!(pb.relation_coefficients().len(), 1);
        assert_eq!(pb.relation_coefficients()[0], ctx.root(1).neg());
    }

    #[test]
    fn rank_two_additive_relation_signs() {
        // t^2 = s_1(-x) t - s_2(-x) = (-x1 - x2) t - x1 x2
        let ctx = ChernContext::new(LawKind::Additive, &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let d1 = ctx.root(1).add(&ctx.root(2)).unwrap().neg();
        let d2 = ctx.root(1).mul(&ctx.root(2)).unwrap().neg();
        assert_eq!(pb.relation_coefficients()[0], d1);
        assert_eq!(pb.relation_coefficients()[1], d2);
    }

    #[test]
    fn reduction_is_idempotent() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let t = pb.t();
        let elem = t.pow(3).unwrap().add(&t.pow(5).unwrap()).unwrap();
        let once = pb.reduce(&elem);
        let twice = pb.reduce(&once);
        assert_eq!(once, twice);
        let t_idx = pb.vars.len() - 1;
        assert!(once.terms().all(|(e, _)| e.exps()[t_idx] < 2));
    }

    #[test]
    fn normal_form_round_trips() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let coeffs = vec![
            ctx.one().add(&ctx.root(1)).unwrap(),
            ctx.root(2).mul(&ctx.root(2)).unwrap(),
        ];
        let assembled = pb.from_normal_form(&coeffs);
        let back = pb.normal_form(&assembled);
        assert_eq!(back, coeffs);
    }

    #[test]
    fn additive_coefficients_are_complete_homogeneous() {
        // oracle: u_m = (-1)^(m+1-r) h_(m+1-r)(x), computed by direct
        // enumeration of capped monomials
        let caps = [2u32, 2];
        let ctx = ChernContext::new(LawKind::Additive, &caps).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let r = 2i64;
        let u = pb.fundamental_coefficients(6).unwrap();
        for m in 0..6i64 {
            let j = m + 1 - r;
            let mut expected = ctx.zero();
            if j >= 0 {
                for e1 in 0..=caps[0] {
                    for e2 in 0..=caps[1] {
                        if i64::from(e1 + e2) == j {
                            let sign = if j % 2 == 0 { 1 } else { -1 };
                            expected.insert_term(
                                ExpVec::from_exps(vec![e1, e2]),
                                ctx.ring().from_i64(sign),
                            );
                        }
                    }
                }
            }
            assert_eq!(u.entry(m as usize), &expected, "u_{m}");
        }
    }

    #[test]
    fn multiplicative_rank_one_coefficients() {
        // oracle: u_i = (-x)^i / (1-x)^(i+1), all geometric series finite
        // under the cap
        let ctx = ChernContext::new(LawKind::Multiplicative, &[3]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let u = pb.fundamental_coefficients(4).unwrap();
        let x = ctx.root(1);
        let inv = ctx.one().sub(&x).unwrap().invert_unit().unwrap();
        for i in 0..4u32 {
            let expected = x
                .neg()
                .pow(i)
                .unwrap()
                .mul(&inv.pow(i + 1).unwrap())
                .unwrap();
            assert_eq!(u.entry(i as usize), &expected, "u_{i}");
        }
    }

    #[test]
    fn trivial_bundle_matrix_is_anti_identity() {
        // caps 0 model trivial line bundles; only u_(r-1) = 1 survives
        let ctx = ChernContext::new(LawKind::Additive, &[0, 0, 0]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let u = pb.fundamental_coefficients(5).unwrap();
        for (i, entry) in u.entries().iter().enumerate() {
            if i == 2 {
                assert_eq!(entry, &ctx.one());
            } else {
                assert!(entry.is_zero(), "u_{i} should vanish");
            }
        }
        let a = pb.coefficient_matrix().unwrap();
        let inv = a.invert(&ctx).unwrap();
        assert_eq!(a, inv);
    }

    #[test]
    fn unit_and_nilpotent_structure_for_rank_two_multiplicative() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let u = pb.fundamental_coefficients(4).unwrap();
        assert!(u.entry(1).constant_term().is_one());
        assert!(u.entry(0).constant_term().is_zero());
        assert!(u.entry(2).constant_term().is_zero());
        assert!(u.structure_check(2).passed);
    }

    #[test]
    fn recursion_for_rank_one_multiplicative() {
        // u_(1+i) = d_1 u_i with d_1 = e(dual) = -x/(1-x)
        let ctx = ChernContext::new(LawKind::Multiplicative, &[3]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let out = pb.recursion_check(3).unwrap();
        assert!(out.passed, "{out}");
        assert_eq!(
            pb.relation_coefficients()[0],
            ctx.euler_dual(&ctx.root(1)).unwrap()
        );
    }

    #[test]
    fn recursion_for_rank_two_universal() {
        let ctx = ChernContext::new(LawKind::Universal(5), &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let out = pb.recursion_check(3).unwrap();
        assert!(out.passed, "{out}");
    }

    #[test]
    fn flipped_relation_sign_breaks_recursion() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let mut mutated = pb.relation_coefficients().to_vec();
        mutated[0] = mutated[0].neg();
        let out = pb.recursion_check_with(2, &mutated).unwrap();
        assert!(!out.passed);
        assert!(out.witness.is_some());
    }

    #[test]
    fn coefficients_are_symmetric_in_the_roots() {
        let ctx = ChernContext::new(LawKind::Universal(4), &[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let u = pb.fundamental_coefficients(4).unwrap();
        for (i, entry) in u.entries().iter().enumerate() {
            let swapped = entry.permute_vars(&[1, 0]);
            assert_eq!(entry, &swapped, "u_{i} is symmetric");
        }
    }
}
