//! Chern-root calculus on split bundles.
//!
//! A context holds a formal group law and named Chern roots x1..xr with
//! per-root nilpotency caps; its elements are series in the roots. Euler
//! classes of tensor products and duals come from the law, Chern classes
//! are elementary symmetric polynomials in the roots.
//!
//! For the universal law the context realizes the law at a working
//! precision high enough that every projective-bundle coefficient it can
//! produce is exact: under the caps, a coefficient of F at total degree
//! i + j can only contribute for i + j <= caps_total + rank.

mod matrix;
mod pbf;

pub use matrix::CoefficientMatrix;
pub use pbf::{CoefficientVector, ProjectiveBundleContext};

use crate::check::CheckOutcome;
use crate::fgl::{FglError, FormalGroupLaw, LawKind};
use crate::ring::{CoeffRing, Series, SeriesError, Vars};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChernError {
    #[error("element has nonzero constant term {0}")]
    NonNilpotent(String),
    #[error("coefficient matrix structure violated: {0}")]
    StructureViolation(String),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("context needs at least one root")]
    NoRoots,
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Split-bundle context: a law together with nilpotent Chern roots.
#[derive(Clone, Debug)]
pub struct ChernContext {
    label: String,
    law: FormalGroupLaw,
    vars: Arc<Vars>,
    caps: Vec<u32>,
}

impl ChernContext {
    /// Build a context for the named law. Roots are x1..xr with the given
    /// caps; the law is realized at the working precision the coefficient
    /// machinery needs for exact results.
    pub fn new(kind: LawKind, caps: &[u32]) -> Result<ChernContext, ChernError> {
        if caps.is_empty() {
            return Err(ChernError::NoRoots);
        }
        let law = kind.realize(Self::working_precision(caps))?;
        Ok(Self::from_law_labeled(kind.label(), law, caps))
    }

    /// Wrap an existing law. For exact projective-bundle coefficients the
    /// law precision should be at least caps_total + rank; shallower laws
    /// yield results truncated at the law's own precision.
    pub fn from_law(law: FormalGroupLaw, caps: &[u32]) -> Result<ChernContext, ChernError> {
        if caps.is_empty() {
            return Err(ChernError::NoRoots);
        }
        Ok(Self::from_law_labeled("custom".into(), law, caps))
    }

    fn from_law_labeled(label: String, law: FormalGroupLaw, caps: &[u32]) -> ChernContext {
        let vars = Vars::new((1..=caps.len()).map(|i| format!("x{i}")));
        ChernContext {
            label,
            law,
            vars,
            caps: caps.to_vec(),
        }
    }

    /// Law precision sufficient for exact coefficient computations: any
    /// surviving product of H-expansion factors keeps i + j within
    /// caps_total + rank.
    pub fn working_precision(caps: &[u32]) -> u32 {
        let total: u32 = caps.iter().sum();
        total + caps.len() as u32
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn ring(&self) -> &CoeffRing {
        self.law.ring()
    }

    pub fn rank(&self) -> usize {
        self.caps.len()
    }

    pub fn root_caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    /// Zero element of the context ring.
    pub fn zero(&self) -> Series {
        let caps = self.caps.iter().map(|&c| Some(c)).collect();
        Series::zero_with_caps(
            self.ring().clone(),
            Arc::clone(&self.vars),
            self.caps.iter().sum(),
            caps,
        )
    }

    pub fn one(&self) -> Series {
        self.zero().scalar(1)
    }

    /// The k-th Chern root (1-based), i.e. the Euler class of the k-th line
    /// bundle summand.
    pub fn root(&self, k: usize) -> Series {
        self.zero()
            .var(&format!("x{k}"))
            .expect("root variable exists")
    }

    pub fn roots(&self) -> Vec<Series> {
        (1..=self.rank()).map(|k| self.root(k)).collect()
    }

    fn require_nilpotent(&self, a: &Series) -> Result<(), ChernError> {
        if a.constant_term().is_zero() {
            Ok(())
        } else {
            Err(ChernError::NonNilpotent(a.constant_term().to_string()))
        }
    }

    /// Euler class of a tensor product: F(a, b) reduced in the context.
    pub fn euler_tensor(&self, a: &Series, b: &Series) -> Result<Series, ChernError> {
        self.require_nilpotent(a)?;
        self.require_nilpotent(b)?;
        Ok(self.law.plus(a, b)?)
    }

    /// Euler class of a dual line bundle: inv_F(a).
    pub fn euler_dual(&self, a: &Series) -> Result<Series, ChernError> {
        self.require_nilpotent(a)?;
        Ok(self.law.inverse_of(a)?)
    }

    /// Chern classes of the sub-bundle spanned by the given roots (1-based
    /// indices): c_i is the i-th elementary symmetric polynomial, c_0 = 1.
    pub fn chern_classes(&self, roots: &[usize]) -> Vec<Series> {
        // build e_i incrementally: e_i(S + x) = e_i(S) + x e_{i-1}(S)
        let mut classes = vec![self.one()];
        for &k in roots {
            let x = self.root(k);
            let mut next = Vec::with_capacity(classes.len() + 1);
            for i in 0..=classes.len() {
                let mut c = if i < classes.len() {
                    classes[i].clone()
                } else {
                    self.zero()
                };
                if i > 0 {
                    c = c
                        .add(&classes[i - 1].mul(&x).expect("context elements"))
                        .expect("context elements");
                }
                next.push(c);
            }
            classes = next;
        }
        classes
    }

    /// Total Chern class 1 + c_1 + ... + c_r of the given roots.
    pub fn total_chern(&self, roots: &[usize]) -> Series {
        let mut total = self.zero();
        for c in self.chern_classes(roots) {
            total = total.add(&c).expect("context elements");
        }
        total
    }

    /// Euler class of the split bundle: the product of its roots.
    pub fn euler_class(&self, roots: &[usize]) -> Series {
        let mut prod = self.one();
        for &k in roots {
            prod = prod.mul(&self.root(k)).expect("context elements");
        }
        prod
    }

    /// Whitney formula on split bundles: the total class of a concatenation
    /// is the product of the total classes.
    pub fn whitney_check(&self, first: &[usize], second: &[usize]) -> CheckOutcome {
        let all: Vec<usize> = first.iter().chain(second.iter()).copied().collect();
        let lhs = self.total_chern(&all);
        let rhs = self
            .total_chern(first)
            .mul(&self.total_chern(second))
            .expect("context elements");
        CheckOutcome::from_comparison("whitney_sum", &lhs.compare(&rhs))
    }

    /// Top Chern class equals the Euler class of the bundle.
    pub fn normalization_check(&self, roots: &[usize]) -> CheckOutcome {
        let classes = self.chern_classes(roots);
        let top = classes.last().expect("c_0 always present");
        CheckOutcome::from_comparison(
            "top_chern_is_euler",
            &top.compare(&self.euler_class(roots)),
        )
    }

    /// The projective-bundle context for the full root set.
    pub fn projective_bundle(&self) -> Result<ProjectiveBundleContext, ChernError> {
        ProjectiveBundleContext::hyperplane_relation(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::LawKind;

    #[test]
    fn additive_euler_tensor_is_plain_sum() {
        let ctx = ChernContext::new(LawKind::Additive, &[2, 2]).unwrap();
        let out = ctx.euler_tensor(&ctx.root(1), &ctx.root(2)).unwrap();
        let expected = ctx.root(1).add(&ctx.root(2)).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn dual_cancels_under_tensor() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[3, 3]).unwrap();
        let x = ctx.root(1);
        let dual = ctx.euler_dual(&x).unwrap();
        let zero = ctx.euler_tensor(&x, &dual).unwrap();
        assert!(zero.is_zero(), "got {zero}");
        assert!(ctx.euler_dual(&ctx.zero()).unwrap().is_zero());
    }

    #[test]
    fn universal_tensor_matches_direct_substitution() {
        let ctx = ChernContext::new(LawKind::Universal(4), &[3, 3]).unwrap();
        let out = ctx.euler_tensor(&ctx.root(1), &ctx.root(2)).unwrap();
        let direct = ctx.law().plus(&ctx.root(1), &ctx.root(2)).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn euler_tensor_rejects_units() {
        let ctx = ChernContext::new(LawKind::Additive, &[2]).unwrap();
        assert!(matches!(
            ctx.euler_tensor(&ctx.one(), &ctx.root(1)),
            Err(ChernError::NonNilpotent(_))
        ));
    }

    #[test]
    fn elementary_symmetric_chern_classes() {
        let ctx = ChernContext::new(LawKind::Additive, &[1, 1]).unwrap();
        let classes = ctx.chern_classes(&[1, 2]);
        assert_eq!(classes.len(), 3);
        assert_eq!(classes[0], ctx.one());
        assert_eq!(classes[1], ctx.root(1).add(&ctx.root(2)).unwrap());
        assert_eq!(classes[2], ctx.root(1).mul(&ctx.root(2)).unwrap());
    }

    #[test]
    fn single_root_first_chern_is_euler() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[2]).unwrap();
        let classes = ctx.chern_classes(&[1]);
        assert_eq!(classes[1], ctx.root(1));
    }

    #[test]
    fn whitney_and_normalization_up_to_rank_4() {
        for kind in [
            LawKind::Additive,
            LawKind::Multiplicative,
            LawKind::Universal(5),
        ] {
            let caps = vec![2u32; 4];
            let ctx = ChernContext::new(kind, &caps).unwrap();
            for split in 1..4usize {
                let first: Vec<usize> = (1..=split).collect();
                let second: Vec<usize> = (split + 1..=4).collect();
                let out = ctx.whitney_check(&first, &second);
                assert!(out.passed, "{out}");
            }
            let out = ctx.normalization_check(&[1, 2, 3, 4]);
            assert!(out.passed, "{out}");
        }
    }

    #[test]
    fn euler_tensor_is_commutative_and_associative_in_context() {
        let ctx = ChernContext::new(LawKind::Universal(4), &[2, 2, 2]).unwrap();
        let a = ctx.root(1);
        let b = ctx.root(2);
        let c = ctx.root(3);
        let ab = ctx.euler_tensor(&a, &b).unwrap();
        let ba = ctx.euler_tensor(&b, &a).unwrap();
        assert_eq!(ab, ba);
        let ab_c = ctx.euler_tensor(&ab, &c).unwrap();
        let a_bc = ctx
            .euler_tensor(&a, &ctx.euler_tensor(&b, &c).unwrap())
            .unwrap();
        assert!(ab_c.compare(&a_bc).agrees());
        // unital
        assert_eq!(ctx.euler_tensor(&a, &ctx.zero()).unwrap(), a);
    }
}
