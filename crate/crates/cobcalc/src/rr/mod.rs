//! Specializations and Riemann-Roch checks: pushforwards along split
//! projective bundles in the additive and multiplicative theories, the
//! geometric-series identity behind them, the multiplicative Chern
//! character, Todd classes, and Hirzebruch-Riemann-Roch on projective
//! spaces.

mod todd;

pub use todd::{hrr_projective_space, hrr_with_todd, todd_class, todd_series};

use crate::check::CheckOutcome;
use crate::chern::{ChernContext, ChernError, ProjectiveBundleContext};
use crate::fgl::{FglError, FormalGroupLaw, LawKind, PointBundleTable};
use crate::ring::{CoeffRing, Series, SeriesError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RrError {
    #[error("pushforward needs a normalization table for this law")]
    UnsupportedTheory,
    #[error("operation requires the {0} law")]
    WrongLaw(&'static str),
    #[error("expected an integer, got {0}")]
    NonIntegerResult(String),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A theory with a known point-bundle normalization: additive over Q,
/// multiplicative over Z, or a custom table (the universal normalization
/// [P^n] = (n+1) b_n, say).
#[derive(Clone, Debug)]
pub struct SpecializedTheory {
    kind: LawKind,
    normalization: PointBundleTable,
    rational: bool,
}

impl SpecializedTheory {
    pub fn additive() -> Self {
        SpecializedTheory {
            kind: LawKind::Additive,
            normalization: PointBundleTable::Additive,
            rational: true,
        }
    }

    pub fn multiplicative() -> Self {
        SpecializedTheory {
            kind: LawKind::Multiplicative,
            normalization: PointBundleTable::Multiplicative,
            rational: false,
        }
    }

    /// The universal theory with the point-bundle table [P^n] = (n+1) b_n.
    pub fn universal_with_table(degree: u32) -> Self {
        SpecializedTheory {
            kind: LawKind::Universal(degree),
            normalization: PointBundleTable::Universal,
            rational: false,
        }
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn normalization(&self) -> &PointBundleTable {
        &self.normalization
    }

    /// Build a split-bundle context in this theory.
    pub fn context(&self, caps: &[u32]) -> Result<ChernContext, RrError> {
        if self.rational {
            let precision = ChernContext::working_precision(caps);
            let law = FormalGroupLaw::additive(CoeffRing::rationals(), precision);
            Ok(ChernContext::from_law(law, caps)?)
        } else {
            Ok(ChernContext::new(self.kind, caps)?)
        }
    }

    /// The law's normalization must match its logarithm.
    pub fn normalization_check(&self, law: &FormalGroupLaw) -> CheckOutcome {
        self.normalization.consistent_with_log(law)
    }

    /// pi_!(t^i) for 0 <= i < upto: expand the class through the coefficient
    /// machinery and substitute the theory's point-bundle values, using
    /// u_m(t^i . 1) = u_(m+i)(1).
    pub fn pushforward_powers(
        &self,
        pb: &ProjectiveBundleContext,
        upto: usize,
    ) -> Result<Vec<Series>, RrError> {
        let ctx = pb.base();
        let ring = ctx.ring();
        let caps_total: u32 = ctx.root_caps().iter().sum();
        // u_m vanishes beyond the largest raw index caps_total + r - 1
        let max_index = caps_total as usize + ctx.rank();
        let u = pb.fundamental_coefficients(max_index + upto)?;
        let mut out = Vec::with_capacity(upto);
        for i in 0..upto {
            let mut acc = ctx.zero();
            for m in 0..max_index {
                let v = self.normalization.value(m, ring);
                if v.is_zero() {
                    continue;
                }
                acc = acc.add(&u.entry(m + i).mul_coeff(&v))?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Pushforward of an arbitrary element along pi: P(E) -> X: reduce to
    /// the normal form sum c_i t^i and extend pi_!(t^i) linearly over the
    /// base (the projection formula).
    pub fn pushforward(
        &self,
        pb: &ProjectiveBundleContext,
        element: &Series,
    ) -> Result<Series, RrError> {
        let coeffs = pb.normal_form(element);
        let powers = self.pushforward_powers(pb, coeffs.len())?;
        let mut acc = pb.base().zero();
        for (c, p) in coeffs.iter().zip(powers.iter()) {
            acc = acc.add(&c.mul(p)?)?;
        }
        Ok(acc)
    }
}

/// sum_{i>=0} (-x)^i / (1-x)^i = 1 - x, expanded exactly to the given
/// precision over the integers.
pub fn verify_geometric_series_identity(precision: u32) -> CheckOutcome {
    let vars = crate::ring::Vars::new(["x"]);
    let base = Series::zero(CoeffRing::integers(), vars, precision);
    let x = base.var("x").expect("x");
    let one = base.scalar(1);
    let ratio = x
        .neg()
        .mul(&one.sub(&x).expect("sub").invert_unit().expect("unit"))
        .expect("mul");
    let mut sum = base.clone();
    let mut power = one.clone();
    for _ in 0..=precision {
        sum = sum.add(&power).expect("add");
        power = power.mul(&ratio).expect("mul");
    }
    let expected = one.sub(&x).expect("sub");
    CheckOutcome::from_comparison("geometric_series_identity", &sum.compare(&expected))
}

/// The class of a line bundle in the K-theory model: [L] maps to
/// 1 - e_m(dual L) = 1 - inv_m(x).
pub fn line_bundle_class(ctx: &ChernContext, euler: &Series) -> Result<Series, RrError> {
    require_multiplicative(ctx)?;
    let dual = ctx.euler_dual(euler)?;
    Ok(ctx.one().sub(&dual)?)
}

/// Multiplicative Chern character of a split bundle given by root indices:
/// rank - c_1 of the dual bundle, which equals the sum of the line classes.
pub fn chern_character_multiplicative(
    ctx: &ChernContext,
    roots: &[usize],
) -> Result<Series, RrError> {
    require_multiplicative(ctx)?;
    let mut c1_dual = ctx.zero();
    for &k in roots {
        c1_dual = c1_dual.add(&ctx.euler_dual(&ctx.root(k))?)?;
    }
    Ok(ctx.zero().scalar(roots.len() as i64).sub(&c1_dual)?)
}

fn require_multiplicative(ctx: &ChernContext) -> Result<(), RrError> {
    let f = ctx.law().f();
    let x = f.var(&f.vars().names()[0]).expect("x");
    let y = f.var(&f.vars().names()[1]).expect("y");
    let expected = x
        .add(&y)
        .and_then(|s| s.sub(&x.mul(&y)?))
        .expect("same vars");
    if f != &expected {
        return Err(RrError::WrongLaw("multiplicative"));
    }
    Ok(())
}

/// The tensor-product expansion of the Euler class in geometric terms:
///   e(L1 (x) L2) = e(L1) + e(L2) - e(L1) e(L2) [P1]
///                  - e(L1) e(L2) e(L1 (x) L2) ([P2] - [P3]),
/// where the bracketed classes are projective-bundle classes over the base.
/// Under the multiplicative theory [P1] = 1 and [P2] - [P3] = 0 (both are
/// P^1-bundles and push forward to 1), so the identity degenerates to
/// x1 + x2 - x1 x2; under the additive theory every bracket vanishes.
pub fn geom_fgl_specialization_check(kind: LawKind, caps: (u32, u32)) -> Result<CheckOutcome, RrError> {
    let (p1, p2_minus_p3): (i64, i64) = match kind {
        LawKind::Multiplicative => (1, 0),
        LawKind::Additive => (0, 0),
        LawKind::Universal(_) => return Err(RrError::UnsupportedTheory),
    };
    let ctx = ChernContext::new(kind, &[caps.0, caps.1])?;
    let x1 = ctx.root(1);
    let x2 = ctx.root(2);
    let lhs = ctx.euler_tensor(&x1, &x2)?;
    let x1x2 = x1.mul(&x2)?;
    let mut rhs = x1.add(&x2)?;
    rhs = rhs.sub(&x1x2.mul_coeff(&ctx.ring().from_i64(p1)))?;
    let correction = x1x2.mul(&lhs)?.mul_coeff(&ctx.ring().from_i64(p2_minus_p3));
    rhs = rhs.sub(&correction)?;
    Ok(CheckOutcome::from_comparison(
        format!("geom_fgl_specialization({})", kind.label()),
        &lhs.compare(&rhs),
    ))
}

/// Projection formula shape: pi_!(pi^*(a) . alpha) = a . pi_!(alpha).
pub fn projection_formula_check(
    theory: &SpecializedTheory,
    pb: &ProjectiveBundleContext,
    a: &Series,
    alpha: &Series,
) -> Result<CheckOutcome, RrError> {
    let lifted = pb.lift_base(a);
    let lhs = theory.pushforward(pb, &lifted.mul(alpha)?)?;
    let rhs = a.mul(&theory.pushforward(pb, alpha)?)?;
    Ok(CheckOutcome::from_comparison(
        "projection_formula",
        &lhs.compare(&rhs),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_identity_at_twelve() {
        assert!(verify_geometric_series_identity(12).passed);
        assert!(verify_geometric_series_identity(1).passed);
    }

    #[test]
    fn perturbed_geometric_ratio_fails_at_degree_two() {
        // sum (-x)^i / (1+x)^i = (1+x)/(1+2x) = 1 - x + 2x^2 - ...
        let vars = crate::ring::Vars::new(["x"]);
        let base = Series::zero(CoeffRing::integers(), vars, 8);
        let x = base.var("x").unwrap();
        let one = base.scalar(1);
        let ratio = x
            .neg()
            .mul(&one.add(&x).unwrap().invert_unit().unwrap())
            .unwrap();
        let mut sum = base.clone();
        let mut power = one.clone();
        for _ in 0..=8 {
            sum = sum.add(&power).unwrap();
            power = power.mul(&ratio).unwrap();
        }
        match sum.compare(&one.sub(&x).unwrap()) {
            crate::check::Comparison::DifferAt { degree, .. } => assert_eq!(degree, 2),
            other => panic!("expected difference, got {other:?}"),
        }
    }

    #[test]
    fn multiplicative_pushforward_of_hyperplane_powers_is_one() {
        let theory = SpecializedTheory::multiplicative();
        for r in 1..=4usize {
            let caps = vec![2u32; r];
            let ctx = theory.context(&caps).unwrap();
            let pb = ctx.projective_bundle().unwrap();
            let powers = theory.pushforward_powers(&pb, r).unwrap();
            for (i, p) in powers.iter().enumerate() {
                assert_eq!(p, &ctx.one(), "pi_!(t^{i}) at rank {r}");
            }
        }
    }

    #[test]
    fn additive_pushforward_on_projective_space_extracts_top_power() {
        // P^n over a point: trivial roots, pi_!(t^k) = 1 iff k = n
        let theory = SpecializedTheory::additive();
        let n = 3usize;
        let ctx = theory.context(&vec![0u32; n + 1]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        for k in 0..=n {
            let elem = pb.t().pow(k as u32).unwrap();
            let pushed = theory.pushforward(&pb, &elem).unwrap();
            if k == n {
                assert_eq!(pushed, ctx.one());
            } else {
                assert!(pushed.is_zero(), "pi_!(t^{k}) should vanish");
            }
        }
    }

    #[test]
    fn rank_one_pushforward_substitutes_dual_root() {
        // P(L) = X: pushforward is the identity after t -> e(dual L)
        let theory = SpecializedTheory::additive();
        let ctx = theory.context(&[3]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        for k in 0..3u32 {
            let pushed = theory.pushforward(&pb, &pb.t().pow(k).unwrap()).unwrap();
            let dual = ctx.euler_dual(&ctx.root(1)).unwrap();
            assert_eq!(pushed, dual.pow(k).unwrap());
        }
    }

    #[test]
    fn universal_pushforward_with_table() {
        // with [P^n] = (n+1) b_n the machinery stays exact over Z[b]
        let theory = SpecializedTheory::universal_with_table(4);
        let ctx = theory.context(&[2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let pushed = theory.pushforward(&pb, &pb.one()).unwrap();
        // normalization consistency pins pi_!(1) for a line bundle model
        assert!(pushed.constant_term().is_one());
    }

    #[test]
    fn projection_formula_shape() {
        let theory = SpecializedTheory::multiplicative();
        let ctx = theory.context(&[2, 2]).unwrap();
        let pb = ctx.projective_bundle().unwrap();
        let a = ctx.one().add(&ctx.root(1)).unwrap();
        let alpha = pb.t().add(&pb.one()).unwrap();
        let out = projection_formula_check(&theory, &pb, &a, &alpha).unwrap();
        assert!(out.passed, "{out}");
    }

    #[test]
    fn chern_character_on_line_bundles() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[3]).unwrap();
        // ch([L]) = 1 - inv(x) = 1/(1-x) truncated by the cap
        let ch = line_bundle_class(&ctx, &ctx.root(1)).unwrap();
        let geometric = ctx
            .one()
            .sub(&ctx.root(1))
            .unwrap()
            .invert_unit()
            .unwrap();
        assert_eq!(ch, geometric);
        // trivial bundle of rank n maps to n
        let ctx2 = ChernContext::new(LawKind::Multiplicative, &[0, 0, 0]).unwrap();
        let ch3 = chern_character_multiplicative(&ctx2, &[1, 2, 3]).unwrap();
        assert_eq!(ch3, ctx2.zero().scalar(3));
    }

    #[test]
    fn chern_character_is_multiplicative_on_line_classes() {
        let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).unwrap();
        let tensor = ctx.euler_tensor(&ctx.root(1), &ctx.root(2)).unwrap();
        let lhs = line_bundle_class(&ctx, &tensor).unwrap();
        let rhs = line_bundle_class(&ctx, &ctx.root(1))
            .unwrap()
            .mul(&line_bundle_class(&ctx, &ctx.root(2)).unwrap())
            .unwrap();
        assert!(lhs.compare(&rhs).agrees());
    }

    #[test]
    fn chern_character_rejects_wrong_law() {
        let ctx = ChernContext::new(LawKind::Additive, &[2]).unwrap();
        assert!(matches!(
            chern_character_multiplicative(&ctx, &[1]),
            Err(RrError::WrongLaw(_))
        ));
    }

    #[test]
    fn geom_fgl_checks() {
        let out = geom_fgl_specialization_check(LawKind::Multiplicative, (3, 3)).unwrap();
        assert!(out.passed, "{out}");
        let out = geom_fgl_specialization_check(LawKind::Additive, (3, 3)).unwrap();
        assert!(out.passed, "{out}");
        // degenerate case x2 = 0 via cap 0
        let out = geom_fgl_specialization_check(LawKind::Multiplicative, (3, 0)).unwrap();
        assert!(out.passed, "{out}");
    }

    #[test]
    fn multiplicative_pushforward_normalization_agrees_with_log() {
        let theory = SpecializedTheory::multiplicative();
        let law = FormalGroupLaw::multiplicative(8);
        assert!(theory.normalization_check(&law).passed);
    }
}
