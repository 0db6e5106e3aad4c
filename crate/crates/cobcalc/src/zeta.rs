//! Subset-indexed decomposition of formal sums.
//!
//! The formal sum S = [n_1]x_1 +_F ... +_F [n_r]x_r has a unique expression
//! sum_I x^I F_I where I ranges over subsets of {1..r}, x^I is the product
//! of the variables indexed by I, and F_I involves only those variables.
//! Concretely F_I collects exactly the monomials of S whose variable support
//! equals I, divided by x^I; the empty component is always zero.
//!
//! Subsets are indexed by bitmasks with i = 1 as the lowest bit, iterated in
//! increasing order, and r is capped at 16.

use crate::check::CheckOutcome;
use crate::fgl::{FglError, FormalGroupLaw, LazardModel, SpecializationMap, SpecializeError};
use crate::ring::{ExpVec, Series, SeriesError, Vars};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

pub const MAX_DIVISORS: usize = 16;

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("multiplicities must be positive, got {0}")]
    NonPositiveMultiplicity(i64),
    #[error("at most {MAX_DIVISORS} divisors are supported, got {0}")]
    TooManyDivisors(usize),
    #[error("requested precision {requested} exceeds the law precision {law}")]
    PrecisionExceedsLaw { requested: u32, law: u32 },
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Specialize(#[from] SpecializeError),
}

/// The components F_I of a formal sum, keyed by subset bitmask.
#[derive(Clone, Debug)]
pub struct SubsetDecomposition {
    multiplicities: Vec<i64>,
    vars: Arc<Vars>,
    precision: u32,
    sum: Series,
    components: BTreeMap<u32, Series>,
}

/// Variable names x1..xr shared by all decompositions of r divisors.
pub fn divisor_vars(r: usize) -> Arc<Vars> {
    Vars::new((1..=r).map(|i| format!("x{i}")))
}

pub fn subset_label(mask: u32) -> String {
    let members: Vec<String> = (0..MAX_DIVISORS)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

impl SubsetDecomposition {
    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The formal sum the decomposition was computed from.
    pub fn formal_sum(&self) -> &Series {
        &self.sum
    }

    pub fn rank(&self) -> usize {
        self.multiplicities.len()
    }

    /// F_I for the subset given by `mask`; the empty subset gives 0.
    pub fn component(&self, mask: u32) -> Series {
        self.components
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| self.sum.empty_like())
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &Series)> {
        self.components.iter().map(|(m, s)| (*m, s))
    }

    /// Copy of the decomposition with one component replaced. The result
    /// will generally fail the reassembly check; uniqueness experiments
    /// rely on that.
    pub fn with_component(&self, mask: u32, series: Series) -> SubsetDecomposition {
        let mut out = self.clone();
        out.components.insert(mask, series);
        out
    }

    /// Rebuild sum_I x^I F_I term by term and compare with the formal sum.
    pub fn reassembly_check(&self) -> CheckOutcome {
        let mut rebuilt = self.sum.empty_like();
        for (mask, series) in &self.components {
            for (e, c) in series.terms() {
                let mut exps = e.exps().to_vec();
                for i in 0..self.rank() {
                    if mask & (1 << i) != 0 {
                        exps[i] += 1;
                    }
                }
                rebuilt.insert_term(ExpVec::from_exps(exps), c.clone());
            }
        }
        CheckOutcome::from_comparison("zeta_reassembly", &rebuilt.compare(&self.sum))
    }

    /// Every monomial of F_I must be supported inside I.
    pub fn support_check(&self) -> CheckOutcome {
        for (mask, series) in &self.components {
            for (e, _) in series.terms() {
                if e.support_mask() & !mask != 0 {
                    return CheckOutcome::fail(
                        "zeta_support",
                        format!(
                            "component {} contains monomial {} outside its subset",
                            subset_label(*mask),
                            series.monomial_string(e)
                        ),
                    );
                }
            }
        }
        CheckOutcome::pass("zeta_support")
    }
}

/// Decompose [n_1]x_1 +_F ... +_F [n_r]x_r by variable support.
pub fn decompose(
    law: &FormalGroupLaw,
    multiplicities: &[i64],
    precision: u32,
) -> Result<SubsetDecomposition, ZetaError> {
    for &n in multiplicities {
        if n < 1 {
            return Err(ZetaError::NonPositiveMultiplicity(n));
        }
    }
    let r = multiplicities.len();
    if r > MAX_DIVISORS {
        return Err(ZetaError::TooManyDivisors(r));
    }
    if precision > law.precision() {
        return Err(ZetaError::PrecisionExceedsLaw {
            requested: precision,
            law: law.precision(),
        });
    }
    let vars = divisor_vars(r);
    let template = Series::zero(law.ring().clone(), Arc::clone(&vars), precision);
    let mut parts = Vec::with_capacity(r);
    for (i, &n) in multiplicities.iter().enumerate() {
        let nx = law.n_series(n).truncate(precision);
        let mut assign = BTreeMap::new();
        assign.insert(
            nx.vars().names()[0].clone(),
            template.var(&format!("x{}", i + 1))?,
        );
        parts.push(nx.substitute(&assign)?);
    }
    let sum = if parts.is_empty() {
        template.clone()
    } else {
        law.formal_sum(&parts)?
    };

    let mut components: BTreeMap<u32, Series> = BTreeMap::new();
    for (e, c) in sum.terms() {
        let mask = e.support_mask();
        if mask == 0 {
            continue; // the formal sum has no constant term
        }
        let mut exps = e.exps().to_vec();
        for i in 0..r {
            if mask & (1 << i) != 0 {
                exps[i] -= 1;
            }
        }
        let entry = components.entry(mask).or_insert_with(|| {
            // terms of S up to `precision` determine F_I up to
            // precision - |I|
            template
                .empty_like()
                .truncate(precision.saturating_sub(mask.count_ones()))
        });
        entry.insert_term(ExpVec::from_exps(exps), c.clone());
    }
    // materialize zero components so callers see the full subset map
    for mask in 1..(1u32 << r) {
        components.entry(mask).or_insert_with(|| {
            template
                .empty_like()
                .truncate(precision.saturating_sub(mask.count_ones()))
        });
    }

    Ok(SubsetDecomposition {
        multiplicities: multiplicities.to_vec(),
        vars,
        precision,
        sum,
        components,
    })
}

/// x F_{1}^m(x) = [m]_F x for a single divisor of multiplicity m.
pub fn verify_single_divisor_identity(
    law: &FormalGroupLaw,
    m: i64,
) -> Result<CheckOutcome, ZetaError> {
    let name = format!("single_divisor(m={m})");
    let dec = decompose(law, &[m], law.precision())?;
    let f1 = dec.component(1);
    let x = f1.var("x1")?;
    let lhs = x.mul(&f1)?;
    let mseries = law.n_series(m);
    let mut assign = BTreeMap::new();
    assign.insert(mseries.vars().names()[0].clone(), x.clone());
    let rhs = mseries.substitute(&assign)?;
    Ok(CheckOutcome::from_comparison(name, &lhs.compare(&rhs)))
}

/// The splitting recurrence behind the inductive construction: restricting
/// the decomposition of (n_1, ..., n_r) to subsets avoiding 1 recovers the
/// decomposition of (n_2, ..., n_r), and the full formal sum reassembles as
/// F([n_1]x_1, S') with S' the formal sum of the remaining divisors.
pub fn verify_inductive_splitting(
    law: &FormalGroupLaw,
    multiplicities: &[i64],
    precision: u32,
) -> Result<CheckOutcome, ZetaError> {
    let name = format!("inductive_splitting({multiplicities:?})");
    let r = multiplicities.len();
    assert!(r >= 2, "splitting needs at least two divisors");
    let full = decompose(law, multiplicities, precision)?;
    let tail = decompose(law, &multiplicities[1..], precision)?;

    let mut checks = Vec::new();

    // shift a tail series (in x1..x_{r-1}) to full variables x2..xr
    let shift = |series: &Series, template: &Series| -> Series {
        let mut out = template.empty_like().truncate(series.precision());
        for (e, c) in series.terms() {
            let mut exps = vec![0u32; r];
            for (i, &ei) in e.exps().iter().enumerate() {
                exps[i + 1] = ei;
            }
            out.insert_term(ExpVec::from_exps(exps), c.clone());
        }
        out
    };

    for (mask_tail, series_tail) in tail.components() {
        let mask_full = mask_tail << 1;
        let renamed = shift(series_tail, full.formal_sum());
        let cmp = full.component(mask_full).compare(&renamed);
        checks.push(CheckOutcome::from_comparison(
            format!("restriction {}", subset_label(mask_full)),
            &cmp,
        ));
    }

    let x1 = full.formal_sum().var("x1")?;
    let n1 = law.n_series(multiplicities[0]).truncate(precision);
    let mut assign = BTreeMap::new();
    assign.insert(n1.vars().names()[0].clone(), x1);
    let n1x1 = n1.substitute(&assign)?;
    let tail_sum = shift(tail.formal_sum(), full.formal_sum()).truncate(precision);
    let rebuilt = law.plus(&n1x1, &tail_sum)?;
    checks.push(CheckOutcome::from_comparison(
        "reconstruction",
        &rebuilt.compare(full.formal_sum()),
    ));

    Ok(CheckOutcome::all(name, checks))
}

/// Decompose over the universal law, specialize coefficientwise, and compare
/// against decomposing directly over the target law.
pub fn specialization_commutes(
    model: &LazardModel,
    target: &FormalGroupLaw,
    map: &SpecializationMap,
    multiplicities: &[i64],
    precision: u32,
) -> Result<CheckOutcome, ZetaError> {
    let name = format!("specialization_commutes({multiplicities:?})");
    let over_model = decompose(model.law(), multiplicities, precision)?;
    let over_target = decompose(target, multiplicities, precision)?;
    let mut checks = Vec::new();
    for (mask, series) in over_model.components() {
        let specialized = map.apply(series)?;
        let cmp = specialized.compare(&over_target.component(mask));
        checks.push(CheckOutcome::from_comparison(subset_label(mask), &cmp));
    }
    Ok(CheckOutcome::all(name, checks))
}
