//! Batch self-test: runs the invariant suites of every module at
//! profile-dependent sizes and reports one pass/fail line per suite.
//!
//! All randomness is seeded, so two runs with the same profile and seed
//! produce byte-identical reports. The optional mutation hooks inject a
//! deliberate defect (a flipped hyperplane-relation sign, a flipped
//! specialization value, or a flipped Todd coefficient) so that the
//! sensitivity of the suites can be demonstrated end to end.

use crate::check::CheckOutcome;
use crate::chern::ChernContext;
use crate::fgl::{
    specialize_a, universal_fgl, FormalGroupLaw, LawKind, PointBundleTable,
};
use crate::ring::{parse_series, series_from_json, series_to_json, CoeffRing, ExpVec, Series, Vars};
use crate::rr::{
    chern_character_multiplicative, geom_fgl_specialization_check, hrr_with_todd,
    line_bundle_class, projection_formula_check, todd_series, verify_geometric_series_identity,
    SpecializedTheory,
};
use crate::zeta;
use num_bigint::BigInt;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Profile> {
        match s {
            "quick" => Some(Profile::Quick),
            "full" => Some(Profile::Full),
            _ => None,
        }
    }
}

/// Deliberate defects for sensitivity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flip the sign of one hyperplane-relation coefficient d_i (0-based).
    HyperplaneSign(usize),
    /// Flip the multiplicative specialization value a_11: -1 becomes +1.
    SpecializationSign,
    /// Flip the x^2 coefficient of the Todd series.
    ToddX2,
}

impl Mutation {
    pub fn parse(s: &str) -> Option<Mutation> {
        match s {
            "d-sign" => Some(Mutation::HyperplaneSign(0)),
            "a-spec" => Some(Mutation::SpecializationSign),
            "todd-x2" => Some(Mutation::ToddX2),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub cases: u32,
    pub witness: Option<String>,
}

impl SuiteResult {
    fn from_outcomes(name: &str, outcomes: Vec<CheckOutcome>) -> SuiteResult {
        let cases = outcomes.len() as u32;
        let combined = CheckOutcome::all(name, outcomes);
        SuiteResult {
            name: name.to_string(),
            passed: combined.passed,
            cases,
            witness: combined.witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub profile: Profile,
    pub seed: u64,
    pub mutation: Option<Mutation>,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Params {
    profile: Profile,
    seed: u64,
    mutation: Option<Mutation>,
}

impl Params {
    fn degree(&self) -> u32 {
        match self.profile {
            Profile::Quick => 5,
            Profile::Full => 8,
        }
    }

    fn max_rank(&self) -> usize {
        match self.profile {
            Profile::Quick => 2,
            Profile::Full => 3,
        }
    }

    fn random_cases(&self) -> u32 {
        match self.profile {
            Profile::Quick => 200,
            Profile::Full => 1000,
        }
    }
}

type Suite = (&'static str, fn(&Params) -> SuiteResult);

const SUITES: &[Suite] = &[
    ("ring/laws", suite_ring_laws),
    ("ring/invert_unit", suite_ring_invert),
    ("ring/compositional_inverse", suite_ring_compositional),
    ("ring/precision_monotonicity", suite_ring_precision),
    ("ring/canonical_roundtrip", suite_ring_roundtrip),
    ("fgl/axioms", suite_fgl_axioms),
    ("fgl/nseries_additivity", suite_fgl_nseries),
    ("fgl/integrality", suite_fgl_integrality),
    ("fgl/specialization", suite_fgl_specialization),
    ("fgl/normalization", suite_fgl_normalization),
    ("zeta/reassembly", suite_zeta_reassembly),
    ("zeta/single_divisor", suite_zeta_single_divisor),
    ("zeta/splitting", suite_zeta_splitting),
    ("zeta/specialization_commutes", suite_zeta_specialization),
    ("chern/euler", suite_chern_euler),
    ("chern/whitney", suite_chern_whitney),
    ("chern/hyperplane_confluence", suite_chern_confluence),
    ("chern/pbf_structure", suite_chern_pbf_structure),
    ("chern/matrix_inverse", suite_chern_matrix),
    ("chern/recursion", suite_chern_recursion),
    ("chern/coefficient_symmetry", suite_chern_symmetry),
    ("rr/cf_pushforward", suite_rr_cf_push),
    ("rr/projection_formula", suite_rr_projection),
    ("rr/geometric_series", suite_rr_geometric),
    ("rr/chern_character", suite_rr_chern_character),
    ("rr/geom_fgl", suite_rr_geom_fgl),
    ("rr/todd_hrr", suite_rr_todd_hrr),
];

/// Run every suite at the profile's sizes. `threads` > 1 distributes the
/// suites across worker threads; the report order is fixed either way.
pub fn run(
    profile: Profile,
    seed: u64,
    mutation: Option<Mutation>,
    threads: usize,
) -> SelftestReport {
    let params = Params {
        profile,
        seed,
        mutation,
    };
    let mut results: Vec<Option<SuiteResult>> = vec![None; SUITES.len()];
    if threads <= 1 {
        for (i, (_, f)) in SUITES.iter().enumerate() {
            results[i] = Some(f(&params));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<SuiteResult>>> =
            (0..SUITES.len()).map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..threads.min(SUITES.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= SUITES.len() {
                        break;
                    }
                    let out = (SUITES[i].1)(&params);
                    *slots[i].lock().unwrap() = Some(out);
                });
            }
        });
        for (i, slot) in slots.into_iter().enumerate() {
            results[i] = slot.into_inner().unwrap();
        }
    }
    let suites: Vec<SuiteResult> = results.into_iter().map(|r| r.unwrap()).collect();
    let passed = suites.iter().all(|s| s.passed);
    SelftestReport {
        profile,
        seed,
        mutation,
        passed,
        suites,
    }
}

fn rng_for(params: &Params, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt))
}

fn random_series(rng: &mut ChaCha8Rng, template: &Series, max_terms: usize) -> Series {
    let mut out = template.empty_like();
    let width = template.vars().len();
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let mut exps = vec![0u32; width];
        let mut budget = template.precision().min(4);
        for e in exps.iter_mut() {
            let step = rng.gen_range(0..=budget);
            *e = step;
            budget -= step;
        }
        let ring = template.ring().clone();
        let coeff = if ring.gens() > 0 && rng.gen_bool(0.4) {
            let g = rng.gen_range(1..=ring.gens());
            ring.scale(
                &ring.gen(g),
                &num_rational::BigRational::from_integer(rng.gen_range(-4i64..=4).into()),
            )
        } else {
            ring.from_i64(rng.gen_range(-9i64..=9))
        };
        out.insert_term(ExpVec::from_exps(exps), coeff);
    }
    out
}

fn suite_ring_laws(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 1);
    for (salt, ring) in [CoeffRing::integers(), CoeffRing::graded_int_poly(3)]
        .into_iter()
        .enumerate()
    {
        let vars = Vars::new(["x", "y"]);
        let template = Series::zero(ring, vars, params.degree().min(6));
        for case in 0..params.random_cases() / 2 {
            let a = random_series(&mut rng, &template, 4);
            let b = random_series(&mut rng, &template, 4);
            let c = random_series(&mut rng, &template, 4);
            let name = format!("ring{salt} case {case}");
            let assoc_add = a
                .add(&b)
                .and_then(|ab| ab.add(&c))
                .and_then(|lhs| b.add(&c).and_then(|bc| a.add(&bc)).map(|rhs| (lhs, rhs)));
            let (lhs, rhs) = assoc_add.expect("same template");
            if lhs != rhs {
                outcomes.push(CheckOutcome::fail(name.clone(), "add not associative"));
                continue;
            }
            let ab = a.mul(&b).expect("mul");
            let ba = b.mul(&a).expect("mul");
            if ab != ba {
                outcomes.push(CheckOutcome::fail(name.clone(), "mul not commutative"));
                continue;
            }
            let abc1 = ab.mul(&c).expect("mul");
            let abc2 = a.mul(&b.mul(&c).expect("mul")).expect("mul");
            if abc1 != abc2 {
                outcomes.push(CheckOutcome::fail(name.clone(), "mul not associative"));
                continue;
            }
            let dist1 = a.mul(&b.add(&c).expect("add")).expect("mul");
            let dist2 = ab.add(&a.mul(&c).expect("mul")).expect("add");
            if dist1 != dist2 {
                outcomes.push(CheckOutcome::fail(name, "mul does not distribute"));
                continue;
            }
            outcomes.push(CheckOutcome::pass(name));
        }
    }
    SuiteResult::from_outcomes("ring/laws", outcomes)
}

fn suite_ring_invert(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 2);
    let vars = Vars::new(["x", "y"]);
    let template = Series::zero(CoeffRing::integers(), vars, params.degree().min(6));
    let one = template.scalar(1);
    for case in 0..params.random_cases().min(300) {
        let mut u = random_series(&mut rng, &template, 4);
        // force a unit constant term
        u.insert_term(
            ExpVec::zero(2),
            template.ring().sub(&template.ring().from_i64(1), &u.constant_term()),
        );
        let inv = u.invert_unit().expect("unit");
        let prod = u.mul(&inv).expect("mul");
        outcomes.push(CheckOutcome::from_comparison(
            format!("case {case}"),
            &prod.compare(&one),
        ));
    }
    SuiteResult::from_outcomes("ring/invert_unit", outcomes)
}

fn suite_ring_compositional(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 3);
    let vars = Vars::new(["x"]);
    let template = Series::zero(CoeffRing::integers(), vars, params.degree().min(7));
    let x = template.var("x").expect("x");
    for case in 0..params.random_cases().min(120) {
        let mut a = x.clone();
        for d in 2..=template.precision() {
            let c = rng.gen_range(-5i64..=5);
            if c != 0 {
                let mut t = template.empty_like();
                t.insert_term(ExpVec::from_exps(vec![d]), template.ring().from_i64(c));
                a = a.add(&t).expect("add");
            }
        }
        let g = a.compositional_inverse().expect("invertible");
        let mut assign = std::collections::BTreeMap::new();
        assign.insert("x".to_string(), a.clone());
        let ga = g.substitute(&assign).expect("compose");
        let mut assign2 = std::collections::BTreeMap::new();
        assign2.insert("x".to_string(), g.clone());
        let ag = a.substitute(&assign2).expect("compose");
        let ok = ga.compare(&x).agrees() && ag.compare(&x).agrees();
        outcomes.push(if ok {
            CheckOutcome::pass(format!("case {case}"))
        } else {
            CheckOutcome::fail(format!("case {case}"), "composition is not the identity")
        });
    }
    SuiteResult::from_outcomes("ring/compositional_inverse", outcomes)
}

fn suite_ring_precision(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 4);
    let vars = Vars::new(["x", "y"]);
    let template = Series::zero(CoeffRing::graded_int_poly(2), vars, params.degree().min(6));
    for case in 0..params.random_cases().min(300) {
        let a = random_series(&mut rng, &template, 4);
        let b = random_series(&mut rng, &template, 4);
        let n = rng.gen_range(0..=template.precision());
        let full = a.mul(&b).expect("mul").truncate(n);
        let truncated = a.truncate(n).mul(&b.truncate(n)).expect("mul");
        outcomes.push(if full == truncated {
            CheckOutcome::pass(format!("case {case}"))
        } else {
            CheckOutcome::fail(format!("case {case}"), "truncation does not commute")
        });
    }
    SuiteResult::from_outcomes("ring/precision_monotonicity", outcomes)
}

fn suite_ring_roundtrip(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 5);
    let ring = CoeffRing::graded_int_poly(2);
    let vars = Vars::new(["x", "y"]);
    let template = Series::zero_with_caps(
        ring.clone(),
        Arc::clone(&vars),
        params.degree().min(6),
        vec![Some(4), None],
    );
    for case in 0..params.random_cases().min(300) {
        let s = random_series(&mut rng, &template, 5);
        let text = s.to_string();
        let reparsed = parse_series(&text, &ring, &vars, s.precision(), s.caps().to_vec());
        let text_ok = matches!(&reparsed, Ok(p) if p == &s && p.to_string() == text);
        let json = series_to_json(&s);
        let json_ok = matches!(series_from_json(&json), Ok(p) if p == s && series_to_json(&p) == json);
        outcomes.push(if text_ok && json_ok {
            CheckOutcome::pass(format!("case {case}"))
        } else {
            CheckOutcome::fail(format!("case {case}"), format!("round trip broke for {text}"))
        });
    }
    SuiteResult::from_outcomes("ring/canonical_roundtrip", outcomes)
}

fn law_triple(degree: u32) -> Vec<(String, FormalGroupLaw)> {
    vec![
        (
            "add".into(),
            FormalGroupLaw::additive(CoeffRing::integers(), degree),
        ),
        ("mult".into(), FormalGroupLaw::multiplicative(degree)),
        (
            "univ".into(),
            universal_fgl(degree).expect("universal model").law().clone(),
        ),
    ]
}

fn suite_fgl_axioms(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for (name, law) in law_triple(params.degree()) {
        // reconstruction re-checks all axioms eagerly
        match FormalGroupLaw::from_series(law.f().clone()) {
            Ok(_) => outcomes.push(CheckOutcome::pass(name)),
            Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
        }
    }
    SuiteResult::from_outcomes("fgl/axioms", outcomes)
}

fn suite_fgl_nseries(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for (name, law) in law_triple(params.degree()) {
        for m in -4i64..=4 {
            for n in -4i64..=4 {
                let lhs = law.n_series(m + n);
                let rhs = law
                    .plus(&law.n_series(m), &law.n_series(n))
                    .expect("nilpotent");
                outcomes.push(CheckOutcome::from_comparison(
                    format!("{name} [{m}]+[{n}]"),
                    &lhs.compare(&rhs),
                ));
            }
        }
        let inv_inv = law.inverse_of(law.inverse()).expect("nilpotent");
        let x = law.inverse().var(&law.inverse().vars().names()[0]).unwrap();
        outcomes.push(CheckOutcome::from_comparison(
            format!("{name} inv involution"),
            &inv_inv.compare(&x),
        ));
    }
    SuiteResult::from_outcomes("fgl/nseries_additivity", outcomes)
}

fn suite_fgl_integrality(params: &Params) -> SuiteResult {
    let outcome = match universal_fgl(params.degree()) {
        Ok(model) => {
            let mut checks = vec![model.log_linearizes_law()];
            let integral = model.law().f().terms().all(|(_, c)| c.is_integral());
            checks.push(if integral {
                CheckOutcome::pass("coefficients integral")
            } else {
                CheckOutcome::fail("coefficients integral", "denominator survived")
            });
            checks
        }
        Err(e) => vec![CheckOutcome::fail("construction", e.to_string())],
    };
    SuiteResult::from_outcomes("fgl/integrality", outcome)
}

fn suite_fgl_specialization(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let model = universal_fgl(params.degree()).expect("universal model");
    for (name, target) in [
        (
            "additive",
            FormalGroupLaw::additive(CoeffRing::integers(), params.degree()),
        ),
        ("multiplicative", FormalGroupLaw::multiplicative(params.degree())),
    ] {
        match specialize_a(&model, &target) {
            Ok(map) => match map.apply(model.law().f()) {
                Ok(image) => outcomes.push(CheckOutcome::from_comparison(
                    name,
                    &image.compare(target.f()),
                )),
                Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
            },
            Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
        }
    }
    SuiteResult::from_outcomes("fgl/specialization", outcomes)
}

fn suite_fgl_normalization(params: &Params) -> SuiteResult {
    let degree = params.degree();
    let outcomes = vec![
        PointBundleTable::Additive
            .consistent_with_log(&FormalGroupLaw::additive(CoeffRing::integers(), degree)),
        PointBundleTable::Multiplicative
            .consistent_with_log(&FormalGroupLaw::multiplicative(degree)),
        PointBundleTable::Universal
            .consistent_with_log(universal_fgl(degree).expect("model").law()),
    ];
    SuiteResult::from_outcomes("fgl/normalization", outcomes)
}

fn multiplicity_grid(max_rank: usize, max_n: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for r in 1..=max_rank {
        let mut stack = vec![vec![]];
        for _ in 0..r {
            let mut next = Vec::new();
            for prefix in &stack {
                for n in 1..=max_n {
                    let mut v: Vec<i64> = prefix.clone();
                    v.push(n);
                    next.push(v);
                }
            }
            stack = next;
        }
        out.extend(stack);
    }
    out
}

fn suite_zeta_reassembly(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let degree = params.degree();
    for (name, law) in law_triple(degree) {
        for mults in multiplicity_grid(params.max_rank(), 3) {
            let dec = zeta::decompose(&law, &mults, degree).expect("decompose");
            let mut checks = vec![dec.reassembly_check(), dec.support_check()];
            checks.push(CheckOutcome::pass("nonempty"));
            let combined = CheckOutcome::all(format!("{name} {mults:?}"), checks);
            outcomes.push(combined);
        }
    }
    SuiteResult::from_outcomes("zeta/reassembly", outcomes)
}

fn suite_zeta_single_divisor(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for (name, law) in law_triple(params.degree()) {
        for m in 1..=5 {
            let out = zeta::verify_single_divisor_identity(&law, m).expect("check runs");
            outcomes.push(CheckOutcome {
                name: format!("{name} m={m}"),
                passed: out.passed,
                witness: out.witness,
            });
        }
    }
    SuiteResult::from_outcomes("zeta/single_divisor", outcomes)
}

fn suite_zeta_splitting(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let degree = params.degree();
    for (name, law) in law_triple(degree) {
        for mults in multiplicity_grid(params.max_rank(), 2) {
            if mults.len() < 2 {
                continue;
            }
            let out =
                zeta::verify_inductive_splitting(&law, &mults, degree).expect("check runs");
            outcomes.push(CheckOutcome {
                name: format!("{name} {mults:?}"),
                passed: out.passed,
                witness: out.witness,
            });
        }
    }
    SuiteResult::from_outcomes("zeta/splitting", outcomes)
}

fn suite_zeta_specialization(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let degree = params.degree();
    let model = universal_fgl(degree).expect("model");
    for (name, target) in [
        (
            "additive",
            FormalGroupLaw::additive(CoeffRing::integers(), degree),
        ),
        ("multiplicative", FormalGroupLaw::multiplicative(degree)),
    ] {
        let map = specialize_a(&model, &target).expect("specialization");
        for mults in multiplicity_grid(params.max_rank().min(2), 3) {
            let out = zeta::specialization_commutes(&model, &target, &map, &mults, degree)
                .expect("check runs");
            outcomes.push(CheckOutcome {
                name: format!("{name} {mults:?}"),
                passed: out.passed,
                witness: out.witness,
            });
        }
    }
    SuiteResult::from_outcomes("zeta/specialization_commutes", outcomes)
}

fn chern_kinds(params: &Params) -> Vec<LawKind> {
    vec![
        LawKind::Additive,
        LawKind::Multiplicative,
        LawKind::Universal(if params.profile == Profile::Quick { 4 } else { 6 }),
    ]
}

fn suite_chern_euler(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for kind in chern_kinds(params) {
        let caps = vec![2u32; params.max_rank().max(2)];
        let ctx = ChernContext::new(kind, &caps).expect("context");
        let a = ctx.root(1);
        let b = ctx.root(2);
        let unital = ctx.euler_tensor(&a, &ctx.zero()).expect("tensor");
        outcomes.push(CheckOutcome::from_comparison(
            format!("{} unital", kind.label()),
            &unital.compare(&a),
        ));
        let ab = ctx.euler_tensor(&a, &b).expect("tensor");
        let ba = ctx.euler_tensor(&b, &a).expect("tensor");
        outcomes.push(CheckOutcome::from_comparison(
            format!("{} commutative", kind.label()),
            &ab.compare(&ba),
        ));
        let dual = ctx.euler_dual(&a).expect("dual");
        let cancel = ctx.euler_tensor(&a, &dual).expect("tensor");
        outcomes.push(if cancel.is_zero() {
            CheckOutcome::pass(format!("{} dual cancels", kind.label()))
        } else {
            CheckOutcome::fail(
                format!("{} dual cancels", kind.label()),
                cancel.to_string(),
            )
        });
    }
    SuiteResult::from_outcomes("chern/euler", outcomes)
}

fn suite_chern_whitney(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let rank = if params.profile == Profile::Quick { 2 } else { 4 };
    for kind in chern_kinds(params) {
        let caps = vec![2u32; rank];
        let ctx = ChernContext::new(kind, &caps).expect("context");
        for split in 1..rank {
            let first: Vec<usize> = (1..=split).collect();
            let second: Vec<usize> = (split + 1..=rank).collect();
            let out = ctx.whitney_check(&first, &second);
            outcomes.push(CheckOutcome {
                name: format!("{} split {split}", kind.label()),
                passed: out.passed,
                witness: out.witness,
            });
        }
        let all: Vec<usize> = (1..=rank).collect();
        let out = ctx.normalization_check(&all);
        outcomes.push(CheckOutcome {
            name: format!("{} top class", kind.label()),
            passed: out.passed,
            witness: out.witness,
        });
    }
    SuiteResult::from_outcomes("chern/whitney", outcomes)
}

fn suite_chern_confluence(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 6);
    let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).expect("context");
    let pb = ctx.projective_bundle().expect("pb");
    let template = pb.zero();
    for case in 0..params.random_cases().min(100) {
        let s = random_series(&mut rng, &template, 6);
        let once = pb.reduce(&s);
        let twice = pb.reduce(&once);
        outcomes.push(if once == twice {
            CheckOutcome::pass(format!("case {case}"))
        } else {
            CheckOutcome::fail(format!("case {case}"), "reduction is not idempotent")
        });
        // normal-form coefficients reproduce the element
        let nf = pb.normal_form(&s);
        let rebuilt = pb.from_normal_form(&nf);
        let diff = pb.reduce(&s).compare(&rebuilt);
        outcomes.push(CheckOutcome::from_comparison(
            format!("case {case} normal form"),
            &diff,
        ));
    }
    SuiteResult::from_outcomes("chern/hyperplane_confluence", outcomes)
}

fn pbf_grid(params: &Params) -> Vec<Vec<u32>> {
    let max_rank = params.max_rank();
    let cap = if params.profile == Profile::Quick { 2 } else { 3 };
    (1..=max_rank).map(|r| vec![cap; r]).collect()
}

fn suite_chern_pbf_structure(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for kind in chern_kinds(params) {
        for caps in pbf_grid(params) {
            let ctx = ChernContext::new(kind, &caps).expect("context");
            let pb = ctx.projective_bundle().expect("pb");
            let rank = ctx.rank();
            let u = pb
                .fundamental_coefficients(2 * rank + 1)
                .expect("coefficients");
            let out = u.structure_check(rank);
            outcomes.push(CheckOutcome {
                name: format!("{} r={rank}", kind.label()),
                passed: out.passed,
                witness: out.witness,
            });
        }
    }
    SuiteResult::from_outcomes("chern/pbf_structure", outcomes)
}

fn suite_chern_matrix(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for kind in chern_kinds(params) {
        for caps in pbf_grid(params) {
            let ctx = ChernContext::new(kind, &caps).expect("context");
            let pb = ctx.projective_bundle().expect("pb");
            let name = format!("{} r={}", kind.label(), ctx.rank());
            match pb.coefficient_matrix() {
                Ok(a) => match a.invert(&ctx) {
                    Ok(inv) => {
                        let ok =
                            a.mul(&inv).is_identity(&ctx) && inv.mul(&a).is_identity(&ctx);
                        outcomes.push(if ok {
                            CheckOutcome::pass(name)
                        } else {
                            CheckOutcome::fail(name, "A * inv(A) differs from the identity")
                        });
                    }
                    Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
                },
                Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
            }
        }
    }
    SuiteResult::from_outcomes("chern/matrix_inverse", outcomes)
}

fn suite_chern_recursion(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for kind in chern_kinds(params) {
        for caps in pbf_grid(params) {
            let ctx = ChernContext::new(kind, &caps).expect("context");
            let pb = ctx.projective_bundle().expect("pb");
            let name = format!("{} r={}", kind.label(), ctx.rank());
            let result = match params.mutation {
                Some(Mutation::HyperplaneSign(i)) => {
                    let mut d = pb.relation_coefficients().to_vec();
                    let idx = i.min(d.len() - 1);
                    d[idx] = d[idx].neg();
                    pb.recursion_check_with(3, &d)
                }
                _ => pb.recursion_check(3),
            };
            match result {
                Ok(out) => outcomes.push(CheckOutcome {
                    name,
                    passed: out.passed,
                    witness: out.witness,
                }),
                Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
            }
        }
    }
    SuiteResult::from_outcomes("chern/recursion", outcomes)
}

fn suite_chern_symmetry(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    for kind in chern_kinds(params) {
        let r = params.max_rank().min(2).max(2);
        let caps = vec![2u32; r];
        let ctx = ChernContext::new(kind, &caps).expect("context");
        let pb = ctx.projective_bundle().expect("pb");
        let u = pb.fundamental_coefficients(2 * r).expect("coefficients");
        let mut ok = true;
        let mut witness = None;
        for (i, entry) in u.entries().iter().enumerate() {
            let swapped = entry.permute_vars(&[1, 0]);
            if entry != &swapped {
                ok = false;
                witness = Some(format!("u_{i} is not symmetric"));
                break;
            }
        }
        outcomes.push(CheckOutcome {
            name: kind.label(),
            passed: ok,
            witness,
        });
    }
    SuiteResult::from_outcomes("chern/coefficient_symmetry", outcomes)
}

fn mutated_multiplicative_law(precision: u32) -> FormalGroupLaw {
    // flipping the specialization value a_11 from -1 to +1 turns the law
    // into x + y + xy; still a lawful formal group, but the Conner-Floyd
    // pushforward values change
    let vars = Vars::new(["x", "y"]);
    let s = Series::zero(CoeffRing::integers(), vars, precision);
    let x = s.var("x").unwrap();
    let y = s.var("y").unwrap();
    let f = x.add(&y).unwrap().add(&x.mul(&y).unwrap()).unwrap();
    FormalGroupLaw::from_series(f).expect("lawful")
}

fn suite_rr_cf_push(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let theory = SpecializedTheory::multiplicative();
    let max_rank = if params.profile == Profile::Quick { 2 } else { 4 };
    for r in 1..=max_rank {
        let caps = vec![2u32.min(3); r];
        let ctx = match params.mutation {
            Some(Mutation::SpecializationSign) => {
                let precision = ChernContext::working_precision(&caps);
                ChernContext::from_law(mutated_multiplicative_law(precision), &caps)
                    .expect("context")
            }
            _ => theory.context(&caps).expect("context"),
        };
        let pb = ctx.projective_bundle().expect("pb");
        match theory.pushforward_powers(&pb, r) {
            Ok(powers) => {
                for (i, p) in powers.iter().enumerate() {
                    outcomes.push(CheckOutcome::from_comparison(
                        format!("pi_!(t^{i}) r={r}"),
                        &p.compare(&ctx.one()),
                    ));
                }
            }
            Err(e) => outcomes.push(CheckOutcome::fail(format!("rank {r}"), e.to_string())),
        }
    }
    SuiteResult::from_outcomes("rr/cf_pushforward", outcomes)
}

fn suite_rr_projection(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let mut rng = rng_for(params, 7);
    let theory = SpecializedTheory::multiplicative();
    let ctx = theory.context(&[2, 2]).expect("context");
    let pb = ctx.projective_bundle().expect("pb");
    let base_template = ctx.zero();
    let pb_template = pb.zero();
    for case in 0..params.random_cases().min(40) {
        let a = random_series(&mut rng, &base_template, 3);
        let alpha = random_series(&mut rng, &pb_template, 4);
        match projection_formula_check(&theory, &pb, &a, &alpha) {
            Ok(out) => outcomes.push(CheckOutcome {
                name: format!("case {case}"),
                passed: out.passed,
                witness: out.witness,
            }),
            Err(e) => outcomes.push(CheckOutcome::fail(format!("case {case}"), e.to_string())),
        }
    }
    SuiteResult::from_outcomes("rr/projection_formula", outcomes)
}

fn suite_rr_geometric(_params: &Params) -> SuiteResult {
    let out = verify_geometric_series_identity(12);
    SuiteResult::from_outcomes(
        "rr/geometric_series",
        vec![CheckOutcome {
            name: "precision 12".into(),
            passed: out.passed,
            witness: out.witness,
        }],
    )
}

fn suite_rr_chern_character(_params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let ctx = ChernContext::new(LawKind::Multiplicative, &[2, 2]).expect("context");
    let tensor = ctx
        .euler_tensor(&ctx.root(1), &ctx.root(2))
        .expect("tensor");
    let lhs = line_bundle_class(&ctx, &tensor).expect("class");
    let rhs = line_bundle_class(&ctx, &ctx.root(1))
        .expect("class")
        .mul(&line_bundle_class(&ctx, &ctx.root(2)).expect("class"))
        .expect("mul");
    outcomes.push(CheckOutcome::from_comparison(
        "multiplicativity",
        &lhs.compare(&rhs),
    ));
    let trivial = ChernContext::new(LawKind::Multiplicative, &[0, 0]).expect("context");
    let ch = chern_character_multiplicative(&trivial, &[1, 2]).expect("character");
    outcomes.push(CheckOutcome::from_comparison(
        "rank of trivial bundle",
        &ch.compare(&trivial.zero().scalar(2)),
    ));
    SuiteResult::from_outcomes("rr/chern_character", outcomes)
}

fn suite_rr_geom_fgl(_params: &Params) -> SuiteResult {
    let outcomes = vec![
        {
            let out = geom_fgl_specialization_check(LawKind::Multiplicative, (3, 3))
                .expect("check runs");
            CheckOutcome {
                name: "multiplicative".into(),
                passed: out.passed,
                witness: out.witness,
            }
        },
        {
            let out =
                geom_fgl_specialization_check(LawKind::Additive, (3, 3)).expect("check runs");
            CheckOutcome {
                name: "additive".into(),
                passed: out.passed,
                witness: out.witness,
            }
        },
    ];
    SuiteResult::from_outcomes("rr/geom_fgl", outcomes)
}

fn suite_rr_todd_hrr(params: &Params) -> SuiteResult {
    let mut outcomes = Vec::new();
    let max_n = if params.profile == Profile::Quick { 3 } else { 4 };
    let mut todd = todd_series(max_n.max(1));
    if params.mutation == Some(Mutation::ToddX2) {
        let mut mutated = todd.empty_like();
        for (e, c) in todd.terms() {
            let v = if e.exps()[0] == 2 {
                todd.ring().neg(c)
            } else {
                c.clone()
            };
            mutated.insert_term(e.clone(), v);
        }
        todd = mutated;
    }
    for n in 0..=max_n {
        for d in 0..=5u32 {
            let name = format!("chi(P^{n}, O({d}))");
            let expected = binomial(BigInt::from(n + d), BigInt::from(n));
            match hrr_with_todd(&todd, n, d) {
                Ok(v) if v == expected => outcomes.push(CheckOutcome::pass(name)),
                Ok(v) => outcomes.push(CheckOutcome::fail(
                    name,
                    format!("got {v}, binomial oracle says {expected}"),
                )),
                Err(e) => outcomes.push(CheckOutcome::fail(name, e.to_string())),
            }
        }
    }
    SuiteResult::from_outcomes("rr/todd_hrr", outcomes)
}
