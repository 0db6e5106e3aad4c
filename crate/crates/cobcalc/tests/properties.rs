//! Property tests for the ring layer and decomposition invariants.

use cobcalc::fgl::FormalGroupLaw;
use cobcalc::ring::{parse_series, series_from_json, series_to_json, CoeffRing, ExpVec, Series, Vars};
use cobcalc::zeta;
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

const PRECISION: u32 = 6;

#[derive(Clone, Copy, Debug)]
enum RingChoice {
    Integers,
    GradedPoly,
}

fn make_ring(choice: RingChoice) -> CoeffRing {
    match choice {
        RingChoice::Integers => CoeffRing::integers(),
        RingChoice::GradedPoly => CoeffRing::graded_int_poly(3),
    }
}

fn series_from_parts(
    choice: RingChoice,
    parts: &[(u32, u32, i64, u8)],
) -> Series {
    let ring = make_ring(choice);
    let vars = Vars::new(["x", "y"]);
    let mut s = Series::zero(ring.clone(), vars, PRECISION);
    for &(ex, ey, c, gen_pick) in parts {
        let mut coeff = ring.from_i64(c);
        if ring.gens() > 0 && gen_pick > 0 {
            let g = (gen_pick as usize - 1) % ring.gens() + 1;
            coeff = ring.mul(&coeff, &ring.gen(g));
        }
        s.insert_term(ExpVec::from_exps(vec![ex % 4, ey % 4]), coeff);
    }
    s
}

fn arb_parts() -> impl Strategy<Value = Vec<(u32, u32, i64, u8)>> {
    prop::collection::vec((0u32..4, 0u32..4, -9i64..=9, 0u8..4), 0..6)
}

fn arb_ring() -> impl Strategy<Value = RingChoice> {
    prop_oneof![Just(RingChoice::Integers), Just(RingChoice::GradedPoly)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws_hold_exactly(
        ring in arb_ring(),
        pa in arb_parts(),
        pb in arb_parts(),
        pc in arb_parts(),
    ) {
        let a = series_from_parts(ring, &pa);
        let b = series_from_parts(ring, &pb);
        let c = series_from_parts(ring, &pc);
        // additive group
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        // multiplicative monoid
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        // distributivity
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }
}

proptest! {
    #[test]
    fn unit_series_invert(parts in arb_parts()) {
        let mut u = series_from_parts(RingChoice::Integers, &parts);
        let ring = u.ring().clone();
        // force the constant term to 1
        u.insert_term(
            ExpVec::zero(2),
            ring.sub(&ring.from_i64(1), &u.constant_term()),
        );
        let inv = u.invert_unit().unwrap();
        let one = u.empty_like().scalar(1);
        prop_assert!(u.mul(&inv).unwrap().compare(&one).agrees());
    }

    #[test]
    fn compositional_inverse_two_sided(coeffs in prop::collection::vec(-5i64..=5, 0..6)) {
        let ring = CoeffRing::integers();
        let vars = Vars::new(["x"]);
        let base = Series::zero(ring.clone(), vars, 7);
        let x = base.var("x").unwrap();
        let mut a = x.clone();
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut t = base.empty_like();
                t.insert_term(ExpVec::from_exps(vec![i as u32 + 2]), ring.from_i64(c));
                a = a.add(&t).unwrap();
            }
        }
        let g = a.compositional_inverse().unwrap();
        let mut via_a = BTreeMap::new();
        via_a.insert("x".to_string(), a.clone());
        let mut via_g = BTreeMap::new();
        via_g.insert("x".to_string(), g.clone());
        prop_assert!(g.substitute(&via_a).unwrap().compare(&x).agrees());
        prop_assert!(a.substitute(&via_g).unwrap().compare(&x).agrees());
    }

    #[test]
    fn truncation_commutes_with_arithmetic(
        ring in arb_ring(),
        pa in arb_parts(),
        pb in arb_parts(),
        n in 0u32..=PRECISION,
    ) {
        let a = series_from_parts(ring, &pa);
        let b = series_from_parts(ring, &pb);
        prop_assert_eq!(
            a.mul(&b).unwrap().truncate(n),
            a.truncate(n).mul(&b.truncate(n)).unwrap()
        );
        prop_assert_eq!(
            a.add(&b).unwrap().truncate(n),
            a.truncate(n).add(&b.truncate(n)).unwrap()
        );
    }

    #[test]
    fn canonical_form_round_trips_byte_for_byte(
        ring in arb_ring(),
        parts in arb_parts(),
    ) {
        let s = series_from_parts(ring, &parts);
        let text = s.to_string();
        let vars = Arc::clone(s.vars());
        let reparsed = parse_series(&text, s.ring(), &vars, s.precision(), s.caps().to_vec()).unwrap();
        prop_assert_eq!(&reparsed, &s);
        prop_assert_eq!(reparsed.to_string(), text);

        let json = series_to_json(&s);
        let back = series_from_json(&json).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(series_to_json(&back), json);
    }

    #[test]
    fn decomposition_is_the_unique_solution(
        n1 in 1i64..=3,
        n2 in 1i64..=3,
        mask in 1u32..4,
        ex in 0u32..3,
        ey in 0u32..3,
    ) {
        // perturbing any component by a legal monomial breaks reassembly
        let law = FormalGroupLaw::multiplicative(6);
        let dec = zeta::decompose(&law, &[n1, n2], 6).unwrap();
        prop_assert!(dec.reassembly_check().passed);
        let perturbed = {
            let comp = dec.component(mask);
            // keep the monomial inside the subset's variable support
            let exps = match mask {
                0b01 => vec![ex, 0],
                0b10 => vec![0, ey],
                _ => vec![ex, ey],
            };
            let mut bump = comp.empty_like();
            bump.insert_term(ExpVec::from_exps(exps), comp.ring().from_i64(1));
            comp.add(&bump).unwrap()
        };
        let broken = dec.with_component(mask, perturbed);
        prop_assert!(!broken.reassembly_check().passed);
    }
}
