use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use selfless_core::algebra::AlgebraElement;
use selfless_core::norms::gram;
use selfless_core::selfless::{
    check_injectivity, fiber_statistics, growth_profile, RetractionFamily, Substitution,
};
use selfless_core::words::{GroupContext, Word};
use selfless_core::Budget;

fn ctx() -> Arc<GroupContext> {
    Arc::new(GroupContext::parse("x|y|a").unwrap())
}

fn family(g: &str) -> RetractionFamily {
    let c = ctx();
    let g = c.parse_word(g).unwrap();
    RetractionFamily::new(c, g, 1, 2).unwrap()
}

fn ball(r: usize) -> Vec<Word> {
    ctx().enumerate_ball(r, &Budget::default()).unwrap().collect()
}

#[test]
fn homomorphism_law_on_ball_pairs() {
    let ret = family("x").member(2);
    let b3 = ball(3);
    for u in &b3 {
        let fu = ret.apply_word(u);
        for v in &b3 {
            assert_eq!(ret.apply_word(&(u * v)), &fu * &ret.apply_word(v));
        }
    }
}

#[test]
fn retraction_fixes_the_complement() {
    let ret = family("x^2").member(3);
    let sub = GroupContext::parse("x|y").unwrap();
    for w in sub.enumerate_ball(4, &Budget::default()).unwrap() {
        assert!(ret.fixes(&w));
        assert_eq!(ret.apply_word(&w), w);
    }
}

/// Injectivity by a naive map from images to preimages.
fn naive_injective(sub: &Substitution, r: usize) -> bool {
    let mut seen: HashMap<Word, Word> = HashMap::new();
    ball(r)
        .into_iter()
        .all(|w| seen.insert(sub.apply_word(&w), w).is_none())
}

#[test]
fn injectivity_agrees_with_naive_scan() {
    let c = ctx();
    for n in 0..=3u64 {
        for r in 1..=3usize {
            let ret = family("x").member(n);
            let report = check_injectivity(ret.substitution(), r, &Budget::default()).unwrap();
            assert_eq!(report.injective(), naive_injective(ret.substitution(), r), "n={n} r={r}");
            assert_eq!(report.injective(), report.max_fiber == 1);
            assert_eq!(report.injective(), report.collisions.is_empty());
        }
    }
    for map in ["a=x", "a=e", "a=y.x.y^-1", "x=y"] {
        let sub = Substitution::parse(c.clone(), map).unwrap();
        let report = check_injectivity(&sub, 2, &Budget::default()).unwrap();
        assert!(!report.injective(), "{map}");
        for (u, v) in &report.collisions {
            assert_ne!(u, v);
            assert_eq!(sub.apply_word(u), sub.apply_word(v));
        }
        let fibers = fiber_statistics(&sub, 2, &Budget::default()).unwrap();
        assert_eq!(fibers.max_fiber, report.max_fiber);
        let total: usize = fibers.histogram.iter().map(|(size, count)| size * count).sum();
        assert_eq!(total, fibers.ball_size);
    }
}

#[test]
fn retractions_are_injective_on_their_balls() {
    for n in 1..=5usize {
        let ret = family("x").member(n as u64);
        let report = check_injectivity(ret.substitution(), n, &Budget::default()).unwrap();
        assert!(report.injective(), "n = {n}");
    }
}

#[test]
fn growth_matches_image_of_letter_envelope() {
    let p = growth_profile(&family("x"), 6, &Budget::default()).unwrap();
    let f: Vec<usize> = p.points.iter().map(|q| q.f_measured).collect();
    assert_eq!(f, vec![7, 12, 31, 40, 71, 84]);
    assert!(p.nondecreasing() && p.within_envelope());
    assert!(p.root_strictly_decreasing_from(2));
}

fn normalized(coeffs: &[i64], words: &[Word]) -> AlgebraElement {
    let total: i64 = coeffs.iter().map(|c| c.abs()).sum();
    AlgebraElement::from_terms(
        ctx(),
        words
            .iter()
            .cloned()
            .zip(coeffs.iter().map(|&c| BigRational::new(c.into(), total.into()))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn l1_contracts_and_injective_supports_preserve_norms(
        coeffs in prop::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 7),
    ) {
        let words = ball(1);
        let z = normalized(&coeffs, &words);
        prop_assert_eq!(z.l1(), BigRational::from_integer(1.into()));
        let b = Budget::default();
        let ret = family("x").member(2);
        let img = ret.apply_element(&z).unwrap();
        prop_assert_eq!(img.l1(), z.l1());
        prop_assert_eq!(img.l2_squared(), z.l2_squared());
        let zz = gram(&z, &b).unwrap();
        let ii = gram(&img, &b).unwrap();
        prop_assert_eq!(ii.l2_squared(), zz.l2_squared());

        let collapse = Substitution::parse(ctx(), "a=x").unwrap();
        let squashed = collapse.apply_element(&z).unwrap();
        prop_assert!(squashed.l1() <= z.l1());
    }
}
