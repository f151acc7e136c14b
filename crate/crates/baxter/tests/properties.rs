//! Randomized invariants of the scalar field and the rewriting engine.
//!
//! The deterministic unit tests pin concrete values; these strategies throw
//! random expressions and random algebra elements at the laws the rest of
//! the crate silently relies on.

use std::collections::BTreeMap;

use num::BigRational;
use proptest::prelude::*;

use baxter::algebra::{gl_presentation, t_gen, FreeElement, Strategy as RewriteStrategy};
use baxter::scalar::{names, parse_expr, CheckMode, SampleConfig, ScalarExpr, Symbol};

fn symbol_pool() -> Vec<Symbol> {
    vec![names::q(), names::lambda(), names::mu(), names::alpha()]
}

fn arb_expr() -> impl Strategy<Value = ScalarExpr> {
    let leaf = prop_oneof![
        (-9i64..=9).prop_map(ScalarExpr::int),
        (0usize..4).prop_map(|i| ScalarExpr::sym(symbol_pool()[i])),
    ];
    // Division is deliberately absent: the laws below are polynomial
    // identities, and inverses get their own targeted property.
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner).prop_map(|(a, b)| &a * &b),
        ]
    })
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn point() -> BTreeMap<Symbol, BigRational> {
    symbol_pool()
        .into_iter()
        .zip([rational(2, 3), rational(-5, 7), rational(3, 2), rational(7, 4)])
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn addition_and_multiplication_commute(a in arb_expr(), b in arb_expr()) {
        prop_assert!(((&a + &b) - (&b + &a)).is_zero_expand());
        prop_assert!(((&a * &b) - (&b * &a)).is_zero_expand());
    }

    #[test]
    fn products_associate_and_distribute(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assert!(((&(&a * &b) * &c) - (&a * &(&b * &c))).is_zero_expand());
        prop_assert!(((&a * &(&b + &c)) - (&(&a * &b) + &(&a * &c))).is_zero_expand());
    }

    #[test]
    fn negation_cancels(a in arb_expr()) {
        prop_assert!((&a - &a).is_zero_expand());
        prop_assert!((&a + &(-&a)).is_zero_expand());
    }

    #[test]
    fn reciprocals_cancel(a in arb_expr()) {
        prop_assume!(!a.is_zero_expand());
        prop_assert!(((&a * &a.pow(-1)) - ScalarExpr::one()).is_zero_expand());
    }

    #[test]
    fn display_and_parse_agree(a in arb_expr()) {
        let reparsed = parse_expr(&a.to_string()).unwrap();
        prop_assert!((&reparsed - &a).is_zero_expand(), "round trip changed {a}");
    }

    #[test]
    fn evaluation_is_a_ring_map(a in arb_expr(), b in arb_expr()) {
        let at = point();
        let (va, vb) = (a.eval(&at).unwrap(), b.eval(&at).unwrap());
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), &va + &vb);
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), &va * &vb);
    }

    #[test]
    fn expansion_zero_implies_sample_zero(a in arb_expr(), b in arb_expr(), seed in 0u64..1000) {
        // (a + b)(a - b) - (a^2 - b^2) vanishes identically; sampling must
        // never contradict the expansion decision.
        let zero = (&(&a + &b) * &(&a - &b)) - (&(&a * &a) - &(&b * &b));
        prop_assert!(zero.is_zero_expand());
        let mode = CheckMode::Sample(SampleConfig::new(5, seed));
        prop_assert!(zero.is_zero(&mode).unwrap());
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in arb_expr(), c in arb_expr()) {
        let target = names::mu();
        let mut images = BTreeMap::new();
        images.insert(target, c.clone());
        let substituted = a.subst(&images).unwrap();
        let mut at = point();
        let direct = substituted.eval(&at).unwrap();
        at.insert(target, c.eval(&at).unwrap());
        prop_assert_eq!(direct, a.eval(&at).unwrap());
    }
}

fn arb_element() -> impl Strategy<Value = FreeElement> {
    let gens: Vec<_> = (1..=2).flat_map(|i| (1..=2).map(move |j| t_gen(i, j))).collect();
    let word = prop::collection::vec(0usize..4, 0..=3)
        .prop_map(move |ids| ids.into_iter().map(|k| gens[k]).collect::<Vec<_>>());
    prop::collection::vec(((-5i64..=5), word), 1..=3).prop_map(|terms| {
        terms.into_iter().fold(FreeElement::zero(), |acc, (c, w)| {
            acc.add(&FreeElement::term(ScalarExpr::int(c), w))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_forms_are_idempotent_and_linear(a in arb_element(), b in arb_element()) {
        let p = gl_presentation(2).unwrap();
        let na = p.normal_form(&a, RewriteStrategy::Leftmost);
        prop_assert_eq!(p.normal_form(&na, RewriteStrategy::Leftmost), na.clone());
        let nb = p.normal_form(&b, RewriteStrategy::Leftmost);
        let nsum = p.normal_form(&a.add(&b), RewriteStrategy::Leftmost);
        prop_assert!(nsum.sub(&na.add(&nb)).is_zero());
    }

    #[test]
    fn rewriting_respects_the_relation_ideal(a in arb_element()) {
        // Multiplying any rule element by a random element on either side
        // stays in the ideal, so it must rewrite to zero.
        let p = gl_presentation(2).unwrap();
        for (_, rule) in p.rule_elements() {
            prop_assert!(p.reduces_to_zero(&rule.mul(&a)));
            prop_assert!(p.reduces_to_zero(&a.mul(&rule)));
        }
    }
}
