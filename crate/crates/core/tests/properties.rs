use std::collections::HashSet;

use ivt_core::engine::{apply_digits, hops_to_zero};
use ivt_core::padic::{digit_count, to_digits};
use ivt_core::preimage::is_exactly_p_hops;
use ivt_core::routing::{simulate, CacheTable};
use ivt_core::rule::{all_rules, bijective_collatz_rules};
use ivt_core::topology::{canonical_form, export_dot, export_json, import_json};
use ivt_core::{apply, build_network, phi, BigUint, DesignParams, NetworkDesign, Radix, RuleTable, Scenario};
use proptest::prelude::*;

fn radix(p: u32) -> Radix {
    Radix::new(p).unwrap()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn gamma_rules(p: u32) -> Vec<RuleTable> {
    bijective_collatz_rules(radix(p)).unwrap()
}

/// A rule of Γ^{p,1} for p in 2..=5, chosen by index into the enumeration.
fn gamma_rule() -> impl Strategy<Value = RuleTable> {
    (2u32..=5, any::<prop::sample::Index>()).prop_map(|(p, i)| {
        let rules = gamma_rules(p);
        rules[i.index(rules.len())].clone()
    })
}

fn design_for(rule: RuleTable, v: usize, n: usize) -> NetworkDesign {
    build_network(&DesignParams::new(rule, v, n).unwrap()).unwrap()
}

/// Collatz-like per the trajectory oracle: every sampled start reaches 0
/// within `p·|x|` steps.
#[test]
fn classifier_agrees_with_trajectory_oracle() {
    for p in 2..=4u32 {
        for t in all_rules(radix(p)).unwrap() {
            let by_orbit = (1..=2000u64).all(|x| {
                let cap = p as usize * digit_count(&big(x), radix(p));
                hops_to_zero(&t, &big(x), cap).is_some()
            });
            assert_eq!(t.classify().collatz_like, by_orbit, "{t}");
        }
    }
}

#[test]
fn isomorphism_across_gamma_small() {
    for p in 3..=4u32 {
        for v in 1..=3 {
            for n in 0..=2 {
                let forms: HashSet<String> = gamma_rules(p)
                    .into_iter()
                    .map(|t| canonical_form(&design_for(t, v, n)).unwrap())
                    .collect();
                assert_eq!(forms.len(), 1, "p={p} v={v} n={n}");
            }
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let t = gamma_rules(5)[3].clone();
    let a = design_for(t.clone(), 3, 3);
    let b = design_for(t, 3, 3);
    assert_eq!(export_json(&a), export_json(&b));
    assert_eq!(export_dot(&a), export_dot(&b));
}

proptest! {
    #[test]
    fn preimage_is_exactly_p_hops(rule in gamma_rule(), n in 1u64..1_000_000) {
        let res = phi(&rule, &big(n)).unwrap();
        prop_assert!(res.a > res.n);
        prop_assert!(is_exactly_p_hops(&rule, &res));

        // arithmetic and digit-prepend forms agree
        let p = rule.radix();
        let mut digits = to_digits(&big(n), p).into_digits();
        if res.case.number() == 1 {
            digits.push(0);
        }
        digits.push(res.gamma);
        prop_assert_eq!(ivt_core::padic::from_digits(&digits, p).unwrap(), res.a);
    }

    #[test]
    fn apply_is_digitwise(idx in 0u64..256, x in 0u64..100_000) {
        let rule = RuleTable::from_index(&big(idx), radix(4)).unwrap();
        let d = to_digits(&big(x), radix(4));
        prop_assert_eq!(apply(&rule, &big(x)), apply_digits(&rule, &d).value());
    }

    #[test]
    fn routing_computations_are_order_invariant(
        rule in gamma_rule(),
        v in 1usize..=3,
        n in 0usize..=3,
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..40),
        seed in any::<u64>(),
    ) {
        let design = design_for(rule.clone(), v, n);
        let sources: Vec<BigUint> = picks.iter().map(|i| design.nodes[i.index(design.nodes.len())].address.clone()).collect();
        let mut reversed = sources.clone();
        reversed.reverse();
        let mut rotated = sources.clone();
        if !rotated.is_empty() {
            let k = (seed as usize) % rotated.len();
            rotated.rotate_left(k);
        }

        let base = simulate(&design, &Scenario::new(sources)).unwrap();
        let distinct: HashSet<&BigUint> = base.messages.iter()
            .flat_map(|m| m.path.iter())
            .filter(|x| **x != big(0))
            .collect();
        prop_assert_eq!(base.totals.computations, distinct.len());
        for other in [reversed, rotated] {
            let r = simulate(&design, &Scenario::new(other)).unwrap();
            prop_assert_eq!(r.totals.computations, base.totals.computations);
            prop_assert_eq!(r.totals.hops, base.totals.hops);
        }

        // hop conservation, and caching never changes a path
        for m in &base.messages {
            prop_assert_eq!(m.hops, m.computations + m.cache_hits);
            prop_assert_eq!(m.hops, design.node(&m.source).unwrap().hop_distance);
            for w in m.path.windows(2) {
                prop_assert_eq!(&apply(&rule, &w[0]), &w[1]);
            }
        }
        let all_distinct = base.totals.hops == distinct.len();
        prop_assert_eq!(base.totals.computations == base.uncached_baseline_computations, all_distinct);
    }

    #[test]
    fn cache_entries_are_ivt(rule in gamma_rule(), n in 0usize..=2) {
        let design = design_for(rule.clone(), 2, n);
        let mut cache = CacheTable::new();
        for node in &design.nodes {
            ivt_core::routing::route_message(&design, &mut cache, &node.address).unwrap();
        }
        prop_assert_eq!(cache.len(), design.nodes.len() - 1);
        for (k, v) in cache.iter() {
            prop_assert_eq!(&apply(&rule, k), v);
        }
    }

    #[test]
    fn design_json_round_trips(rule in gamma_rule(), v in 1usize..=3, n in 0usize..=3) {
        let d = design_for(rule, v, n);
        prop_assert_eq!(import_json(&export_json(&d)).unwrap(), d);
    }
}
