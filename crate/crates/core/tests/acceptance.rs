//! Acceptance criteria. Every check is exact integer equality.
//!
//! Run with `cargo test -p ivt-core --test acceptance -- --nocapture` to see
//! the per-criterion PASS/FAIL lines.

use std::collections::HashSet;

use ivt_core::engine::{hops_to_zero, iterate_trace};
use ivt_core::padic::digit_count;
use ivt_core::rule::{all_rules, bijective_collatz_rules};
use ivt_core::topology::{canonical_form, optimal_pairs, validate};
use ivt_core::{
    apply, build_network, census, iterate_k, phi, simulate, BigUint, DesignParams, PreimageCase,
    Radix, RuleTable, Scenario,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn radix(p: u32) -> Radix {
    Radix::new(p).unwrap()
}

fn rule(index: u64, p: u32) -> RuleTable {
    RuleTable::from_index(&big(index), radix(p)).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn c01_worked_example() -> Check {
    let got = apply(&rule(114, 4), &big(433));
    ensure(got == big(216), || format!("IVT_114(433) = {got}"))
}

fn c02_iteration_trace() -> Check {
    let trace = iterate_trace(&rule(114, 4), &big(56913), 4);
    let want: Vec<BigUint> = [56913, 18184, 8622, 14583, 7761].map(big).to_vec();
    ensure(trace == want, || format!("trace {trace:?}"))?;
    let shed = big(56913) % radix(4).pow(7);
    ensure(shed == big(7761), || format!("56913 mod 4^7 = {shed}"))
}

fn c03_preimage_illustrations() -> Check {
    let t = rule(57, 4);
    let one = phi(&t, &big(486)).map_err(|e| e.to_string())?;
    ensure(one.a == big(12774) && one.case == PreimageCase::ZeroBuffered, || format!("{one:?}"))?;
    let two = phi(&t, &big(742)).map_err(|e| e.to_string())?;
    ensure(two.a == big(1766) && two.case == PreimageCase::Direct, || format!("{two:?}"))?;
    ensure(iterate_k(&t, &big(12774), 4) == big(486), || "12774 does not return to 486".into())?;
    ensure(iterate_k(&t, &big(1766), 4) == big(742), || "1766 does not return to 742".into())
}

fn c04_census() -> Check {
    for p in 2..=5u64 {
        let c = census(radix(p as u32)).map_err(|e| e.to_string())?;
        let want = (
            p.pow(p as u32),
            factorial(p),
            p.pow(p as u32 - 1),
            factorial(p - 1),
            (p - 1) * factorial(p - 1),
        );
        let got = (c.total, c.bijective, c.collatz_like, c.bijective_collatz, c.bijective_non_collatz);
        ensure(got == want, || format!("p={p}: got {got:?}, want {want:?}"))?;
    }
    let c4 = census(radix(4)).unwrap();
    ensure(c4.total == 256, || format!("p=4 total {}", c4.total))
}

fn c05_line15_pairs() -> Check {
    let params = DesignParams::with_roots(rule(57, 4), vec![big(15)], 2).map_err(|e| e.to_string())?;
    let design = build_network(&params).map_err(|e| e.to_string())?;
    let got: HashSet<(BigUint, BigUint)> = optimal_pairs(&design).into_iter().map(|p| (p.m, p.a)).collect();
    let want: HashSet<(BigUint, BigUint)> = [(15, 47), (10, 26), (5, 197), (48, 176), (47, 111)]
        .into_iter()
        .map(|(m, a)| (big(m), big(a)))
        .collect();
    ensure(got == want, || format!("pairs {got:?}"))
}

fn c06_capacity() -> Check {
    for p in 2..=5u32 {
        for t in bijective_collatz_rules(radix(p)).unwrap() {
            for v in 1..=3 {
                for n in 0..=3 {
                    let params = DesignParams::new(t.clone(), v, n).map_err(|e| e.to_string())?;
                    let design = build_network(&params).map_err(|e| format!("{t} v={v} n={n}: {e}"))?;
                    let want = (n as u128 * p as u128 + 1) * v as u128 + 1;
                    ensure(design.nodes.len() as u128 == want, || {
                        format!("{t} v={v} n={n}: {} nodes, want {want}", design.nodes.len())
                    })?;
                    let distinct: HashSet<&BigUint> = design.nodes.iter().map(|n| &n.address).collect();
                    ensure(distinct.len() == design.nodes.len(), || format!("{t} v={v} n={n}: collision"))?;
                    let violations = validate(&design);
                    ensure(violations.is_empty(), || format!("{t} v={v} n={n}: {violations:?}"))?;
                }
            }
        }
    }
    Ok(())
}

fn c07_isomorphism() -> Check {
    let form = |t: RuleTable| -> Result<String, String> {
        let params = DesignParams::new(t, 3, 2).map_err(|e| e.to_string())?;
        canonical_form(&build_network(&params).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    let all: Vec<RuleTable> = bijective_collatz_rules(radix(4)).unwrap();
    ensure(all.len() == 6, || format!("{} rules in Γ^(4,1)", all.len()))?;
    let forms: HashSet<String> = all.into_iter().map(form).collect::<Result<_, _>>()?;
    ensure(forms.len() == 1, || format!("{} distinct forms", forms.len()))?;
    ensure(form(rule(57, 4))? == form(rule(114, 4))?, || "rules 57 and 114 differ".into())
}

fn c08_preimage_sweep() -> Check {
    for p in 2..=5u32 {
        for t in bijective_collatz_rules(radix(p)).unwrap() {
            for n in 1..=2000u64 {
                let n = big(n);
                let res = phi(&t, &n).map_err(|e| e.to_string())?;
                ensure(res.a > n, || format!("{t} N={n}: A={} not above N", res.a))?;
                let back = iterate_k(&t, &res.a, p as usize);
                ensure(back == n, || format!("{t} N={n}: A={} maps to {back}", res.a))?;
            }
        }
    }
    Ok(())
}

fn c09_trajectory_termination() -> Check {
    let mut collatz = 0;
    for t in all_rules(radix(4)).unwrap() {
        let cap = |x: u64| 4 * digit_count(&big(x), radix(4));
        if t.classify().collatz_like {
            collatz += 1;
            for x in 0..=5000u64 {
                ensure(hops_to_zero(&t, &big(x), cap(x)).is_some(), || format!("{t} x={x} exceeds cap"))?;
            }
        } else {
            let witness = (1..=100u64).any(|x| hops_to_zero(&t, &big(x), cap(x)).is_none());
            ensure(witness, || format!("{t} is not Collatz-like but every x <= 100 terminates"))?;
        }
    }
    ensure(collatz == 64, || format!("{collatz} Collatz-like rules"))
}

fn c10_routing_order_invariance() -> Check {
    let params = DesignParams::new(rule(57, 4), 2, 2).map_err(|e| e.to_string())?;
    let design = build_network(&params).map_err(|e| e.to_string())?;
    let addresses: Vec<BigUint> = design.nodes.iter().map(|n| n.address.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f7);
    for round in 0..50 {
        let len = rng.gen_range(1..=30);
        let sources: Vec<BigUint> = (0..len).map(|_| addresses.choose(&mut rng).unwrap().clone()).collect();
        let mut shuffled = sources.clone();
        shuffled.shuffle(&mut rng);

        let a = simulate(&design, &Scenario::new(sources.clone())).map_err(|e| e.to_string())?;
        let b = simulate(&design, &Scenario::new(shuffled)).map_err(|e| e.to_string())?;

        let visited: HashSet<BigUint> = a
            .messages
            .iter()
            .flat_map(|m| m.path.iter().cloned())
            .filter(|x| *x != big(0))
            .collect();
        ensure(a.totals.computations == b.totals.computations, || {
            format!("round {round}: {} vs {} computations", a.totals.computations, b.totals.computations)
        })?;
        ensure(a.totals.computations == visited.len(), || {
            format!("round {round}: {} computations, {} distinct nodes", a.totals.computations, visited.len())
        })?;
        for r in [&a, &b] {
            ensure(r.savings == r.totals.hops - r.totals.computations, || format!("round {round}: savings"))?;
            ensure(r.totals.computations <= r.uncached_baseline_computations, || format!("round {round}: baseline"))?;
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("1 worked IVT example", c01_worked_example),
        ("2 iteration trace", c02_iteration_trace),
        ("3 p-th pre-image illustrations", c03_preimage_illustrations),
        ("4 rule-space census p=2..5", c04_census),
        ("5 optimal pairs of the 15-rooted line", c05_line15_pairs),
        ("6 capacity and no collisions", c06_capacity),
        ("7 isomorphic topologies", c07_isomorphism),
        ("8 pre-image soundness sweep", c08_preimage_sweep),
        ("9 trajectory termination vs classifier", c09_trajectory_termination),
        ("10 routing order invariance", c10_routing_order_invariance),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn root_is_one_hop() {
    for t in bijective_collatz_rules(radix(5)).unwrap() {
        let params = DesignParams::new(t.clone(), 3, 1).unwrap();
        for r in &params.roots {
            assert_eq!(apply(&t, r), big(0));
        }
    }
}
