//! Applying and iterating an IVT.
//!
//! `apply` maps `f` over the canonical digits of `x` and reads the result
//! back in base p. High-order zeros produced by `f` are dropped before the
//! next application, so a digit that became 0 at the top of the number is
//! never mapped again. This makes the transform non-injective even when
//! `f` is a permutation (rule 114: 6 and 2 both map to 3). Zero is the
//! empty digit string and is therefore fixed by every rule.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::padic::DigitString;
use crate::rule::RuleTable;

/// One application on digit strings.
pub fn apply_digits(rule: &RuleTable, x: &DigitString) -> DigitString {
    debug_assert_eq!(rule.radix(), x.radix());
    let mapped = x.digits().iter().map(|&d| rule.f(d)).collect();
    DigitString::from_le_unchecked(rule.radix(), mapped)
}

pub fn apply(rule: &RuleTable, x: &BigUint) -> BigUint {
    apply_digits(rule, &DigitString::from_value(x, rule.radix())).value()
}

/// `k`-fold composition of [`apply`]; `k = 0` returns `x`.
pub fn iterate_k(rule: &RuleTable, x: &BigUint, k: usize) -> BigUint {
    let mut cur = DigitString::from_value(x, rule.radix());
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = apply_digits(rule, &cur);
    }
    cur.value()
}

/// Every value from `x` through `k` applications, `k + 1` entries.
pub fn iterate_trace(rule: &RuleTable, x: &BigUint, k: usize) -> Vec<BigUint> {
    let mut cur = DigitString::from_value(x, rule.radix());
    let mut out = Vec::with_capacity(k + 1);
    out.push(x.clone());
    for _ in 0..k {
        cur = apply_digits(rule, &cur);
        out.push(cur.value());
    }
    out
}

pub fn digit_orbit(rule: &RuleTable, d: u8) -> Vec<u8> {
    rule.digit_orbit(d)
}

/// `p·|x|`, an upper bound on trajectory length for Collatz-like rules.
pub fn default_step_cap(rule: &RuleTable, x: &BigUint) -> usize {
    rule.radix().get() as usize * crate::padic::digit_count(x, rule.radix())
}

/// The path `x → … → 0` under repeated application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub rule: RuleTable,
    pub values: Vec<BigUint>,
}

impl Trajectory {
    /// Hop count, one less than the number of values.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> &BigUint {
        &self.values[0]
    }
}

/// Follows `x` until it reaches 0, failing after `step_cap` applications.
pub fn trajectory(rule: &RuleTable, x: &BigUint, step_cap: usize) -> Result<Trajectory> {
    let mut cur = DigitString::from_value(x, rule.radix());
    let mut values = vec![x.clone()];
    while !cur.is_zero() {
        if values.len() > step_cap {
            return Err(Error::NonConvergent {
                start: x.clone(),
                cap: step_cap,
            });
        }
        cur = apply_digits(rule, &cur);
        values.push(cur.value());
    }
    Ok(Trajectory {
        rule: rule.clone(),
        values,
    })
}

/// Number of hops from `x` to 0, or `None` if it takes more than `step_cap`.
/// Works on digits only; cheaper than [`trajectory`] for sweeps.
pub fn hops_to_zero(rule: &RuleTable, x: &BigUint, step_cap: usize) -> Option<usize> {
    let mut cur = DigitString::from_value(x, rule.radix());
    let mut hops = 0;
    while !cur.is_zero() {
        if hops == step_cap {
            return None;
        }
        cur = apply_digits(rule, &cur);
        hops += 1;
    }
    Some(hops)
}
