//! The p-th pre-image `A = φ(N)` of a bijective Collatz-like rule.
//!
//! With `α` the leading digit of `N` and `|N|` its length:
//!
//! * if `f(0) = α`, then `γ = f⁻¹(0)` and `A = N + γ·p^{|N|+1}`, i.e. the
//!   digits `γ 0 N`;
//! * otherwise `γ = f⁻¹(α)` and `A = N + γ·p^{|N|}`, i.e. the digits `γ N`.
//!
//! The buffer 0 in the first case matters: without it `α` would be the
//! top digit when it cycles through 0 and would be shed early.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::engine::{apply_digits, iterate_k};
use crate::error::{Error, Result};
use crate::padic::DigitString;
use crate::rule::RuleTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreimageCase {
    /// `f(0) = α`: `γ 0` is prepended.
    ZeroBuffered,
    /// `f(γ) = α`: `γ` is prepended.
    Direct,
}

impl PreimageCase {
    /// 1 or 2, the numbering used in reports.
    pub fn number(self) -> u8 {
        match self {
            PreimageCase::ZeroBuffered => 1,
            PreimageCase::Direct => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(PreimageCase::ZeroBuffered),
            2 => Some(PreimageCase::Direct),
            _ => None,
        }
    }
}

impl fmt::Display for PreimageCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreimageResult {
    pub n: BigUint,
    pub a: BigUint,
    pub case: PreimageCase,
    pub gamma: u8,
    pub alpha: u8,
}

/// Digit-domain construction shared by [`phi`] and the topology builder.
pub(crate) fn phi_digits(rule: &RuleTable, n: &DigitString) -> Result<(DigitString, PreimageCase, u8, u8)> {
    let alpha = n.msd().map_err(|_| Error::NoPreimageOfZero)?;
    let mut digits = n.digits().to_vec();
    let (case, gamma) = if rule.f(0) == alpha {
        let gamma = rule.preimage_digit(0).expect("bijective rule");
        digits.push(0);
        digits.push(gamma);
        (PreimageCase::ZeroBuffered, gamma)
    } else {
        let gamma = rule.preimage_digit(alpha).expect("bijective rule");
        digits.push(gamma);
        (PreimageCase::Direct, gamma)
    };
    Ok((
        DigitString::from_le_unchecked(rule.radix(), digits),
        case,
        gamma,
        alpha,
    ))
}

pub fn phi(rule: &RuleTable, n: &BigUint) -> Result<PreimageResult> {
    rule.require_bijective_collatz()?;
    if n.is_zero() {
        return Err(Error::NoPreimageOfZero);
    }
    let (a, case, gamma, alpha) = phi_digits(rule, &DigitString::from_value(n, rule.radix()))?;
    Ok(PreimageResult {
        n: n.clone(),
        a: a.value(),
        case,
        gamma,
        alpha,
    })
}

/// `[φ(n), φ(φ(n)), …]`, `k` entries; the last `a` is `k·p` hops above `n`.
pub fn phi_k(rule: &RuleTable, n: &BigUint, k: usize) -> Result<Vec<PreimageResult>> {
    rule.require_bijective_collatz()?;
    let mut out: Vec<PreimageResult> = Vec::with_capacity(k);
    let mut cur = n.clone();
    for _ in 0..k {
        let step = phi(rule, &cur)?;
        cur = step.a.clone();
        out.push(step);
    }
    Ok(out)
}

/// True iff `result.a` lands on `result.n` after exactly `p` applications
/// and `a > n`.
pub fn verify_phi(rule: &RuleTable, result: &PreimageResult) -> bool {
    result.a > result.n && iterate_k(rule, &result.a, rule.radix().get() as usize) == result.n
}

/// True iff no intermediate value `apply^t(a)`, `0 < t < p`, equals `n`.
pub fn is_exactly_p_hops(rule: &RuleTable, result: &PreimageResult) -> bool {
    let target = DigitString::from_value(&result.n, rule.radix());
    let mut cur = DigitString::from_value(&result.a, rule.radix());
    for _ in 1..rule.radix().get() {
        cur = apply_digits(rule, &cur);
        if cur == target {
            return false;
        }
    }
    true
}
