//! IVT rule tables: the digit map `f` behind a rule index, its
//! classification, and exhaustive enumeration of small rule spaces.
//!
//! A rule index `#` below `p^p` encodes `f` digit-wise: the base-p digit
//! of `#` at weight `p^i` is `f(i)`.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::padic::{DigitString, Radix};

/// Largest radix for which [`census`] and [`enumerate_class`] run.
pub const MAX_ENUMERABLE_RADIX: u8 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTable {
    radix: Radix,
    map: Vec<u8>,
}

impl RuleTable {
    /// `map[i]` is `f(i)`; needs exactly `p` entries, each `< p`.
    pub fn from_map(map: Vec<u8>, radix: Radix) -> Result<Self> {
        let p = radix.get();
        if map.len() != p as usize {
            return Err(Error::RuleLength {
                len: map.len(),
                radix: p,
            });
        }
        if let Some(position) = map.iter().position(|&d| d >= p) {
            return Err(Error::DigitRange {
                digit: map[position] as u32,
                position,
                radix: p,
            });
        }
        Ok(RuleTable { radix, map })
    }

    pub fn from_index(index: &BigUint, radix: Radix) -> Result<Self> {
        let p = radix.get() as usize;
        if *index >= radix.pow(p) {
            return Err(Error::RuleRange {
                index: index.clone(),
                radix: radix.get(),
            });
        }
        let mut map = DigitString::from_value(index, radix).into_digits();
        map.resize(p, 0);
        Ok(RuleTable { radix, map })
    }

    #[inline]
    pub fn radix(&self) -> Radix {
        self.radix
    }

    #[inline]
    pub fn map(&self) -> &[u8] {
        &self.map
    }

    #[inline]
    pub fn f(&self, d: u8) -> u8 {
        self.map[d as usize]
    }

    pub fn index(&self) -> BigUint {
        DigitString::from_le_unchecked(self.radix, self.map.clone()).value()
    }

    /// The digit `d` with `f(d) == target`, if `f` hits `target`.
    pub fn preimage_digit(&self, target: u8) -> Option<u8> {
        self.map.iter().position(|&d| d == target).map(|i| i as u8)
    }

    /// `[d, f(d), f²(d), …]` up to (excluding) the first repeated digit.
    pub fn digit_orbit(&self, d: u8) -> Vec<u8> {
        let mut seen = vec![false; self.map.len()];
        let mut orbit = Vec::new();
        let mut cur = d;
        while !seen[cur as usize] {
            seen[cur as usize] = true;
            orbit.push(cur);
            cur = self.f(cur);
        }
        orbit
    }

    pub fn classify(&self) -> RuleClass {
        let p = self.map.len();
        let mut hit = vec![false; p];
        for &d in &self.map {
            hit[d as usize] = true;
        }
        let bijective = hit.iter().all(|&h| h);
        let collatz_like = (1..p as u8).all(|d| self.digit_orbit(d).contains(&0));
        RuleClass {
            bijective,
            collatz_like,
            bijective_collatz: bijective && collatz_like,
        }
    }

    pub fn is_bijective_collatz(&self) -> bool {
        self.classify().bijective_collatz
    }

    pub(crate) fn require_bijective_collatz(&self) -> Result<()> {
        if self.is_bijective_collatz() {
            Ok(())
        } else {
            Err(Error::NotCollatzBijective {
                index: self.index(),
                radix: self.radix.get(),
            })
        }
    }

    pub fn zero_cycle(&self) -> Result<ZeroCycle> {
        self.require_bijective_collatz()?;
        Ok(ZeroCycle(self.digit_orbit(0)))
    }
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} (p={})", self.index(), self.radix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RuleClass {
    /// `f` is a permutation of the digits.
    pub bijective: bool,
    /// Every nonzero digit's `f`-orbit reaches 0.
    pub collatz_like: bool,
    /// Both of the above; equivalently `f` is a single p-cycle.
    pub bijective_collatz: bool,
}

/// The p-cycle of a bijective Collatz-like rule, listed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroCycle(Vec<u8>);

impl ZeroCycle {
    pub fn digits(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d} -> ")?;
        }
        write!(f, "0")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassFilter {
    All,
    Bijective,
    CollatzLike,
    BijectiveCollatz,
    BijectiveNonCollatz,
    NonCollatz,
}

impl ClassFilter {
    pub fn matches(self, class: RuleClass) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::Bijective => class.bijective,
            ClassFilter::CollatzLike => class.collatz_like,
            ClassFilter::BijectiveCollatz => class.bijective_collatz,
            ClassFilter::BijectiveNonCollatz => class.bijective && !class.collatz_like,
            ClassFilter::NonCollatz => !class.collatz_like,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub total: u64,
    pub bijective: u64,
    pub collatz_like: u64,
    pub bijective_collatz: u64,
    pub bijective_non_collatz: u64,
}

pub fn decode_rule(index: &BigUint, p: Radix) -> Result<RuleTable> {
    RuleTable::from_index(index, p)
}

pub fn encode_rule(map: &[u8], p: Radix) -> Result<BigUint> {
    Ok(RuleTable::from_map(map.to_vec(), p)?.index())
}

pub fn classify(rule: &RuleTable) -> RuleClass {
    rule.classify()
}

pub fn zero_cycle(rule: &RuleTable) -> Result<ZeroCycle> {
    rule.zero_cycle()
}

/// Every rule of base `p` in ascending index order.
pub fn all_rules(p: Radix) -> Result<impl Iterator<Item = RuleTable>> {
    if p.get() > MAX_ENUMERABLE_RADIX {
        return Err(Error::CensusRange(p.get()));
    }
    let n = p.get() as usize;
    let total = (n as u64).pow(n as u32);
    let mut map = vec![0u8; n];
    let mut first = true;
    Ok((0..total).map(move |_| {
        if !first {
            // odometer, least significant digit first, so the index ascends
            for d in map.iter_mut() {
                *d += 1;
                if (*d as usize) < n {
                    break;
                }
                *d = 0;
            }
        }
        first = false;
        RuleTable {
            radix: p,
            map: map.clone(),
        }
    }))
}

pub fn census(p: Radix) -> Result<Census> {
    let mut c = Census::default();
    for rule in all_rules(p)? {
        let class = rule.classify();
        c.total += 1;
        c.bijective += class.bijective as u64;
        c.collatz_like += class.collatz_like as u64;
        c.bijective_collatz += class.bijective_collatz as u64;
        c.bijective_non_collatz += (class.bijective && !class.collatz_like) as u64;
    }
    Ok(c)
}

pub fn enumerate_class(p: Radix, filter: ClassFilter) -> Result<Vec<BigUint>> {
    Ok(all_rules(p)?
        .filter(|r| filter.matches(r.classify()))
        .map(|r| r.index())
        .collect())
}

/// The rules of `Γ^{p,1}` as tables, ascending by index.
pub fn bijective_collatz_rules(p: Radix) -> Result<Vec<RuleTable>> {
    Ok(all_rules(p)?.filter(|r| r.is_bijective_collatz()).collect())
}
