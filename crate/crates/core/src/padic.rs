//! Base-p digit strings of non-negative integers.
//!
//! Digits are stored little-endian: index `i` carries weight `p^i`. A
//! canonical string never has a zero in its highest position, so zero is
//! the empty string. Rendering is big-endian (most significant first),
//! using `0-9a-f`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

const DIGIT_CHARS: &[u8; 16] = b"0123456789abcdef";

/// A radix in `2..=16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radix(u8);

impl Radix {
    pub const MIN: u8 = 2;
    pub const MAX: u8 = 16;

    pub fn new(p: u32) -> Result<Self> {
        if (Self::MIN as u32..=Self::MAX as u32).contains(&p) {
            Ok(Radix(p as u8))
        } else {
            Err(Error::InvalidRadix(p))
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    /// `p^e` as an unbounded integer.
    pub fn pow(self, e: usize) -> BigUint {
        num_traits::pow(BigUint::from(self.0), e)
    }
}

impl fmt::Display for Radix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for Radix {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Radix::new(p)
    }
}

/// Canonical base-p digits of a non-negative integer, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    radix: Radix,
    digits: Vec<u8>,
}

impl DigitString {
    /// The empty string, i.e. the integer 0.
    pub fn zero(radix: Radix) -> Self {
        DigitString {
            radix,
            digits: Vec::new(),
        }
    }

    pub fn from_value(x: &BigUint, radix: Radix) -> Self {
        if x.is_zero() {
            return Self::zero(radix);
        }
        DigitString {
            radix,
            digits: x.to_radix_le(radix.get() as u32),
        }
    }

    /// Builds from little-endian digits, dropping high-order zeros.
    pub fn from_le_digits(radix: Radix, mut digits: Vec<u8>) -> Result<Self> {
        check_digits(&digits, radix)?;
        trim(&mut digits);
        Ok(DigitString { radix, digits })
    }

    /// Caller guarantees every digit is `< p`; only trimming is done.
    pub(crate) fn from_le_unchecked(radix: Radix, mut digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&d| d < radix.get()));
        trim(&mut digits);
        DigitString { radix, digits }
    }

    #[inline]
    pub fn radix(&self) -> Radix {
        self.radix
    }

    /// Little-endian digits.
    #[inline]
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    /// Number of digits, `|x|`. Zero has length 0.
    #[inline]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn msd(&self) -> Result<u8> {
        self.digits.last().copied().ok_or(Error::NoMsd)
    }

    pub fn value(&self) -> BigUint {
        if self.digits.is_empty() {
            return BigUint::zero();
        }
        BigUint::from_radix_le(&self.digits, self.radix.get() as u32)
            .expect("canonical digits are in range")
    }

    /// Most significant digit first; zero renders as `"0"`.
    pub fn render(&self) -> String {
        if self.digits.is_empty() {
            return "0".to_string();
        }
        self.digits
            .iter()
            .rev()
            .map(|&d| DIGIT_CHARS[d as usize] as char)
            .collect()
    }

    /// Parses most-significant-first text. Leading zeros are accepted.
    pub fn parse(text: &str, radix: Radix) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            input: text.to_string(),
            radix: radix.get(),
            reason,
        };
        if text.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut digits = Vec::with_capacity(text.len());
        for c in text.chars().rev() {
            let d = c
                .to_digit(16)
                .filter(|_| !c.is_ascii_uppercase())
                .ok_or_else(|| err(format!("invalid character {c:?}")))?;
            if d >= radix.get() as u32 {
                return Err(err(format!("digit {c:?} is not below {radix}")));
            }
            digits.push(d as u8);
        }
        trim(&mut digits);
        Ok(DigitString { radix, digits })
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn trim(digits: &mut Vec<u8>) {
    while digits.last() == Some(&0) {
        digits.pop();
    }
}

fn check_digits(digits: &[u8], radix: Radix) -> Result<()> {
    match digits.iter().position(|&d| d >= radix.get()) {
        Some(position) => Err(Error::DigitRange {
            digit: digits[position] as u32,
            position,
            radix: radix.get(),
        }),
        None => Ok(()),
    }
}

pub fn to_digits(x: &BigUint, p: Radix) -> DigitString {
    DigitString::from_value(x, p)
}

/// `Σ d_i·p^i` over little-endian digits; high-order zeros are tolerated.
pub fn from_digits(digits_le: &[u8], p: Radix) -> Result<BigUint> {
    Ok(DigitString::from_le_digits(p, digits_le.to_vec())?.value())
}

/// Length of the canonical representation; `digit_count(0, p) == 0`.
pub fn digit_count(x: &BigUint, p: Radix) -> usize {
    if x.is_zero() {
        return 0;
    }
    // bits / log2(p) is only an estimate, so count exactly.
    to_digits(x, p).len()
}

pub fn msd(x: &BigUint, p: Radix) -> Result<u8> {
    to_digits(x, p).msd()
}

pub fn render(d: &DigitString) -> String {
    d.render()
}

pub fn parse(text: &str, p: Radix) -> Result<DigitString> {
    DigitString::parse(text, p)
}
