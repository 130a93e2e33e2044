//! Exact non-negative rationals for support and confidence thresholds.
//!
//! Thresholds are parsed from user text ("0.15", "1/7", "0.1%") without ever
//! passing through floating point, and every comparison against a support
//! count is done by cross-multiplication in `u128`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number {0:?}")]
    Invalid(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("number {0:?} does not fit in 64-bit numerator/denominator")]
    Overflow(String),
}

/// A reduced fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        let g = gcd(num, den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    /// Builds `num / den`, panicking on a zero denominator.
    pub fn from_counts(num: u64, den: u64) -> Self {
        Self::new(num, den).expect("denominator must be positive")
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// True for values in the half-open interval (0, 1].
    pub fn in_unit_interval(&self) -> bool {
        self.num > 0 && self.num <= self.den
    }

    /// Compares `self * x` with `y`.
    pub fn mul_cmp(&self, x: u64, y: u64) -> Ordering {
        (self.num as u128 * x as u128).cmp(&(self.den as u128 * y as u128))
    }

    /// Smallest count `c` such that `c / n >= self`.
    pub fn min_count(&self, n: u64) -> u64 {
        let prod = self.num as u128 * n as u128;
        let den = self.den as u128;
        prod.div_ceil(den) as u64
    }

    /// Decimal rendering rounded half-up to `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        render_decimal(self.num as u128, self.den as u128, digits)
    }

    /// Percentage rendering (`self * 100`) rounded to `digits` places.
    pub fn to_percent(&self, digits: u32) -> String {
        render_decimal(self.num as u128 * 100, self.den as u128, digits)
    }
}

fn render_decimal(num: u128, den: u128, digits: u32) -> String {
    let scale = 10u128.pow(digits);
    let scaled = (num * scale * 2 + den) / (den * 2);
    let int = scaled / scale;
    if digits == 0 {
        return int.to_string();
    }
    format!("{int}.{:0width$}", scaled % scale, width = digits as usize)
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn parse_uint(s: &str, whole: &str) -> Result<u64, RationalError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RationalError::Invalid(whole.to_string()));
    }
    s.parse::<u64>()
        .map_err(|_| RationalError::Overflow(whole.to_string()))
}

fn parse_decimal(s: &str, whole: &str) -> Result<(u64, u64), RationalError> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(RationalError::Invalid(whole.to_string()));
    }
    let digits = format!("{int}{frac}");
    let num = parse_uint(&digits, whole)?;
    let den = u32::try_from(frac.len())
        .ok()
        .and_then(|e| 10u64.checked_pow(e))
        .ok_or_else(|| RationalError::Overflow(whole.to_string()))?;
    Ok((num, den))
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `p/q`, plain decimals (`0.15`, `1`), and percentages (`0.1%`).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        if s.is_empty() {
            return Err(RationalError::Empty);
        }
        if let Some(body) = s.strip_suffix('%') {
            let (num, den) = parse_decimal(body.trim_end(), text)?;
            let den = den
                .checked_mul(100)
                .ok_or_else(|| RationalError::Overflow(text.to_string()))?;
            return Rational::new(num, den);
        }
        if let Some((p, q)) = s.split_once('/') {
            let num = parse_uint(p.trim(), text)?;
            let den = parse_uint(q.trim(), text)?;
            return Rational::new(num, den);
        }
        let (num, den) = parse_decimal(s, text)?;
        Rational::new(num, den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
