//! Small exact rational used for accuracy parameters.
//!
//! All comparisons and rounding go through `u128` cross products, so values
//! built from instance data (sums up to ~2^60, denominators up to ~2^20)
//! never lose precision. This is deliberately not a general bignum type;
//! construction panics on overflow rather than silently degrading.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Exact nonnegative rational with `u64` numerator and denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ratio64 {
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

impl Ratio64 {
    /// Reduced rational `num/den`. Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio64 { num: num / g, den: den / g }
    }

    pub fn from_int(v: u64) -> Self {
        Ratio64 { num: v, den: 1 }
    }

    pub fn zero() -> Self {
        Ratio64 { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        Ratio64 { num: 1, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `1 - self`; panics if `self > 1`.
    pub fn one_minus(&self) -> Self {
        assert!(self.num <= self.den, "one_minus of a rational above 1");
        Ratio64::new(self.den - self.num, self.den)
    }

    /// Reciprocal; panics on zero.
    pub fn recip(&self) -> Self {
        assert!(self.num != 0, "reciprocal of zero");
        Ratio64 { num: self.den, den: self.num }
    }

    pub fn mul(&self, other: Ratio64) -> Self {
        // Cross-reduce before multiplying to keep intermediates in range.
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        let num = (self.num / g1).checked_mul(other.num / g2).expect("ratio overflow");
        let den = (self.den / g2).checked_mul(other.den / g1).expect("ratio overflow");
        Ratio64::new(num, den)
    }

    pub fn mul_int(&self, v: u64) -> Self {
        self.mul(Ratio64::from_int(v))
    }

    pub fn div_int(&self, v: u64) -> Self {
        assert!(v != 0);
        self.mul(Ratio64 { num: 1, den: v })
    }

    pub fn add(&self, other: Ratio64) -> Self {
        let den = (self.den / gcd(self.den, other.den).max(1))
            .checked_mul(other.den)
            .expect("ratio overflow");
        let a = self.num.checked_mul(den / self.den).expect("ratio overflow");
        let b = other.num.checked_mul(den / other.den).expect("ratio overflow");
        Ratio64::new(a.checked_add(b).expect("ratio overflow"), den)
    }

    /// `self - other`; panics if negative.
    pub fn sub(&self, other: Ratio64) -> Self {
        let den = (self.den / gcd(self.den, other.den).max(1))
            .checked_mul(other.den)
            .expect("ratio overflow");
        let a = self.num.checked_mul(den / self.den).expect("ratio overflow");
        let b = other.num.checked_mul(den / other.den).expect("ratio overflow");
        assert!(a >= b, "negative ratio");
        Ratio64::new(a - b, den)
    }

    /// `⌊self · v⌋` computed exactly.
    pub fn floor_mul(&self, v: u64) -> u64 {
        ((self.num as u128 * v as u128) / self.den as u128) as u64
    }

    /// `⌈self · v⌉` computed exactly.
    pub fn ceil_mul(&self, v: u64) -> u64 {
        let p = self.num as u128 * v as u128;
        p.div_ceil(self.den as u128) as u64
    }

    /// Exact comparison against `v`.
    pub fn cmp_int(&self, v: u64) -> Ordering {
        (self.num as u128).cmp(&(self.den as u128 * v as u128))
    }

    /// Exact comparison against `a/b` where the products live in `u128`.
    pub fn cmp_frac(&self, a: u128, b: u128) -> Ordering {
        assert!(b != 0);
        (self.num as u128 * b).cmp(&(a * self.den as u128))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses a nonnegative decimal literal such as `"2"` or `"1.25"`.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid decimal literal {s:?}"));
        if s.is_empty() || s.starts_with('-') || s.starts_with('+') {
            return Err(bad());
        }
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        if int_part.len() + frac_part.len() > 18 {
            return Err(Error::Parse(format!("decimal literal {s:?} has too many digits")));
        }
        let digits: u64 = format!("{int_part}{frac_part}")
            .parse()
            .map_err(|_| bad())?;
        let den = 10u64
            .checked_pow(frac_part.len() as u32)
            .ok_or_else(bad)?;
        Ok(Ratio64::new(digits, den))
    }
}

impl PartialOrd for Ratio64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio64 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accuracy parameter in (0, 1/2) with an integer reciprocal.
///
/// Callers may pass any rational; this normalizes it to 1/⌈1/eps⌉, the
/// slightly smaller value the solvers actually run with.
pub fn normalize_eps(eps: Ratio64) -> Result<u64> {
    if eps.is_zero() || eps.cmp_frac(1, 2) != Ordering::Less {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, 1/2), got {eps}"
        )));
    }
    // ⌈1/eps⌉ = ⌈den/num⌉
    Ok(eps.den().div_ceil(eps.num()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_order() {
        assert_eq!(Ratio64::new(2, 4), Ratio64::new(1, 2));
        assert!(Ratio64::new(1, 3) < Ratio64::new(1, 2));
        assert_eq!(Ratio64::new(3, 2).floor_mul(5), 7);
        assert_eq!(Ratio64::new(3, 2).ceil_mul(5), 8);
    }

    #[test]
    fn parse_decimals() {
        assert_eq!(Ratio64::parse_decimal("2").unwrap(), Ratio64::from_int(2));
        assert_eq!(Ratio64::parse_decimal("1.25").unwrap(), Ratio64::new(5, 4));
        assert_eq!(Ratio64::parse_decimal("0.1").unwrap(), Ratio64::new(1, 10));
        assert!(Ratio64::parse_decimal("-1").is_err());
        assert!(Ratio64::parse_decimal("1e3").is_err());
        assert!(Ratio64::parse_decimal(".").is_err());
    }

    #[test]
    fn eps_normalization() {
        assert_eq!(normalize_eps(Ratio64::new(1, 10)).unwrap(), 10);
        assert_eq!(normalize_eps(Ratio64::new(3, 10)).unwrap(), 4);
        assert!(normalize_eps(Ratio64::new(1, 2)).is_err());
        assert!(normalize_eps(Ratio64::zero()).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Ratio64::new(1, 10);
        assert_eq!(a.one_minus(), Ratio64::new(9, 10));
        assert_eq!(a.recip(), Ratio64::from_int(10));
        assert_eq!(a.add(Ratio64::new(2, 5)), Ratio64::new(1, 2));
        assert_eq!(Ratio64::new(1, 2).sub(a), Ratio64::new(2, 5));
        assert_eq!(a.mul_int(5), Ratio64::new(1, 2));
    }
}
