//! Multisets of positive integers, the input shape for partition-style
//! problems.

use crate::error::{Error, Result};

/// Multiset of positive integers, kept sorted nondecreasing.
/// Multiplicities are implicit by repetition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMultiset {
    values: Vec<u64>,
}

impl IntegerMultiset {
    pub fn new(mut values: Vec<u64>) -> Result<Self> {
        if values.iter().any(|&v| v == 0) {
            return Err(Error::InvalidInput("multiset elements must be >= 1".into()));
        }
        values.sort_unstable();
        let mut sum = 0u128;
        for &v in &values {
            sum = sum
                .checked_add(v as u128)
                .ok_or_else(|| Error::InvalidInput("multiset sum overflows".into()))?;
        }
        Ok(IntegerMultiset { values })
    }

    pub fn empty() -> Self {
        IntegerMultiset { values: Vec::new() }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }

    pub fn min(&self) -> Option<u64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.values.last().copied()
    }

    /// (value, multiplicity) pairs in increasing value order.
    pub fn counts(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((last, c)) if *last == v => *c += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn distinct_count(&self) -> usize {
        let mut n = 0;
        let mut prev = None;
        for &v in &self.values {
            if prev != Some(v) {
                n += 1;
                prev = Some(v);
            }
        }
        n
    }

    pub fn is_distinct(&self) -> bool {
        self.values.windows(2).all(|w| w[0] != w[1])
    }
}

impl FromIterator<u64> for IntegerMultiset {
    /// Panics on zero elements; use `new` for fallible construction.
    fn from_iter<T: IntoIterator<Item = u64>>(iter: T) -> Self {
        IntegerMultiset::new(iter.into_iter().collect()).expect("invalid multiset element")
    }
}
