//! Problem instances.
//!
//! Knapsack profits are exact rationals stored as integer numerators over a
//! single per-instance denominator, so approximation guarantees can be
//! checked without floating point.

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct KnapsackItem {
    /// Profit numerator; the real profit is `profit / instance.profit_den()`.
    pub profit: u64,
    pub weight: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnapsackInstance {
    items: Vec<KnapsackItem>,
    capacity: u64,
    profit_den: u64,
}

impl KnapsackInstance {
    pub fn new(items: Vec<KnapsackItem>, capacity: u64, profit_den: u64) -> Result<Self> {
        if profit_den == 0 {
            return Err(Error::InvalidInput("profit denominator must be positive".into()));
        }
        for it in &items {
            if it.profit == 0 {
                return Err(Error::InvalidInput("item profits must be positive".into()));
            }
            if it.weight == 0 {
                return Err(Error::InvalidInput("item weights must be positive".into()));
            }
        }
        Ok(KnapsackInstance { items, capacity, profit_den })
    }

    pub fn items(&self) -> &[KnapsackItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn profit_den(&self) -> u64 {
        self.profit_den
    }

    pub fn total_weight(&self) -> u128 {
        self.items.iter().map(|it| it.weight as u128).sum()
    }

    pub fn total_profit(&self) -> u128 {
        self.items.iter().map(|it| it.profit as u128).sum()
    }

    /// Same items with profits re-expressed over denominator `new_den`.
    /// Fails unless every profit converts exactly.
    pub fn with_profit_den(&self, new_den: u64) -> Result<Self> {
        if new_den == 0 {
            return Err(Error::InvalidInput("profit denominator must be positive".into()));
        }
        let mut items = Vec::with_capacity(self.items.len());
        for it in &self.items {
            let num = it.profit as u128 * new_den as u128;
            if num % self.profit_den as u128 != 0 {
                return Err(Error::InvalidInput(format!(
                    "profit {}/{} is not representable over denominator {new_den}",
                    it.profit, self.profit_den
                )));
            }
            let profit = u64::try_from(num / self.profit_den as u128)
                .map_err(|_| Error::InvalidInput("profit overflows during rescaling".into()))?;
            items.push(KnapsackItem { profit, weight: it.weight });
        }
        Ok(KnapsackInstance { items, capacity: self.capacity, profit_den: new_den })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(KnapsackInstance::new(vec![KnapsackItem { profit: 0, weight: 1 }], 5, 1).is_err());
        assert!(KnapsackInstance::new(vec![KnapsackItem { profit: 1, weight: 0 }], 5, 1).is_err());
        assert!(KnapsackInstance::new(vec![], 5, 0).is_err());
        let inst = KnapsackInstance::new(
            vec![KnapsackItem { profit: 2, weight: 3 }, KnapsackItem { profit: 3, weight: 4 }],
            4,
            1,
        )
        .unwrap();
        assert_eq!(inst.total_weight(), 7);
        assert_eq!(inst.total_profit(), 5);
    }

    #[test]
    fn rescaling_profit_units() {
        let inst = KnapsackInstance::new(
            vec![KnapsackItem { profit: 3, weight: 1 }],
            4,
            2, // profit 3/2
        )
        .unwrap();
        let scaled = inst.with_profit_den(4).unwrap();
        assert_eq!(scaled.items()[0].profit, 6);
        assert!(inst.with_profit_den(3).is_err());
    }
}
