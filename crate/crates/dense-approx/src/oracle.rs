//! Exact dynamic-programming oracles.
//!
//! These exist for desk-scale verification of the approximation algorithms;
//! they refuse instances whose DP size exceeds a configurable budget rather
//! than silently grinding.

use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::multiset::IntegerMultiset;
use crate::stepfn::StepFunction;

pub const DEFAULT_ORACLE_BUDGET: u128 = 10_000_000;

/// Budget in DP cells; override with the `DENSE_APPROX_ORACLE_BUDGET`
/// environment variable.
pub fn oracle_budget() -> u128 {
    std::env::var("DENSE_APPROX_ORACLE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

fn check_budget(needed: u128) -> Result<()> {
    let budget = oracle_budget();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// All subset sums of `x` up to `t` (`None` = unbounded), exactly, via a
/// bit-parallel DP over Σ(x) bits.
pub fn exact_subset_sums(x: &IntegerMultiset, t: Option<u64>) -> Result<Vec<u64>> {
    let sigma = x.sum();
    check_budget(sigma)?;
    let sigma = sigma as u64;
    let words = (sigma as usize / 64) + 1;
    let mut bits = vec![0u64; words];
    bits[0] = 1; // empty subset
    for &v in x.values() {
        or_shifted(&mut bits, v as usize);
    }
    let cap = t.unwrap_or(u64::MAX).min(sigma);
    let mut out = Vec::new();
    for s in 0..=cap {
        if bits[(s / 64) as usize] >> (s % 64) & 1 == 1 {
            out.push(s);
        }
    }
    Ok(out)
}

/// bits |= bits << k, in place.
fn or_shifted(bits: &mut [u64], k: usize) {
    let (q, r) = (k / 64, k % 64);
    for i in (q..bits.len()).rev() {
        let mut w = bits[i - q] << r;
        if r > 0 && i > q {
            w |= bits[i - q - 1] >> (64 - r);
        }
        bits[i] |= w;
    }
}

/// Exact profit function of a knapsack instance on [0, capacity], values in
/// the instance's profit-numerator unit. The first step is always (0, 0).
pub fn exact_knapsack(inst: &KnapsackInstance) -> Result<StepFunction> {
    let w_eff = inst.capacity().min(inst.total_weight().min(u64::MAX as u128) as u64);
    let cells = (inst.len() as u128 + 1) * (w_eff as u128 + 1);
    check_budget(inst.total_weight().max(cells))?;
    let mut dp = vec![0u64; w_eff as usize + 1];
    for it in inst.items() {
        let w = it.weight as usize;
        if w > dp.len() - 1 {
            continue;
        }
        for x in (w..dp.len()).rev() {
            dp[x] = dp[x].max(dp[x - w] + it.profit);
        }
    }
    // running max turns "exact weight" rows into the monotone profit function
    let mut best = 0u64;
    let mut steps = vec![(0u64, 0u64)];
    for (x, &v) in dp.iter().enumerate() {
        if v > best {
            best = v;
            steps.push((x as u64, v));
        }
    }
    StepFunction::from_steps(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::KnapsackItem;

    fn ms(v: &[u64]) -> IntegerMultiset {
        IntegerMultiset::new(v.to_vec()).unwrap()
    }

    /// Independent reference: explicit enumeration of all 2^n subsets.
    fn enumerate_sums(values: &[u64], t: Option<u64>) -> Vec<u64> {
        let mut sums = std::collections::BTreeSet::new();
        for mask in 0u32..1 << values.len() {
            let s: u64 = values
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .sum();
            if t.is_none_or(|t| s <= t) {
                sums.insert(s);
            }
        }
        sums.into_iter().collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(exact_subset_sums(&ms(&[1, 2]), None).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(exact_subset_sums(&ms(&[2, 2]), Some(3)).unwrap(), vec![0, 2]);
        assert_eq!(exact_subset_sums(&ms(&[3, 5, 7]), Some(10)).unwrap(), vec![0, 3, 5, 7, 8, 10]);
        assert_eq!(exact_subset_sums(&IntegerMultiset::empty(), None).unwrap(), vec![0]);
    }

    #[test]
    fn matches_enumeration_on_random_multisets() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for round in 0..60 {
            let n = (next() % 12 + 1) as usize;
            let values: Vec<u64> = (0..n).map(|_| next() % 97 + 1).collect();
            let t = if round % 3 == 0 { Some(next() % 200) } else { None };
            let x = ms(&values);
            assert_eq!(exact_subset_sums(&x, t).unwrap(), enumerate_sums(&values, t));
        }
    }

    #[test]
    fn large_shift_crosses_word_boundaries() {
        let x = ms(&[64, 65, 130]);
        assert_eq!(exact_subset_sums(&x, None).unwrap(), enumerate_sums(&[64, 65, 130], None));
    }

    #[test]
    fn budget_is_enforced() {
        let x = ms(&[u64::MAX / 4]);
        assert!(matches!(exact_subset_sums(&x, None), Err(Error::BudgetExceeded { .. })));
    }

    fn inst(items: &[(u64, u64)], cap: u64) -> KnapsackInstance {
        KnapsackInstance::new(
            items.iter().map(|&(p, w)| KnapsackItem { profit: p, weight: w }).collect(),
            cap,
            1,
        )
        .unwrap()
    }

    #[test]
    fn knapsack_examples() {
        let f = exact_knapsack(&inst(&[(2, 1)], 1)).unwrap();
        assert_eq!(f.steps(), &[(0, 0), (1, 2)]);

        let f = exact_knapsack(&inst(&[(2, 3), (3, 4)], 4)).unwrap();
        assert_eq!(f.eval(3), 2);
        assert_eq!(f.eval(4), 3);

        let f = exact_knapsack(&inst(&[], 5)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn knapsack_matches_enumeration() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let n = (next() % 9 + 1) as usize;
            let items: Vec<(u64, u64)> =
                (0..n).map(|_| (next() % 50 + 1, next() % 30 + 1)).collect();
            let cap = next() % 80;
            let f = exact_knapsack(&inst(&items, cap)).unwrap();
            // reference: enumerate all subsets, upper envelope by weight
            for x in 0..=cap {
                let mut best = 0;
                for mask in 0u32..1 << n {
                    let (mut p, mut w) = (0u64, 0u64);
                    for (i, &(pi, wi)) in items.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            p += pi;
                            w += wi;
                        }
                    }
                    if w <= x {
                        best = best.max(p);
                    }
                }
                assert_eq!(f.eval(x), best, "items {items:?} cap {cap} at {x}");
            }
        }
    }
}
