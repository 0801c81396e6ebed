//! Knapsack with a multiplicative profit guarantee.
//!
//! The pipeline normalizes profits onto dyadic bands whose numerators live
//! on a shared accuracy grid, solves each band by a three-way decomposition
//! chosen by profit diversity, and recombines bands into one profit
//! function that answers the capacity query.
//!
//! Weights stay exact throughout; only profits are rounded, and always
//! downward, so every intermediate function underestimates the true one.

mod approx;

pub use approx::{approx_up_to_b, few_profits_solver, random_partition_core};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{BigInt, BigRational, BigUint};

use approx::truncate_values;

use crate::dense::DenseConstants;
use crate::error::{Error, Result};
use crate::instance::{KnapsackInstance, KnapsackItem};
use crate::ratio::{normalize_eps, Ratio64};
use crate::stepfn::{pointwise_max, StepFunction};
use crate::util::kth_root_floor;

const MAX_GRID_DEN: u64 = 1 << 25;
const MAX_WEIGHT: u64 = u64::MAX / 8;

/// Items whose profit numerators over the grid denominator `e` lie in
/// [e, 2e), kept sorted by nonincreasing efficiency p/w.
#[derive(Debug, Clone)]
pub struct ReducedKnapsack {
    items: Vec<KnapsackItem>,
    e: u64,
}

impl ReducedKnapsack {
    pub fn new(mut items: Vec<KnapsackItem>, e: u64) -> Result<Self> {
        if !(3..=MAX_GRID_DEN).contains(&e) {
            return Err(Error::InvalidInput(format!(
                "grid denominator must lie in [3, {MAX_GRID_DEN}], got {e}"
            )));
        }
        let mut total: u128 = 0;
        let mut total_w: u128 = 0;
        for it in &items {
            if it.profit < e || it.profit >= 2 * e {
                return Err(Error::InvalidInput(format!(
                    "profit {} outside the band [{e}, {})",
                    it.profit,
                    2 * e
                )));
            }
            if it.weight == 0 || it.weight > MAX_WEIGHT {
                return Err(Error::InvalidInput(format!("weight {} out of range", it.weight)));
            }
            total += it.profit as u128;
            total_w += it.weight as u128;
        }
        if total > (u64::MAX / 4) as u128 || total_w > (u64::MAX / 4) as u128 {
            return Err(Error::InvalidInput("profit or weight mass too large".into()));
        }
        items.sort_by(|a, b| {
            (b.profit as u128 * a.weight as u128)
                .cmp(&(a.profit as u128 * b.weight as u128))
                .then(a.weight.cmp(&b.weight))
                .then(b.profit.cmp(&a.profit))
        });
        Ok(ReducedKnapsack { items, e })
    }

    pub fn items(&self) -> &[KnapsackItem] {
        &self.items
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn eps(&self) -> Ratio64 {
        Ratio64::new(1, self.e)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub(crate) fn total_units(&self) -> u64 {
        self.items.iter().map(|it| it.profit).sum()
    }
}

/// Arithmetic shared by one value level of the band solver: the diversity
/// threshold and the tail budget tied to it.
#[derive(Debug, Clone)]
pub struct GreedyParams {
    m: u64,
    delta: u64,
    b: Ratio64,
    c: Ratio64,
}

impl GreedyParams {
    pub fn new(m: u64, e: u64) -> Result<Self> {
        Self::with_constant(m, e, DenseConstants::empirical().clambda())
    }

    pub fn with_constant(m: u64, e: u64, c: Ratio64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("level target must be positive".into()));
        }
        if !(3..=MAX_GRID_DEN).contains(&e) {
            return Err(Error::InvalidInput(format!(
                "grid denominator must lie in [3, {MAX_GRID_DEN}], got {e}"
            )));
        }
        if c.is_zero() {
            return Err(Error::InvalidInput("density constant must be positive".into()));
        }
        // largest integer with delta^8 <= e^5
        let delta = kth_root_floor((e as u128).pow(5), 8).max(1);
        let b = Ratio64::new(9 * e, delta).mul(c);
        Ok(GreedyParams { m, delta, b, c })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Tail budget: the value above which the least-efficient remainder of
    /// the instance no longer matters at this level.
    pub fn b(&self) -> Ratio64 {
        self.b
    }

    pub fn c(&self) -> Ratio64 {
        self.c
    }
}

/// Shape knobs of the randomized partition core. All fields are plain data
/// so experiments can override any of them.
#[derive(Debug, Clone)]
pub struct RandomPartitionParams {
    /// Target class count; classes are split to at most ceil(n / delta1).
    pub delta1: u64,
    /// Part count for the scatter step; rounded down to a power of two.
    pub delta0: u64,
    pub seed: u64,
    /// Multiplier on the tournament merge window.
    pub window_constant: u64,
}

impl RandomPartitionParams {
    pub fn for_instance(n: usize, eps: Ratio64, seed: u64) -> Self {
        let n = n as u64;
        if n <= 1 {
            return RandomPartitionParams { delta1: 1, delta0: 1, seed, window_constant: 4 };
        }
        let delta1 = (n as f64).sqrt().ceil() as u64;
        // smallest power of two p with p^10 >= n^7 eps^4, capped below delta1
        let mut delta0 = 1u64;
        if !eps.is_zero() {
            let target = BigUint::from(n).pow(7) * BigUint::from(eps.num()).pow(4);
            let den4 = BigUint::from(eps.den()).pow(4);
            while BigUint::from(delta0).pow(10) * &den4 < target && delta0 < 1 << 32 {
                delta0 *= 2;
            }
        }
        let delta0 = delta0.min(1 << delta1.ilog2());
        RandomPartitionParams { delta1, delta0, seed, window_constant: 4 }
    }
}

/// One dyadic profit band: numerators in [e, 2e) represent real profits in
/// [2^shift, 2^(shift+1)).
#[derive(Debug, Clone)]
pub struct ProfitBand {
    pub shift: i32,
    pub items: ReducedKnapsack,
}

/// Result of normalizing an instance: bands plus the bookkeeping needed to
/// map unit values back to exact rational profits.
#[derive(Debug, Clone)]
pub struct KnapsackReduction {
    bands: Vec<ProfitBand>,
    e: u64,
    discarded: usize,
    shift_base: i32,
}

impl KnapsackReduction {
    pub fn bands(&self) -> &[ProfitBand] {
        &self.bands
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    /// Items dropped because their profit cannot move the total by a full
    /// accuracy step.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    /// Merge per-band profit functions (in band units) into one function on
    /// the base-band grid.
    pub fn combine(&self, fns: &[StepFunction]) -> Result<StepFunction> {
        if fns.len() != self.bands.len() {
            return Err(Error::InvalidInput("one profit function per band required".into()));
        }
        if fns.is_empty() {
            return Ok(StepFunction::zero());
        }
        let mut scaled = Vec::with_capacity(fns.len());
        for (band, f) in self.bands.iter().zip(fns) {
            let rel = (band.shift - self.shift_base) as u32;
            if rel >= 64 || f.max_value() > u64::MAX >> rel {
                return Err(Error::InvalidInput("profit range too wide to combine".into()));
            }
            scaled.push(f.map_values(|y| y << rel));
        }
        let hi = scaled.iter().map(|f| f.max_value()).max().unwrap_or(0);
        if hi == 0 {
            return Ok(StepFunction::zero());
        }
        let lo = scaled.iter().filter_map(|f| f.min_positive_value()).min().unwrap_or(1);
        let levels = (scaled.len().next_power_of_two().trailing_zeros() + 1) as u64;
        let eps_m = Ratio64::new(1, self.e).div_int(4 * levels);
        crate::convolution::merge_many_stepfns(&scaled, eps_m, lo, hi)
    }

    /// Exact rational profit represented by `units` on the base-band grid.
    pub fn value(&self, units: u64) -> BigRational {
        let num = BigInt::from(units);
        let den = BigInt::from(self.e);
        if self.shift_base >= 0 {
            BigRational::new(num << self.shift_base as usize, den)
        } else {
            BigRational::new(num, den << (-self.shift_base) as usize)
        }
    }
}

/// Dyadic band coordinates of the real profit r/den: a shift j with
/// r/den in [2^j, 2^(j+1)) and the numerator of the rescaled profit floored
/// onto the e-grid.
fn band_coords(r: u64, den: u64, e: u64) -> (i32, u64) {
    let (r, den, e) = (r as u128, den as u128, e as u128);
    if r >= den {
        let j = (r / den).ilog2();
        (j as i32, (r * e / (den << j)) as u64)
    } else {
        let mut k = 0u32;
        while r << k < den {
            k += 1;
        }
        (-(k as i32), ((r << k) * e / den) as u64)
    }
}

/// Normalize an instance for the band solvers: items that cannot fit or
/// cannot move the answer by an accuracy step are dropped, the rest are
/// grouped by dyadic profit range and floored onto the accuracy grid.
pub fn reduce_knapsack(inst: &KnapsackInstance, eps: Ratio64) -> Result<KnapsackReduction> {
    let e = normalize_eps(eps)?;
    if e > MAX_GRID_DEN {
        return Err(Error::InvalidInput("accuracy too fine for the profit grid".into()));
    }
    let keep: Vec<&KnapsackItem> =
        inst.items().iter().filter(|it| it.weight <= inst.capacity()).collect();
    if keep.is_empty() {
        return Ok(KnapsackReduction { bands: Vec::new(), e, discarded: 0, shift_base: 0 });
    }
    let max_r = keep.iter().map(|it| it.profit).max().unwrap() as u128;
    let n = keep.len() as u128;
    let mut discarded = 0usize;
    let mut banded: BTreeMap<i32, Vec<KnapsackItem>> = BTreeMap::new();
    for it in keep {
        if it.profit as u128 * n * e as u128 <= max_r {
            discarded += 1;
            continue;
        }
        let (shift, v) = band_coords(it.profit, inst.profit_den(), e);
        banded.entry(shift).or_default().push(KnapsackItem { profit: v, weight: it.weight });
    }
    let bands = banded
        .into_iter()
        .map(|(shift, items)| ReducedKnapsack::new(items, e).map(|items| ProfitBand { shift, items }))
        .collect::<Result<Vec<_>>>()?;
    let shift_base = bands.first().map(|b| b.shift).unwrap_or(0);
    Ok(KnapsackReduction { bands, e, discarded, shift_base })
}

/// Efficiency-greedy prefix profits, coarsened so the loss stays an eps
/// fraction of the budget `b` the caller cares about.
///
/// Expects `items` already in nonincreasing efficiency order (as kept by
/// [`ReducedKnapsack`]); values are left in the caller's profit units.
pub fn greedy_profit(items: &[KnapsackItem], b: Ratio64) -> StepFunction {
    let grid = (b.num() / (4 * b.den())).max(1);
    let mut points = Vec::with_capacity(items.len());
    let mut w: u128 = 0;
    let mut p: u64 = 0;
    for it in items {
        w += it.weight as u128;
        if w > (u64::MAX / 4) as u128 {
            break;
        }
        p = p.saturating_add(it.profit);
        points.push((w as u64, p - p % grid));
    }
    StepFunction::upper_envelope(points)
}

/// Fenwick tree over multiplicity classes: class c counts how many distinct
/// profits currently occur exactly c times.
struct ClassTree {
    cnt: Vec<i64>,
    sum: Vec<i128>,
}

impl ClassTree {
    fn new(n: usize) -> Self {
        ClassTree { cnt: vec![0; n + 1], sum: vec![0; n + 1] }
    }

    fn add(&mut self, mut i: usize, dc: i64) {
        let ds = dc as i128 * i as i128;
        while i < self.cnt.len() {
            self.cnt[i] += dc;
            self.sum[i] += ds;
            i += i & i.wrapping_neg();
        }
    }

    /// Greedily afford whole classes in increasing multiplicity order:
    /// returns (#distinct values covered, leftover budget, first class not
    /// fully covered).
    fn affordable(&self, budget: u64) -> (u64, u64, usize) {
        let mut bit = 1usize;
        while bit * 2 <= self.cnt.len() - 1 {
            bit *= 2;
        }
        let mut pos = 0usize;
        let mut rem = budget as i128;
        let mut vals = 0i64;
        while bit > 0 {
            let next = pos + bit;
            if next < self.cnt.len() && self.sum[next] <= rem {
                rem -= self.sum[next];
                vals += self.cnt[next];
                pos = next;
            }
            bit >>= 1;
        }
        (vals as u64, rem as u64, pos + 1)
    }
}

/// Profit diversity sweep. For each prefix of the efficiency-sorted profit
/// slice, count the distinct profits that survive deleting up to `2 m`
/// items greedily (whole minimum-multiplicity values first). Returns the
/// largest prefix length whose survivor count stays within `delta`, the
/// deleted positions for that prefix, and the per-prefix survivor counts.
pub fn diversity_index(profits: &[u64], m: u64, delta: u64) -> (usize, Vec<usize>, Vec<u64>) {
    let n = profits.len();
    if n == 0 {
        return (0, Vec::new(), Vec::new());
    }
    let budget = m.saturating_mul(2);
    let mut tree = ClassTree::new(n);
    let mut mult: HashMap<u64, usize> = HashMap::new();
    let mut class_counts = vec![0u64; n + 2];
    let mut distinct = 0u64;
    let mut d = Vec::with_capacity(n);
    for &p in profits {
        let c = mult.entry(p).or_insert(0);
        if *c == 0 {
            distinct += 1;
        } else {
            tree.add(*c, -1);
            class_counts[*c] -= 1;
        }
        *c += 1;
        tree.add(*c, 1);
        class_counts[*c] += 1;
        let (vals, rem, next) = tree.affordable(budget);
        let extra = if next <= n { (rem / next as u64).min(class_counts[next]) } else { 0 };
        d.push(distinct - (vals + extra).min(distinct));
    }
    let i_star = (1..=n).rev().find(|&i| d[i - 1] <= delta).unwrap_or(0);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &p in &profits[..i_star] {
        *counts.entry(p).or_default() += 1;
    }
    let mut order: Vec<(u64, u64)> = counts.into_iter().map(|(v, c)| (c, v)).collect();
    order.sort_unstable();
    let mut rem = budget;
    let mut dropped = BTreeSet::new();
    for (c, v) in order {
        if c > rem {
            break;
        }
        rem -= c;
        dropped.insert(v);
    }
    let j = (0..i_star).filter(|&ix| dropped.contains(&profits[ix])).collect();
    (i_star, j, d)
}

/// Deterministic per-purpose seed derivation (splitmix64 over a tagged
/// seed), so nested solver stages draw independent streams.
fn split_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Merge the nonzero functions, geometric value rounding spread across the
/// merge tree, then cap.
fn merge_parts(parts: Vec<StepFunction>, eps: Ratio64, cap: u64) -> Result<StepFunction> {
    let parts: Vec<StepFunction> = parts.into_iter().filter(|f| !f.is_zero()).collect();
    if parts.is_empty() {
        return Ok(StepFunction::zero());
    }
    let lo = parts.iter().filter_map(|f| f.min_positive_value()).min().unwrap();
    let hi = parts.iter().map(|f| f.max_value()).max().unwrap();
    let merged = crate::convolution::merge_many_stepfns(&parts, eps.div_int(4), lo, hi)?;
    Ok(truncate_values(&merged, cap))
}

/// Solve one value level of a band: split the prefix chosen by the
/// diversity sweep into the deleted set (randomized core, amplified) and
/// the low-diversity remainder (few-profits solver), cap the inefficient
/// tail at the level budget, and merge. The result underestimates the true
/// profit function everywhere and is within m grid units of it wherever it
/// stays at or below 2 m e units.
pub fn greedy_exchange_solve(
    items: &ReducedKnapsack,
    m: u64,
    eps: Ratio64,
    seed: u64,
    rounds: u32,
) -> Result<StepFunction> {
    if items.is_empty() {
        return Ok(StepFunction::zero());
    }
    let e = items.e();
    let params = GreedyParams::new(m, e)?;
    if eps.is_zero() || eps.cmp_int(1) != std::cmp::Ordering::Less {
        return Err(Error::InvalidInput("accuracy must lie in (0, 1)".into()));
    }
    // internal accuracy downshift turns the lemma's O(m eps) into m eps
    let eps_in = eps.div_int(16);
    let cap = m.saturating_mul(2).saturating_mul(e);
    let profits: Vec<u64> = items.items().iter().map(|it| it.profit).collect();
    let (i, j_set, _) = diversity_index(&profits, m, params.delta());
    let j_mask: BTreeSet<usize> = j_set.into_iter().collect();
    let mut head = Vec::new();
    let mut mid = Vec::new();
    for (ix, it) in items.items()[..i].iter().enumerate() {
        if j_mask.contains(&ix) {
            head.push(*it);
        } else {
            mid.push(*it);
        }
    }
    let tail = items.items()[i..].to_vec();

    let mut parts = Vec::new();
    if !head.is_empty() {
        let head = ReducedKnapsack::new(head, e)?;
        let mut best: Option<StepFunction> = None;
        for r in 0..rounds.max(1) {
            let mut p = RandomPartitionParams::for_instance(head.len(), eps_in, 0);
            p.seed = split_seed(seed, 256 + r as u64);
            let f = random_partition_core(&head, eps_in, &p)?;
            match &best {
                // deterministic regime: further rounds are identical
                Some(prev) if prev.steps() == f.steps() => break,
                Some(prev) => best = Some(pointwise_max(&[prev.clone(), f])?),
                None => best = Some(f),
            }
        }
        if let Some(f) = best {
            parts.push(truncate_values(&f, cap));
        }
    }
    if !mid.is_empty() {
        let mid = ReducedKnapsack::new(mid, e)?;
        parts.push(truncate_values(&few_profits_solver(&mid, eps_in)?, cap));
    }
    if !tail.is_empty() {
        let tail = ReducedKnapsack::new(tail, e)?;
        parts.push(truncate_values(&approx_up_to_b(&tail, params.b(), eps_in)?, cap));
    }
    merge_parts(parts, eps_in, cap)
}

/// Profit function of one band: doubling value levels, each solved by the
/// exchange decomposition, plus the greedy fallback that covers values
/// beyond the last level.
fn band_profit_fn(band: &ReducedKnapsack, seed: u64, rounds: u32) -> Result<StepFunction> {
    if band.is_empty() {
        return Ok(StepFunction::zero());
    }
    let e = band.e();
    let total = band.total_units();
    // levels stop once 2 m e covers min(2 e^2, total): beyond 2/eps the
    // greedy prefix is already accurate enough
    let target = (2 * e as u128 * e as u128).min(total as u128) as u64;
    let mut fns = vec![greedy_profit(band.items(), Ratio64::from_int(2 * e))];
    let mut m = 1u64;
    for level in 0.. {
        fns.push(greedy_exchange_solve(band, m, band.eps(), split_seed(seed, 512 + level), rounds)?);
        if m.saturating_mul(2).saturating_mul(e) >= target {
            break;
        }
        m *= 2;
    }
    pointwise_max(&fns)
}

/// Full solver with explicit seed and amplification rounds.
pub fn solve_knapsack_with(
    inst: &KnapsackInstance,
    eps: Ratio64,
    seed: u64,
    rounds: u32,
) -> Result<BigRational> {
    let e_user = normalize_eps(eps)?;
    // run the bands 8x finer: band rounding, level merges, and the greedy
    // tail each eat a slice of the user budget
    let e_run = 8 * e_user;
    if e_run > MAX_GRID_DEN {
        return Err(Error::InvalidInput("accuracy too fine for the profit grid".into()));
    }
    let red = reduce_knapsack(inst, Ratio64::new(1, e_run))?;
    let fns = red
        .bands()
        .iter()
        .enumerate()
        .map(|(bi, band)| band_profit_fn(&band.items, split_seed(seed, (bi as u64) << 20), rounds))
        .collect::<Result<Vec<_>>>()?;
    let combined = red.combine(&fns)?;
    Ok(red.value(combined.eval(inst.capacity())))
}

/// (1 - eps)-approximate optimal knapsack profit, as an exact rational.
pub fn solve_knapsack(inst: &KnapsackInstance, eps: Ratio64) -> Result<BigRational> {
    solve_knapsack_with(inst, eps, 0, 20)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::maxplus_merge;
    use crate::oracle::exact_knapsack;
    use num::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn items(pw: &[(u64, u64)]) -> Vec<KnapsackItem> {
        pw.iter().map(|&(p, w)| KnapsackItem { profit: p, weight: w }).collect()
    }

    fn oracle_fn(its: &[KnapsackItem], den: u64) -> StepFunction {
        let w: u128 = its.iter().map(|it| it.weight as u128).sum();
        let inst = KnapsackInstance::new(its.to_vec(), w as u64, den).unwrap();
        exact_knapsack(&inst).unwrap()
    }

    #[test]
    fn reduced_knapsack_sorts_by_efficiency_and_validates() {
        let r = ReducedKnapsack::new(items(&[(10, 5), (15, 5), (10, 1)]), 10).unwrap();
        let got: Vec<(u64, u64)> = r.items().iter().map(|it| (it.profit, it.weight)).collect();
        assert_eq!(got, vec![(10, 1), (15, 5), (10, 5)]);
        assert!(ReducedKnapsack::new(items(&[(9, 1)]), 10).is_err());
        assert!(ReducedKnapsack::new(items(&[(20, 1)]), 10).is_err());
        assert!(ReducedKnapsack::new(items(&[(10, 0)]), 10).is_err());
    }

    #[test]
    fn greedy_profit_prefix_example() {
        let f = greedy_profit(&items(&[(2, 1), (1, 1)]), Ratio64::from_int(2));
        assert_eq!(f.steps(), &[(1, 2), (2, 3)]);
        let single = greedy_profit(&items(&[(5, 4)]), Ratio64::from_int(2));
        assert_eq!(single.steps(), &[(4, 5)]);
    }

    #[test]
    fn greedy_profit_stays_within_one_item_of_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let e = 10u64;
            let its: Vec<KnapsackItem> = (0..rng.random_range(2..=10))
                .map(|_| KnapsackItem {
                    profit: rng.random_range(e..2 * e),
                    weight: rng.random_range(1..=20),
                })
                .collect();
            let r = ReducedKnapsack::new(its, e).unwrap();
            let f = greedy_profit(r.items(), Ratio64::from_int(2 * e));
            let exact = oracle_fn(r.items(), e);
            for &(x, y) in exact.steps() {
                // one unfinished item plus the value grid of e/2 units
                assert!(f.eval(x) + 2 * e + e / 2 >= y, "at {x}: {} vs {y}", f.eval(x));
                assert!(f.eval(x) <= y);
            }
        }
    }

    #[test]
    fn diversity_pinned_example() {
        // profits 1.0, 1.0, 1.2, 1.4 on the e=10 grid; deleting two items
        // removes both rare values
        let (i, j, d) = diversity_index(&[10, 10, 12, 14], 1, 1);
        assert_eq!(i, 4);
        assert_eq!(j, vec![2, 3]);
        assert_eq!(d, vec![0, 0, 1, 1]);
    }

    #[test]
    fn diversity_all_equal() {
        let profits = vec![10u64; 8];
        let (i, j, d) = diversity_index(&profits, 2, 1);
        assert_eq!(i, 8);
        assert!(j.is_empty() || j.len() <= 4);
        for (ix, &dv) in d.iter().enumerate() {
            assert_eq!(dv, u64::from(ix + 1 > 4));
        }
    }

    #[test]
    fn diversity_greedy_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let n = rng.random_range(1..=12);
            let profits: Vec<u64> = (0..n).map(|_| rng.random_range(10..16)).collect();
            let m = rng.random_range(1..=2u64);
            let (_, _, d) = diversity_index(&profits, m, 1);
            for i in 1..=n {
                let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
                for &p in &profits[..i] {
                    *counts.entry(p).or_default() += 1;
                }
                let counts: Vec<u64> = counts.values().copied().collect();
                let mut best = counts.len() as u64;
                for mask in 0u32..1 << counts.len() {
                    let (mut removed, mut cost) = (0u64, 0u64);
                    for (ci, &c) in counts.iter().enumerate() {
                        if mask >> ci & 1 == 1 {
                            removed += 1;
                            cost += c;
                        }
                    }
                    if cost <= 2 * m {
                        best = best.min(counts.len() as u64 - removed);
                    }
                }
                assert_eq!(d[i - 1], best, "prefix {i} of {profits:?}, m={m}");
            }
        }
    }

    #[test]
    fn diversity_steps_by_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let profits: Vec<u64> = (0..60).map(|_| rng.random_range(20..40)).collect();
        let (_, _, d) = diversity_index(&profits, 3, 2);
        for w in d.windows(2) {
            assert!(w[1] >= w[0] && w[1] - w[0] <= 1, "jump {w:?}");
        }
    }

    #[test]
    fn greedy_params_arithmetic_is_exact() {
        for e in [8u64, 100, 1000, 4096] {
            let p = GreedyParams::new(4, e).unwrap();
            // b * delta == 9 c / eps, exactly
            assert_eq!(p.b().mul_int(p.delta()), Ratio64::from_int(9 * e).mul(p.c()));
            let d = p.delta() as u128;
            assert!(d.pow(8) <= (e as u128).pow(5));
            assert!((d + 1).pow(8) > (e as u128).pow(5));
        }
    }

    #[test]
    fn exchange_cap_loses_at_most_eps_of_reachable_values() {
        // split per the diversity sweep, merge exact part functions with
        // the tail capped at the level budget, and compare against the
        // uncapped optimum on the trusted value range
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let e = 32u64;
        let m = 32u64;
        let params = GreedyParams::new(m, e).unwrap();
        let b_units = params.b().floor_mul(e);
        for _ in 0..4 {
            let n = 110usize;
            let its: Vec<KnapsackItem> = (0..n)
                .map(|_| KnapsackItem {
                    profit: rng.random_range(e..2 * e),
                    weight: rng.random_range(1..=60),
                })
                .collect();
            let r = ReducedKnapsack::new(its, e).unwrap();
            let profits: Vec<u64> = r.items().iter().map(|it| it.profit).collect();
            let (i, j, _) = diversity_index(&profits, m, params.delta());
            let j_mask: BTreeSet<usize> = j.into_iter().collect();
            let mut head = Vec::new();
            let mut mid = Vec::new();
            for (ix, it) in r.items()[..i].iter().enumerate() {
                if j_mask.contains(&ix) {
                    head.push(*it);
                } else {
                    mid.push(*it);
                }
            }
            let tail: Vec<KnapsackItem> = r.items()[i..].to_vec();
            let mut merged = StepFunction::zero();
            for part in [head, mid] {
                if !part.is_empty() {
                    merged = maxplus_merge(&merged, &oracle_fn(&part, e));
                }
            }
            if !tail.is_empty() {
                let capped = truncate_values(&oracle_fn(&tail, e), b_units);
                merged = maxplus_merge(&merged, &capped);
            }
            let whole = oracle_fn(r.items(), e);
            for &(x, y) in whole.steps() {
                if y <= 2 * m * e {
                    let got = merged.eval(x);
                    assert!(
                        got as u128 * e as u128 >= y as u128 * (e - 1) as u128,
                        "capped merge at {x}: {got} vs {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn exchange_solver_is_one_sided_and_tight_below_the_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = 8u64;
        for trial in 0..40 {
            let n = rng.random_range(2..=14);
            let its: Vec<KnapsackItem> = (0..n)
                .map(|_| KnapsackItem {
                    profit: rng.random_range(e..2 * e),
                    weight: rng.random_range(1..=25),
                })
                .collect();
            let r = ReducedKnapsack::new(its, e).unwrap();
            let m = 4u64;
            let f = greedy_exchange_solve(&r, m, Ratio64::new(1, e), trial, 5).unwrap();
            let exact = oracle_fn(r.items(), e);
            for &(x, y) in f.steps() {
                assert!(y <= exact.eval(x), "overestimate at {x}");
            }
            for &(x, y) in exact.steps() {
                if y <= 2 * m * e {
                    assert!(f.eval(x) + m >= y, "at {x}: {} vs {y}", f.eval(x));
                }
            }
        }
    }

    #[test]
    fn exchange_solver_homogeneous_profits() {
        // single distinct profit: the diversity prefix swallows everything
        let r = ReducedKnapsack::new(items(&[(12, 3), (12, 5), (12, 2), (12, 7)]), 8).unwrap();
        let f = greedy_exchange_solve(&r, 2, Ratio64::new(1, 8), 0, 3).unwrap();
        let exact = oracle_fn(r.items(), 8);
        for &(x, y) in exact.steps() {
            if y <= 2 * 2 * 8 {
                assert!(f.eval(x) + 2 >= y, "at {x}: {} vs {y}", f.eval(x));
            }
        }
    }

    #[test]
    fn reduce_single_item_floors_to_grid() {
        let inst =
            KnapsackInstance::new(vec![KnapsackItem { profit: 103, weight: 2 }], 10, 100).unwrap();
        let red = reduce_knapsack(&inst, Ratio64::new(1, 10)).unwrap();
        assert_eq!(red.bands().len(), 1);
        assert_eq!(red.bands()[0].shift, 0);
        assert_eq!(red.bands()[0].items.items()[0].profit, 10); // 1.03 -> 1.0
        assert_eq!(red.discarded(), 0);
    }

    #[test]
    fn reduce_discards_negligible_profits() {
        let inst = KnapsackInstance::new(
            items(&[(1, 1), (1000, 1)]),
            5,
            1,
        )
        .unwrap();
        let red = reduce_knapsack(&inst, Ratio64::new(1, 10)).unwrap();
        assert_eq!(red.discarded(), 1);
        let total: usize = red.bands().iter().map(|b| b.items.len()).sum();
        assert_eq!(total, 1);
        assert_eq!(red.bands()[0].shift, 9); // 1000 in [512, 1024)
    }

    #[test]
    fn reduce_empty_combines_to_zero() {
        let inst = KnapsackInstance::new(items(&[(5, 9)]), 3, 1).unwrap(); // cannot fit
        let red = reduce_knapsack(&inst, Ratio64::new(1, 10)).unwrap();
        assert!(red.bands().is_empty());
        assert!(red.combine(&[]).unwrap().is_zero());
    }

    #[test]
    fn band_coords_cover_fractional_and_large_profits() {
        assert_eq!(band_coords(103, 100, 10), (0, 10));
        assert_eq!(band_coords(1, 4, 10), (-2, 10)); // 0.25 -> band [1/4, 1/2)
        assert_eq!(band_coords(7, 2, 10), (1, 17)); // 3.5 -> 1.75 on the grid
        assert_eq!(band_coords(1000, 1, 10), (9, 19));
    }

    #[test]
    fn solve_pinned_example() {
        let inst = KnapsackInstance::new(items(&[(2, 3), (3, 4)]), 4, 1).unwrap();
        let sol = solve_knapsack(&inst, Ratio64::new(1, 10)).unwrap();
        let lo = BigRational::new(BigInt::from(27), BigInt::from(10));
        let hi = BigRational::from_integer(BigInt::from(3));
        assert!(sol >= lo && sol <= hi, "solution {sol} outside [2.7, 3]");
    }

    #[test]
    fn solve_single_fitting_item() {
        let inst = KnapsackInstance::new(vec![KnapsackItem { profit: 7, weight: 5 }], 9, 2).unwrap();
        let sol = solve_knapsack(&inst, Ratio64::new(1, 10)).unwrap();
        let opt = BigRational::new(BigInt::from(7), BigInt::from(2));
        assert!(sol <= opt);
        assert!(&sol * BigInt::from(10) >= &opt * BigInt::from(9));
    }

    #[test]
    fn solve_infeasible_is_zero() {
        let inst = KnapsackInstance::new(items(&[(3, 10), (5, 11)]), 9, 1).unwrap();
        let sol = solve_knapsack(&inst, Ratio64::new(1, 10)).unwrap();
        assert!(sol.is_zero());
    }

    #[test]
    fn solve_matches_guarantee_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..30 {
            let n = rng.random_range(1..=12);
            let den = 4u64;
            let its: Vec<KnapsackItem> = (0..n)
                .map(|_| KnapsackItem {
                    profit: rng.random_range(1..=12),
                    weight: rng.random_range(1..=50),
                })
                .collect();
            let cap = rng.random_range(1..=120u64);
            let inst = KnapsackInstance::new(its, cap, den).unwrap();
            let sol = solve_knapsack_with(&inst, Ratio64::new(1, 10), trial, 20).unwrap();
            let opt_units = exact_knapsack(&inst).unwrap().eval(cap);
            let opt = BigRational::new(BigInt::from(opt_units), BigInt::from(den));
            assert!(sol <= opt, "trial {trial}: {sol} > {opt}");
            assert!(
                &sol * BigInt::from(10) >= &opt * BigInt::from(9),
                "trial {trial}: {sol} below (1-eps) {opt}"
            );
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let inst = KnapsackInstance::new(items(&[(5, 3), (7, 4), (6, 2)]), 6, 4).unwrap();
        let a = solve_knapsack_with(&inst, Ratio64::new(1, 20), 3, 4).unwrap();
        let b = solve_knapsack_with(&inst, Ratio64::new(1, 20), 3, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn partition_params_scale_with_instance() {
        let p = RandomPartitionParams::for_instance(1, Ratio64::new(1, 8), 0);
        assert_eq!((p.delta1, p.delta0), (1, 1));
        let p = RandomPartitionParams::for_instance(100, Ratio64::new(1, 64), 0);
        assert_eq!(p.delta1, 10);
        assert!(p.delta0.is_power_of_two() && p.delta0 <= 8);
        // delta0 never exceeds the largest power of two below delta1
        let p = RandomPartitionParams::for_instance(1 << 14, Ratio64::new(1, 3), 0);
        assert!(p.delta0 <= 1 << p.delta1.ilog2());
    }
}
