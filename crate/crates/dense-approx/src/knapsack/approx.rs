//! Profit-function subroutines behind the knapsack solver: a divisor-graded
//! merge that is accurate up to a value budget, a solver for instances with
//! few distinct profits, and the randomized partition core with its
//! tournament recombination.
//!
//! All functions here are one-sided: outputs never exceed the exact profit
//! function of their item set. Values are integer numerators over the grid
//! denominator `e` carried by [`ReducedKnapsack`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::convolution::{
    delta_multiple_set, maxplus_merge, minplus_windowed, quantize_down, smawk_uniform_merge,
    UniformFunction, INF,
};
use crate::error::{Error, Result};
use crate::instance::KnapsackItem;
use crate::ratio::Ratio64;
use crate::stepfn::{pointwise_max, StepFunction};

use super::{RandomPartitionParams, ReducedKnapsack};

/// Largest cost table the partition core will allocate before refusing.
const MAX_CORE_TABLE: u64 = 1 << 26;

/// Below this profit mass the unit grid is affordable; every rounding step
/// then degenerates to exact integer arithmetic.
const FINE_TABLE_BUDGET: u64 = 1 << 21;

fn check_eps(eps: Ratio64) -> Result<()> {
    if eps.is_zero() || eps.cmp_int(1) != Ordering::Less {
        return Err(Error::InvalidInput("accuracy must lie in (0, 1)".into()));
    }
    Ok(())
}

/// Drops all steps above `cap`. Unlike a pointwise min this keeps every
/// reported value achievable by an actual item subset.
pub(crate) fn truncate_values(f: &StepFunction, cap: u64) -> StepFunction {
    StepFunction::upper_envelope(f.steps().iter().copied().take_while(|&(_, y)| y <= cap))
}

fn profit_groups(items: &[KnapsackItem]) -> Vec<(u64, Vec<u64>)> {
    let mut by_value: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for it in items {
        by_value.entry(it.profit).or_default().push(it.weight);
    }
    by_value.into_iter().collect()
}

/// Balanced exact merge, value-truncated at `cap` after every step.
fn exact_capped(fs: &[StepFunction], cap: u64) -> StepFunction {
    match fs {
        [] => StepFunction::zero(),
        [f] => f.clone(),
        _ => {
            let (a, b) = fs.split_at(fs.len() / 2);
            truncate_values(&maxplus_merge(&exact_capped(a, cap), &exact_capped(b, cap)), cap)
        }
    }
}

/// Divisor grid over the profit denominator `den`: geometric ladder entries
/// quantized down to integers, clamped to at least 1, deduplicated.
fn divisor_entries(eps: Ratio64, delta: Ratio64, den: u64) -> Result<Vec<u64>> {
    let ladder = delta_multiple_set(eps, delta)?;
    let mut entries: Vec<u64> = quantize_down(&ladder, den).into_iter().map(|a| a.max(1)).collect();
    entries.sort_unstable();
    entries.dedup();
    Ok(entries)
}

/// Entry whose largest multiple below `v` keeps the most of it; ties prefer
/// the larger entry so downstream tables stay coarse.
fn best_entry(entries: &[u64], v: u64) -> (u64, u64) {
    let mut best = (entries[0], v - v % entries[0]);
    for &a in &entries[1..] {
        let kept = v - v % a;
        if kept > best.1 || (kept == best.1 && a > best.0) {
            best = (a, kept);
        }
    }
    best
}

/// Graded merge of the profit functions of `items`: one-sided everywhere,
/// within a (1 - eps) factor wherever the exact function stays at or below
/// `cap_units`.
///
/// Distinct profits are rounded down onto a divisor grid and merged with the
/// SMAWK staircase; the additive slack of that merge (at most the sum of the
/// used divisors) is repaired by an exact merge of the low value range where
/// the slack would dominate.
pub(crate) fn capped_ladder_merge(
    items: &ReducedKnapsack,
    eps: Ratio64,
    cap_units: u64,
) -> Result<StepFunction> {
    if items.is_empty() || cap_units == 0 {
        return Ok(StepFunction::zero());
    }
    check_eps(eps)?;
    let groups = profit_groups(items.items());
    if groups.len() == 1 {
        let (v, ws) = &groups[0];
        let f = UniformFunction::from_weights(*v, ws.clone())?.to_step_function();
        return Ok(truncate_values(&f, cap_units));
    }
    let eps_in = eps.div_int(4);
    let entries = divisor_entries(eps_in.div_int(2), eps_in, items.e())?;
    let mut rounded = Vec::with_capacity(groups.len());
    let mut used = BTreeSet::new();
    let mut rounded_total: u128 = 0;
    for (v, ws) in &groups {
        let (a, vr) = best_entry(&entries, *v);
        used.insert(a);
        rounded_total += vr as u128 * ws.len() as u128;
        rounded.push(UniformFunction::from_weights(vr, ws.clone())?);
    }
    let cap_eff = cap_units.min(rounded_total.min(u64::MAX as u128) as u64);
    let core = smawk_uniform_merge(&rounded, &entries, cap_eff)?;
    // below slack/eps_in the graded merge's additive slack can exceed an
    // eps_in fraction of the value; patch that range exactly
    let slack: u64 = used.iter().sum();
    let exact_to = ((slack as u128 * eps_in.den() as u128).div_ceil(eps_in.num() as u128))
        .min(cap_units as u128) as u64;
    let patch = if exact_to > 0 {
        let fs = groups
            .iter()
            .map(|(v, ws)| {
                UniformFunction::from_weights(*v, ws.clone())
                    .map(|u| truncate_values(&u.to_step_function(), exact_to))
            })
            .collect::<Result<Vec<_>>>()?;
        exact_capped(&fs, exact_to)
    } else {
        StepFunction::zero()
    };
    pointwise_max(&[truncate_values(&core, cap_units), patch])
}

/// One-sided profit function that is (1 - eps)-accurate wherever the exact
/// function stays at or below the budget `b` (in profit, not grid units).
pub fn approx_up_to_b(items: &ReducedKnapsack, b: Ratio64, eps: Ratio64) -> Result<StepFunction> {
    if items.is_empty() || b.is_zero() {
        return Ok(StepFunction::zero());
    }
    check_eps(eps)?;
    let total = items.total_units();
    let cap = if b.cmp_frac(total as u128, items.e() as u128) != Ordering::Less {
        total
    } else {
        b.ceil_mul(items.e())
    };
    capped_ladder_merge(items, eps, cap)
}

/// (1 - eps)-approximate profit function, efficient when the items take few
/// distinct profit values: per value the function is a uniform staircase
/// computed by weight-sorted greedy, and the staircases are merged on a
/// shared divisor grid.
pub fn few_profits_solver(items: &ReducedKnapsack, eps: Ratio64) -> Result<StepFunction> {
    if items.is_empty() {
        return Ok(StepFunction::zero());
    }
    check_eps(eps)?;
    capped_ladder_merge(items, eps, items.total_units())
}

struct DivisorClass {
    modulus: u64,
    /// (value on the lifted grid, weight); values are multiples of `modulus`.
    members: Vec<(u64, u64)>,
}

struct CoreGrid {
    /// Denominator lift: internal values live on the grid 1 / (e * q).
    q: u64,
    /// Unit grid: every rounding step below is exact integer arithmetic.
    fine: bool,
    classes: Vec<DivisorClass>,
}

pub(crate) fn draw_assignment(rng: &mut ChaCha8Rng, k: usize, delta0: u64) -> Vec<u64> {
    (0..k).map(|_| rng.random_range(0..delta0)).collect()
}

pub(crate) fn max_load(assignment: &[u64], delta0: u64) -> usize {
    let mut counts = vec![0usize; delta0 as usize];
    for &p in assignment {
        counts[p as usize] += 1;
    }
    counts.into_iter().max().unwrap_or(0)
}

/// Size bound per part before the assignment is redrawn.
pub(crate) fn balanced_load_limit(k: usize, delta0: u64) -> usize {
    4 * k.div_ceil(delta0 as usize) + 4
}

/// Choose the internal grid and scatter items into divisor classes of at
/// most ceil(n / delta1) members each.
fn plan_grid(items: &ReducedKnapsack, eps: Ratio64, delta1: u64) -> Result<CoreGrid> {
    let e = items.e();
    let n = items.len();
    let total = items.total_units();
    let chunk = n.div_ceil(delta1 as usize).max(1);
    let dg_num = eps.num() as u128 * delta1 as u128; // class grid spans [dg, dg(1 + 2 dg)]
    let dg_den = eps.den() as u128;
    let scaled = total > FINE_TABLE_BUDGET && 2 * dg_num < dg_den && eps.den() <= 1 << 40;
    if !scaled {
        if total > MAX_CORE_TABLE {
            return Err(Error::BudgetExceeded {
                needed: total as u128,
                budget: MAX_CORE_TABLE as u128,
            });
        }
        let members: Vec<(u64, u64)> =
            items.items().iter().map(|it| (it.profit, it.weight)).collect();
        let classes = members
            .chunks(chunk)
            .map(|ch| DivisorClass { modulus: 1, members: ch.to_vec() })
            .collect();
        return Ok(CoreGrid { q: 1, fine: true, classes });
    }
    // lift the grid so rounding onto divisor multiples costs under an eps
    // fraction per item even after integer quantization
    let num2 = (eps.num() as u128).pow(2);
    let den2 = (eps.den() as u128).pow(2);
    let q_need = (16 * den2).div_ceil(num2 * delta1 as u128 * e as u128).max(1);
    let headroom = ((u64::MAX / 8) as u128 / total.max(1) as u128).max(1);
    let q = q_need.min(headroom).min(1 << 22) as u64;
    let base = e as u128 * q as u128;
    let a0 = ((dg_num * base) / dg_den).max(1);
    let top = a0 + (2 * a0 * dg_num).div_ceil(dg_den);
    let mut entries = vec![a0 as u64];
    let mut a = a0;
    let cap_len = (4 * delta1 + 64) as usize;
    while a < top && entries.len() < cap_len {
        a += ((a * eps.num() as u128) / eps.den() as u128).max(1);
        entries.push(a as u64);
    }
    let mut by_entry: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
    for it in items.items() {
        let v = it.profit * q;
        // v >= e q >= 2 a0, so the quotient never vanishes
        let c = (v / entries[0]).max(1);
        let t = v / c;
        let hi = entries.partition_point(|&x| x <= t).saturating_sub(1);
        let cands = [entries[hi], entries[0]];
        let (a, kept) = cands
            .iter()
            .map(|&a| (a, v - v % a))
            .max_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
            .unwrap();
        by_entry.entry(a).or_default().push((kept, it.weight));
    }
    let mut classes = Vec::new();
    for (a, members) in by_entry {
        for ch in members.chunks(chunk) {
            classes.push(DivisorClass { modulus: a, members: ch.to_vec() });
        }
    }
    Ok(CoreGrid { q, fine: false, classes })
}

/// Min-weight array of `f` on the value grid `g`: entry i is the least
/// weight reaching value i * g, `INF` if unreachable.
fn fn_to_grid(f: &StepFunction, g: u64) -> Vec<u64> {
    let len = (f.max_value() / g) as usize + 1;
    (0..len as u64).map(|i| f.min_weight_for(i * g).unwrap_or(INF)).collect()
}

/// Move a min-weight array onto a coarser grid; entry i still certifies
/// value at least i * g_new.
fn regrid(r: &[u64], g_old: u64, g_new: u64) -> Vec<u64> {
    if g_old == g_new {
        return r.to_vec();
    }
    let top = (r.len() as u64 - 1) * g_old;
    let len = (top / g_new) as usize + 1;
    (0..len as u64)
        .map(|i| {
            let idx = ((i as u128 * g_new as u128).div_ceil(g_old as u128)) as usize;
            if idx < r.len() { r[idx] } else { INF }
        })
        .collect()
}

fn grid_to_fn(r: &[u64], g: u64, q: u64) -> StepFunction {
    StepFunction::upper_envelope(
        r.iter()
            .enumerate()
            .filter(|&(_, &w)| w < INF)
            .map(|(i, &w)| (w, i as u64 * g / q)),
    )
}

/// One round of the randomized partition solver.
///
/// Items are grouped into divisor classes, classes are scattered uniformly
/// over `delta0` parts (redrawn while any part exceeds the balanced load
/// bound), each part is merged on its divisor grid, and the parts are
/// recombined in a balanced tournament of windowed min-plus merges on
/// progressively coarser value grids. Additive error is O(n * eps) with
/// constant probability; callers amplify by taking the pointwise best of
/// independently seeded rounds.
pub fn random_partition_core(
    items: &ReducedKnapsack,
    eps: Ratio64,
    params: &RandomPartitionParams,
) -> Result<StepFunction> {
    if items.is_empty() {
        return Ok(StepFunction::zero());
    }
    check_eps(eps)?;
    if items.len() == 1 {
        let it = items.items()[0];
        return Ok(StepFunction::upper_envelope([(it.weight, it.profit)]));
    }
    let delta1 = params.delta1.max(1);
    let delta0 = 1u64 << params.delta0.clamp(1, 1 << 62).ilog2();
    let grid = plan_grid(items, eps, delta1)?;
    let k = grid.classes.len();

    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(params.seed);
    let limit = balanced_load_limit(k, delta0);
    let mut assignment = draw_assignment(&mut rng, k, delta0);
    for _ in 0..15 {
        if max_load(&assignment, delta0) <= limit {
            break;
        }
        assignment = draw_assignment(&mut rng, k, delta0);
    }

    let mut part_fns = Vec::with_capacity(delta0 as usize);
    for part in 0..delta0 {
        let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        let mut moduli = BTreeSet::new();
        for (ci, class) in grid.classes.iter().enumerate() {
            if assignment[ci] != part {
                continue;
            }
            moduli.insert(class.modulus);
            for &(v, w) in &class.members {
                groups.entry(v).or_default().push(w);
            }
        }
        if groups.is_empty() {
            part_fns.push(StepFunction::zero());
            continue;
        }
        let cap: u64 = groups
            .iter()
            .map(|(v, ws)| *v as u128 * ws.len() as u128)
            .sum::<u128>()
            .min(u64::MAX as u128) as u64;
        let fs = groups
            .into_iter()
            .map(|(v, ws)| UniformFunction::from_weights(v, ws))
            .collect::<Result<Vec<_>>>()?;
        let moduli: Vec<u64> = moduli.into_iter().collect();
        part_fns.push(smawk_uniform_merge(&fs, &moduli, cap)?);
    }
    if delta0 == 1 {
        let f = part_fns.pop().unwrap();
        let q = grid.q;
        return Ok(f.map_values(|y| y / q).coalesced());
    }
    tournament_merge(part_fns, &grid, items, eps, params, delta0)
}

fn tournament_merge(
    parts: Vec<StepFunction>,
    grid: &CoreGrid,
    items: &ReducedKnapsack,
    eps: Ratio64,
    params: &RandomPartitionParams,
    delta0: u64,
) -> Result<StepFunction> {
    let nf = items.len() as f64;
    let base = items.e() as f64 * grid.q as f64;
    let total_lifted = items.total_units() as u128 * grid.q as u128;
    // grid and window sizing are performance knobs; the merge stays
    // one-sided whatever they evaluate to
    let level_grid = |t: i32| -> u64 {
        if grid.fine {
            return 1;
        }
        let raw = (0.9 * t as f64).exp2() * nf * eps.to_f64() * base / delta0 as f64;
        let alloc_floor = (total_lifted / (1 << 24)) as u64;
        (raw as u64).max(1).max(alloc_floor)
    };
    let window = |t: i32, g: u64| -> Option<u64> {
        if grid.fine {
            return None;
        }
        let u = params.window_constant.max(1) as f64
            * nf
            * ((t as f64).exp2() / (params.delta1.max(1) as f64 * delta0 as f64)).sqrt()
            * nf.log2().max(1.0);
        Some((u * base / g as f64).ceil() as u64)
    };

    let mut g_prev = level_grid(0);
    let mut layer: Vec<Vec<u64>> = parts.iter().map(|f| fn_to_grid(f, g_prev)).collect();
    let mut t = 1;
    while layer.len() > 1 {
        let g_cur = level_grid(t).max(g_prev);
        let w = window(t, g_cur);
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            let a = regrid(&pair[0], g_prev, g_cur);
            next.push(match pair {
                [_, b] => minplus_windowed(&a, &regrid(b, g_prev, g_cur), w),
                _ => a,
            });
        }
        layer = next;
        g_prev = g_cur;
        t += 1;
    }
    Ok(grid_to_fn(&layer[0], g_prev, grid.q))
}
