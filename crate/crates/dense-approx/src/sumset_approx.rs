//! Approximate subset-sum sets over a narrow value interval, and the merge
//! operations that combine them without letting the error grow.
//!
//! An [`ApproxSet`] is a sorted set of candidate sums plus the contract it
//! promises: every element is dominated by a true subset sum, and every true
//! sum up to `cap` has an element within a `(1 - delta)` multiplicative and
//! `big_delta` additive window below it. [`merge_additive`] combines two such
//! sets at a fixed additive budget, [`merge_multiplicative`] converts the
//! additive budget into a multiplicative one by sweeping dyadic bands, and
//! [`dc_interval`] runs the balanced divide-and-conquer over a sorted value
//! interval `[ell, 2*ell]`.

use std::cmp::Ordering;

use crate::convolution::{sumset_1d, sumset_2d, Point2D};
use crate::error::{Error, Result};
use crate::ratio::Ratio64;

// Internal products reach value * ell; keep both far away from i128 overflow.
pub(crate) const MAX_CAP: u64 = 1 << 62;

/// Quality contract carried by an [`ApproxSet`].
///
/// `a` certifies a true sum `s` when `(1 - delta) * s - big_delta <= a <= s`;
/// the set promises a certifying element for every true sum up to `cap`
/// (`None` means unbounded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxQuality {
    pub delta: Ratio64,
    pub big_delta: u64,
    pub cap: Option<u64>,
}

impl ApproxQuality {
    pub fn exact() -> Self {
        ApproxQuality {
            delta: Ratio64::zero(),
            big_delta: 0,
            cap: None,
        }
    }

    /// Whether candidate `a` certifies the true sum `s` under this contract.
    pub fn witnesses(&self, a: u64, s: u64) -> bool {
        if a > s {
            return false;
        }
        let den = self.delta.den() as u128;
        let num = self.delta.num() as u128;
        a as u128 * den + self.big_delta as u128 * den >= s as u128 * (den - num)
    }
}

/// Sorted candidate sums with their quality contract and the size of the
/// underlying item multiset. `items` is what the degenerate wide-interval
/// merge rounds against; the element list alone cannot recover it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxSet {
    elements: Vec<u64>,
    quality: ApproxQuality,
    items: u64,
}

impl ApproxSet {
    /// The set for no items: just the empty sum.
    pub fn zero() -> Self {
        ApproxSet {
            elements: vec![0],
            quality: ApproxQuality::exact(),
            items: 0,
        }
    }

    /// Exact leaf for a single item of value `x`.
    pub fn singleton(x: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::InvalidInput("singleton value must be positive".into()));
        }
        Ok(ApproxSet {
            elements: vec![0, x],
            quality: ApproxQuality::exact(),
            items: 1,
        })
    }

    /// Wrap exactly computed subset sums of a multiset with `items` elements.
    pub fn exact(sums: Vec<u64>, items: u64, cap: Option<u64>) -> Result<Self> {
        ApproxSet::from_parts(
            sums,
            ApproxQuality {
                delta: Ratio64::zero(),
                big_delta: 0,
                cap,
            },
            items,
        )
    }

    pub fn from_parts(elements: Vec<u64>, quality: ApproxQuality, items: u64) -> Result<Self> {
        if elements.first() != Some(&0) {
            return Err(Error::InvalidInput(
                "approximate set must start with the empty sum 0".into(),
            ));
        }
        if !elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(
                "approximate set elements must be sorted and distinct".into(),
            ));
        }
        if quality.delta.cmp_int(1) != Ordering::Less {
            return Err(Error::InvalidInput("delta must be below 1".into()));
        }
        if let Some(cap) = quality.cap {
            if *elements.last().unwrap() > cap {
                return Err(Error::InvalidInput("element exceeds the declared cap".into()));
            }
        }
        Ok(ApproxSet {
            elements,
            quality,
            items,
        })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn quality(&self) -> &ApproxQuality {
        &self.quality
    }

    pub fn items(&self) -> u64 {
        self.items
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_element(&self) -> u64 {
        *self.elements.last().unwrap()
    }

    /// Whether some element certifies the true sum `s`. The largest element
    /// `<= s` is the best candidate, so only it needs checking.
    pub fn has_witness(&self, s: u64) -> bool {
        let idx = self.elements.partition_point(|&e| e <= s);
        idx > 0 && self.quality.witnesses(self.elements[idx - 1], s)
    }
}

fn check_merge_params(ell: u64, t: u64, delta: Ratio64) -> Result<()> {
    if ell == 0 {
        return Err(Error::InvalidInput("ell must be positive".into()));
    }
    if t < ell {
        return Err(Error::InvalidInput("cap must be at least ell".into()));
    }
    if t > MAX_CAP {
        return Err(Error::InvalidInput(format!("cap {t} exceeds supported {MAX_CAP}")));
    }
    if delta.cmp_frac(1, 2) != Ordering::Less {
        return Err(Error::InvalidInput("delta must be below 1/2".into()));
    }
    Ok(())
}

fn check_input_quality(a1: &ApproxSet, a2: &ApproxSet, delta: Ratio64) -> Result<u64> {
    for q in [a1.quality(), a2.quality()] {
        if q.delta > delta {
            return Err(Error::InvalidInput(
                "input quality is looser than the requested delta".into(),
            ));
        }
    }
    a1.items
        .checked_add(a2.items)
        .ok_or_else(|| Error::InvalidInput("combined item count overflows".into()))
}

/// Merge two sets whose items lie in `[ell, ell + d]`, spending an additive
/// budget of `big_delta`. The result certifies every true sum of the combined
/// multiset up to `t` with multiplicative loss `delta` (inherited, not spent)
/// plus additive loss `big_delta - 1` on top of the inputs' additive errors.
///
/// Two evaluation layouts exist: rounding both inputs to multiples of
/// `ceil(big_delta / 2)` followed by a 1D sumset, or decomposing each element
/// as `k * ell + j * ceil(big_delta / 2)` followed by a 2D sumset. The choice
/// is by exact comparison of the predicted output sizes, ties to the first.
/// When `delta >= d / (ell + d)` the interval is so narrow relative to the
/// multiplicative budget that rounding every value down to `ell` already
/// certifies everything, using only the item counts.
pub fn merge_additive(
    a1: &ApproxSet,
    a2: &ApproxSet,
    ell: u64,
    d: u64,
    t: u64,
    big_delta: u64,
    delta: Ratio64,
) -> Result<ApproxSet> {
    check_merge_params(ell, t, delta)?;
    if big_delta == 0 {
        return Err(Error::InvalidInput("additive budget must be positive".into()));
    }
    if d > MAX_CAP {
        return Err(Error::InvalidInput("interval width too large".into()));
    }
    let items = check_input_quality(a1, a2, delta)?;

    // delta >= d/(ell+d), i.e. (1-delta)(ell+d) <= ell: a sum of k items is
    // certified by k*ell alone, so only the item count matters.
    if delta.cmp_frac(d as u128, ell as u128 + d as u128) != Ordering::Less {
        let kmax = items.min(t / ell);
        let elements = (0..=kmax).map(|k| k * ell).collect();
        return ApproxSet::from_parts(
            elements,
            ApproxQuality {
                delta,
                big_delta: 0,
                cap: Some(t),
            },
            items,
        );
    }

    let bar = big_delta.div_ceil(2);
    let z1 = (t as u128).div_ceil(big_delta as u128);
    let per_k = (t as u128 * d as u128).div_ceil(ell as u128 * big_delta as u128);
    let use_one_dim = z1 * ell as u128 <= t as u128 * per_k;

    let out_big = a1
        .quality
        .big_delta
        .checked_add(a2.quality.big_delta)
        .and_then(|v| v.checked_add(big_delta - 1))
        .ok_or_else(|| Error::InvalidInput("accumulated additive error overflows".into()))?;

    let elements = if use_one_dim {
        let i1 = scaled_indices(a1.elements(), bar, t);
        let i2 = scaled_indices(a2.elements(), bar, t);
        let idx = sumset_1d(&i1, &i2, Some(t / bar))?;
        idx.into_iter().map(|i| i * bar).collect()
    } else {
        let p1 = grid_points(a1.elements(), ell, d, t, bar);
        let p2 = grid_points(a2.elements(), ell, d, t, bar);
        let sum = sumset_2d(&p1, &p2)?;
        let mut vals: Vec<u64> = sum
            .iter()
            .filter_map(|p| {
                let v = p.k as i128 * ell as i128 + p.j as i128 * bar as i128;
                (0..=t as i128).contains(&v).then_some(v as u64)
            })
            .collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    };

    ApproxSet::from_parts(
        elements,
        ApproxQuality {
            delta,
            big_delta: out_big,
            cap: Some(t),
        },
        items,
    )
}

fn scaled_indices(elements: &[u64], bar: u64, t: u64) -> Vec<u64> {
    let mut out: Vec<u64> = elements
        .iter()
        .filter(|&&a| a <= t)
        .map(|&a| a / bar)
        .collect();
    out.dedup();
    out
}

/// Decompose each element as `a = k*ell + b` with the remainder `b` held
/// inside a window of width about `d*t/ell` around zero, then floor `b` to a
/// multiple of `bar`. Reconstruction `k*ell + j*bar` does not depend on which
/// admissible `k` is picked, so the smallest one keeps the window tight.
/// Negative remainders are fine: `j` carries the sign and the 2D sumset
/// shifts coordinates internally.
fn grid_points(elements: &[u64], ell: u64, d: u64, t: u64, bar: u64) -> Vec<Point2D> {
    let ell_i = ell as i128;
    let dt = d as i128 * t as i128;
    let mut out: Vec<Point2D> = elements
        .iter()
        .filter(|&&a| a <= t)
        .map(|&a| {
            let num = a as i128 * ell_i - dt;
            let sq = ell_i * ell_i;
            let k = if num <= 0 { 0 } else { (num + sq - 1) / sq };
            let b = a as i128 - k * ell_i;
            Point2D::new(k as u64, b.div_euclid(bar as i128) as i64)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Merge two sets with a purely multiplicative result: the output certifies
/// every true sum up to `big_t` within factor `1 - delta - delta0` and no
/// additive slack. Sweeps `r` over powers of two in `[ell/6, big_t]`, runs
/// [`merge_additive`] per band with `t = 6r` and budget `ceil(delta0 * r)`,
/// and keeps each band's output inside `[r, 6r]` where the additive error is
/// absorbed multiplicatively. Inputs must carry no additive error.
pub fn merge_multiplicative(
    a1: &ApproxSet,
    a2: &ApproxSet,
    ell: u64,
    d: u64,
    big_t: u64,
    delta: Ratio64,
    delta0: Ratio64,
) -> Result<ApproxSet> {
    check_merge_params(ell, big_t, delta)?;
    if big_t > MAX_CAP / 8 {
        return Err(Error::InvalidInput(format!(
            "cap {big_t} exceeds supported {}",
            MAX_CAP / 8
        )));
    }
    if delta0.is_zero() || delta0.cmp_frac(1, 2) != Ordering::Less {
        return Err(Error::InvalidInput("delta0 must lie in (0, 1/2)".into()));
    }
    for q in [a1.quality(), a2.quality()] {
        if q.big_delta != 0 {
            return Err(Error::InvalidInput(
                "multiplicative merge needs inputs without additive error".into(),
            ));
        }
    }
    let items = check_input_quality(a1, a2, delta)?;

    let mut acc: Vec<u64> = vec![0];
    let mut r: u64 = 1;
    while 6 * r < ell {
        r *= 2;
    }
    while r <= big_t {
        let t_r = 6 * r;
        let band = merge_additive(a1, a2, ell, d, t_r, delta0.ceil_mul(r), delta)?;
        // Below r the band's additive slack is not absorbed; above big_t the
        // contract makes no claim. Everything kept is certified within
        // (1 - delta - delta0) by some true sum.
        acc.extend(
            band.elements()
                .iter()
                .copied()
                .filter(|&a| a >= r && a <= big_t),
        );
        r = match r.checked_mul(2) {
            Some(next) => next,
            None => break,
        };
    }
    acc.sort_unstable();
    acc.dedup();

    ApproxSet::from_parts(
        acc,
        ApproxQuality {
            delta: delta.add(delta0),
            big_delta: 0,
            cap: Some(big_t),
        },
        items,
    )
}

/// [`merge_multiplicative`] with the cap dropped: `big_t = n * (ell + d)`
/// dominates every sum of the `n` underlying items, so the result certifies
/// the whole combined sum set.
pub fn merge_unbounded(
    a1: &ApproxSet,
    a2: &ApproxSet,
    ell: u64,
    d: u64,
    n: u64,
    delta: Ratio64,
    delta0: Ratio64,
) -> Result<ApproxSet> {
    if n != a1.items().checked_add(a2.items()).unwrap_or(u64::MAX) {
        return Err(Error::InvalidInput(
            "n must equal the combined item count of the inputs".into(),
        ));
    }
    if n == 0 {
        return Ok(ApproxSet::zero());
    }
    let big_t = ell
        .checked_add(d)
        .and_then(|w| w.checked_mul(n))
        .filter(|&v| v <= MAX_CAP / 8)
        .ok_or_else(|| Error::InvalidInput("n * (ell + d) overflows the supported range".into()))?;
    merge_multiplicative(a1, a2, ell, d, big_t, delta, delta0)
}

/// Approximate all subset sums of sorted distinct values confined to an
/// interval `[ell, 2*ell]`, within factor `1 - delta`. Builds the balanced
/// binary tree over the values and merges siblings bottom-up, spending
/// `delta / ceil(log2 n)` per level; node width is its value span, so the
/// widths on any level sum to at most `ell`.
pub fn dc_interval(x: &[u64], delta: Ratio64) -> Result<ApproxSet> {
    dc_interval_capped(x, delta, None)
}

/// [`dc_interval`] with every merge truncated to sums at most `cap`, so the
/// work tracks the cap instead of the full sum. Witnesses never exceed the
/// sum they track, so the certificate below the cap is unaffected.
pub fn dc_interval_capped(x: &[u64], delta: Ratio64, cap: Option<u64>) -> Result<ApproxSet> {
    if x.is_empty() {
        return Err(Error::InvalidInput("value list must be nonempty".into()));
    }
    if !x.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("values must be sorted and distinct".into()));
    }
    let lo = x[0];
    let hi = *x.last().unwrap();
    if lo == 0 {
        return Err(Error::InvalidInput("values must be positive".into()));
    }
    if hi > lo.saturating_mul(2) {
        return Err(Error::InvalidInput(
            "values must fit an [ell, 2*ell] interval".into(),
        ));
    }
    if x.len() == 1 {
        return ApproxSet::singleton(lo);
    }
    if delta.is_zero() || delta.cmp_frac(1, 2) != Ordering::Less {
        return Err(Error::InvalidInput("delta must lie in (0, 1/2)".into()));
    }
    let levels = (x.len() as u64 - 1).ilog2() + 1;
    build_tree(x, delta.div_int(levels as u64), cap)
}

fn build_tree(x: &[u64], delta0: Ratio64, cap: Option<u64>) -> Result<ApproxSet> {
    if x.len() == 1 {
        return ApproxSet::singleton(x[0]);
    }
    let mid = x.len() / 2;
    let left = build_tree(&x[..mid], delta0, cap)?;
    let right = build_tree(&x[mid..], delta0, cap)?;
    let input_delta = left.quality().delta.max(right.quality().delta);
    let (ell, n) = (x[0], x.len() as u64);
    let d = x[x.len() - 1] - ell;
    let full = n as u128 * (ell as u128 + d as u128);
    let big_t = match cap {
        // the merge floor stays at ell so narrow caps remain valid params
        Some(c) => full.min(c.max(ell) as u128),
        None => full,
    };
    let big_t = u64::try_from(big_t)
        .ok()
        .filter(|&v| v <= MAX_CAP / 8)
        .ok_or_else(|| Error::InvalidInput("n * (ell + d) overflows the supported range".into()))?;
    merge_multiplicative(&left, &right, ell, d, big_t, input_delta, delta0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::IntegerMultiset;
    use crate::oracle::exact_subset_sums;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sums_of(values: &[u64]) -> Vec<u64> {
        let ms = IntegerMultiset::new(values.to_vec()).unwrap();
        exact_subset_sums(&ms, None).unwrap()
    }

    fn exact_set(values: &[u64]) -> ApproxSet {
        ApproxSet::exact(sums_of(values), values.len() as u64, None).unwrap()
    }

    // Completeness up to `upto` plus two-sided soundness of every element.
    fn assert_contract(set: &ApproxSet, true_sums: &[u64], upto: u64) {
        for &s in true_sums.iter().take_while(|&&s| s <= upto) {
            assert!(
                set.has_witness(s),
                "true sum {s} not certified by {:?} under {:?}",
                set.elements(),
                set.quality()
            );
        }
        for &a in set.elements() {
            let i = true_sums.partition_point(|&s| s < a);
            assert!(
                i < true_sums.len() && set.quality().witnesses(a, true_sums[i]),
                "element {a} certifies no true sum (nearest {:?})",
                true_sums.get(i)
            );
        }
    }

    #[test]
    fn constructors_and_witness_lookup() {
        assert_eq!(ApproxSet::zero().elements(), &[0]);
        let s = ApproxSet::singleton(5).unwrap();
        assert_eq!(s.elements(), &[0, 5]);
        assert_eq!(s.items(), 1);
        assert!(ApproxSet::singleton(0).is_err());
        assert!(ApproxSet::exact(vec![1, 2], 1, None).is_err());
        assert!(ApproxSet::exact(vec![0, 2, 2], 2, None).is_err());
        assert!(ApproxSet::exact(vec![0, 9], 1, Some(8)).is_err());

        let q = ApproxQuality {
            delta: Ratio64::new(1, 4),
            big_delta: 1,
            cap: Some(100),
        };
        assert!(q.witnesses(7, 9));
        assert!(!q.witnesses(10, 9));
        assert!(!q.witnesses(5, 9));
        let set = ApproxSet::from_parts(vec![0, 7], q, 1).unwrap();
        assert!(set.has_witness(9));
        assert!(!set.has_witness(50));
    }

    #[test]
    fn additive_merge_with_unit_budget_is_exact() {
        let a1 = exact_set(&[5]);
        let a2 = exact_set(&[5, 6]);
        let out = merge_additive(&a1, &a2, 5, 1, 12, 1, Ratio64::zero()).unwrap();
        assert_eq!(out.elements(), &[0, 5, 6, 10, 11]);
        assert_eq!(out.items(), 3);
        assert_eq!(out.quality().big_delta, 0);
    }

    #[test]
    fn additive_merge_stays_within_declared_slack() {
        let a1 = exact_set(&[5]);
        let a2 = exact_set(&[5, 6]);
        let out = merge_additive(&a1, &a2, 5, 1, 12, 3, Ratio64::zero()).unwrap();
        assert_eq!(out.quality().big_delta, 2);
        assert_contract(&out, &sums_of(&[5, 5, 6]), 12);
    }

    #[test]
    fn zero_operand_is_neutral() {
        let a1 = exact_set(&[5, 6]);
        let out = merge_additive(&a1, &ApproxSet::zero(), 5, 1, 12, 3, Ratio64::zero()).unwrap();
        assert_contract(&out, &sums_of(&[5, 6]), 12);
        assert_eq!(out.items(), 2);
    }

    #[test]
    fn wide_budget_rounds_everything_to_ell() {
        let a1 = exact_set(&[10, 11]);
        let a2 = exact_set(&[10]);
        let delta = Ratio64::new(1, 4);
        let out = merge_additive(&a1, &a2, 10, 1, 35, 2, delta).unwrap();
        assert_eq!(out.elements(), &[0, 10, 20, 30]);
        assert_eq!(out.quality().big_delta, 0);
        assert_contract(&out, &sums_of(&[10, 11, 10]), 35);
    }

    #[test]
    fn additive_errors_compose() {
        let a1 = exact_set(&[5]);
        let a2 = exact_set(&[5, 6]);
        let first = merge_additive(&a1, &a2, 5, 1, 30, 3, Ratio64::zero()).unwrap();
        assert_eq!(first.quality().big_delta, 2);
        let a3 = exact_set(&[5, 7]);
        let second = merge_additive(&first, &a3, 5, 2, 30, 5, Ratio64::zero()).unwrap();
        assert_eq!(second.quality().big_delta, 2 + 4);
        assert_contract(&second, &sums_of(&[5, 5, 6, 5, 7]), 30);
    }

    #[test]
    fn parameter_validation() {
        let a = exact_set(&[5]);
        let z = Ratio64::zero();
        assert!(merge_additive(&a, &a, 0, 1, 12, 1, z).is_err());
        assert!(merge_additive(&a, &a, 5, 1, 4, 1, z).is_err());
        assert!(merge_additive(&a, &a, 5, 1, 12, 0, z).is_err());
        assert!(merge_additive(&a, &a, 5, 1, 12, 1, Ratio64::new(1, 2)).is_err());
        // inputs looser than the requested quality are rejected
        let loose = ApproxSet::from_parts(
            vec![0, 5],
            ApproxQuality {
                delta: Ratio64::new(1, 3),
                big_delta: 0,
                cap: None,
            },
            1,
        )
        .unwrap();
        assert!(merge_additive(&loose, &a, 5, 1, 12, 1, Ratio64::new(1, 4)).is_err());
        assert!(merge_multiplicative(&loose, &a, 5, 1, 12, Ratio64::new(1, 4), Ratio64::new(1, 10)).is_err());
        // additive error on inputs blocks the multiplicative merge
        let additive = ApproxSet::from_parts(
            vec![0, 5],
            ApproxQuality {
                delta: z,
                big_delta: 2,
                cap: None,
            },
            1,
        )
        .unwrap();
        assert!(merge_multiplicative(&additive, &a, 5, 1, 12, z, Ratio64::new(1, 10)).is_err());
        assert!(merge_unbounded(&a, &a, 5, 1, 3, z, Ratio64::new(1, 10)).is_err());
    }

    #[test]
    fn multiplicative_merge_of_trivial_sets() {
        let out = merge_multiplicative(
            &ApproxSet::zero(),
            &ApproxSet::zero(),
            5,
            1,
            12,
            Ratio64::zero(),
            Ratio64::new(1, 10),
        )
        .unwrap();
        assert_eq!(out.elements(), &[0]);
    }

    #[test]
    fn multiplicative_merge_certifies_every_sum() {
        let a1 = exact_set(&[8]);
        let a2 = exact_set(&[8, 9]);
        let out = merge_multiplicative(
            &a1,
            &a2,
            8,
            1,
            34,
            Ratio64::zero(),
            Ratio64::new(1, 10),
        )
        .unwrap();
        assert_eq!(out.quality().delta, Ratio64::new(1, 10));
        assert_eq!(out.quality().big_delta, 0);
        assert_contract(&out, &sums_of(&[8, 8, 9]), 34);
    }

    #[test]
    fn unbounded_merge_covers_all_sums() {
        let a1 = exact_set(&[5]);
        let a2 = exact_set(&[6]);
        let delta0 = Ratio64::new(1, 10);
        let out = merge_unbounded(&a1, &a2, 5, 6, 2, Ratio64::zero(), delta0).unwrap();
        assert_eq!(out.quality().cap, Some(22));
        assert_contract(&out, &sums_of(&[5, 6]), 22);

        let swapped = merge_unbounded(&a2, &a1, 5, 6, 2, Ratio64::zero(), delta0).unwrap();
        assert_eq!(out.elements(), swapped.elements());
    }

    #[test]
    fn uniform_values_collapse_to_multiples() {
        let a1 = exact_set(&[7, 7]);
        let a2 = exact_set(&[7]);
        let out = merge_unbounded(&a1, &a2, 7, 0, 3, Ratio64::zero(), Ratio64::new(1, 5)).unwrap();
        assert!(out.elements().iter().all(|&a| a % 7 == 0));
        assert_contract(&out, &sums_of(&[7, 7, 7]), 21);
    }

    #[test]
    fn interval_tree_on_tiny_inputs() {
        let leaf = dc_interval(&[5], Ratio64::new(1, 4)).unwrap();
        assert_eq!(leaf.elements(), &[0, 5]);

        let out = dc_interval(&[5, 6, 7], Ratio64::new(1, 4)).unwrap();
        assert_contract(&out, &sums_of(&[5, 6, 7]), out.quality().cap.unwrap());
    }

    #[test]
    fn interval_tree_input_validation() {
        let d = Ratio64::new(1, 4);
        assert!(dc_interval(&[], d).is_err());
        assert!(dc_interval(&[5, 5], d).is_err());
        assert!(dc_interval(&[6, 5], d).is_err());
        assert!(dc_interval(&[5, 11], d).is_err());
        assert!(dc_interval(&[0, 1], d).is_err());
        assert!(dc_interval(&[5, 6], Ratio64::new(1, 2)).is_err());
    }

    #[test]
    fn randomized_merges_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for round in 0..120 {
            let ell = rng.random_range(5..40u64);
            let d = rng.random_range(0..=ell);
            let n1 = rng.random_range(1..=4usize);
            let n2 = rng.random_range(1..=4usize);
            let x1: Vec<u64> = (0..n1).map(|_| rng.random_range(ell..=ell + d)).collect();
            let x2: Vec<u64> = (0..n2).map(|_| rng.random_range(ell..=ell + d)).collect();
            let total: u64 = x1.iter().chain(&x2).sum();
            let t = rng.random_range(ell..=total.max(ell));
            let big_delta = rng.random_range(1..=8u64);
            let delta = *[
                Ratio64::zero(),
                Ratio64::new(1, 10),
                Ratio64::new(1, 4),
                Ratio64::new(2, 5),
            ]
            .iter()
            .nth(round % 4)
            .unwrap();

            let a1 = exact_set(&x1);
            let a2 = exact_set(&x2);
            let mut combined = x1.clone();
            combined.extend(&x2);
            let true_sums = sums_of(&combined);

            let add = merge_additive(&a1, &a2, ell, d, t, big_delta, delta).unwrap();
            assert_contract(&add, &true_sums, t);

            let z1 = (t as u128).div_ceil(big_delta as u128);
            let per_k = (t as u128 * d.max(1) as u128)
                .div_ceil(ell as u128 * big_delta as u128);
            let z2_times_ell = t as u128 * per_k;
            let size = add.len() as u128;
            assert!(
                size <= 8 * z1 + 8 || size * ell as u128 <= 8 * z2_times_ell + 8 * ell as u128,
                "size {size} beyond 8x the predicted bound (z1 {z1})"
            );

            if !delta0_too_tight(delta) {
                let delta0 = Ratio64::new(1, 8);
                let big_t = total.max(ell);
                let mult =
                    merge_multiplicative(&a1, &a2, ell, d, big_t, delta, delta0).unwrap();
                assert_contract(&mult, &true_sums, big_t);
            }
        }
    }

    // merge_multiplicative needs delta + delta0 < 1 to stay meaningful; the
    // randomized suite skips the largest delta with the fixed delta0 = 1/8.
    fn delta0_too_tight(delta: Ratio64) -> bool {
        delta.add(Ratio64::new(1, 8)).cmp_frac(1, 2) != Ordering::Less
    }

    #[test]
    fn randomized_interval_trees_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for _ in 0..30 {
            let ell = rng.random_range(8..30u64);
            let n = rng.random_range(2..=9usize);
            let mut vals: Vec<u64> = (0..n * 3)
                .map(|_| rng.random_range(ell..=2 * ell))
                .collect();
            vals.sort_unstable();
            vals.dedup();
            vals.truncate(n);
            let delta = Ratio64::new(1, rng.random_range(3..10u64));

            let out = dc_interval(&vals, delta).unwrap();
            let true_sums = sums_of(&vals);
            assert_contract(&out, &true_sums, out.quality().cap.unwrap());
            assert!(out.quality().delta <= delta);
        }
    }
}
