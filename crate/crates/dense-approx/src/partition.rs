//! End-to-end Partition pipeline.
//!
//! [`solve_band`] handles the core subproblem: distinct values confined to a
//! single band [l, 2l), approximated within an additive slack of n. An
//! arbitrary multiset is reduced to a stack of such bands by
//! [`solve_partition`], which merges the per-band results and extracts the
//! final (1-eps)-approximate answer through the sigma/2 symmetry.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::convolution::sumset_1d;
use crate::dense::{find_divisor, structural_interval, DenseConstants};
use crate::error::{Error, Result};
use crate::multiset::IntegerMultiset;
use crate::ratio::{normalize_eps, Ratio64};
use crate::sumset_approx::{dc_interval, dc_interval_capped, ApproxQuality, ApproxSet, MAX_CAP};

/// Strategy selector for [`solve_band`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BandAlgorithm {
    /// Pick whichever strategy has the lower predicted cost and an
    /// available premise.
    Auto,
    /// Balanced tree of interval merges over the whole band.
    Interval,
    /// Divisor structure plus a certified sweep; needs a dense band.
    Dense,
}

/// Approximates the subset sums of distinct integers in [1/eps, 2/eps)
/// within additive slack n = |x|, with [`BandAlgorithm::Auto`] selection.
pub fn solve_band(x: &[u64], eps: Ratio64) -> Result<ApproxSet> {
    solve_band_with(x, eps, BandAlgorithm::Auto)
}

/// [`solve_band`] with an explicit strategy. Forcing `Dense` fails when the
/// band has no usable divisor structure; `Auto` falls back silently.
pub fn solve_band_with(x: &[u64], eps: Ratio64, algorithm: BandAlgorithm) -> Result<ApproxSet> {
    let (xs, ell) = validate_band(x, eps)?;
    if xs.is_empty() {
        return Ok(ApproxSet::zero());
    }
    if xs.len() == 1 {
        return ApproxSet::singleton(xs[0]);
    }
    let n = xs.len() as u64;
    let sigma128: u128 = xs.iter().map(|&v| v as u128).sum();
    let sigma = u64::try_from(sigma128)
        .ok()
        .filter(|&s| s <= MAX_CAP)
        .ok_or_else(|| Error::InvalidInput("band sum exceeds the supported range".into()))?;
    match algorithm {
        BandAlgorithm::Interval => interval_band(&xs, n, sigma),
        BandAlgorithm::Dense => dense_band(&xs, n, sigma, dense_premise(&xs, n, sigma)?),
        BandAlgorithm::Auto => {
            if predicted_dense_cost(n, ell) < predicted_interval_cost(n, ell) {
                if let Ok(dec) = dense_premise(&xs, n, sigma) {
                    return dense_band(&xs, n, sigma, dec);
                }
            }
            interval_band(&xs, n, sigma)
        }
    }
}

fn validate_band(x: &[u64], eps: Ratio64) -> Result<(Vec<u64>, u64)> {
    if eps.num() != 1 || eps.den() < 3 {
        return Err(Error::InvalidInput(format!(
            "band accuracy must be a unit fraction below 1/2, got {eps}"
        )));
    }
    let ell = eps.den();
    let mut xs = x.to_vec();
    xs.sort_unstable();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("band values must be distinct".into()));
    }
    if xs.iter().any(|&v| v < ell || v >= 2 * ell) {
        return Err(Error::InvalidInput(format!(
            "band values must lie in [{ell}, {})",
            2 * ell
        )));
    }
    Ok((xs, ell))
}

// Cost models for the two strategies, in arbitrary shared units:
// n + sqrt(n)/eps for the interval tree against n + 1/eps + 1/(eps^2 n^1.5)
// for the divisor path.
fn predicted_interval_cost(n: u64, ell: u64) -> u128 {
    n as u128 + (n.isqrt() as u128) * ell as u128
}

fn predicted_dense_cost(n: u64, ell: u64) -> u128 {
    let ell = ell as u128;
    n as u128 + ell + ell * ell / (n as u128 * n.isqrt() as u128)
}

fn interval_band(xs: &[u64], n: u64, sigma: u64) -> Result<ApproxSet> {
    // relative loss n/sigma never exceeds n in absolute terms on sums <= sigma
    let tree = dc_interval(xs, Ratio64::new(n, sigma))?;
    ApproxSet::from_parts(
        tree.elements().to_vec(),
        ApproxQuality {
            delta: Ratio64::zero(),
            big_delta: n,
            cap: Some(sigma),
        },
        n,
    )
}

/// Checks every precondition of the divisor strategy: a divisor structure
/// exists, its certified floor sits in the lower half, the divisor gap stays
/// within the n slack, and the certified lattice reaches sigma/2.
fn dense_premise(
    xs: &[u64],
    n: u64,
    sigma: u64,
) -> Result<crate::dense::DenseDecomposition> {
    let dec = find_divisor(xs, &DenseConstants::empirical())?;
    let (_, hi) = structural_interval(&dec)?;
    let lambda = dec.lambda();
    if 2 * (lambda as u128) > sigma as u128 {
        return Err(Error::InvalidInput(format!(
            "certified floor {lambda} exceeds half of sigma {sigma}"
        )));
    }
    if dec.d() > n {
        return Err(Error::InvalidInput(format!(
            "divisor {} exceeds the additive slack {n}",
            dec.d()
        )));
    }
    if (dec.d() as u128) * (hi as u128) < (sigma / 2) as u128 {
        return Err(Error::InvalidInput(
            "certified lattice stops short of sigma/2".into(),
        ));
    }
    Ok(dec)
}

fn dense_band(
    xs: &[u64],
    n: u64,
    sigma: u64,
    dec: crate::dense::DenseDecomposition,
) -> Result<ApproxSet> {
    let lambda = dec.lambda();
    let half = sigma / 2;
    let mut elements: Vec<u64> = if lambda > n && lambda >= xs[0] {
        // below the certified floor an interval tree capped at lambda takes
        // over; relative loss n/(n+lambda) stays under n absolute there
        let low = dc_interval_capped(xs, Ratio64::new(n, n + lambda), Some(lambda))?;
        low.elements()
            .iter()
            .copied()
            .take_while(|&a| a <= lambda)
            .collect()
    } else {
        // a floor within n of zero, or below the smallest value, leaves the
        // empty sum as the only point to cover
        vec![0]
    };
    // certified multiples are at most d apart, so advancing by n-d+2 keeps
    // every sum skipped between hits within n of the previous hit; the hits
    // form an arithmetic progression on the certified lattice, walked
    // directly instead of one query per step
    let step = n - dec.d() + 2;
    let d = dec.d();
    if let Ok((ilo, ihi)) = structural_interval(&dec) {
        let stride = step.div_ceil(d);
        let mut m = lambda.div_ceil(d).max(ilo);
        // lattice exhausted below half leaves the tail covered by the last hit
        while m <= ihi && m * d <= half {
            elements.push(m * d);
            m += stride;
        }
    }
    // s is a subset sum exactly when sigma - s is; reflecting a - n keeps
    // every mirrored point below its true counterpart
    let mirrored: Vec<u64> = elements
        .iter()
        .filter_map(|&a| sigma.checked_sub(a + n))
        .collect();
    elements.extend(mirrored);
    elements.sort_unstable();
    elements.dedup();
    ApproxSet::from_parts(
        elements,
        ApproxQuality {
            delta: Ratio64::zero(),
            big_delta: n,
            cap: Some(sigma),
        },
        n,
    )
}

/// Caps multiplicities at two by carrying pairs upward: two spare copies of
/// x merge into one copy of 2x, cascading. Sums up to `t` are preserved
/// exactly; values past `t` (input or carry) are dropped since no sum <= t
/// can use them.
pub fn reduce_multiplicity(s: &IntegerMultiset, t: u64) -> IntegerMultiset {
    let mut pending: BTreeMap<u64, u64> = BTreeMap::new();
    for (v, c) in s.counts() {
        if v <= t {
            *pending.entry(v).or_insert(0) += c;
        }
    }
    let mut kept = Vec::new();
    while let Some((&v, _)) = pending.first_key_value() {
        let c = pending.remove(&v).unwrap();
        let keep = if c <= 2 { c } else { 2 - c % 2 };
        kept.extend(std::iter::repeat(v).take(keep as usize));
        let promoted = (c - keep) / 2;
        if promoted > 0 {
            if let Some(w) = v.checked_mul(2).filter(|&w| w <= t) {
                *pending.entry(w).or_insert(0) += promoted;
            }
        }
    }
    IntegerMultiset::new(kept).expect("carried values stay positive")
}

/// Detects the sparse regime where greedy packing is already optimal.
///
/// Packs items in descending order while the pack fits under sigma/2. If the
/// pack stays under sigma/4 and every skipped item alone overshoots sigma/2,
/// feasible subsets are exactly the subsets of the pack, so its total is the
/// exact optimum. Returns `None` in the balanced regime (OPT >= sigma/4).
pub fn greedy_small_opt(x: &IntegerMultiset) -> Option<u64> {
    let sigma = x.sum();
    let mut packed: u128 = 0;
    let mut usable_leftover = false;
    for &v in x.values().iter().rev() {
        let v = v as u128;
        if 2 * (packed + v) <= sigma {
            packed += v;
        } else if 2 * v <= sigma {
            usable_leftover = true;
        }
    }
    if !usable_leftover && 4 * packed < sigma {
        u64::try_from(packed).ok()
    } else {
        None
    }
}

/// Reads the final Partition answer out of an additive approximation of the
/// subset sums, exploiting that the target sigma/2 is the symmetry center.
///
/// The declared slack must be within eps*sigma/4. In the balanced regime
/// (OPT >= sigma/4, which the greedy shortcut guarantees upstream) the
/// result lands in [(1-eps)OPT, OPT]: either the best witness below sigma/2
/// is returned directly, or the certified window already pins
/// OPT >= sigma/2*(1-eps/2) and that threshold is rounded up.
pub fn extract_answer(a: &ApproxSet, sigma: u64, eps: Ratio64) -> Result<u64> {
    if eps.is_zero() || eps.cmp_frac(1, 2) != Ordering::Less {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, 1/2), got {eps}"
        )));
    }
    let quality = a.quality();
    let sig = sigma as u128;
    let (num, den) = (eps.num() as u128, eps.den() as u128);
    if !quality.delta.is_zero() || 4 * (quality.big_delta as u128) * den > num * sig {
        return Err(Error::InvalidInput(
            "approximation too coarse for the requested accuracy".into(),
        ));
    }
    let idx = a.elements().partition_point(|&v| 2 * (v as u128) <= sig);
    // the empty sum keeps idx >= 1
    let best = a.elements()[idx - 1];
    let threshold = sig * (2 * den - num); // sigma/2 * (1 - eps/2), times 4*den
    if 4 * (best as u128) * den <= threshold {
        Ok(best)
    } else {
        // OPT is an integer at or above the threshold, so rounding up is safe
        Ok(threshold.div_ceil(4 * den) as u64)
    }
}

/// Largest subset sum of `x` not exceeding half the total, within a factor
/// of (1-eps). Empty input gives 0.
pub fn solve_partition(x: &IntegerMultiset, eps: Ratio64) -> Result<u64> {
    solve_partition_with(x, eps, BandAlgorithm::Auto)
}

/// [`solve_partition`] with an explicit per-band strategy.
pub fn solve_partition_with(
    x: &IntegerMultiset,
    eps: Ratio64,
    algorithm: BandAlgorithm,
) -> Result<u64> {
    let e_user = normalize_eps(eps)?;
    if x.is_empty() {
        return Ok(0);
    }
    if let Some(exact) = greedy_small_opt(x) {
        return Ok(exact);
    }
    // balanced regime from here on: OPT >= sigma/4
    let sigma = u64::try_from(x.sum())
        .ok()
        .filter(|&s| s <= MAX_CAP)
        .ok_or_else(|| Error::InvalidInput("element sum exceeds the supported range".into()))?;
    // past accuracy sigma/16 the pipeline bound drops below one unit and the
    // structure is exact, so finer requests are capped there
    let e_cap = sigma.div_ceil(16).max(3);
    let e = e_user.min(e_cap);
    let approx = reduced_sum_structure(x, sigma, e, e < e_user, algorithm)?;
    extract_answer(&approx, sigma, Ratio64::new(1, e_user))
}

fn ceil_div(a: u128, b: u128) -> u128 {
    (a + b - 1) / b
}

/// The reduction chain: grid rounding, a power-of-two lift, dyadic band
/// splitting, multiplicity reduction, per-band solves, and one capped merge.
/// Output slack is sigma/(16e); with `exact` set the true loss is below one
/// unit and the result is declared exact.
fn reduced_sum_structure(
    x: &IntegerMultiset,
    sigma: u64,
    e: u64,
    exact: bool,
    algorithm: BandAlgorithm,
) -> Result<ApproxSet> {
    let overflow = || Error::InvalidInput("accuracy out of range for this instance".into());
    let n = x.len() as u64;
    let sig = sigma as u128;

    // crush values onto a grid of unit g1; total loss n*(g1-1) <= eps*sigma/100
    let g1 = ceil_div(sig, 100 * n as u128 * e as u128) as u64;
    let m: Vec<u64> = x.values().iter().map(|&v| v / g1).filter(|&v| v > 0).collect();
    debug_assert!(!m.is_empty());

    // one global power-of-two lift so the smallest survivor clears 100e,
    // the floor the dyadic split needs
    let floor = 100 * e as u128;
    let m_min = *m.iter().min().unwrap() as u128;
    let mut j = 0u32;
    while (m_min << j) < floor {
        j += 1;
    }

    // dyadic split v = 2^k * z0 with z0 in [100e, 200e), rounding down;
    // per-item relative loss is under 1/(100e)
    let mut zs = Vec::with_capacity(m.len());
    let mut sigma_v: u128 = 0;
    for &mv in &m {
        let v = (mv as u128) << j;
        sigma_v += v;
        let k = (v / floor).ilog2();
        let z = u64::try_from((v >> k) << k).map_err(|_| overflow())?;
        zs.push(z);
    }
    let z_all = IntegerMultiset::new(zs).expect("lifted values stay positive");
    let t_red = u64::try_from(z_all.sum()).map_err(|_| overflow())?;
    let reduced = reduce_multiplicity(&z_all, t_red);

    // bands of distinct base values, at most two copies deep
    let mut bands: BTreeMap<(u32, bool), Vec<u64>> = BTreeMap::new();
    for (z, c) in reduced.counts() {
        let k = ((z as u128) / floor).ilog2();
        let z0 = z >> k;
        bands.entry((k, false)).or_default().push(z0);
        if c >= 2 {
            bands.entry((k, true)).or_default().push(z0);
        }
    }

    // each band donates one merge-grid floor, so a pitch of
    // sigma_v/(100e*bands) keeps the total rounding under sigma_v/(100e)
    let band_ell = 100u64.checked_mul(e).ok_or_else(overflow)?;
    let unit = ceil_div(sigma_v, (band_ell as u128) * bands.len().max(1) as u128);
    let cap = u64::try_from(sigma_v / unit).map_err(|_| overflow())?;

    let mut acc: Vec<u64> = vec![0];
    for ((k, _), base) in &bands {
        // native scale: values sit in [100e, 200e) and the answer comes back
        // n_b-additive, which also compounds to sigma_v/(100e) across bands
        let band = solve_band_with(base, Ratio64::new(1, band_ell), algorithm)?;
        let mut idx: Vec<u64> = band
            .elements()
            .iter()
            .map(|&a| (((a as u128) << k) / unit) as u64)
            .collect();
        idx.dedup();
        acc = sumset_1d(&acc, &idx, Some(cap))?;
    }

    // back to original units; rounding up stays at or below the integer sum
    // each point tracks
    let lift = (1u128 << j) - 1;
    let mut elements: Vec<u64> = acc
        .iter()
        .map(|&i| ((i as u128 * unit * g1 as u128 + lift) >> j) as u64)
        .collect();
    elements.dedup();
    let slack = if exact { 0 } else { (sig / (16 * e as u128)) as u64 };
    ApproxSet::from_parts(
        elements,
        ApproxQuality {
            delta: Ratio64::zero(),
            big_delta: slack,
            cap: Some(sigma),
        },
        n,
    )
}
