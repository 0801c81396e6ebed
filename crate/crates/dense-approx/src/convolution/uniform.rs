//! Merging uniform pseudo-concave profit functions via SMAWK.
//!
//! All values are integers in a caller-chosen fixed-denominator unit. The
//! merge groups functions by a divisor from the Δ-set, keeps everything on
//! that group's value grid while merging group members exactly, and pays
//! one floor-rounding per group when the accumulator moves between grids,
//! for an additive loss below Σ over used groups of their divisor.

use crate::error::{Error, Result};
use crate::stepfn::StepFunction;

use super::smawk::{minplus_arbitrary_convex, INF};

/// A p-uniform step function: values 0, p, 2p, …, l·p with the i-th jump at
/// `breakpoints[i]`. Pseudo-concave: consecutive breakpoint gaps
/// nondecreasing (the shape produced by greedily stacking items of equal
/// profit in weight order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniformFunction {
    p: u64,
    breakpoints: Vec<u64>,
}

impl UniformFunction {
    pub fn new(p: u64, breakpoints: Vec<u64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("step height must be positive".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("breakpoints must be nondecreasing".into()));
        }
        if breakpoints.windows(3).any(|w| w[1] - w[0] > w[2] - w[1]) {
            return Err(Error::InvalidInput(
                "not pseudo-concave: breakpoint gaps must be nondecreasing".into(),
            ));
        }
        Ok(UniformFunction { p, breakpoints })
    }

    /// Profit function of items sharing step height `p` with the given
    /// weights: breakpoints are prefix sums of the sorted weights.
    pub fn from_weights(p: u64, mut weights: Vec<u64>) -> Result<Self> {
        weights.sort_unstable();
        let mut acc = 0u64;
        let breakpoints = weights
            .into_iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        UniformFunction::new(p, breakpoints)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn breakpoints(&self) -> &[u64] {
        &self.breakpoints
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.p * self.breakpoints.partition_point(|&b| b <= x) as u64
    }

    pub fn max_value(&self) -> u64 {
        self.p * self.breakpoints.len() as u64
    }

    pub fn to_step_function(&self) -> StepFunction {
        StepFunction::upper_envelope(
            self.breakpoints
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, self.p * (i as u64 + 1))),
        )
    }
}

/// Merges uniform pseudo-concave functions, approximating
/// min{f₁ ⊕ … ⊕ f_m, b_cap} with additive error below the sum of the used
/// Δ-set entries. Every function's step height must be a multiple of some
/// Δ-set entry.
pub fn smawk_uniform_merge(
    fs: &[UniformFunction],
    delta_set: &[u64],
    b_cap: u64,
) -> Result<StepFunction> {
    let mut divisors: Vec<u64> = delta_set.iter().copied().filter(|&a| a > 0).collect();
    divisors.sort_unstable();
    divisors.dedup();
    let mut groups: Vec<Vec<&UniformFunction>> = vec![Vec::new(); divisors.len()];
    for f in fs {
        if f.breakpoints.is_empty() {
            continue;
        }
        let gi = divisors
            .iter()
            .rposition(|&a| f.p % a == 0)
            .ok_or_else(|| {
                Error::InvalidInput(format!("step height {} has no divisor in the Δ-set", f.p))
            })?;
        groups[gi].push(f);
    }
    // Accumulator: grid divisor a and r[q] = min weight with value ≥ q·a.
    let mut cur: Option<(u64, Vec<u64>)> = None;
    for (gi, group) in groups.iter().enumerate() {
        if group.is_empty() {
            continue;
        }
        let a = divisors[gi];
        let qmax = (b_cap / a) as usize;
        let mut r = match &cur {
            None => {
                let mut v = vec![INF; qmax + 1];
                v[0] = 0;
                v
            }
            Some((pa, pr)) => regrid(*pa, pr, a, qmax),
        };
        for f in group {
            merge_into(&mut r, (f.p / a) as usize, &f.breakpoints);
        }
        cur = Some((a, r));
    }
    let Some((a, r)) = cur else {
        return Ok(StepFunction::zero());
    };
    Ok(StepFunction::upper_envelope(
        r.iter()
            .enumerate()
            .filter(|&(_, &w)| w < INF)
            .map(|(q, &w)| (w, q as u64 * a)),
    ))
}

/// h[q] = min weight whose accumulated value reaches q·a, read off the
/// previous grid: the one floor-rounding this group pays.
fn regrid(prev_a: u64, prev_r: &[u64], a: u64, qmax: usize) -> Vec<u64> {
    (0..=qmax)
        .map(|q| {
            let need = (q as u128 * a as u128).div_ceil(prev_a as u128);
            match usize::try_from(need) {
                Ok(i) if i < prev_r.len() => prev_r[i],
                _ => INF,
            }
        })
        .collect()
}

/// r[q] ← min over l ≥ 0 of r[q - l·m] + x_l, then re-closed so that r stays
/// the min weight achieving *at least* q grid units.
fn merge_into(r: &mut [u64], m: usize, bps: &[u64]) {
    let qmax = r.len() - 1;
    debug_assert!(m >= 1, "divisor exceeds step height");
    if m > qmax {
        // a single step already exceeds the cap; nothing lands in range
        return;
    }
    let blen = bps.len().min(qmax / m);
    if blen > 0 {
        for rho in 0..m {
            let idx: Vec<usize> = (rho..=qmax).step_by(m).collect();
            if idx.is_empty() {
                continue;
            }
            let col: Vec<u64> = idx.iter().map(|&q| r[q]).collect();
            // l ≥ 1 contributions: convolve with the breakpoint array, whose
            // convexity is exactly pseudo-concavity; l = 0 is the min below.
            let out_len = (col.len() + blen - 1).min(idx.len().max(1));
            let conv = minplus_arbitrary_convex(&col, &bps[..blen], out_len.max(1));
            for (s, &q) in idx.iter().enumerate().skip(1) {
                if s - 1 < conv.len() {
                    r[q] = r[q].min(conv[s - 1]);
                }
            }
        }
    }
    // suffix min: a subset overshooting q·a still witnesses q·a
    for q in (0..qmax).rev() {
        r[q] = r[q].min(r[q + 1]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::maxplus::maxplus_merge;

    #[test]
    fn construction_validates_shape() {
        assert!(UniformFunction::new(1, vec![1, 3, 4]).is_err()); // gaps 2,1 decrease
        assert!(UniformFunction::new(1, vec![1, 2, 4]).is_ok());
        assert!(UniformFunction::new(0, vec![1]).is_err());
        assert!(UniformFunction::new(1, vec![3, 1]).is_err());
        let f = UniformFunction::from_weights(2, vec![5, 1, 3]).unwrap();
        assert_eq!(f.breakpoints(), &[1, 4, 9]);
        assert_eq!(f.eval(4), 4);
        assert_eq!(f.max_value(), 6);
    }

    #[test]
    fn single_function_is_exact() {
        let f = UniformFunction::new(3, vec![2, 5, 9]).unwrap();
        let merged = smawk_uniform_merge(std::slice::from_ref(&f), &[3], 9).unwrap();
        for x in 0..12 {
            assert_eq!(merged.eval(x), f.eval(x), "x={x}");
        }
    }

    #[test]
    fn two_unit_functions_match_greedy() {
        let f = UniformFunction::from_weights(1, vec![1, 2]).unwrap();
        let g = UniformFunction::from_weights(1, vec![1]).unwrap();
        let merged = smawk_uniform_merge(&[f, g], &[1], 10).unwrap();
        assert_eq!(merged.eval(1), 1);
        assert_eq!(merged.eval(2), 2);
        assert_eq!(merged.eval(3), 2);
        assert_eq!(merged.eval(4), 3);
    }

    #[test]
    fn no_divisor_is_an_error() {
        let f = UniformFunction::new(7, vec![1]).unwrap();
        assert!(smawk_uniform_merge(&[f], &[2, 3], 10).is_err());
    }

    fn rng(seed: u64) -> impl FnMut() -> u64 {
        let mut state = seed | 1;
        move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        }
    }

    /// Exact reference: expand each uniform function to a step function and
    /// do quadratic (max,+) merges, then clamp at the cap.
    fn exact_merge_capped(fs: &[UniformFunction], cap: u64) -> StepFunction {
        let mut acc = StepFunction::zero();
        for f in fs {
            acc = maxplus_merge(&acc, &f.to_step_function());
        }
        acc.map_values(|y| y.min(cap))
    }

    #[test]
    fn approximation_gap_is_bounded_by_used_divisors() {
        let mut next = rng(17);
        for round in 0..40 {
            // divisors in [delta, 8 delta] with delta = 8 units
            let delta_set = vec![8u64, 11, 13, 16];
            let m = (next() % 4 + 1) as usize;
            let fs: Vec<UniformFunction> = (0..m)
                .map(|_| {
                    let a = delta_set[(next() % 4) as usize];
                    let mult = next() % 3 + 1; // p in [8, 48] units
                    let k = (next() % 4 + 1) as usize;
                    let weights: Vec<u64> = (0..k).map(|_| next() % 20 + 1).collect();
                    UniformFunction::from_weights(a * mult, weights).unwrap()
                })
                .collect();
            let cap = next() % 150 + 20;
            let merged = smawk_uniform_merge(&fs, &delta_set, cap).unwrap();
            let exact = exact_merge_capped(&fs, cap);
            let budget: u64 = delta_set.iter().sum(); // ≤ |Δ|·8δ
            for x in 0..200 {
                let got = merged.eval(x);
                let want = exact.eval(x);
                assert!(got <= want, "overestimate at x={x}: {got} > {want} round={round}");
                assert!(
                    got + budget >= want,
                    "gap too large at x={x}: {got} + {budget} < {want} round={round}"
                );
            }
        }
    }

    #[test]
    fn empty_input_is_zero() {
        assert!(smawk_uniform_merge(&[], &[1], 10).unwrap().is_zero());
    }
}
