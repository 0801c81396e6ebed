//! (max,+) convolution of monotone step functions.

use crate::error::Result;
use crate::ratio::Ratio64;
use crate::stepfn::{round_step_down, StepFunction};

/// (f ⊕ g)(x) = max over x1+x2 ≤ x of f(x1) + g(x2), exact.
///
/// Quadratic in the step counts: the optimum is always attained with both
/// arguments at a step (or at zero), so the envelope of pairwise step sums
/// is the whole function.
pub fn maxplus_merge(f: &StepFunction, g: &StepFunction) -> StepFunction {
    let with_origin = |s: &StepFunction| {
        let mut v: Vec<(u64, u64)> = vec![(0, 0)];
        v.extend_from_slice(s.steps());
        v
    };
    let fs = with_origin(f);
    let gs = with_origin(g);
    let mut points = Vec::with_capacity(fs.len() * gs.len());
    for &(x1, y1) in &fs {
        for &(x2, y2) in &gs {
            points.push((x1.saturating_add(x2), y1 + y2));
        }
    }
    StepFunction::upper_envelope(points)
}

/// Approximate m-way (max,+) merge by balanced divide and conquer, rounding
/// values down onto a geometric grid after every pairwise merge.
///
/// With eps = 0 no rounding happens and the result is the exact merge. For
/// eps > 0 the result is pointwise ≤ the exact merge and ≥
/// (1-eps)^⌈log₂ m⌉ times it, with complexity O(eps⁻¹·log(B/A)) per
/// intermediate when every input has nonzero range within [lo, hi].
pub fn merge_many_stepfns(
    fs: &[StepFunction],
    eps: Ratio64,
    lo: u64,
    hi: u64,
) -> Result<StepFunction> {
    for f in fs {
        if let Some(a) = f.min_positive_value() {
            if a < lo || f.max_value() > hi {
                return Err(crate::error::Error::InvalidInput(format!(
                    "function range [{a}, {}] escapes declared [{lo}, {hi}]",
                    f.max_value()
                )));
            }
        }
    }
    let round = |f: StepFunction| -> StepFunction {
        if eps.is_zero() {
            f
        } else {
            round_step_down(&f, eps)
        }
    };
    fn go(
        fs: &[StepFunction],
        round: &impl Fn(StepFunction) -> StepFunction,
    ) -> StepFunction {
        match fs.len() {
            0 => StepFunction::zero(),
            1 => fs[0].clone(),
            n => {
                let (l, r) = fs.split_at(n / 2);
                round(maxplus_merge(&go(l, round), &go(r, round)))
            }
        }
    }
    Ok(match fs.len() {
        0 => StepFunction::zero(),
        1 => round(fs[0].clone()),
        _ => go(fs, &round),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(steps: &[(u64, u64)]) -> StepFunction {
        StepFunction::from_steps(steps.to_vec()).unwrap()
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

    fn random_fn(next: &mut dyn FnMut() -> u64) -> StepFunction {
        let n = (next() % 6) as usize;
        StepFunction::upper_envelope((0..n).map(|_| (next() % 30 + 1, next() % 40 + 1)))
    }

    /// Reference by direct evaluation over a dense x range.
    fn naive_merge_eval(f: &StepFunction, g: &StepFunction, x: u64) -> u64 {
        (0..=x).map(|x1| f.eval(x1) + g.eval(x - x1)).max().unwrap()
    }

    #[test]
    fn identity_and_singletons() {
        let f = sf(&[(1, 2), (4, 7)]);
        let merged = maxplus_merge(&f, &StepFunction::zero());
        for x in 0..10 {
            assert_eq!(merged.eval(x), f.eval(x));
        }
        // single items (w=1,p=2) and (w=2,p=3)
        let a = sf(&[(1, 2)]);
        let b = sf(&[(2, 3)]);
        let m = maxplus_merge(&a, &b);
        assert_eq!(m.eval(1), 2);
        assert_eq!(m.eval(2), 3);
        assert_eq!(m.eval(3), 5);
    }

    #[test]
    fn matches_naive_and_commutes() {
        let mut next = rng(21);
        for _ in 0..50 {
            let f = random_fn(&mut next);
            let g = random_fn(&mut next);
            let m1 = maxplus_merge(&f, &g);
            let m2 = maxplus_merge(&g, &f);
            for x in 0..70 {
                assert_eq!(m1.eval(x), naive_merge_eval(&f, &g, x));
                assert_eq!(m1.eval(x), m2.eval(x));
            }
        }
    }

    #[test]
    fn associative_up_to_normalization() {
        let mut next = rng(33);
        for _ in 0..20 {
            let f = random_fn(&mut next);
            let g = random_fn(&mut next);
            let h = random_fn(&mut next);
            let left = maxplus_merge(&maxplus_merge(&f, &g), &h);
            let right = maxplus_merge(&f, &maxplus_merge(&g, &h));
            for x in 0..100 {
                assert_eq!(left.eval(x), right.eval(x));
            }
        }
    }

    #[test]
    fn many_way_merge_bounds() {
        let mut next = rng(55);
        for _ in 0..20 {
            let fs: Vec<StepFunction> = (0..4).map(|_| random_fn(&mut next)).collect();
            let lo = fs.iter().filter_map(|f| f.min_positive_value()).min().unwrap_or(1);
            let hi = fs.iter().map(|f| f.max_value()).sum::<u64>().max(lo);
            let exact = fs
                .iter()
                .skip(1)
                .fold(fs[0].clone(), |acc, f| maxplus_merge(&acc, f));
            let eps = Ratio64::new(1, 10);
            let approx = merge_many_stepfns(&fs, eps, lo, hi).unwrap();
            for x in 0..130u64 {
                let e = exact.eval(x);
                let a = approx.eval(x);
                assert!(a <= e);
                // two merge levels for four functions: factor (1-eps)^2 = 0.81,
                // checked as a·100 ≥ e·81 exactly
                assert!(a * 100 >= e * 81, "a={a} e={e} at x={x}");
            }
            // eps = 0 reproduces the exact merge
            let exact_mode = merge_many_stepfns(&fs, Ratio64::zero(), lo, hi).unwrap();
            for x in 0..130u64 {
                assert_eq!(exact_mode.eval(x), exact.eval(x));
            }
        }
    }

    #[test]
    fn single_function_is_rounded() {
        let f = sf(&[(1, 10), (2, 11)]);
        let out = merge_many_stepfns(std::slice::from_ref(&f), Ratio64::new(1, 2), 1, 16).unwrap();
        let direct = round_step_down(&f, Ratio64::new(1, 2));
        assert_eq!(out, direct);
    }

    #[test]
    fn range_violation_rejected() {
        let f = sf(&[(1, 100)]);
        assert!(merge_many_stepfns(&[f], Ratio64::new(1, 2), 1, 50).is_err());
    }
}
