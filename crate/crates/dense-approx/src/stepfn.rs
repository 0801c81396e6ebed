//! Monotone step functions over integer weights.
//!
//! A `StepFunction` maps every x ≥ 0 to a value: 0 before the first step,
//! then the value of the last step at or before x. Values are `u64` in
//! whatever fixed-denominator unit the caller works in; the unit is never
//! interpreted here, so all operations are unit-agnostic.

use crate::error::{Error, Result};
use crate::ratio::Ratio64;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct StepFunction {
    // (x, y): x strictly increasing, y nondecreasing.
    steps: Vec<(u64, u64)>,
}

impl StepFunction {
    /// The constant-zero function.
    pub fn zero() -> Self {
        StepFunction { steps: Vec::new() }
    }

    /// Builds from explicit steps; x must be strictly increasing and y
    /// nondecreasing. Steps are stored as given, without coalescing.
    pub fn from_steps(steps: Vec<(u64, u64)>) -> Result<Self> {
        for w in steps.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::InvalidInput("steps must be strictly increasing in x and nondecreasing in y".into()));
            }
        }
        Ok(StepFunction { steps })
    }

    /// Minimal step function dominating a bag of achievable (x, y) points:
    /// g(x) = max { y : (x', y) in points, x' <= x }. Zero-value points are
    /// redundant and dropped.
    pub fn upper_envelope(points: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut pts: Vec<(u64, u64)> = points.into_iter().filter(|&(_, y)| y > 0).collect();
        pts.sort_unstable();
        let mut steps: Vec<(u64, u64)> = Vec::new();
        for (x, y) in pts {
            match steps.last_mut() {
                Some((lx, ly)) if *lx == x => *ly = (*ly).max(y),
                Some((_, ly)) if y <= *ly => {}
                _ => steps.push((x, y)),
            }
        }
        StepFunction { steps }
    }

    pub fn steps(&self) -> &[(u64, u64)] {
        &self.steps
    }

    /// Number of stored steps.
    pub fn complexity(&self) -> usize {
        self.steps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.steps.iter().all(|&(_, y)| y == 0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        match self.steps.partition_point(|&(sx, _)| sx <= x) {
            0 => 0,
            i => self.steps[i - 1].1,
        }
    }

    /// Largest value attained (0 for the zero function).
    pub fn max_value(&self) -> u64 {
        self.steps.last().map_or(0, |&(_, y)| y)
    }

    /// Smallest nonzero value attained, if any.
    pub fn min_positive_value(&self) -> Option<u64> {
        self.steps.iter().map(|&(_, y)| y).find(|&y| y > 0)
    }

    /// Smallest x with f(x) >= target, if any.
    pub fn min_weight_for(&self, target: u64) -> Option<u64> {
        if target == 0 {
            return Some(0);
        }
        let i = self.steps.partition_point(|&(_, y)| y < target);
        self.steps.get(i).map(|&(x, _)| x)
    }

    /// Drops zero-value steps and coalesces runs of equal value, keeping the
    /// earliest x of each run. Evaluation is unchanged.
    pub fn coalesced(&self) -> Self {
        let mut steps: Vec<(u64, u64)> = Vec::with_capacity(self.steps.len());
        for &(x, y) in &self.steps {
            if y > steps.last().map_or(0, |&(_, ly)| ly) {
                steps.push((x, y));
            }
        }
        StepFunction { steps }
    }

    /// Restricts the domain to [0, cap].
    pub fn truncate_domain(&self, cap: u64) -> Self {
        StepFunction { steps: self.steps.iter().copied().take_while(|&(x, _)| x <= cap).collect() }
    }

    /// Applies a nondecreasing map to every value.
    pub fn map_values(&self, f: impl Fn(u64) -> u64) -> Self {
        let mut steps: Vec<(u64, u64)> = Vec::with_capacity(self.steps.len());
        for &(x, y) in &self.steps {
            let ny = f(y);
            debug_assert!(steps.last().map_or(0, |&(_, ly)| ly) <= ny, "map must be nondecreasing");
            steps.push((x, ny));
        }
        StepFunction { steps }
    }
}

/// Rounds every nonzero value of `f` down onto a geometric grid with ratio
/// at least 1/(1-eps), anchored at the least nonzero value. The result is
/// pointwise <= f and >= (1-eps)·f; its complexity is at most
/// ⌈log_{1/(1-eps)}(B/A)⌉ + 1 for any [A, B] containing the nonzero range.
pub fn round_step_down(f: &StepFunction, eps: Ratio64) -> StepFunction {
    assert!(!eps.is_zero() && eps < Ratio64::one(), "eps must lie in (0,1)");
    let Some(a) = f.min_positive_value() else {
        return f.coalesced();
    };
    let top = f.max_value();
    // Integer grid h_0 = a, h_{j+1} = ceil(h_j / (1-eps)); consecutive ratios
    // are >= 1/(1-eps), so rounding down to the grid loses < eps of the value:
    // h_j <= v < h_{j+1} implies v <= h_{j+1}-1 < h_j/(1-eps).
    let one_minus = eps.one_minus();
    let (num, den) = (one_minus.num(), one_minus.den());
    let mut grid = vec![a];
    let mut h = a;
    while h < top {
        h = ((h as u128 * den as u128).div_ceil(num as u128)) as u64;
        grid.push(h);
    }
    let mut steps: Vec<(u64, u64)> = Vec::new();
    for &(x, y) in f.steps() {
        if y == 0 {
            continue;
        }
        let j = grid.partition_point(|&g| g <= y);
        let ry = grid[j - 1];
        if ry > steps.last().map_or(0, |&(_, ly)| ly) {
            steps.push((x, ry));
        }
    }
    StepFunction { steps }
}

/// g(x) = min_i f_i(x) at every x.
pub fn pointwise_min(fs: &[StepFunction]) -> Result<StepFunction> {
    combine(fs, u64::min)
}

/// g(x) = max_i f_i(x) at every x.
pub fn pointwise_max(fs: &[StepFunction]) -> Result<StepFunction> {
    combine(fs, u64::max)
}

fn combine(fs: &[StepFunction], op: impl Fn(u64, u64) -> u64) -> Result<StepFunction> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("need at least one step function".into()));
    }
    let mut xs: Vec<u64> = fs.iter().flat_map(|f| f.steps().iter().map(|&(x, _)| x)).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut steps: Vec<(u64, u64)> = Vec::new();
    for x in xs {
        let y = fs.iter().map(|f| f.eval(x)).reduce(&op).unwrap();
        if y > steps.last().map_or(0, |&(_, ly)| ly) {
            steps.push((x, y));
        }
    }
    Ok(StepFunction { steps })
}
