//! Structure of dense subset-sum instances: density and almost-divisor
//! predicates, the divisor decomposition, and the filled interval of sums it
//! certifies, plus constant-time range queries over that certified set.
//!
//! A set is `delta`-dense when `|X|^2 >= delta * max X`. For dense sets with
//! no almost divisor, an explicit interval `[lambda, sigma - lambda]` of
//! subset sums is guaranteed to be completely filled; [`find_divisor`]
//! reduces an arbitrary dense set to that situation by dividing out a small
//! `d`. Queries then reduce to arithmetic on multiples of `d` inside the
//! lifted interval.

use crate::error::{Error, Result};
use crate::multiset::IntegerMultiset;
use crate::ratio::Ratio64;

/// Which constant regime a [`DenseConstants`] value encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantsMode {
    /// The proof's explicit constants; astronomically large, so the certified
    /// interval is empty for any instance small enough to test directly.
    Theory,
    /// Small constants checked against the exact oracle instead of the proof.
    Empirical,
}

#[derive(Debug, Clone, Copy)]
pub struct DenseConstants {
    cdelta: Ratio64,
    calpha: Ratio64,
    clambda: Ratio64,
    mode: ConstantsMode,
}

fn thousandths(v: f64) -> Ratio64 {
    Ratio64::new((v * 1000.0).round() as u64, 1000)
}

impl DenseConstants {
    /// Defaults validated by the oracle suite: C_delta = 1, C_alpha = 1/16,
    /// C_lambda = 1.
    pub fn empirical() -> Self {
        DenseConstants {
            cdelta: Ratio64::one(),
            calpha: Ratio64::new(1, 16),
            clambda: Ratio64::one(),
            mode: ConstantsMode::Empirical,
        }
    }

    /// The proof's constants for an instance of `n` values, to thousandths
    /// precision (they are irrational; nothing at reachable scale depends on
    /// digits beyond that).
    pub fn theory(n: u64) -> Self {
        let ln2 = std::f64::consts::LN_2;
        DenseConstants {
            cdelta: thousandths(1_699_200.0 * (2.0 * n.max(1) as f64).ln() * ln2 * ln2),
            calpha: thousandths(42_480.0 * ln2),
            clambda: thousandths(169_920.0 * ln2),
            mode: ConstantsMode::Theory,
        }
    }

    /// Custom empirical constants, e.g. for calibration sweeps.
    pub fn with_values(cdelta: Ratio64, calpha: Ratio64, clambda: Ratio64) -> Result<Self> {
        for v in [cdelta, calpha, clambda] {
            if v.is_zero() {
                return Err(Error::InvalidInput("constants must be positive".into()));
            }
        }
        Ok(DenseConstants {
            cdelta,
            calpha,
            clambda,
            mode: ConstantsMode::Empirical,
        })
    }

    pub fn cdelta(&self) -> Ratio64 {
        self.cdelta
    }

    pub fn calpha(&self) -> Ratio64 {
        self.calpha
    }

    pub fn clambda(&self) -> Ratio64 {
        self.clambda
    }

    pub fn mode(&self) -> ConstantsMode {
        self.mode
    }
}

/// `|X|^2 >= delta * max X`.
pub fn is_dense(x: &[u64], delta: Ratio64) -> bool {
    let n = x.len() as u128;
    let mx = x.iter().max().copied().unwrap_or(0) as u128;
    n * n * delta.den() as u128 >= delta.num() as u128 * mx
}

/// Whether `d > 1` is an `alpha`-almost divisor of `X`:
/// `|X \ X(d)| <= alpha * sigma(X) / |X|^2`.
pub fn almost_divisor_check(x: &[u64], d: u64, alpha: Ratio64) -> Result<bool> {
    if d <= 1 {
        return Err(Error::InvalidInput("almost-divisor candidates start at 2".into()));
    }
    let nondiv = x.iter().filter(|&&v| v % d != 0).count() as u128;
    let n = x.len() as u128;
    let sigma: u128 = x.iter().map(|&v| v as u128).sum();
    Ok(nondiv * n * n * alpha.den() as u128 <= alpha.num() as u128 * sigma)
}

/// A divisor `d` together with the reduced set `X' = X(d)/d` and the
/// threshold `lambda'` of its certified interval. Built by [`find_divisor`],
/// which checks the full premise, or by [`DenseDecomposition::from_parts`]
/// when the caller already certified it.
#[derive(Debug, Clone)]
pub struct DenseDecomposition {
    d: u64,
    xprime: IntegerMultiset,
    lambda_prime: u64,
    sigma_prime: u64,
    constants: DenseConstants,
}

impl DenseDecomposition {
    /// Wrap an already-certified decomposition. Validates only shape
    /// (`xprime` distinct, lambda' computable); the density and
    /// almost-divisor premises are the caller's responsibility.
    pub fn from_parts(d: u64, xprime: IntegerMultiset, constants: DenseConstants) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("divisor must be positive".into()));
        }
        if xprime.is_empty() || !xprime.is_distinct() {
            return Err(Error::InvalidInput(
                "reduced set must be nonempty and distinct".into(),
            ));
        }
        let sigma_prime = u64::try_from(xprime.sum())
            .map_err(|_| Error::InvalidInput("reduced set sum exceeds u64".into()))?;
        let n = xprime.len() as u128;
        let cl = constants.clambda();
        let num = (cl.num() as u128)
            .checked_mul(xprime.max().unwrap() as u128)
            .and_then(|v| v.checked_mul(sigma_prime as u128))
            .ok_or_else(|| Error::InvalidInput("interval threshold overflows".into()))?;
        let den = cl.den() as u128 * n * n;
        let lambda_prime = u64::try_from(num.div_ceil(den))
            .map_err(|_| Error::InvalidInput("interval threshold exceeds u64".into()))?;
        d.checked_mul(lambda_prime)
            .ok_or_else(|| Error::InvalidInput("lifted threshold overflows".into()))?;
        Ok(DenseDecomposition {
            d,
            xprime,
            lambda_prime,
            sigma_prime,
            constants,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn xprime(&self) -> &IntegerMultiset {
        &self.xprime
    }

    /// Threshold in the reduced scale.
    pub fn lambda_prime(&self) -> u64 {
        self.lambda_prime
    }

    /// Threshold lifted to the original scale: `d * lambda'`.
    pub fn lambda(&self) -> u64 {
        self.d * self.lambda_prime
    }

    pub fn sigma_prime(&self) -> u64 {
        self.sigma_prime
    }

    pub fn constants(&self) -> &DenseConstants {
        &self.constants
    }
}

/// Search the smallest `d` in `[1, 4*sigma/|X|^2]` whose reduction
/// `X' = X(d)/d` is dense with no almost divisor, keeping the size and sum
/// retention properties. Failure signals the premise does not hold at this
/// scale; callers fall back to the exact oracle.
pub fn find_divisor(x: &[u64], constants: &DenseConstants) -> Result<DenseDecomposition> {
    if x.is_empty() {
        return Err(Error::InvalidInput("value list must be nonempty".into()));
    }
    let mut xs = x.to_vec();
    xs.sort_unstable();
    if xs[0] == 0 || !xs.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("values must be distinct and positive".into()));
    }
    if constants.calpha().mul_int(16) > constants.cdelta() {
        return Err(Error::InvalidInput(
            "alpha constant must be at most a sixteenth of the density constant".into(),
        ));
    }

    let n = xs.len() as u128;
    let sigma: u128 = xs.iter().map(|&v| v as u128).sum();
    let limit = u64::try_from(4 * sigma / (n * n)).unwrap_or(u64::MAX).max(1);
    if !is_dense(&xs, constants.cdelta()) {
        return Err(Error::NoValidDivisor { limit });
    }

    for d in 1..=limit {
        let xd: Vec<u64> = xs.iter().filter(|&&v| v % d == 0).map(|&v| v / d).collect();
        if xd.is_empty() || !is_dense(&xd, constants.cdelta()) {
            continue;
        }
        let np = xd.len() as u128;
        let sigma_p: u128 = xd.iter().map(|&v| v as u128).sum();
        let sub_limit = u64::try_from(4 * sigma_p / (np * np)).unwrap_or(u64::MAX);
        if (2..=sub_limit).any(|dp| almost_divisor_check(&xd, dp, constants.calpha()).unwrap()) {
            continue;
        }
        // size and sum retention: |X'| >= 0.75 |X|, sigma' >= 0.75 sigma / d
        if 4 * np < 3 * n || 4 * d as u128 * sigma_p < 3 * sigma {
            continue;
        }
        let xprime = IntegerMultiset::new(xd)?;
        return DenseDecomposition::from_parts(d, xprime, *constants);
    }
    Err(Error::NoValidDivisor { limit })
}

/// The interval `[lambda', sigma' - lambda']` of reduced-scale sums the
/// decomposition certifies as completely filled. Callers lift to the
/// original scale by multiplying by `d`.
pub fn structural_interval(dec: &DenseDecomposition) -> Result<(u64, u64)> {
    let lp = dec.lambda_prime();
    let sp = dec.sigma_prime();
    if 2 * lp > sp {
        return Err(Error::EmptyInterval {
            lambda: lp,
            half_sigma: sp / 2,
        });
    }
    Ok((lp, sp - lp))
}

fn sum_of(x: &[u64]) -> u128 {
    x.iter().map(|&v| v as u128).sum()
}

fn check_query_range(dec: &DenseDecomposition, x: &[u64], lo: u64, hi: u64) -> Result<()> {
    let sigma = sum_of(x);
    if lo < dec.lambda() || lo > hi || 2 * hi as u128 > sigma {
        return Err(Error::QueryOutOfRange(format!(
            "[{lo}, {hi}] outside [{}, {}]",
            dec.lambda(),
            sigma / 2
        )));
    }
    Ok(())
}

/// Round `t` up to the nearest certified subset sum `t' = d * ceil(t / d)`.
/// Valid for `t` in `[lambda, sigma(X)/2]`; the overshoot is below `d`.
pub fn density_roundup(x: &[u64], t: u64, dec: &DenseDecomposition) -> Result<u64> {
    check_query_range(dec, x, t, t)?;
    let m = t.div_ceil(dec.d());
    let (_, hi) = structural_interval(dec)?;
    if m > hi {
        return Err(Error::QueryOutOfRange(format!(
            "rounded target {m} beyond certified interval end {hi}"
        )));
    }
    Ok(m * dec.d())
}

/// Whether some certified subset sum lies in `[lo, hi]`. The certified set
/// is the multiples of `d` inside the lifted structural interval, so this is
/// O(1) arithmetic.
pub fn range_query(dec: &DenseDecomposition, x: &[u64], lo: u64, hi: u64) -> Result<bool> {
    check_query_range(dec, x, lo, hi)?;
    let (ilo, ihi) = match structural_interval(dec) {
        Ok(bounds) => bounds,
        Err(Error::EmptyInterval { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let m_lo = lo.div_ceil(dec.d()).max(ilo);
    let m_hi = (hi / dec.d()).min(ihi);
    Ok(m_lo <= m_hi)
}

/// Smallest certified subset sum `>= from`: the first multiple of `d` at or
/// past `from` whose index sits in the structural interval, capped at
/// `sigma/2`.
pub fn next_subset_sum(dec: &DenseDecomposition, x: &[u64], from: u64) -> Result<u64> {
    let half = u64::try_from(sum_of(x) / 2).unwrap_or(u64::MAX);
    check_query_range(dec, x, from, from)?;
    let (ilo, ihi) = match structural_interval(dec) {
        Ok(bounds) => bounds,
        Err(Error::EmptyInterval { .. }) => (1, 0),
        Err(e) => return Err(e),
    };
    let m = from.div_ceil(dec.d()).max(ilo);
    if m > ihi.min(half / dec.d()) {
        return Err(Error::QueryOutOfRange(format!(
            "no certified sum in [{from}, {half}]"
        )));
    }
    Ok(m * dec.d())
}
