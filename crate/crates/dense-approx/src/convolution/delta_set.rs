//! Geometric divisor sets for Δ-multiple rounding.
//!
//! Every value in [1, 2] can be rounded to a multiple of some set element
//! with at most 2·eps one-sided error; the set has O(delta/eps) elements,
//! all within [delta, 8·delta]. Elements are exact rationals; solvers
//! quantize them onto an integer grid before use.

use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive};

use crate::error::{Error, Result};
use crate::ratio::Ratio64;

fn to_big(r: Ratio64) -> BigRational {
    BigRational::new(BigInt::from(r.num()), BigInt::from(r.den()))
}

/// {delta·(1+eps)^i : 0 ≤ i ≤ r+1} with r the least integer such that
/// (1+eps)^r ≥ 1+2·delta.
pub fn delta_multiple_set(eps: Ratio64, delta: Ratio64) -> Result<Vec<BigRational>> {
    if eps.is_zero() || eps >= delta || delta >= Ratio64::new(1, 2) {
        return Err(Error::InvalidInput(format!(
            "need 0 < eps < delta < 1/2, got eps={eps} delta={delta}"
        )));
    }
    let eps = to_big(eps);
    let delta = to_big(delta);
    let base = BigRational::one() + eps;
    let target = BigRational::one() + BigRational::from(BigInt::from(2)) * &delta;
    let mut r = 0usize;
    let mut pow = BigRational::one();
    while pow < target {
        pow *= &base;
        r += 1;
    }
    let mut out = Vec::with_capacity(r + 2);
    let mut a = delta;
    for _ in 0..=r + 1 {
        out.push(a.clone());
        a *= &base;
    }
    Ok(out)
}

/// ⌊v·q⌋ for each entry: the exact set projected down onto the 1/q grid.
pub fn quantize_down(values: &[BigRational], q: u64) -> Vec<u64> {
    values
        .iter()
        .map(|v| {
            let scaled = v * BigRational::from(BigInt::from(q));
            scaled.floor().to_integer().to_u64().expect("quantized value fits u64")
        })
        .collect()
}
