//! Exact integer convolution via a number-theoretic transform.
//!
//! Sumsets need exact presence bits, so we convolve indicator vectors over
//! Z/p with p = 119·2^23 + 1. A product coefficient counts the (i, j) pairs
//! contributing to it; for indicator inputs that count is at most
//! min(|A|, |B|) ≤ 2^23 < p, so a nonzero true count never collapses to 0.

use crate::error::{Error, Result};

pub(crate) const MOD: u64 = 998_244_353;
const ROOT: u64 = 3;
/// Largest supported transform length (the prime's 2-adic capacity).
pub(crate) const MAX_LEN: usize = 1 << 23;

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= MOD;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % MOD;
        }
        base = base * base % MOD;
        exp >>= 1;
    }
    acc
}

fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w_len = if invert {
            pow_mod(pow_mod(ROOT, (MOD - 1) / len as u64), MOD - 2)
        } else {
            pow_mod(ROOT, (MOD - 1) / len as u64)
        };
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for i in start..start + len / 2 {
                let u = a[i];
                let v = a[i + len / 2] * w % MOD;
                a[i] = (u + v) % MOD;
                a[i + len / 2] = (u + MOD - v) % MOD;
                w = w * w_len % MOD;
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, MOD - 2);
        for x in a.iter_mut() {
            *x = *x * n_inv % MOD;
        }
    }
}

/// c[k] = Σ_{i+j=k} a[i]·b[j] mod p. Exact whenever every true coefficient
/// is below p.
pub(crate) fn convolve_mod(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if size > MAX_LEN {
        return Err(Error::TransformTooLarge { len: size, max: MAX_LEN });
    }
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    for x in fa.iter_mut().chain(fb.iter_mut()) {
        *x %= MOD;
    }
    ntt(&mut fa, false);
    ntt(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % MOD;
    }
    ntt(&mut fa, true);
    fa.truncate(out_len);
    Ok(fa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn convolve_naive(a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % MOD;
            }
        }
        c
    }

    #[test]
    fn matches_naive_convolution() {
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..30 {
            let la = (next() % 40 + 1) as usize;
            let lb = (next() % 40 + 1) as usize;
            let a: Vec<u64> = (0..la).map(|_| next() % MOD).collect();
            let b: Vec<u64> = (0..lb).map(|_| next() % MOD).collect();
            assert_eq!(convolve_mod(&a, &b).unwrap(), convolve_naive(&a, &b));
        }
    }

    #[test]
    fn rejects_oversized_transforms() {
        let a = vec![1u64; MAX_LEN];
        let b = vec![1u64; 2];
        assert!(matches!(
            convolve_mod(&a, &b),
            Err(Error::TransformTooLarge { .. })
        ));
    }

    #[test]
    fn empty_inputs() {
        assert!(convolve_mod(&[], &[1]).unwrap().is_empty());
    }
}
