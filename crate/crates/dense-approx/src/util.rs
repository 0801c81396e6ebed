//! Integer helpers shared across modules.

/// ⌊n^(1/k)⌋ for k ≥ 1.
pub(crate) fn kth_root_floor(n: u128, k: u32) -> u64 {
    assert!(k >= 1);
    if k == 1 {
        return u64::try_from(n).expect("root argument too large for u64 result");
    }
    if n <= 1 {
        return n as u64;
    }
    // Binary search on r with r^k <= n.
    let mut lo = 1u64;
    // r <= 2^(128/k) bounds the answer; +1 keeps hi exclusive-safe.
    let mut hi = 1u64.checked_shl(128 / k + 1).unwrap_or(u64::MAX);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if pow_le(mid, k, n) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `base^exp <= limit` without overflow.
fn pow_le(base: u64, exp: u32, limit: u128) -> bool {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = match acc.checked_mul(base as u128) {
            Some(v) => v,
            None => return false,
        };
        if acc > limit {
            return false;
        }
    }
    true
}
