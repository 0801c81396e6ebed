//! SMAWK row minima and the (min,+) kernel built on it.
//!
//! The solver-facing operation is `minplus_arbitrary_convex`: convolving an
//! arbitrary cost array with a convex one. Writing the result matrix as
//! M[s][j] = a[j] + b[s-j], the Monge condition reduces to convexity of b
//! alone (the a terms cancel), so SMAWK applies once b is extended convexly
//! beyond its support with steep guard slopes.

/// Unreachable-cost sentinel; small enough that sums of two never overflow.
pub const INF: u64 = u64::MAX / 4;

const GUARD: i128 = 1 << 70;

/// Leftmost argmin of every row of an implicitly defined totally monotone
/// matrix.
pub(crate) fn smawk_row_minima(
    nrows: usize,
    ncols: usize,
    m: &impl Fn(usize, usize) -> i128,
) -> Vec<usize> {
    assert!(ncols > 0);
    let rows: Vec<usize> = (0..nrows).collect();
    let cols: Vec<usize> = (0..ncols).collect();
    let mut out = vec![0usize; nrows];
    solve(&rows, &cols, m, &mut out);
    out
}

fn solve(rows: &[usize], cols: &[usize], m: &impl Fn(usize, usize) -> i128, out: &mut [usize]) {
    if rows.is_empty() {
        return;
    }
    // REDUCE: prune columns that cannot hold any row minimum, keeping at
    // most |rows| survivors. `<=` keeps the leftmost column on ties.
    let mut surv: Vec<usize> = Vec::with_capacity(rows.len());
    for &c in cols {
        loop {
            let Some(&top) = surv.last() else { break };
            let r = rows[surv.len() - 1];
            if m(r, top) <= m(r, c) {
                break;
            }
            surv.pop();
        }
        if surv.len() < rows.len() {
            surv.push(c);
        }
    }
    let odd: Vec<usize> = rows.iter().copied().skip(1).step_by(2).collect();
    solve(&odd, &surv, m, out);
    // Fill even rows; each minimum lies between its neighbors' minima.
    let mut ci = 0usize;
    for i in (0..rows.len()).step_by(2) {
        let row = rows[i];
        let hi_col = if i + 1 < rows.len() { out[rows[i + 1]] } else { *surv.last().unwrap() };
        let mut best_ci = ci;
        let mut best = m(row, surv[ci]);
        while surv[ci] != hi_col {
            ci += 1;
            let v = m(row, surv[ci]);
            if v < best {
                best = v;
                best_ci = ci;
            }
        }
        out[row] = surv[best_ci];
    }
}

/// out[s] = min_j a[j] + b[s-j] over in-range j, for s in 0..out_len.
///
/// `a` is arbitrary (entries may be `INF`); `b` must be convex (differences
/// nondecreasing). Runs in O(out_len) matrix evaluations via SMAWK.
pub(crate) fn minplus_arbitrary_convex(a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
    assert!(!a.is_empty() && !b.is_empty());
    debug_assert!(b.windows(3).all(|w| w[1] - w[0] <= w[2] - w[1]), "b must be convex");
    debug_assert!(out_len <= a.len() + b.len() - 1);
    debug_assert!(a.len() + b.len() < 1 << 26);
    let lb = b.len() as i128;
    let last_diff = if b.len() >= 2 { (b[b.len() - 1] - b[b.len() - 2]) as i128 } else { 0 };
    // Convex extension: steep quadratic to the left of 0, steep linear past
    // the end. Guard slopes dominate every in-band value, so extended cells
    // never win a row minimum, while convexity (hence total monotonicity)
    // holds across the whole matrix.
    let b_ext = |k: i128| -> i128 {
        if k < 0 {
            b[0] as i128 + (-k) * (-k) * GUARD
        } else if k < lb {
            b[k as usize] as i128
        } else {
            b[b.len() - 1] as i128 + (k - lb + 1) * (last_diff + GUARD)
        }
    };
    let m = |s: usize, j: usize| a[j] as i128 + b_ext(s as i128 - j as i128);
    let arg = smawk_row_minima(out_len, a.len(), &m);
    (0..out_len)
        .map(|s| {
            let v = m(s, arg[s]);
            if v >= INF as i128 {
                INF
            } else {
                v as u64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_row_minima(nrows: usize, ncols: usize, m: &impl Fn(usize, usize) -> i128) -> Vec<usize> {
        (0..nrows)
            .map(|i| (0..ncols).min_by_key(|&j| (m(i, j), j)).unwrap())
            .collect()
    }

    fn naive_minplus(a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        (0..out_len)
            .map(|s| {
                let mut best = u64::MAX;
                for (j, &av) in a.iter().enumerate() {
                    if s >= j && s - j < b.len() {
                        best = best.min((av).saturating_add(b[s - j]));
                    }
                }
                best.min(INF)
            })
            .collect()
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

    #[test]
    fn smawk_matches_naive_on_monge_matrices() {
        let mut next = rng(7);
        for _ in 0..60 {
            let nrows = (next() % 30 + 1) as usize;
            let ncols = (next() % 30 + 1) as usize;
            // Monge generator: M[i][j] = r[i] + c[j] + i*j*slope with slope <= 0
            // plus a staircase of nonneg rectangle charges.
            let r: Vec<i128> = (0..nrows).map(|_| (next() % 1000) as i128).collect();
            let c: Vec<i128> = (0..ncols).map(|_| (next() % 1000) as i128).collect();
            let slope = (next() % 5) as i128;
            let m = move |i: usize, j: usize| {
                r[i] + c[j] - slope * i as i128 * j as i128
            };
            assert_eq!(
                smawk_row_minima(nrows, ncols, &m),
                naive_row_minima(nrows, ncols, &m)
            );
        }
    }

    #[test]
    fn minplus_matches_naive() {
        let mut next = rng(11);
        for _ in 0..80 {
            let la = (next() % 25 + 1) as usize;
            let lb = (next() % 25 + 2) as usize;
            let a: Vec<u64> = (0..la)
                .map(|_| if next() % 4 == 0 { INF } else { next() % 10_000 })
                .collect();
            // random convex b with b[0] = 0: cumulative sums of sorted diffs
            let mut diffs: Vec<u64> = (0..lb - 1).map(|_| next() % 100).collect();
            diffs.sort_unstable();
            let mut b = vec![0u64];
            for d in diffs {
                b.push(b.last().unwrap() + d);
            }
            let out_len = la + b.len() - 1;
            assert_eq!(
                minplus_arbitrary_convex(&a, &b, out_len),
                naive_minplus(&a, &b, out_len),
                "a={a:?} b={b:?}"
            );
        }
    }

    #[test]
    fn minplus_single_column() {
        assert_eq!(minplus_arbitrary_convex(&[3], &[0, 5, 10], 3), vec![3, 8, 13]);
        assert_eq!(minplus_arbitrary_convex(&[INF, 2], &[0, 1], 3), vec![INF, 2, 3]);
    }
}
