//! Windowed (min,+) convolution of cost arrays.
//!
//! Arrays live on a common value grid: entry i is the least cost achieving
//! grid value i, with `INF` marking unreachable cells. The window restricts
//! which index splits (i, j), i + j = k, are combined; `None` is the
//! unrestricted naive mode.

use super::smawk::INF;

pub fn minplus_windowed(a: &[u64], b: &[u64], window: Option<u64>) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![INF; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x >= INF {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y >= INF {
                continue;
            }
            if window.is_some_and(|w| i.abs_diff(j) as u64 > w) {
                continue;
            }
            let k = i + j;
            out[k] = out[k].min(x + y);
        }
    }
    out
}
