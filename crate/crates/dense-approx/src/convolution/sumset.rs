//! Exact 1D and 2D sumsets.
//!
//! Both operations have two interchangeable exact paths: pairwise
//! enumeration (cheap for sparse inputs) and an indicator-vector NTT (cheap
//! for dense inputs). `Backend::Auto` picks by estimated work; tests force
//! each path to cross-check them.

use crate::error::{Error, Result};

use super::ntt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Backend {
    #[default]
    Auto,
    Pairwise,
    Transform,
}

/// Grid point for 2D sumsets; `j` may be negative before shifting.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point2D {
    pub k: u64,
    pub j: i64,
}

impl Point2D {
    pub fn new(k: u64, j: i64) -> Self {
        Point2D { k, j }
    }
}

/// (A + B) ∩ [0, cap], exactly. `None` means no cap.
pub fn sumset_1d(a: &[u64], b: &[u64], cap: Option<u64>) -> Result<Vec<u64>> {
    sumset_1d_with(a, b, cap, Backend::Auto)
}

pub fn sumset_1d_with(a: &[u64], b: &[u64], cap: Option<u64>, backend: Backend) -> Result<Vec<u64>> {
    let keep = |v: u64| cap.is_none_or(|c| v <= c);
    let a: Vec<u64> = a.iter().copied().filter(|&v| keep(v)).collect();
    let b: Vec<u64> = b.iter().copied().filter(|&v| keep(v)).collect();
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let max_a = *a.iter().max().unwrap();
    let max_b = *b.iter().max().unwrap();
    let out_len = (max_a + max_b + 1) as u128;
    match backend {
        Backend::Pairwise => Ok(pairwise_1d(&a, &b, cap)),
        Backend::Transform => transform_1d(&a, &b, max_a, max_b, cap),
        Backend::Auto => {
            if use_pairwise(a.len(), b.len(), out_len) {
                Ok(pairwise_1d(&a, &b, cap))
            } else {
                transform_1d(&a, &b, max_a, max_b, cap)
            }
        }
    }
}

/// Largest |A|·|B| the auto path will materialize when the transform does
/// not fit. Past this the pair list is itself the memory hazard the
/// transform cap guards against, so the oversize error wins.
const PAIR_CAP: u128 = 1 << 24;

/// Pairwise work |A|·|B| vs transform work ~ L·log L, with [`PAIR_CAP`]
/// bounding the pair list either way. An oversize transform never excuses an
/// oversize pair list; that case errors out in the transform path.
fn use_pairwise(la: usize, lb: usize, out_len: u128) -> bool {
    let size = out_len.next_power_of_two();
    let pair_work = la as u128 * lb as u128;
    if size > ntt::MAX_LEN as u128 {
        return pair_work <= PAIR_CAP;
    }
    let transform_work = size.saturating_mul(size.max(2).ilog2() as u128);
    pair_work <= transform_work.min(PAIR_CAP)
}

fn pairwise_1d(a: &[u64], b: &[u64], cap: Option<u64>) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            let s = x + y;
            if cap.is_none_or(|c| s <= c) {
                out.push(s);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn transform_1d(a: &[u64], b: &[u64], max_a: u64, max_b: u64, cap: Option<u64>) -> Result<Vec<u64>> {
    let size = (max_a as u128 + max_b as u128 + 1).next_power_of_two();
    if size > ntt::MAX_LEN as u128 {
        return Err(Error::TransformTooLarge { len: size.min(usize::MAX as u128) as usize, max: ntt::MAX_LEN });
    }
    let mut ia = vec![0u64; max_a as usize + 1];
    let mut ib = vec![0u64; max_b as usize + 1];
    for &v in a {
        ia[v as usize] = 1;
    }
    for &v in b {
        ib[v as usize] = 1;
    }
    let c = ntt::convolve_mod(&ia, &ib)?;
    Ok(c.iter()
        .enumerate()
        .filter(|&(s, &cnt)| cnt != 0 && cap.is_none_or(|c| s as u64 <= c))
        .map(|(s, _)| s as u64)
        .collect())
}

/// Exact sumset {p + q : p ∈ a, q ∈ b} of 2D points.
pub fn sumset_2d(a: &[Point2D], b: &[Point2D]) -> Result<Vec<Point2D>> {
    sumset_2d_with(a, b, Backend::Auto)
}

pub fn sumset_2d_with(a: &[Point2D], b: &[Point2D], backend: Backend) -> Result<Vec<Point2D>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let bounds = |pts: &[Point2D]| {
        let kmax = pts.iter().map(|p| p.k).max().unwrap();
        let jmin = pts.iter().map(|p| p.j).min().unwrap();
        let jmax = pts.iter().map(|p| p.j).max().unwrap();
        (kmax, jmin, jmax)
    };
    let (ka, ja_min, ja_max) = bounds(a);
    let (kb, jb_min, jb_max) = bounds(b);
    // Kronecker embedding: width covers every reachable j-sum, so
    // idx = k·w + (j - jmin) is injective and sums map to index sums.
    let w = (ja_max - ja_min) as u128 + (jb_max - jb_min) as u128 + 1;
    let out_len = (ka as u128 + kb as u128) * w + (ja_max - ja_min) as u128 + (jb_max - jb_min) as u128 + 1;
    match backend {
        Backend::Pairwise => Ok(pairwise_2d(a, b)),
        Backend::Transform => transform_2d(a, b, ja_min, jb_min, w, out_len),
        Backend::Auto => {
            if use_pairwise(a.len(), b.len(), out_len) {
                Ok(pairwise_2d(a, b))
            } else {
                transform_2d(a, b, ja_min, jb_min, w, out_len)
            }
        }
    }
}

fn pairwise_2d(a: &[Point2D], b: &[Point2D]) -> Vec<Point2D> {
    let mut out: Vec<Point2D> = Vec::with_capacity(a.len() * b.len());
    for p in a {
        for q in b {
            out.push(Point2D::new(p.k + q.k, p.j + q.j));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn transform_2d(
    a: &[Point2D],
    b: &[Point2D],
    ja_min: i64,
    jb_min: i64,
    w: u128,
    out_len: u128,
) -> Result<Vec<Point2D>> {
    if out_len.next_power_of_two() > ntt::MAX_LEN as u128 {
        return Err(Error::TransformTooLarge {
            len: out_len.next_power_of_two() as usize,
            max: ntt::MAX_LEN,
        });
    }
    let w = w as u64;
    let embed = |pts: &[Point2D], jmin: i64| -> Vec<u64> {
        let len = pts
            .iter()
            .map(|p| p.k * w + (p.j - jmin) as u64)
            .max()
            .unwrap() as usize
            + 1;
        let mut ind = vec![0u64; len];
        for p in pts {
            ind[(p.k * w + (p.j - jmin) as u64) as usize] = 1;
        }
        ind
    };
    let c = ntt::convolve_mod(&embed(a, ja_min), &embed(b, jb_min))?;
    let mut out = Vec::new();
    for (idx, &cnt) in c.iter().enumerate() {
        if cnt != 0 {
            let idx = idx as u64;
            out.push(Point2D::new(idx / w, (idx % w) as i64 + ja_min + jb_min));
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_examples() {
        assert_eq!(sumset_1d(&[0, 1], &[0, 2], None).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(sumset_1d(&[0, 1], &[0, 2], Some(2)).unwrap(), vec![0, 1, 2]);
        assert_eq!(
            sumset_1d(&[0, 5, 6], &[0, 5], Some(12)).unwrap(),
            vec![0, 5, 6, 10, 11]
        );
        assert!(sumset_1d(&[], &[1], None).unwrap().is_empty());
    }

    #[test]
    fn two_dimensional_examples() {
        let p = |k, j| Point2D::new(k, j);
        assert_eq!(
            sumset_2d(&[p(0, 0), p(1, 1)], &[p(0, 0), p(2, 0)]).unwrap(),
            vec![p(0, 0), p(1, 1), p(2, 0), p(3, 1)]
        );
        let a = vec![p(1, -3), p(4, 2)];
        assert_eq!(sumset_2d(&a, &[p(0, 0)]).unwrap(), a);
        assert_eq!(
            sumset_2d(&[p(1, 0), p(0, 1)], &[p(1, 0), p(0, 1)]).unwrap(),
            vec![p(0, 2), p(1, 1), p(2, 0)]
        );
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
    fn backends_agree_1d() {
        let mut next = rng(42);
        for round in 0..40 {
            let la = (next() % 64 + 1) as usize;
            let lb = (next() % 64 + 1) as usize;
            let mut a: Vec<u64> = (0..la).map(|_| next() % 300).collect();
            let mut b: Vec<u64> = (0..lb).map(|_| next() % 300).collect();
            a.sort_unstable();
            a.dedup();
            b.sort_unstable();
            b.dedup();
            let cap = if round % 2 == 0 { Some(next() % 400) } else { None };
            let fast = sumset_1d_with(&a, &b, cap, Backend::Transform).unwrap();
            let slow = sumset_1d_with(&a, &b, cap, Backend::Pairwise).unwrap();
            assert_eq!(fast, slow, "a={a:?} b={b:?} cap={cap:?}");
        }
    }

    #[test]
    fn backends_agree_2d() {
        let mut next = rng(99);
        for _ in 0..40 {
            let gen = |next: &mut dyn FnMut() -> u64| -> Vec<Point2D> {
                let n = (next() % 48 + 1) as usize;
                let mut pts: Vec<Point2D> = (0..n)
                    .map(|_| Point2D::new(next() % 20, (next() % 31) as i64 - 15))
                    .collect();
                pts.sort_unstable();
                pts.dedup();
                pts
            };
            let a = gen(&mut next);
            let b = gen(&mut next);
            let fast = sumset_2d_with(&a, &b, Backend::Transform).unwrap();
            let slow = sumset_2d_with(&a, &b, Backend::Pairwise).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn oversized_forced_transform_errors() {
        let a = vec![0u64, 1 << 40];
        assert!(matches!(
            sumset_1d_with(&a, &a, None, Backend::Transform),
            Err(Error::TransformTooLarge { .. })
        ));
        // Auto falls back to pairwise instead of failing.
        assert_eq!(
            sumset_1d(&a, &a, None).unwrap(),
            vec![0, 1 << 40, 1 << 41]
        );
    }

    #[test]
    fn oversized_auto_refuses_past_pair_cap() {
        // transform does not fit and the pair list would have 2^26 entries;
        // auto must error out instead of materializing it
        let a: Vec<u64> = (0..1u64 << 13).map(|i| (1 << 40) + (i << 20)).collect();
        assert!(matches!(
            sumset_1d(&a, &a, None),
            Err(Error::TransformTooLarge { .. })
        ));
    }
}
