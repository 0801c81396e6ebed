//! Timing sweeps over an accuracy grid, reported as CSV.
//!
//! Rows are ordered by (grid point, trial). The first run at each grid
//! point is a warm-up and is not reported. A final summary row carries the
//! fitted log-log slope of median wall time against 1/eps in the `ratio`
//! column under algorithm name "slope".

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num::rational::BigRational;
use num::{BigInt, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::gen_knapsack;
use crate::knapsack::solve_knapsack_with;
use crate::multiset::IntegerMultiset;
use crate::oracle::{exact_knapsack, exact_subset_sums};
use crate::partition::solve_partition;
use crate::ratio::Ratio64;

pub const CSV_HEADER: &str = "algorithm,n,eps,wall_ns,output_size,ratio";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BenchProblem {
    Partition,
    Knapsack,
}

impl BenchProblem {
    pub fn name(self) -> &'static str {
        match self {
            BenchProblem::Partition => "partition",
            BenchProblem::Knapsack => "knapsack",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub algorithm: String,
    pub n: u64,
    pub eps: String,
    pub wall_ns: u128,
    pub output_size: u64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct EpsPoint {
    pub label: String,
    pub value: Ratio64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub problem: BenchProblem,
    pub n: u64,
    pub grid: Vec<EpsPoint>,
    pub trials: u64,
    pub seed: u64,
}

fn dyadic(tok: &str) -> Option<u32> {
    let k: u32 = tok.strip_prefix("2^-")?.parse().ok()?;
    (1..=40).contains(&k).then_some(k)
}

/// Accepts `2^-6..2^-13` (inclusive dyadic range), a single `2^-k`, or a
/// single decimal such as `0.05`.
pub fn parse_eps_grid(s: &str) -> Result<Vec<EpsPoint>> {
    let bad = || Error::Parse(format!("bad eps grid '{s}'"));
    if let Some((lo, hi)) = s.split_once("..") {
        let (a, b) = (dyadic(lo).ok_or_else(bad)?, dyadic(hi).ok_or_else(bad)?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b)
            .map(|k| EpsPoint { label: format!("2^-{k}"), value: Ratio64::new(1, 1 << k) })
            .collect());
    }
    if let Some(k) = dyadic(s) {
        return Ok(vec![EpsPoint { label: s.into(), value: Ratio64::new(1, 1 << k) }]);
    }
    let value = Ratio64::parse_decimal(s).map_err(|_| bad())?;
    Ok(vec![EpsPoint { label: s.into(), value }])
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E3779B97F4A7C15) ^ b.wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

///// Dense bench instance: n distinct values from [2n, 4n), a band twice as
/// wide as the sample so every accuracy on the grid sees the same workload.
fn partition_instance(n: u64, seed: u64) -> Result<IntegerMultiset> {
    let hi = n
        .checked_mul(4)
        .ok_or_else(|| Error::InvalidInput("bench instance size too large".into()))?;
    let mut pool: Vec<u64> = (hi / 2..hi).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (picked, _) = pool.partial_shuffle(&mut rng, n as usize);
    IntegerMultiset::new(picked.to_vec())
}

fn partition_once(n: u64, eps: Ratio64, seed: u64) -> Result<BenchRow> {
    let x = partition_instance(n, seed)?;
    let t0 = Instant::now();
    let sol = solve_partition(&x, eps)?;
    let wall_ns = t0.elapsed().as_nanos();
    let ratio = match exact_subset_sums(&x, None) {
        Ok(sums) => {
            let half = (x.sum() / 2) as u64;
            let opt = *sums.iter().take_while(|&&s| s <= half).last().unwrap_or(&0);
            Some(if opt == 0 { 1.0 } else { sol as f64 / opt as f64 })
        }
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BenchRow {
        algorithm: "partition".into(),
        n: x.len() as u64,
        eps: String::new(),
        wall_ns,
        output_size: 1,
        ratio,
    })
}

fn knapsack_once(n: u64, eps: Ratio64, seed: u64) -> Result<BenchRow> {
    let inst = gen_knapsack(n, 100, seed)?;
    let t0 = Instant::now();
    let sol = solve_knapsack_with(&inst, eps, seed, 20)?;
    let wall_ns = t0.elapsed().as_nanos();
    let ratio = match exact_knapsack(&inst) {
        Ok(f) => {
            let units = f.eval(inst.capacity());
            let opt = BigRational::new(BigInt::from(units), BigInt::from(inst.profit_den()));
            Some(if opt.is_zero() {
                1.0
            } else {
                (sol / opt).to_f64().unwrap_or(f64::NAN)
            })
        }
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BenchRow {
        algorithm: "knapsack".into(),
        n,
        eps: String::new(),
        wall_ns,
        output_size: 1,
        ratio,
    })
}

fn bench_point(cfg: &BenchConfig, idx: usize) -> Result<Vec<BenchRow>> {
    let pt = &cfg.grid[idx];
    let mut rows = Vec::new();
    // trial 0 is the warm-up
    for trial in 0..=cfg.trials {
        let seed = match cfg.problem {
            // the same instances sweep the whole grid, so slopes compare
            // accuracies on a fixed workload
            BenchProblem::Partition => mix(cfg.seed, 0, trial),
            BenchProblem::Knapsack => mix(cfg.seed, idx as u64, trial),
        };
        let mut row = match cfg.problem {
            BenchProblem::Partition => partition_once(cfg.n, pt.value, seed)?,
            BenchProblem::Knapsack => knapsack_once(cfg.n, pt.value, seed)?,
        };
        if trial > 0 {
            row.eps = pt.label.clone();
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Runs the sweep with grid points spread across a worker pool; row order
/// is by (grid point, trial) regardless of scheduling.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("at least one trial required".into()));
    }
    let done: Mutex<Vec<(usize, Result<Vec<BenchRow>>)>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(cfg.grid.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= cfg.grid.len() {
                    break;
                }
                let rows = bench_point(cfg, idx);
                done.lock().unwrap().push((idx, rows));
            });
        }
    });
    let mut done = done.into_inner().unwrap();
    done.sort_by_key(|(idx, _)| *idx);
    let mut rows = Vec::new();
    for (_, r) in done {
        rows.extend(r?);
    }
    let slope = fitted_slope(&rows);
    rows.push(BenchRow {
        algorithm: "slope".into(),
        n: cfg.n,
        eps: "0".into(),
        wall_ns: 0,
        output_size: 0,
        ratio: Some(slope),
    });
    Ok(rows)
}

fn eps_as_f64(label: &str) -> Option<f64> {
    if let Some(k) = dyadic(label) {
        return Some((0.5f64).powi(k as i32));
    }
    label.parse::<f64>().ok().filter(|v| *v > 0.0)
}

/// Least-squares slope of ln(median wall_ns) against ln(1/eps) over the
/// data rows; NaN when fewer than two grid points are present.
pub fn fitted_slope(rows: &[BenchRow]) -> f64 {
    let mut groups: Vec<(f64, Vec<u128>)> = Vec::new();
    for row in rows.iter().filter(|r| r.algorithm != "slope") {
        let Some(eps) = eps_as_f64(&row.eps) else { continue };
        let x = (1.0 / eps).ln();
        match groups.iter_mut().find(|(gx, _)| *gx == x) {
            Some((_, walls)) => walls.push(row.wall_ns),
            None => groups.push((x, vec![row.wall_ns])),
        }
    }
    if groups.len() < 2 {
        return f64::NAN;
    }
    let points: Vec<(f64, f64)> = groups
        .iter_mut()
        .map(|(x, walls)| {
            walls.sort_unstable();
            let med = walls[walls.len() / 2].max(1) as f64;
            (*x, med.ln())
        })
        .collect();
    let m = points.len() as f64;
    let (sx, sy): (f64, f64) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / sxx
}

pub fn format_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let ratio = r.ratio.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.algorithm, r.n, r.eps, r.wall_ns, r.output_size, ratio
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Parse("missing or wrong CSV header".into()));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let bad = |what: &str| Error::Parse(format!("row {}: bad {what}", i + 2));
        if f.len() != 6 {
            return Err(bad("field count"));
        }
        rows.push(BenchRow {
            algorithm: f[0].to_string(),
            n: f[1].parse().map_err(|_| bad("n"))?,
            eps: f[2].to_string(),
            wall_ns: f[3].parse().map_err(|_| bad("wall_ns"))?,
            output_size: f[4].parse().map_err(|_| bad("output_size"))?,
            ratio: if f[5].is_empty() {
                None
            } else {
                Some(f[5].parse().map_err(|_| bad("ratio"))?)
            },
        });
    }
    Ok(rows)
}
