//! One band of values, solved by both strategies.
//!
//! Inputs drawn from [1/eps, 2/eps) admit two different attacks: a balanced
//! tree of interval merges, or a divisor sweep that exploits density. Auto
//! picks by predicted cost, but each can be forced to compare outputs.

use dense_approx::oracle::exact_subset_sums;
use dense_approx::{solve_band_with, BandAlgorithm, IntegerMultiset, Ratio64};

fn main() -> dense_approx::Result<()> {
    // 48 distinct values in [64, 128), eps = 1/64 declaring that range
    let values: Vec<u64> = (64..128).filter(|v| v % 4 != 1).collect();
    let eps = Ratio64::new(1, 64);
    let n = values.len() as u64;

    let sums = exact_subset_sums(&IntegerMultiset::new(values.clone())?, None)?;

    for alg in [BandAlgorithm::Interval, BandAlgorithm::Dense, BandAlgorithm::Auto] {
        let a = solve_band_with(&values, eps, alg)?;
        // widest gap from a true sum down to its nearest certified element
        let mut worst = 0;
        for &s in &sums {
            let i = a.elements().partition_point(|&e| e <= s);
            worst = worst.max(s - a.elements()[i - 1]);
        }
        println!(
            "{alg:?}: {} elements for {} true sums, observed slack {worst} (allowed {n})",
            a.len(),
            sums.len()
        );
    }
    Ok(())
}
