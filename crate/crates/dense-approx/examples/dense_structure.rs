//! Subset sums of a dense set fill a predictable lattice interval.
//!
//! Multiples of 3 between 90 and 180: after dividing out the shared factor
//! the set is dense enough that every multiple of 3 across a wide middle
//! interval is a subset sum, so membership queries become arithmetic.

use dense_approx::dense::{
    density_roundup, find_divisor, next_subset_sum, range_query, structural_interval,
};
use dense_approx::oracle::exact_subset_sums;
use dense_approx::{DenseConstants, IntegerMultiset};

fn main() -> dense_approx::Result<()> {
    let values: Vec<u64> = (30..=60).map(|k| 3 * k).collect();
    let x = IntegerMultiset::new(values.clone())?;

    let dec = find_divisor(&values, &DenseConstants::empirical())?;
    println!(
        "divisor d = {}, reduced set of {} values summing to {}",
        dec.d(),
        dec.xprime().len(),
        dec.sigma_prime()
    );

    let (ilo, ihi) = structural_interval(&dec)?;
    println!(
        "certified: every multiple of {} in [{}, {}] is a subset sum",
        dec.d(),
        dec.d() * ilo,
        dec.d() * ihi
    );

    // small enough to check the claim against the exact table
    let sums = exact_subset_sums(&x, None)?;
    let missing = (ilo..=ihi)
        .map(|m| m * dec.d())
        .filter(|s| sums.binary_search(s).is_err())
        .count();
    println!("oracle disagreements across {} certified sums: {missing}", ihi - ilo + 1);

    for t in [500, 1000, 2000] {
        println!("smallest certified sum >= {t}: {}", density_roundup(&values, t, &dec)?);
    }
    println!("any subset sum in [265, 275]? {}", range_query(&dec, &values, 265, 275)?);
    println!("next certified sum from 301: {}", next_subset_sum(&dec, &values, 301)?);
    Ok(())
}
