//! Split a pallet of crates into two stacks of nearly equal weight.
//!
//! The solver returns the heaviest achievable "light side"; the instance is
//! small enough to afford the exact answer, so the gap is printed per
//! tolerance.

use dense_approx::oracle::exact_subset_sums;
use dense_approx::{greedy_small_opt, solve_partition, IntegerMultiset, Ratio64};

fn main() -> dense_approx::Result<()> {
    let weights = vec![
        812, 640, 1377, 955, 1201, 733, 498, 1019, 886, 1540, 377, 921, 1133, 604, 759, 1288,
        450, 982, 1176, 530, 871, 1463, 692, 1024,
    ];
    let x = IntegerMultiset::new(weights)?;
    let sigma = u64::try_from(x.sum()).expect("total fits in u64");
    println!("{} crates, {} kg total, perfect half {} kg", x.len(), sigma, sigma / 2);

    let sums = exact_subset_sums(&x, Some(sigma / 2))?;
    let opt = *sums.last().expect("empty subset always present");
    println!("exact best light side: {opt} kg\n");

    for den in [4, 20, 100, 1000] {
        let side = solve_partition(&x, Ratio64::new(1, den))?;
        println!(
            "eps = 1/{den:<4}  light {side} kg  heavy {} kg  gap to optimum {}",
            sigma - side,
            opt - side
        );
    }

    // one crate outweighing all others together makes the split immediate
    let lopsided = IntegerMultiset::new(vec![9000, 120, 260, 75])?;
    if let Some(best) = greedy_small_opt(&lopsided) {
        println!("\nlopsided pallet solved greedily: light side {best} kg");
    }
    Ok(())
}
