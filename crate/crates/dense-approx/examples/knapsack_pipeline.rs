//! Knapsack over exact decimal profits, from reduction to final value.

use num::ToPrimitive;

use dense_approx::oracle::exact_knapsack;
use dense_approx::{
    reduce_knapsack, solve_knapsack, solve_knapsack_with, KnapsackInstance, KnapsackItem, Ratio64,
};

fn item(profit: u64, weight: u64) -> KnapsackItem {
    KnapsackItem { profit, weight }
}

fn main() -> dense_approx::Result<()> {
    // profits in cents (denominator 100), weights in grams
    let inst = KnapsackInstance::new(
        vec![
            item(1250, 340),
            item(799, 210),
            item(2480, 655),
            item(310, 90),
            item(1999, 470),
            item(560, 180),
            item(1725, 505),
            item(935, 260),
        ],
        1500,
        100,
    )?;

    let profile = exact_knapsack(&inst)?;
    let opt = profile.eval(inst.capacity());
    println!(
        "capacity {} g, exact optimum {}.{:02}",
        inst.capacity(),
        opt / 100,
        opt % 100
    );

    for den in [10, 20, 100] {
        let got = solve_knapsack(&inst, Ratio64::new(1, den))?.to_f64().unwrap_or(f64::NAN);
        let pct = got * inst.profit_den() as f64 * 100.0 / opt as f64;
        println!("eps = 1/{den:<4} value {got:>8.2}  ({pct:.2}% of optimum)");
    }

    // the reduction groups items into profit bands; tiny profits that cannot
    // matter at the requested accuracy are dropped up front
    let red = reduce_knapsack(&inst, Ratio64::new(1, 10))?;
    println!(
        "\nreduction at eps = 1/10: {} bands, {} items discarded, working accuracy 1/{}",
        red.bands().len(),
        red.discarded(),
        red.e()
    );

    // the randomized rounds are seeded explicitly when reproducibility matters
    let v = solve_knapsack_with(&inst, Ratio64::new(1, 20), 7, 12)?;
    println!("seed 7, 12 rounds: {:.2}", v.to_f64().unwrap_or(f64::NAN));
    Ok(())
}
