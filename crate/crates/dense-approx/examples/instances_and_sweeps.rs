//! Fixture files on disk and a small accuracy sweep over them.

use dense_approx::bench::{fitted_slope, format_csv, parse_eps_grid};
use dense_approx::{
    gen_partition, read_instance, run_bench, write_instance, BenchConfig, BenchProblem, Instance,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("dense-approx-demo");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("partition.json");

    let x = gen_partition(12, 500, 99)?;
    write_instance(&Instance::Partition(x.clone()), &path)?;
    match read_instance(&path)? {
        Instance::Partition(y) => println!("round trip intact: {}", x == y),
        other => println!("unexpected kind {}", other.kind()),
    }

    // wall time per accuracy on one fixed family of instances; the slope of
    // log(time) against log(1/eps) shows how the cost scales
    let cfg = BenchConfig {
        problem: BenchProblem::Partition,
        n: 256,
        grid: parse_eps_grid("2^-3..2^-5")?,
        trials: 2,
        seed: 5,
    };
    let rows = run_bench(&cfg)?;
    print!("{}", format_csv(&rows));
    println!("fitted slope: {:.3}", fitted_slope(&rows));
    Ok(())
}
