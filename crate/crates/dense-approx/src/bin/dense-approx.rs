//! Command-line front end: solve instances from JSON files, generate random
//! fixtures, run timing sweeps to CSV, and run the verification suites.
//!
//! Exit codes: 0 success, 1 guarantee violation or suite failure, 2 parse or
//! usage error, 3 oracle budget exceeded under --oracle-check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, ToPrimitive, Zero};

use dense_approx::bench::{format_csv, parse_eps_grid, BenchConfig, BenchProblem};
use dense_approx::io::{self, Instance};
use dense_approx::oracle::{exact_knapsack, exact_subset_sums};
use dense_approx::verify::{run_suites, VerifyConfig};
use dense_approx::{
    solve_knapsack_with, solve_partition_with, BandAlgorithm, DenseConstants, Error,
    IntegerMultiset, KnapsackInstance, Ratio64,
};

const EXIT_GUARANTEE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "dense-approx", version, about = "Approximate partition and knapsack solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file and print one JSON result line
    Solve(SolveArgs),
    /// Generate a uniform random instance file
    Gen(GenArgs),
    /// Time a solver across an accuracy grid and write CSV
    Bench(BenchArgs),
    /// Run the verification suites and print a pass/fail table
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    Partition,
    Knapsack,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Auto,
    Dc,
    Dense,
}

#[derive(Args)]
struct SolveArgs {
    problem: Problem,
    #[arg(long)]
    input: PathBuf,
    /// Accuracy, decimal (0.05) or dyadic (2^-6)
    #[arg(long)]
    epsilon: String,
    /// Randomized-solver seed; the partition path is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also solve exactly, print opt and ratio, and enforce the guarantee
    #[arg(long)]
    oracle_check: bool,
    /// Band strategy for partition: dc forces interval merging, dense the
    /// divisor structure
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    algorithm: Algorithm,
}

#[derive(Args)]
struct GenArgs {
    problem: Problem,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 10_000)]
    max_value: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    problem: Problem,
    #[arg(long, default_value = "2^-6..2^-13")]
    eps_grid: String,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite: density, structural, merge, or exchange-cap
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the lambda calibration constant (decimal)
    #[arg(long)]
    c_lambda: Option<String>,
}

struct Fail {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Fail {
    Fail { code, msg: msg.into() }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::Parse(_) | Error::InvalidInput(_) => EXIT_PARSE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => 1,
        };
        fail(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Fail { code, msg }) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn parse_epsilon(s: &str) -> Result<Ratio64, Fail> {
    let grid = parse_eps_grid(s).map_err(Fail::from)?;
    match grid.as_slice() {
        [pt] => Ok(pt.value),
        _ => Err(fail(EXIT_PARSE, format!("--epsilon takes a single value, got grid '{s}'"))),
    }
}

fn solve_partition_cmd(a: &SolveArgs, x: &IntegerMultiset, eps: Ratio64) -> Result<u8, Fail> {
    let algorithm = match a.algorithm {
        Algorithm::Auto => BandAlgorithm::Auto,
        Algorithm::Dc => BandAlgorithm::Interval,
        Algorithm::Dense => BandAlgorithm::Dense,
    };
    let sol = solve_partition_with(x, eps, algorithm)?;
    if !a.oracle_check {
        println!("{}", serde_json::json!({ "sol": sol }));
        return Ok(0);
    }
    let sums = exact_subset_sums(x, None)?;
    let half = (x.sum() / 2) as u64;
    let opt = *sums.iter().take_while(|&&s| s <= half).last().unwrap_or(&0);
    let ratio = if opt == 0 { 1.0 } else { sol as f64 / opt as f64 };
    println!("{}", serde_json::json!({ "sol": sol, "opt": opt, "ratio": ratio }));
    let lower_ok =
        (eps.den() - eps.num()) as u128 * opt as u128 <= eps.den() as u128 * sol as u128;
    Ok(if sol <= opt && lower_ok { 0 } else { EXIT_GUARANTEE })
}

fn solve_knapsack_cmd(a: &SolveArgs, k: &KnapsackInstance, eps: Ratio64) -> Result<u8, Fail> {
    if a.algorithm != Algorithm::Auto {
        return Err(fail(EXIT_PARSE, "--algorithm selects partition band strategies only"));
    }
    let sol = solve_knapsack_with(k, eps, a.seed, 20)?;
    let sol_f = sol.to_f64().unwrap_or(f64::NAN);
    if !a.oracle_check {
        println!("{}", serde_json::json!({ "sol": sol_f }));
        return Ok(0);
    }
    let units = exact_knapsack(k)?.eval(k.capacity());
    let opt = BigRational::new(BigInt::from(units), BigInt::from(k.profit_den()));
    let ratio = if opt.is_zero() {
        1.0
    } else {
        (&sol / &opt).to_f64().unwrap_or(f64::NAN)
    };
    println!(
        "{}",
        serde_json::json!({ "sol": sol_f, "opt": opt.to_f64().unwrap_or(f64::NAN), "ratio": ratio })
    );
    let lower_ok = &sol * BigInt::from(eps.den()) >= &opt * BigInt::from(eps.den() - eps.num());
    Ok(if sol <= opt && lower_ok { 0 } else { EXIT_GUARANTEE })
}

fn cmd_solve(a: SolveArgs) -> Result<u8, Fail> {
    let eps = parse_epsilon(&a.epsilon)?;
    let inst = io::read_instance(&a.input)?;
    match (a.problem, inst) {
        (Problem::Partition, Instance::Partition(x)) => solve_partition_cmd(&a, &x, eps),
        (Problem::Knapsack, Instance::Knapsack(k)) => solve_knapsack_cmd(&a, &k, eps),
        (_, other) => Err(fail(
            EXIT_PARSE,
            format!("input file holds a {} instance", other.kind()),
        )),
    }
}

fn cmd_gen(a: GenArgs) -> Result<u8, Fail> {
    let inst = match a.problem {
        Problem::Partition => Instance::Partition(io::gen_partition(a.n, a.max_value, a.seed)?),
        Problem::Knapsack => Instance::Knapsack(io::gen_knapsack(a.n, a.max_value, a.seed)?),
    };
    io::write_instance(&inst, &a.out)?;
    Ok(0)
}

fn cmd_bench(a: BenchArgs) -> Result<u8, Fail> {
    let cfg = BenchConfig {
        problem: match a.problem {
            Problem::Partition => BenchProblem::Partition,
            Problem::Knapsack => BenchProblem::Knapsack,
        },
        n: a.n,
        grid: parse_eps_grid(&a.eps_grid)?,
        trials: a.trials,
        seed: a.seed,
    };
    let rows = dense_approx::run_bench(&cfg)?;
    std::fs::write(&a.out, format_csv(&rows))
        .map_err(|e| fail(1, format!("{}: {e}", a.out.display())))?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Fail> {
    let constants = match &a.c_lambda {
        None => DenseConstants::empirical(),
        Some(s) => {
            let lam = Ratio64::parse_decimal(s)?;
            let emp = DenseConstants::empirical();
            DenseConstants::with_values(emp.cdelta(), emp.calpha(), lam)?
        }
    };
    let cfg = VerifyConfig { seed: a.seed, constants, ..VerifyConfig::default() };
    let reports = run_suites(&cfg, a.suite.as_deref())?;
    println!("{:<14}{:>7}{:>10}{:>9}  {:<8}detail", "suite", "cases", "failures", "allowed", "result");
    let mut all_ok = true;
    for r in &reports {
        let result = if r.passed() { "pass" } else { "FAIL" };
        all_ok &= r.passed();
        println!(
            "{:<14}{:>7}{:>10}{:>9}  {:<8}{}",
            r.name, r.cases, r.failures, r.allowed, result, r.detail
        );
    }
    Ok(if all_ok { 0 } else { EXIT_GUARANTEE })
}
