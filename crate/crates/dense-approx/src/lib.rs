//! Approximation algorithms for partition and knapsack built on a dense
//! subset-sum structure theory.
//!
//! The two entry points are [`partition::solve_partition`] and
//! [`knapsack::solve_knapsack`]. Everything else is the machinery they
//! stand on: exact sparse/NTT sumsets, SMAWK-based merging of uniform
//! profit functions, one-sided approximate subset-sum merging, and the
//! density analysis that lets large instances skip convolution entirely.

pub mod bench;
pub mod convolution;
pub mod error;
pub mod instance;
pub mod io;
pub mod knapsack;
pub mod multiset;
pub mod oracle;
pub mod partition;
pub mod ratio;
pub mod dense;
pub mod stepfn;
pub mod sumset_approx;
pub mod verify;

mod util;

pub use bench::{run_bench, BenchConfig, BenchProblem, BenchRow};
pub use error::{Error, Result};
pub use instance::{KnapsackInstance, KnapsackItem};
pub use io::{gen_knapsack, gen_partition, read_instance, write_instance, Instance};
pub use knapsack::{
    approx_up_to_b, diversity_index, few_profits_solver, greedy_exchange_solve, greedy_profit,
    random_partition_core, reduce_knapsack, solve_knapsack, solve_knapsack_with, GreedyParams,
    KnapsackReduction, ProfitBand, RandomPartitionParams, ReducedKnapsack,
};
pub use multiset::IntegerMultiset;
pub use partition::{
    extract_answer, greedy_small_opt, reduce_multiplicity, solve_band, solve_band_with,
    solve_partition, solve_partition_with, BandAlgorithm,
};
pub use ratio::Ratio64;
pub use dense::{DenseConstants, DenseDecomposition};
pub use stepfn::StepFunction;
pub use sumset_approx::{ApproxQuality, ApproxSet};
pub use verify::{run_suites, SuiteReport, VerifyConfig};
