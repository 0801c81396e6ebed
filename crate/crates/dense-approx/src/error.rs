use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (nonpositive value, eps outside
    /// (0, 1/2), threshold above sigma, and similar precondition failures).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exact oracle would need more work than the configured budget.
    #[error("oracle budget exceeded: need {needed} cells, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    /// Dense convolution would need a transform longer than supported.
    #[error("transform size {len} exceeds maximum {max}")]
    TransformTooLarge { len: usize, max: usize },

    /// No divisor in the search range satisfies the structural properties.
    #[error("no valid divisor in [1, {limit}]")]
    NoValidDivisor { limit: u64 },

    /// The structural interval is empty for the given constants.
    #[error("structural interval is empty: lambda {lambda} exceeds half the total {half_sigma}")]
    EmptyInterval { lambda: u64, half_sigma: u64 },

    /// A range query or sweep start lies outside the certified range.
    #[error("query out of certified range: {0}")]
    QueryOutOfRange(String),

    /// Instance or flag parsing failed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
