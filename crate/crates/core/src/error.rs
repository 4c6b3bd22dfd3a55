//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by environment construction, the solvers, and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Discount factor outside the open unit interval.
    #[error("discount factor must lie strictly between 0 and 1, got {0}")]
    BadDelta(f64),

    /// A required monotonicity direction failed between two grid points.
    #[error("{constraint} violates its required direction between s={s_lo} and s={s_hi} (values {value_lo} and {value_hi})")]
    AssumptionViolated {
        constraint: String,
        s_lo: f64,
        s_hi: f64,
        value_lo: f64,
        value_hi: f64,
    },

    /// Construction parameters outside the admissible region.
    #[error("bad parameters: {0}")]
    BadParams(String),

    /// Inversion target outside the function's range on the unit interval.
    #[error("target {y} lies outside the invertible range [{min}, {max}]")]
    OutOfRange { y: f64, min: f64, max: f64 },

    /// The break-even recursion demands a stage payoff beyond full knowledge.
    #[error("break-even recursion is infeasible: required stage payoff {required} exceeds the maximum {max}")]
    NoSolution { required: f64, max: f64 },

    /// A finite-horizon step equation has no solution at or below full knowledge.
    #[error("step equation at t={t} has no root: deficit {deficit} at full knowledge")]
    NoRoot { t: usize, deficit: f64 },

    /// A payment frontier was requested for a contract with no knowledge transfer.
    #[error("contract is trivial: the payment frontier degenerates to a single point")]
    TrivialContract,

    /// No shooting root satisfies the terminal condition on the search grid.
    #[error("no terminal root found on the search grid")]
    NoContract,

    /// The enumeration budget was exceeded before the search started.
    #[error("enumeration would visit {count} sequences, exceeding the cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },

    /// Structural problem with a supplied contract (lengths, non-finite entries).
    #[error("malformed contract: {0}")]
    MalformedContract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
