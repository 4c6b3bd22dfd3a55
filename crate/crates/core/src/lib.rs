//! Solvers, verifiers, and a brute-force oracle for relational contracts
//! that govern gradual knowledge transfer.
//!
//! A principal owns a long-lived production opportunity, an expert can
//! train a novice, and nothing is court-enforceable: payments and training
//! happen only because each side prefers the relationship's future to the
//! best one-shot deviation.  This crate computes the profit-maximizing
//! self-enforcing contracts of that relationship and checks them
//! independently.
//!
//! - [`env`] holds the stage-payoff primitives (principal, expert, novice,
//!   discounting) with monotonicity validation, plus closed-form
//!   microfounded families ([`micro`]).
//! - [`solver`] computes the infinite-horizon optimum: the knowledge
//!   target, the first-period gift, the break-even training recursion, the
//!   frontloaded payments, the surplus frontier, and the discounting
//!   thresholds between no-training and full-training regimes.
//! - [`retirement`] solves the finite-horizon variant in which the expert
//!   works a fixed number of periods and a catch-up cost is paid for any
//!   knowledge still missing at retirement.
//! - [`verifier`] re-derives every self-enforcement constraint from raw
//!   discounted flows — never from the solvers' recursions — and brackets
//!   infinite tails with certified intervals.
//! - [`oracle`] exhaustively enumerates grid-restricted contracts as an
//!   independent benchmark.
//!
//! The crate is deterministic: identical inputs produce identical outputs,
//! with no randomness and no global state.

pub mod config;
pub mod contract;
pub mod env;
pub mod error;
pub mod micro;
pub mod monotone;
mod numeric;
pub mod oracle;
pub mod retirement;
pub mod solver;
pub mod verifier;

pub use config::SolverConfig;
pub use contract::{ContractPath, FrontierPoint, OptimalContract};
pub use env::{
    make_apprenticeship_env, make_bertrand_env, make_cournot_env, make_polynomial_env,
    validate_assumption_one, PayoffEnv, ValidationReport, Violation,
};
pub use error::{Error, Result};
pub use monotone::{Direction, MonotoneFn};
pub use oracle::{enumerate_envelope, oracle_retirement, GridSpec, OracleBest};
pub use retirement::{
    cost_scaling_sweep, rbe_step, shoot, solve_retirement, CostSweepRow, RetirementContract,
    RetirementEnv, ShootOutcome,
};
pub use solver::{
    be_step, delta_thresholds, frontload_payments, generate_sequence, knowledge_gift,
    pareto_frontier, patience_limit_gift, smallest_maximizer, solve_optimal,
};
pub use verifier::{
    check_contract, check_retirement_contract, check_sic, simulate_deviation, ConstraintKind,
    IcReport, Interval, PeriodSlacks, Player, Verdict,
};
