//! Configuration-driven command-line surface for the contract toolkit.
//!
//! Seven subcommands share one JSON run-configuration format: `solve`,
//! `retire`, `pareto`, `sweep-delta`, `sweep-cost`, `verify`, and `oracle`.
//! Each writes CSV artifacts plus a JSON summary (also echoed to standard
//! output).  Failures exit nonzero and print a machine-readable error
//! record to standard error: 1 for configuration problems, 2 for payoff
//! functions that break the maintained monotonicity assumptions, 3 when no
//! feasible or implementable contract exists, 4 when an enumeration budget
//! is exceeded.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::CommandName;

/// Failure record carrying the exit code, a coarse class, and a message.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Failure {
    /// Process exit code: 1 configuration, 2 assumption, 3 infeasible, 4 cap.
    pub code: u8,
    /// Coarse class matching the exit code.
    pub kind: &'static str,
    /// Human-readable description.
    pub message: String,
    /// Structured payload; verification failures carry the offending
    /// constraint and period here.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Failure {
    /// A configuration-class failure (exit code 1).
    pub fn config(message: String) -> Self {
        Failure { code: 1, kind: "config", message, detail: None }
    }

    /// Map a library error onto an exit class.
    pub fn from_core(err: gradual_core::Error) -> Self {
        use gradual_core::Error;
        let (code, kind) = match &err {
            Error::BadDelta(_) | Error::AssumptionViolated { .. } => (2, "assumption"),
            Error::BadParams(_) | Error::MalformedContract(_) => (1, "config"),
            Error::CapExceeded { .. } => (4, "cap"),
            Error::OutOfRange { .. }
            | Error::NoSolution { .. }
            | Error::NoRoot { .. }
            | Error::TrivialContract
            | Error::NoContract => (3, "infeasible"),
        };
        Failure { code, kind, message: err.to_string(), detail: None }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output path prefix; overrides the configuration's `output.prefix`.
    #[arg(long)]
    out: Option<String>,
    /// Override the dense-scan resolution.
    #[arg(long)]
    scan_points: Option<usize>,
    /// Override the longest stored knowledge prefix.
    #[arg(long)]
    max_periods: Option<usize>,
    /// Override the command's primary tolerance: slack tolerance for
    /// `verify`, threshold bisection width for `sweep-delta`, root residual
    /// for the solvers.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "gradual",
    version,
    about = "Solve, sweep, verify, and brute-force check contracts for gradual knowledge transfer"
)]
struct Cli {
    #[command(subcommand)]
    invocation: Invocation,
}

#[derive(Debug, Subcommand)]
enum Invocation {
    /// Solve the infinite-horizon principal-optimal contract.
    Solve(RunArgs),
    /// Solve the finite-horizon contract that ends in retirement.
    Retire(RunArgs),
    /// Trace the welfare frontier indexed by the time-zero payment.
    Pareto(RunArgs),
    /// Re-solve across a list of discount factors and report thresholds.
    SweepDelta(RunArgs),
    /// Re-solve the retirement problem across catch-up cost scales.
    SweepCost(RunArgs),
    /// Check a stored or inline contract against every constraint.
    Verify(RunArgs),
    /// Enumerate a small grid as an independent cross-check.
    Oracle(RunArgs),
}

impl Invocation {
    fn unpack(self) -> (CommandName, RunArgs) {
        match self {
            Invocation::Solve(a) => (CommandName::Solve, a),
            Invocation::Retire(a) => (CommandName::Retire, a),
            Invocation::Pareto(a) => (CommandName::Pareto, a),
            Invocation::SweepDelta(a) => (CommandName::SweepDelta, a),
            Invocation::SweepCost(a) => (CommandName::SweepCost, a),
            Invocation::Verify(a) => (CommandName::Verify, a),
            Invocation::Oracle(a) => (CommandName::Oracle, a),
        }
    }
}

fn execute(name: CommandName, args: &RunArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        Failure::config(format!("cannot read configuration {}: {e}", args.config.display()))
    })?;
    let spec = config::parse_config(&text)?;
    if spec.command != name {
        return Err(Failure::config(format!(
            "configuration declares command \"{}\" but \"{}\" was invoked",
            spec.command.label(),
            name.label()
        )));
    }
    commands::run(
        &spec,
        &commands::Overrides {
            out: args.out.clone(),
            scan_points: args.scan_points,
            max_periods: args.max_periods,
            tol: args.tol,
        },
    )
}

fn main() -> ExitCode {
    let (name, args) = Cli::parse().invocation.unpack();
    match execute(name, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let record = serde_json::json!({ "error": failure });
            eprintln!("{}", serde_json::to_string(&record).expect("failure records serialize"));
            ExitCode::from(failure.code)
        }
    }
}
