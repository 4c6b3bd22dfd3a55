//! Brute-force enumeration benchmarks for the solvers.
//!
//! Both oracles restrict knowledge levels to an equally spaced grid and
//! exhaustively enumerate nondecreasing sequences, checking the
//! self-enforcement constraints directly from discounted payoff sums.
//! They share no code with the break-even recursions, so agreement with
//! the solvers is evidence, not tautology.  Enumeration counts are checked
//! against a hard cap before any work starts.

use crate::config::SolverConfig;
use crate::env::PayoffEnv;
use crate::error::{Error, Result};
use crate::numeric::{geometric, grid_point};
use crate::retirement::RetirementEnv;

/// Feasibility tolerance on enumerated constraint slacks: a sequence whose
/// slack dips below this is discarded.  Slightly loose so that profiles
/// binding with equality survive floating-point noise.
const SLACK_TOL: f64 = 1e-10;

/// An equally spaced knowledge grid and a sequence length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    /// Number of grid points on the unit interval (at least 2).
    pub m: usize,
    /// Number of enumerated periods after period zero (at least 1).
    pub horizon: usize,
}

impl GridSpec {
    pub fn new(m: usize, horizon: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadParams(format!(
                "knowledge grid needs at least 2 points, got {m}"
            )));
        }
        if horizon == 0 {
            return Err(Error::BadParams(
                "enumeration horizon must be at least 1".into(),
            ));
        }
        Ok(GridSpec { m, horizon })
    }
}

/// Number of nondecreasing sequences of length `len` over `levels` values:
/// the binomial coefficient `C(levels + len - 1, len)`.  `None` on
/// overflow, which certainly exceeds any practical cap.
fn sequence_count(levels: usize, len: usize) -> Option<u128> {
    let n = (levels + len - 1) as u128;
    let k = len as u128;
    let mut count: u128 = 1;
    for i in 1..=k {
        count = count.checked_mul(n - k + i)? / i;
    }
    Some(count)
}

/// Grid levels available to a sequence that starts at `s0`.
fn admissible_levels(m: usize, s0: f64) -> Vec<f64> {
    (0..m)
        .map(|i| grid_point(0.0, 1.0, i, m))
        .filter(|&x| x >= s0 - 1e-12)
        .collect()
}

/// Guard the enumeration budget, translating overflow into a cap breach.
fn check_cap(levels: usize, len: usize, cap: u64) -> Result<u128> {
    match sequence_count(levels, len) {
        Some(count) if count <= u128::from(cap) => Ok(count),
        Some(count) => Err(Error::CapExceeded { count, cap }),
        None => Err(Error::CapExceeded {
            count: u128::MAX,
            cap,
        }),
    }
}

/// Visit every nondecreasing sequence of length `len` over `levels`,
/// calling `visit` with each completed sequence.
fn for_each_sequence(levels: &[f64], len: usize, visit: &mut impl FnMut(&[f64])) {
    fn rec(levels: &[f64], len: usize, seq: &mut Vec<f64>, start: usize, visit: &mut impl FnMut(&[f64])) {
        if seq.len() == len {
            visit(seq);
            return;
        }
        for i in start..levels.len() {
            seq.push(levels[i]);
            rec(levels, len, seq, i, visit);
            seq.pop();
        }
    }
    rec(levels, len, &mut Vec::with_capacity(len), 0, visit);
}

/// Pointwise-maximal self-enforcing knowledge sequence on a grid, under
/// the convention that the path holds still after the enumerated horizon.
///
/// A grid sequence `s_0 <= s_1 <= ... <= s_T` (with `s_0` fixed at the
/// starting level) is kept when, at every period `t >= 1`, the discounted
/// continuation surplus — the enumerated stretch plus a stationary tail at
/// `s_T` — covers the principal's payoff from freezing at `s_t` plus the
/// expert's from coasting at `s_{t-1}`.  The returned vector is the
/// pointwise maximum of all kept sequences, length `T + 1`.
///
/// The stationary-tail convention makes this benchmark collapse: at the
/// final enumerated period the constraint reduces to
/// `w(s_T) >= w(s_{T-1})`, which under a strictly decreasing `w` forces
/// `s_T = s_{T-1}`, and the same argument then unravels every earlier
/// step.  Only the constant sequence survives, for any environment: a
/// relationship that permanently stops improving cannot cover the
/// compensation owed for its last training step.  The benchmark is kept
/// precisely because it certifies this — truncating a gradual-transfer
/// path and holding it still is never self-enforcing, so the envelope is a
/// floor (trivially respected by the solver) rather than a rival optimum.
pub fn enumerate_envelope(
    env: &PayoffEnv,
    grid: &GridSpec,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    let levels = admissible_levels(grid.m, cfg.s0);
    if levels.is_empty() {
        return Err(Error::BadParams(format!(
            "no grid level lies at or above the starting knowledge {}",
            cfg.s0
        )));
    }
    let t_end = grid.horizon;
    check_cap(levels.len(), t_end, cfg.enum_cap)?;
    let delta = env.delta();
    let cap_factor = 1.0 / (1.0 - delta);
    let mut envelope = vec![cfg.s0; t_end + 1];
    let mut full = Vec::with_capacity(t_end + 1);
    for_each_sequence(&levels, t_end, &mut |tail: &[f64]| {
        full.clear();
        full.push(cfg.s0);
        full.extend_from_slice(tail);
        let s_last = full[t_end];
        for t in 1..=t_end {
            let mut surplus = 0.0;
            for (tau, &s) in full.iter().enumerate().skip(t) {
                surplus += delta.powi((tau - t) as i32) * env.g(s);
            }
            surplus += delta.powi((t_end + 1 - t) as i32) * env.g(s_last) * cap_factor;
            let outside = (env.pi(full[t]) + env.w(full[t - 1])) * cap_factor;
            if surplus - outside < -SLACK_TOL {
                return;
            }
        }
        for (slot, &s) in envelope.iter_mut().zip(full.iter()) {
            if s > *slot {
                *slot = s;
            }
        }
    });
    Ok(envelope)
}

/// Best feasible grid sequence found by the retirement oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleBest {
    /// Principal's time-0 profit of the best sequence.
    pub profit: f64,
    /// The full knowledge path `s_0..s_K`.
    pub sequence: Vec<f64>,
}

/// Exhaustive search for the most profitable finite-horizon contract on a
/// grid.
///
/// For each nondecreasing grid sequence `s_1 <= ... <= s_K` the payments
/// are pinned to the frontloaded form (each transfer is paid for over the
/// remaining working periods), the principal's walk-away constraints are
/// checked at every working period and the expert's at every period with a
/// working future, and the discounted profit — net of the catch-up cost at
/// the reached terminal level — is compared against the incumbent.  Ties
/// keep the lexicographically smallest sequence.
pub fn oracle_retirement(
    env_r: &RetirementEnv,
    grid: &GridSpec,
    cfg: &SolverConfig,
) -> Result<OracleBest> {
    let k = env_r.horizon();
    if grid.horizon != k {
        return Err(Error::BadParams(format!(
            "oracle horizon {} must match the {k}-period working phase",
            grid.horizon
        )));
    }
    let levels = admissible_levels(grid.m, cfg.s0);
    if levels.is_empty() {
        return Err(Error::BadParams(format!(
            "no grid level lies at or above the starting knowledge {}",
            cfg.s0
        )));
    }
    check_cap(levels.len(), k, cfg.enum_cap)?;
    let base = env_r.base();
    let delta = base.delta();
    let mut best: Option<OracleBest> = None;
    let mut s = Vec::with_capacity(k + 1);
    let mut p = vec![0.0; k];
    for_each_sequence(&levels, k, &mut |tail: &[f64]| {
        s.clear();
        s.push(cfg.s0);
        s.extend_from_slice(tail);
        p[0] = 0.0;
        for t in 1..k {
            p[t] = geometric(delta, k - t) * (base.w(s[t - 1]) - base.w(s[t]));
        }
        let terminal_cost = env_r.cost(s[k]);
        // Walk-away check for the principal at every working period.
        let mut prof_suffix = 0.0;
        let mut feasible = true;
        for t in (0..k).rev() {
            prof_suffix = base.pi(s[t]) - p[t] + delta * prof_suffix;
            let settle = delta.powi((k - 1 - t) as i32);
            let honoring = prof_suffix - settle * terminal_cost;
            let walk_away = geometric(delta, k - t) * base.pi(s[t]) - settle * env_r.cost(s[t]);
            if honoring - walk_away < -SLACK_TOL {
                feasible = false;
                break;
            }
        }
        if !feasible {
            return;
        }
        // Coasting check for the expert at every period with a working future.
        let mut wage_suffix = 0.0;
        for t in (0..k - 1).rev() {
            wage_suffix = base.w(s[t + 1]) + p[t + 1] + delta * wage_suffix;
            if wage_suffix - geometric(delta, k - t - 1) * base.w(s[t]) < -SLACK_TOL {
                feasible = false;
                break;
            }
        }
        if !feasible {
            return;
        }
        let mut profit = 0.0;
        for t in (0..k).rev() {
            profit = base.pi(s[t]) - p[t] + delta * profit;
        }
        profit -= delta.powi((k - 1) as i32) * terminal_cost;
        if best.as_ref().is_none_or(|b| profit > b.profit) {
            best = Some(OracleBest {
                profit,
                sequence: s.clone(),
            });
        }
    });
    best.ok_or(Error::NoContract)
}
