//! Solver for the finite-horizon contract with expert retirement.
//!
//! The expert works for `K` periods and then retires; at the end of the
//! relationship the principal pays a catch-up cost `C(s_K)` to qualify the
//! partially trained novice, so full training (`s_K = 1`) is worth paying
//! for.  The optimal knowledge path is the solution of a two-point boundary
//! problem: a per-period break-even recursion (the finite-horizon analogue of
//! the infinite-horizon one, with horizon-weighted benefit terms and a
//! catch-up-cost savings term) shot forward from a candidate first transfer
//! `s1`, and a terminal condition `s_K = 1`.  The solver scans `s1`, collects
//! every terminal root, and keeps the largest.

use crate::config::SolverConfig;
use crate::env::{PayoffEnv, DEFAULT_VALIDATION_POINTS, EPS_MONO};
use crate::error::{Error, Result};
use crate::monotone::MonotoneFn;
use crate::numeric::{geometric, grid_point};

/// Terminal gap below which a grid point counts as an exact root.
const GAP_ZERO: f64 = 1e-9;

/// Terminal gap below which the feasibility frontier counts as a root.
const GAP_ACCEPT: f64 = 1e-8;

/// Distance under which two terminal roots are merged into one.
const ROOT_MERGE: f64 = 1e-7;

/// A stage-payoff environment extended with a retirement horizon and a
/// catch-up cost.
///
/// The cost function must be weakly decreasing with `C(1) = 0`: a fully
/// trained novice needs no catching up.  A constant-zero cost is accepted
/// (it models the no-cost benchmark, where training unravels entirely).
#[derive(Debug, Clone)]
pub struct RetirementEnv {
    base: PayoffEnv,
    horizon: usize,
    cost: MonotoneFn,
    cost_scale: f64,
}

impl RetirementEnv {
    /// Build and validate a retirement environment.
    ///
    /// Fails with [`Error::BadParams`] when the horizon is below two periods
    /// or `C(1)` is not zero (within `1e-12`), and with
    /// [`Error::AssumptionViolated`] when the cost increases somewhere on the
    /// validation grid.
    pub fn new(base: PayoffEnv, horizon: usize, cost: MonotoneFn) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::BadParams(format!(
                "retirement horizon must be at least 2 periods, got {horizon}"
            )));
        }
        let terminal = cost.eval(1.0);
        if terminal.abs() > 1e-12 {
            return Err(Error::BadParams(format!(
                "catch-up cost must vanish at full knowledge, got C(1) = {terminal}"
            )));
        }
        let n = DEFAULT_VALIDATION_POINTS;
        for i in 1..n {
            let x_lo = grid_point(0.0, 1.0, i - 1, n);
            let x_hi = grid_point(0.0, 1.0, i, n);
            let c_lo = cost.eval(x_lo);
            let c_hi = cost.eval(x_hi);
            if c_hi > c_lo + EPS_MONO {
                return Err(Error::AssumptionViolated {
                    constraint: "C".into(),
                    s_lo: x_lo,
                    s_hi: x_hi,
                    value_lo: c_lo,
                    value_hi: c_hi,
                });
            }
        }
        Ok(Self {
            base,
            horizon,
            cost,
            cost_scale: 1.0,
        })
    }

    /// The underlying infinite-horizon payoff environment.
    pub fn base(&self) -> &PayoffEnv {
        &self.base
    }

    /// Expert-phase length `K` in periods.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Catch-up cost at knowledge level `s`, including the current scale.
    pub fn cost(&self, s: f64) -> f64 {
        self.cost_scale * self.cost.eval(s)
    }

    /// Current multiplicative scale on the cost function.
    pub fn cost_scale(&self) -> f64 {
        self.cost_scale
    }

    /// A copy of this environment with the catch-up cost multiplied by
    /// `lambda` (on top of any existing scale).  Scaling preserves weak
    /// decrease and the zero terminal value, so no revalidation is needed.
    pub fn with_cost_scale(&self, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::BadParams(format!(
                "cost scale must be a positive finite number, got {lambda}"
            )));
        }
        let mut out = self.clone();
        out.cost_scale = self.cost_scale * lambda;
        Ok(out)
    }
}

/// The solved finite-horizon contract.
#[derive(Debug, Clone, PartialEq)]
pub struct RetirementContract {
    /// Knowledge levels `s_0..s_K` (length `K+1`); `s[K] = 1`.
    pub s: Vec<f64>,
    /// Payments `p_0..p_{K-1}` (length `K`); `p[0] = 0`.  No payment is made
    /// in the retirement period itself.
    pub p: Vec<f64>,
    /// Principal's time-0 profit.
    pub pi0_r: f64,
    /// Every first-transfer root found by the terminal-condition scan,
    /// ascending; the contract is built from the largest.
    pub s1_roots: Vec<f64>,
}

/// One row of a cost-scaling sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSweepRow {
    /// Multiplier applied to the catch-up cost.
    pub lambda: f64,
    /// Optimal first transfer under the scaled cost.
    pub s1_star: f64,
    /// Last pre-retirement knowledge level `s_{K-1}` under the scaled cost.
    pub s_last: f64,
    /// Principal's time-0 profit under the scaled cost.
    pub pi0_r: f64,
}

/// One step of the finite-horizon break-even recursion at period `t`
/// (`1 <= t <= K-1`): the next level solves
///
/// ```text
/// (delta - delta^(K-t))/(1 - delta) * [pi(s_next) - pi(s_curr)]
///   + delta^(K-1-t) * [C(s_curr) - C(s_next)]
///   = (1 - delta^(K-t))/(1 - delta) * [w(s_prev) - w(s_curr)]
/// ```
///
/// The left side collects the principal's remaining-horizon benefit from the
/// extra knowledge plus the catch-up cost saved at retirement; the right side
/// is the compensation owed for last period's transfer.  The left side is
/// nondecreasing in `s_next`, so the root is found by bisection to residual
/// `cfg.eps_root`.  Fails with [`Error::NoRoot`] when even `s_next = 1`
/// falls short of the required compensation.
pub fn rbe_step(
    env_r: &RetirementEnv,
    s_prev: f64,
    s_curr: f64,
    t: usize,
    cfg: &SolverConfig,
) -> Result<f64> {
    let k = env_r.horizon();
    if t < 1 || t > k - 1 {
        return Err(Error::BadParams(format!(
            "recursion period {t} outside 1..={}",
            k - 1
        )));
    }
    let base = env_r.base();
    let delta = base.delta();
    let remaining = geometric(delta, k - t);
    let a = delta * geometric(delta, k - t - 1);
    let b = delta.powi((k - 1 - t) as i32);
    let rhs = remaining * (base.w(s_prev) - base.w(s_curr));
    if rhs <= 1e-12 {
        return Ok(s_curr);
    }
    let lhs = |s: f64| a * (base.pi(s) - base.pi(s_curr)) + b * (env_r.cost(s_curr) - env_r.cost(s));
    let top = lhs(1.0);
    if top < rhs - 1e-12 {
        return Err(Error::NoRoot {
            t,
            deficit: rhs - top,
        });
    }
    let (mut lo, mut hi) = (s_curr, 1.0);
    let mut mid = hi;
    for _ in 0..cfg.bisect_max_iter {
        mid = 0.5 * (lo + hi);
        let residual = lhs(mid) - rhs;
        if residual.abs() <= cfg.eps_root {
            break;
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid.max(s_curr))
}

/// Outcome of shooting the recursion forward from a candidate first
/// transfer.
#[derive(Debug, Clone, PartialEq)]
pub enum ShootOutcome {
    /// The recursion reached period `K`; `terminal_gap = 1 - s_K`.
    Feasible {
        sequence: Vec<f64>,
        terminal_gap: f64,
    },
    /// The recursion demanded more knowledge than exists at period `t`;
    /// `deficit` is how far the required compensation exceeds what full
    /// knowledge can deliver.
    Infeasible { t: usize, deficit: f64 },
}

/// Run the finite-horizon recursion from `(s0, s1)` through period `K`.
pub fn shoot(env_r: &RetirementEnv, s1: f64, cfg: &SolverConfig) -> ShootOutcome {
    let k = env_r.horizon();
    let s1 = s1.clamp(cfg.s0, 1.0);
    let mut s = Vec::with_capacity(k + 1);
    s.push(cfg.s0);
    s.push(s1);
    for t in 1..k {
        match rbe_step(env_r, s[t - 1], s[t], t, cfg) {
            Ok(next) => s.push(next),
            Err(Error::NoRoot { t, deficit }) => return ShootOutcome::Infeasible { t, deficit },
            Err(_) => unreachable!("rbe_step only fails with NoRoot for in-range periods"),
        }
    }
    let gap = 1.0 - s[k];
    ShootOutcome::Feasible {
        sequence: s,
        terminal_gap: gap,
    }
}

/// Terminal gap of a shoot, or `None` when the shoot is infeasible.
fn gap_of(env_r: &RetirementEnv, s1: f64, cfg: &SolverConfig) -> Option<f64> {
    match shoot(env_r, s1, cfg) {
        ShootOutcome::Feasible { terminal_gap, .. } => Some(terminal_gap),
        ShootOutcome::Infeasible { .. } => None,
    }
}

/// Refine the boundary between a feasible and an infeasible shoot; returns
/// the last feasible point found.
fn refine_frontier(env_r: &RetirementEnv, feas: f64, infeas: f64, cfg: &SolverConfig) -> f64 {
    let (mut lo, mut hi) = (feas, infeas);
    for _ in 0..cfg.bisect_max_iter {
        if (hi - lo).abs() <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if gap_of(env_r, mid, cfg).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Solve for the profit-maximizing retirement contract.
///
/// Scans the first transfer over `cfg.shoot_points` grid points on
/// `[s0, 1]`, collecting every root of the terminal condition `s_K = 1`:
/// grid points whose gap is already below `1e-9`, sign changes of the gap,
/// and feasibility-frontier points whose limiting gap is below `1e-8`
/// (the recursion caps each step at full knowledge, so overshooting
/// manifests as infeasibility rather than a negative gap).  Nearby roots are
/// merged; the largest survives as the optimal first transfer, the
/// recursion is re-run, the terminal level is stamped to exactly one, and
/// the frontloaded payments and the profit identity are attached.
pub fn solve_retirement(env_r: &RetirementEnv, cfg: &SolverConfig) -> Result<RetirementContract> {
    let k = env_r.horizon();
    let base = env_r.base();
    let delta = base.delta();
    let n = cfg.shoot_points.max(3);
    let lo = cfg.s0;
    if lo >= 1.0 {
        return Err(Error::BadParams(
            "retirement needs initial knowledge strictly below one".into(),
        ));
    }
    let gaps: Vec<Option<f64>> = (0..n)
        .map(|i| gap_of(env_r, grid_point(lo, 1.0, i, n), cfg))
        .collect();
    let mut roots: Vec<f64> = Vec::new();
    for (i, gap) in gaps.iter().enumerate() {
        if let Some(g) = gap {
            if g.abs() <= GAP_ZERO {
                roots.push(grid_point(lo, 1.0, i, n));
            }
        }
    }
    for i in 0..n - 1 {
        let x_l = grid_point(lo, 1.0, i, n);
        let x_r = grid_point(lo, 1.0, i + 1, n);
        match (gaps[i], gaps[i + 1]) {
            (Some(gl), Some(gr)) => {
                // A genuine sign change (defensive: steps are capped at full
                // knowledge, so negative gaps should not arise).
                if (gl > GAP_ZERO && gr < -GAP_ZERO) || (gl < -GAP_ZERO && gr > GAP_ZERO) {
                    let f = |x: f64| gap_of(env_r, x, cfg).unwrap_or(-1.0);
                    roots.push(crate::numeric::bisect_root(&f, x_l, x_r, 0.0, cfg.bisect_max_iter));
                }
            }
            (Some(gl), None) if gl > GAP_ZERO => {
                let frontier = refine_frontier(env_r, x_l, x_r, cfg);
                if let Some(g) = gap_of(env_r, frontier, cfg) {
                    if g.abs() <= GAP_ACCEPT {
                        roots.push(frontier);
                    }
                }
            }
            (None, Some(gr)) if gr > GAP_ZERO => {
                let frontier = refine_frontier(env_r, x_r, x_l, cfg);
                if let Some(g) = gap_of(env_r, frontier, cfg) {
                    if g.abs() <= GAP_ACCEPT {
                        roots.push(frontier);
                    }
                }
            }
            _ => {}
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    let mut merged: Vec<f64> = Vec::new();
    for r in roots {
        match merged.last_mut() {
            Some(last) if r - *last <= ROOT_MERGE => *last = r,
            _ => merged.push(r),
        }
    }
    let Some(&s1_star) = merged.last() else {
        return Err(Error::NoContract);
    };
    let ShootOutcome::Feasible { mut sequence, .. } = shoot(env_r, s1_star, cfg) else {
        return Err(Error::NoContract);
    };
    sequence[k] = 1.0;
    let mut p = vec![0.0; k];
    for t in 1..k {
        let weight = geometric(delta, k - t);
        p[t] = (weight * (base.w(sequence[t - 1]) - base.w(sequence[t]))).max(0.0);
    }
    let pi0_r = base.pi(cfg.s0) + delta * geometric(delta, k - 1) * base.pi(s1_star)
        - delta.powi((k - 1) as i32) * env_r.cost(s1_star);
    Ok(RetirementContract {
        s: sequence,
        p,
        pi0_r,
        s1_roots: merged,
    })
}

/// Re-solve the contract with the catch-up cost multiplied by each `lambda`
/// in turn.  The multipliers must be positive, finite, and strictly
/// ascending.
pub fn cost_scaling_sweep(
    env_r: &RetirementEnv,
    lambdas: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<CostSweepRow>> {
    if lambdas.is_empty() {
        return Err(Error::BadParams("cost sweep needs at least one multiplier".into()));
    }
    if lambdas.windows(2).any(|pair| !(pair[1] > pair[0])) {
        return Err(Error::BadParams(
            "cost-sweep multipliers must be strictly ascending".into(),
        ));
    }
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let scaled = env_r.with_cost_scale(lambda)?;
        let contract = solve_retirement(&scaled, cfg)?;
        rows.push(CostSweepRow {
            lambda,
            s1_star: contract.s[1],
            s_last: contract.s[scaled.horizon() - 1],
            pi0_r: contract.pi0_r,
        });
    }
    Ok(rows)
}
