//! Incentive-compatibility verification from raw discounted payoff flows.
//!
//! The verifier recomputes every participation constraint directly from a
//! candidate contract's knowledge and payment sequences.  It deliberately
//! shares no code with the solvers' break-even recursions, so a solver
//! defect surfaces here as a violated constraint instead of being
//! reproduced.
//!
//! An infinite-horizon contract is stored as a finite prefix plus a limit,
//! so continuation values beyond the prefix are not known exactly.  They
//! are, however, tightly bracketed: tail knowledge lies between the last
//! stored level and the limit, and tail payments (under limited liability
//! and the expert's participation constraints) total at most the
//! frontloading budget `(w(s_T) - w(s_limit)) / (1 - delta)`.  Every
//! constraint is therefore reported as a slack *interval* certain to
//! contain the true slack: a constraint is violated only when its whole
//! interval sits below zero, and indeterminate when the interval straddles
//! the tolerance.  Finite-horizon retirement contracts need no brackets;
//! their slacks are exact points.

use crate::contract::ContractPath;
use crate::env::PayoffEnv;
use crate::error::{Error, Result};
use crate::numeric::geometric;
use crate::retirement::{RetirementContract, RetirementEnv};

/// A closed interval certain to contain a continuation value or a slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// An interval collapsed to one exactly known value.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    fn shift(self, x: f64) -> Self {
        Interval {
            lo: self.lo + x,
            hi: self.hi + x,
        }
    }

    /// Scale by a nonnegative factor.
    fn scale(self, c: f64) -> Self {
        Interval {
            lo: c * self.lo,
            hi: c * self.hi,
        }
    }
}

/// The two long-lived parties whose self-enforcement constraints are
/// checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Principal,
    Expert,
}

/// Which requirement a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// The principal prefers honoring payments to firing the novice.
    PrincipalIc,
    /// The expert prefers training to coasting at the current level.
    ExpertIc,
    /// Continuation surplus covers both parties' outside options; a
    /// payment-free restatement of the principal's constraint when the
    /// expert's binds.
    SurplusIc,
    /// Knowledge never decreases.
    Monotonicity,
    /// Payments are nonnegative.
    LimitedLiability,
}

impl ConstraintKind {
    /// Stable label used in reports and CSV output.
    pub fn label(self) -> &'static str {
        match self {
            ConstraintKind::PrincipalIc => "principal-ic",
            ConstraintKind::ExpertIc => "expert-ic",
            ConstraintKind::SurplusIc => "surplus-ic",
            ConstraintKind::Monotonicity => "monotonicity",
            ConstraintKind::LimitedLiability => "limited-liability",
        }
    }
}

/// Slack intervals for one period; `None` marks a constraint that does not
/// apply there (the surplus form starts at period one and has no
/// finite-horizon analogue, and the expert's last working period needs no
/// forward-looking promise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSlacks {
    pub t: usize,
    pub pic: Option<Interval>,
    pub eic: Option<Interval>,
    pub sic: Option<Interval>,
}

/// Overall classification of a candidate contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every checked constraint holds within tolerance.
    Implementable,
    /// Some constraint's entire slack interval sits below the tolerance.
    Violated { constraint: ConstraintKind, t: usize },
    /// Some slack interval straddles the tolerance, so the stored prefix
    /// is too short to decide.
    Indeterminate { constraint: ConstraintKind, t: usize },
}

/// Full verification output.
#[derive(Debug, Clone, PartialEq)]
pub struct IcReport {
    /// Whether knowledge monotonicity and payment nonnegativity hold.
    pub feasibility_ok: bool,
    /// Per-period slack intervals, in period order.
    pub per_period: Vec<PeriodSlacks>,
    /// Smallest lower bound among all reported slack intervals.
    pub min_slack: f64,
    pub verdict: Verdict,
}

/// Bracketed continuation values along a stored prefix.
struct Brackets {
    /// Principal's value from each period on.
    prof: Vec<Interval>,
    /// Expert's value from the *following* period on.
    wage_next: Vec<Interval>,
    /// Discounted joint-surplus sum from each period on.
    gsum: Vec<Interval>,
}

/// Compute value brackets for periods `0..=t_max` (callers clamp `t_max`
/// to the prefix horizon).  Prefix flows enter exactly via discounted
/// suffix sums; the tail beyond the prefix is bracketed from the knowledge
/// range `[s_T, s_limit]` and the frontloading payment budget.
fn bracket_values(env: &PayoffEnv, path: &ContractPath, t_max: usize) -> Brackets {
    let t_end = path.horizon();
    let delta = env.delta();
    let cap = 1.0 / (1.0 - delta);
    let s_last = path.s[t_end];
    let pay_cap = ((env.w(s_last) - env.w(path.s_limit)) * cap).max(0.0);
    let tail_prof = Interval::new(env.pi(s_last) * cap - pay_cap, env.pi(path.s_limit) * cap);
    let tail_wage = Interval::new(env.w(path.s_limit) * cap, env.w(s_last) * cap + pay_cap);
    let tail_g = Interval::new(env.g(s_last) * cap, env.g(path.s_limit) * cap);

    let mut prof_pref = vec![0.0; t_end + 1];
    let mut wage_pref = vec![0.0; t_end + 1];
    let mut gsum_pref = vec![0.0; t_end + 1];
    prof_pref[t_end] = env.pi(s_last) - path.p[t_end];
    wage_pref[t_end] = env.w(s_last) + path.p[t_end];
    gsum_pref[t_end] = env.g(s_last);
    for t in (0..t_end).rev() {
        prof_pref[t] = env.pi(path.s[t]) - path.p[t] + delta * prof_pref[t + 1];
        wage_pref[t] = env.w(path.s[t]) + path.p[t] + delta * wage_pref[t + 1];
        gsum_pref[t] = env.g(path.s[t]) + delta * gsum_pref[t + 1];
    }

    let mut prof = Vec::with_capacity(t_max + 1);
    let mut wage_next = Vec::with_capacity(t_max + 1);
    let mut gsum = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let tail_at = delta.powi((t_end + 1 - t) as i32);
        prof.push(tail_prof.scale(tail_at).shift(prof_pref[t]));
        gsum.push(tail_g.scale(tail_at).shift(gsum_pref[t]));
        let w_next = if t < t_end {
            tail_wage
                .scale(delta.powi((t_end - t) as i32))
                .shift(wage_pref[t + 1])
        } else {
            tail_wage
        };
        wage_next.push(w_next);
    }
    Brackets {
        prof,
        wage_next,
        gsum,
    }
}

/// Pick the verdict: feasibility breaches dominate, then certain
/// violations in period order (principal, expert, surplus within a
/// period), then indeterminate brackets in the same order.
fn classify(
    feasibility: Option<(ConstraintKind, usize)>,
    rows: &[PeriodSlacks],
    tol: f64,
) -> Verdict {
    if let Some((constraint, t)) = feasibility {
        return Verdict::Violated { constraint, t };
    }
    let ordered = |row: &PeriodSlacks| {
        [
            (ConstraintKind::PrincipalIc, row.pic),
            (ConstraintKind::ExpertIc, row.eic),
            (ConstraintKind::SurplusIc, row.sic),
        ]
    };
    for row in rows {
        for (kind, slot) in ordered(row) {
            if let Some(itv) = slot {
                if itv.hi < -tol {
                    return Verdict::Violated {
                        constraint: kind,
                        t: row.t,
                    };
                }
            }
        }
    }
    for row in rows {
        for (kind, slot) in ordered(row) {
            if let Some(itv) = slot {
                if itv.lo < -tol && itv.hi >= -tol {
                    return Verdict::Indeterminate {
                        constraint: kind,
                        t: row.t,
                    };
                }
            }
        }
    }
    Verdict::Implementable
}

/// Verify an infinite-horizon contract through period
/// `min(horizon, prefix horizon)`.
///
/// Feasibility (knowledge monotone, payments nonnegative) is checked over
/// the whole prefix.  For each reported period the principal's constraint
/// compares continuation profit against producing at the current level
/// forever, the expert's compares next-period continuation wages against
/// coasting at the current level forever, and from period one on the
/// surplus form compares the joint continuation surplus against the sum of
/// those outside options.  Knowledge levels outside the unit interval are
/// structural errors, not violations.
pub fn check_contract(
    env: &PayoffEnv,
    path: &ContractPath,
    horizon: usize,
    tol: f64,
) -> Result<IcReport> {
    let t_end = path.horizon();
    for (t, &s) in path.s.iter().enumerate() {
        if !(-1e-12..=1.0 + 1e-12).contains(&s) {
            return Err(Error::MalformedContract(format!(
                "knowledge level {s} at period {t} is outside the unit interval"
            )));
        }
    }
    let mut feasibility = None;
    'feas: for t in 0..=t_end {
        if t > 0 && path.s[t] < path.s[t - 1] - tol {
            feasibility = Some((ConstraintKind::Monotonicity, t));
            break 'feas;
        }
        if path.p[t] < -tol {
            feasibility = Some((ConstraintKind::LimitedLiability, t));
            break 'feas;
        }
    }
    let t_max = horizon.min(t_end);
    let brackets = bracket_values(env, path, t_max);
    let cap = 1.0 / (1.0 - env.delta());
    let mut per_period = Vec::with_capacity(t_max + 1);
    let mut min_slack = f64::INFINITY;
    for t in 0..=t_max {
        let pic = brackets.prof[t].shift(-env.pi(path.s[t]) * cap);
        let eic = brackets.wage_next[t].shift(-env.w(path.s[t]) * cap);
        let sic = (t >= 1)
            .then(|| brackets.gsum[t].shift(-(env.pi(path.s[t]) + env.w(path.s[t - 1])) * cap));
        for itv in [Some(pic), Some(eic), sic].into_iter().flatten() {
            min_slack = min_slack.min(itv.lo);
        }
        per_period.push(PeriodSlacks {
            t,
            pic: Some(pic),
            eic: Some(eic),
            sic,
        });
    }
    let verdict = classify(feasibility, &per_period, tol);
    Ok(IcReport {
        feasibility_ok: feasibility.is_none(),
        per_period,
        min_slack,
        verdict,
    })
}

/// Slack intervals of the payment-free surplus constraint for periods
/// `1..=min(horizon, prefix horizon)`.
pub fn check_sic(env: &PayoffEnv, path: &ContractPath, horizon: usize) -> Vec<(usize, Interval)> {
    let t_max = horizon.min(path.horizon());
    if t_max == 0 {
        return Vec::new();
    }
    let brackets = bracket_values(env, path, t_max);
    let cap = 1.0 / (1.0 - env.delta());
    (1..=t_max)
        .map(|t| {
            let target = (env.pi(path.s[t]) + env.w(path.s[t - 1])) * cap;
            (t, brackets.gsum[t].shift(-target))
        })
        .collect()
}

/// Would `player` gain from walking away at period `t`?
///
/// The principal's deviation is to stop paying and produce with the novice
/// at the current level forever; the expert's is to stop training and
/// coast on the current wage forever.  Returns `Some(true)` when the
/// deviation certainly beats honoring the contract (beyond `tol`),
/// `Some(false)` when it certainly does not, and `None` when the stored
/// prefix is too short to decide.
///
/// # Panics
///
/// Panics when `t` lies beyond the stored prefix.
pub fn simulate_deviation(
    env: &PayoffEnv,
    path: &ContractPath,
    player: Player,
    t: usize,
    tol: f64,
) -> Option<bool> {
    assert!(
        t <= path.horizon(),
        "deviation period {t} beyond the stored prefix ending at {}",
        path.horizon()
    );
    let brackets = bracket_values(env, path, t);
    let cap = 1.0 / (1.0 - env.delta());
    let margin = match player {
        Player::Principal => brackets.prof[t].shift(-env.pi(path.s[t]) * cap),
        Player::Expert => brackets.wage_next[t].shift(-env.w(path.s[t]) * cap),
    };
    if margin.lo >= -tol {
        Some(false)
    } else if margin.hi < -tol {
        Some(true)
    } else {
        None
    }
}

/// Verify a finite-horizon retirement contract.
///
/// All flows are finite sums, so every slack is an exact point.  The
/// principal's period-`t` deviation is to produce at the current level
/// through the expert's last working period and then pay the catch-up cost
/// for a novice stuck at that level; honoring instead earns the remaining
/// profit flow net of payments and the (smaller) catch-up cost at the
/// contracted terminal level.  The expert's constraint applies through the
/// second-to-last working period and compares remaining wages plus
/// payments against coasting until retirement.  A terminal level short of
/// full knowledge is structurally fine; it simply leaves a catch-up cost
/// in place.
pub fn check_retirement_contract(
    env_r: &RetirementEnv,
    rc: &RetirementContract,
    tol: f64,
) -> Result<IcReport> {
    let k = env_r.horizon();
    if rc.s.len() != k + 1 {
        return Err(Error::MalformedContract(format!(
            "expected {} knowledge levels for a {k}-period working phase, got {}",
            k + 1,
            rc.s.len()
        )));
    }
    if rc.p.len() != k {
        return Err(Error::MalformedContract(format!(
            "expected {k} payments for a {k}-period working phase, got {}",
            rc.p.len()
        )));
    }
    for (t, &s) in rc.s.iter().enumerate() {
        if !s.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&s) {
            return Err(Error::MalformedContract(format!(
                "knowledge level {s} at period {t} is outside the unit interval"
            )));
        }
    }
    if rc.p.iter().any(|p| !p.is_finite()) {
        return Err(Error::MalformedContract("non-finite payment".into()));
    }
    let base = env_r.base();
    let delta = base.delta();
    let mut feasibility = None;
    'feas: for t in 0..=k {
        if t > 0 && rc.s[t] < rc.s[t - 1] - tol {
            feasibility = Some((ConstraintKind::Monotonicity, t));
            break 'feas;
        }
        if t < k && rc.p[t] < -tol {
            feasibility = Some((ConstraintKind::LimitedLiability, t));
            break 'feas;
        }
    }

    let mut prof = vec![0.0; k];
    let mut wage = vec![0.0; k];
    prof[k - 1] = base.pi(rc.s[k - 1]) - rc.p[k - 1];
    wage[k - 1] = base.w(rc.s[k - 1]) + rc.p[k - 1];
    for t in (0..k - 1).rev() {
        prof[t] = base.pi(rc.s[t]) - rc.p[t] + delta * prof[t + 1];
        wage[t] = base.w(rc.s[t]) + rc.p[t] + delta * wage[t + 1];
    }
    let terminal_cost = env_r.cost(rc.s[k]);
    let mut per_period = Vec::with_capacity(k);
    let mut min_slack = f64::INFINITY;
    for t in 0..k {
        let settle = delta.powi((k - 1 - t) as i32);
        let honoring = prof[t] - settle * terminal_cost;
        let walk_away = geometric(delta, k - t) * base.pi(rc.s[t]) - settle * env_r.cost(rc.s[t]);
        let pic = Interval::point(honoring - walk_away);
        let eic = (t + 1 < k).then(|| {
            Interval::point(wage[t + 1] - geometric(delta, k - t - 1) * base.w(rc.s[t]))
        });
        for itv in [Some(pic), eic].into_iter().flatten() {
            min_slack = min_slack.min(itv.lo);
        }
        per_period.push(PeriodSlacks {
            t,
            pic: Some(pic),
            eic,
            sic: None,
        });
    }
    let verdict = classify(feasibility, &per_period, tol);
    Ok(IcReport {
        feasibility_ok: feasibility.is_none(),
        per_period,
        min_slack,
        verdict,
    })
}
