//! Command implementations: bridge a validated run specification to the
//! core library and emit the artifact set.

use std::path::Path;

use serde_json::json;

use gradual_core::{
    check_contract, check_retirement_contract, cost_scaling_sweep, delta_thresholds,
    enumerate_envelope, oracle_retirement, pareto_frontier, solve_optimal, solve_retirement,
    ConstraintKind, ContractPath, GridSpec, RetirementContract, SolverConfig, Verdict,
};

use crate::config::{CommandName, OracleMode, RunSpec};
use crate::output;
use crate::Failure;

/// Command-line flags that take precedence over the configuration.
pub struct Overrides {
    pub out: Option<String>,
    pub scan_points: Option<usize>,
    pub max_periods: Option<usize>,
    pub tol: Option<f64>,
}

/// Payload of one command: the summary's `results` object plus an optional
/// failure to report after every artifact is written (used by `verify`,
/// whose verdict must reach both the summary and the exit code).
type Outcome = (serde_json::Value, Option<Failure>);

/// Dispatch a validated specification: write the command's artifacts, then
/// the JSON summary, which is also echoed to standard output.
pub fn run(spec: &RunSpec, over: &Overrides) -> Result<(), Failure> {
    let mut cfg = SolverConfig::default();
    if let Some(solver) = &spec.solver {
        solver.apply(&mut cfg);
    }
    if let Some(n) = over.scan_points {
        cfg.scan_points = n;
    }
    if let Some(n) = over.max_periods {
        cfg.max_periods = n;
    }
    let prefix = over
        .out
        .clone()
        .or_else(|| spec.output.as_ref().map(|o| o.prefix.clone()))
        .unwrap_or_else(|| "run".to_string());
    let (results, failure) = match spec.command {
        CommandName::Solve => solve_cmd(spec, &cfg, over, &prefix)?,
        CommandName::Retire => retire_cmd(spec, &cfg, over, &prefix)?,
        CommandName::Pareto => pareto_cmd(spec, &cfg, &prefix)?,
        CommandName::SweepDelta => sweep_delta_cmd(spec, &cfg, over, &prefix)?,
        CommandName::SweepCost => sweep_cost_cmd(spec, &cfg, &prefix)?,
        CommandName::Verify => verify_cmd(spec, over, &prefix)?,
        CommandName::Oracle => oracle_cmd(spec, &cfg, &prefix)?,
    };
    let summary = json!({
        "command": spec.command.label(),
        "inputs": spec,
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summaries serialize");
    text.push('\n');
    output::write_atomic(&output::artifact(&prefix, "summary.json"), text.as_bytes())?;
    print!("{text}");
    match failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// Tighten the root residual when `--tol` accompanies a solver command.
fn with_tol(cfg: &SolverConfig, over: &Overrides) -> SolverConfig {
    let mut cfg = cfg.clone();
    if let Some(tol) = over.tol {
        cfg.eps_root = tol;
    }
    cfg
}

fn solve_cmd(
    spec: &RunSpec,
    cfg: &SolverConfig,
    over: &Overrides,
    prefix: &str,
) -> Result<Outcome, Failure> {
    let cfg = with_tol(cfg, over);
    let env = spec.env.build()?;
    let opt = solve_optimal(&env, &cfg).map_err(Failure::from_core)?;
    let rows: Vec<(usize, f64, f64)> = opt
        .path
        .s
        .iter()
        .zip(&opt.path.p)
        .enumerate()
        .map(|(t, (s, p))| (t, *s, *p))
        .collect();
    output::sequence_csv(prefix, &rows)?;
    let mut plot: Vec<(&'static str, usize, f64)> = Vec::new();
    for (t, s, _) in &rows {
        plot.push(("knowledge", *t, *s));
    }
    for (t, _, p) in &rows {
        plot.push(("payment", *t, *p));
    }
    plot.push(("limit", 0, opt.m_star));
    output::plot_csv(prefix, &plot)?;
    Ok((
        json!({
            "sbar_star": opt.sbar_star,
            "s1_star": opt.s1_star,
            "m_star": opt.m_star,
            "pi0": opt.pi0,
            "w0": opt.w0,
            "trivial": opt.trivial,
            "s_limit": opt.path.s_limit,
            "periods_stored": opt.path.horizon(),
            "truncated": opt.path.truncated,
        }),
        None,
    ))
}

fn retire_cmd(
    spec: &RunSpec,
    cfg: &SolverConfig,
    over: &Overrides,
    prefix: &str,
) -> Result<Outcome, Failure> {
    let cfg = with_tol(cfg, over);
    let env = spec.env.build()?;
    let retire = spec.retire.as_ref().expect("presence was validated at parse time");
    let env_r = retire.build(&env)?;
    let rc = solve_retirement(&env_r, &cfg).map_err(Failure::from_core)?;
    let k = retire.k;
    // The stored table carries a zero payment in the retirement period.
    let rows: Vec<(usize, f64, f64)> = (0..=k)
        .map(|t| (t, rc.s[t], rc.p.get(t).copied().unwrap_or(0.0)))
        .collect();
    output::sequence_csv(prefix, &rows)?;
    let mut plot: Vec<(&'static str, usize, f64)> = Vec::new();
    for (t, s, _) in &rows {
        plot.push(("knowledge", *t, *s));
    }
    for (t, _, p) in &rows {
        plot.push(("payment", *t, *p));
    }
    plot.push(("terminal", k, rc.s[k]));
    output::plot_csv(prefix, &plot)?;
    Ok((
        json!({
            "k": k,
            "cost_scale": env_r.cost_scale(),
            "s1_star": rc.s[1],
            "pi0_r": rc.pi0_r,
            "s1_roots": rc.s1_roots,
            "sequence": rc.s,
        }),
        None,
    ))
}

fn pareto_cmd(spec: &RunSpec, cfg: &SolverConfig, prefix: &str) -> Result<Outcome, Failure> {
    let env = spec.env.build()?;
    let opt = solve_optimal(&env, cfg).map_err(Failure::from_core)?;
    let points = spec.frontier.as_ref().map_or(101, |f| f.points);
    let frontier = pareto_frontier(&env, &opt, points).map_err(Failure::from_core)?;
    let rows: Vec<(f64, f64, f64)> = frontier.iter().map(|r| (r.p0, r.pi0, r.w0)).collect();
    output::frontier_csv(prefix, &rows)?;
    Ok((
        json!({
            "points": rows.len(),
            "total_surplus": opt.pi0 + opt.w0,
            "p0_max": rows.last().map(|r| r.0),
            "s1_star": opt.s1_star,
            "sbar_star": opt.sbar_star,
        }),
        None,
    ))
}

fn sweep_delta_cmd(
    spec: &RunSpec,
    cfg: &SolverConfig,
    over: &Overrides,
    prefix: &str,
) -> Result<Outcome, Failure> {
    let env = spec.env.build()?;
    let deltas = spec
        .sweep
        .as_ref()
        .and_then(|s| s.deltas.clone())
        .expect("presence was validated at parse time");
    let mut rows = Vec::new();
    for d in &deltas {
        let probe = env.with_delta(*d).map_err(Failure::from_core)?;
        let opt = solve_optimal(&probe, cfg).map_err(Failure::from_core)?;
        rows.push((*d, opt.s1_star, opt.sbar_star, opt.pi0));
    }
    let (delta_low, delta_high) = delta_thresholds(&env, over.tol.unwrap_or(1e-6), cfg);
    output::sweep_csv(prefix, &rows)?;
    Ok((
        json!({"rows": rows.len(), "delta_low": delta_low, "delta_high": delta_high}),
        None,
    ))
}

fn sweep_cost_cmd(spec: &RunSpec, cfg: &SolverConfig, prefix: &str) -> Result<Outcome, Failure> {
    let env = spec.env.build()?;
    let env_r = spec
        .retire
        .as_ref()
        .expect("presence was validated at parse time")
        .build(&env)?;
    let lambdas = spec
        .sweep
        .as_ref()
        .and_then(|s| s.lambdas.clone())
        .expect("presence was validated at parse time");
    let sweep = cost_scaling_sweep(&env_r, &lambdas, cfg).map_err(Failure::from_core)?;
    // The third column carries the last level reached before retirement.
    let rows: Vec<(f64, f64, f64, f64)> =
        sweep.iter().map(|r| (r.lambda, r.s1_star, r.s_last, r.pi0_r)).collect();
    output::sweep_csv(prefix, &rows)?;
    Ok((json!({"rows": rows.len()}), None))
}

fn verify_cmd(spec: &RunSpec, over: &Overrides, prefix: &str) -> Result<Outcome, Failure> {
    let env = spec.env.build()?;
    let v = spec.verify.as_ref().expect("presence was validated at parse time");
    let (s, p) = match &v.contract {
        Some(file) => output::read_sequence(Path::new(file))?,
        None => (
            v.s.clone().expect("presence was validated at parse time"),
            v.p.clone().expect("presence was validated at parse time"),
        ),
    };
    let tol = over.tol.unwrap_or(v.tol);
    let report = if let Some(retire) = &spec.retire {
        let env_r = retire.build(&env)?;
        let k = retire.k;
        // Stored tables carry a zero payment in the retirement period;
        // strip it so the payment vector covers exactly the working periods.
        let p = if s.len() == k + 1 && p.len() == k + 1 { p[..k].to_vec() } else { p };
        let delta = env.delta();
        let mut raw = 0.0;
        for t in 0..s.len().min(p.len()) {
            raw += delta.powi(t as i32) * (env.pi(s[t]) - p[t]);
        }
        if s.len() == k + 1 {
            raw -= delta.powi(k as i32 - 1) * env_r.cost(s[k]);
        }
        let rc = RetirementContract { s, p, pi0_r: raw, s1_roots: Vec::new() };
        check_retirement_contract(&env_r, &rc, tol).map_err(Failure::from_core)?
    } else {
        let last = s.last().copied().unwrap_or(0.0);
        let path = ContractPath::new(s, p, v.s_limit.unwrap_or(last), v.truncated.unwrap_or(false))
            .map_err(Failure::from_core)?;
        check_contract(&env, &path, v.horizon, tol).map_err(Failure::from_core)?
    };
    let mut rows: Vec<(usize, &'static str, f64, f64)> = Vec::new();
    for slacks in &report.per_period {
        for (kind, interval) in [
            (ConstraintKind::PrincipalIc, slacks.pic),
            (ConstraintKind::ExpertIc, slacks.eic),
            (ConstraintKind::SurplusIc, slacks.sic),
        ] {
            if let Some(i) = interval {
                rows.push((slacks.t, kind.label(), i.lo, i.hi));
            }
        }
    }
    output::verify_csv(prefix, &rows)?;
    let (verdict, constraint, t_bad) = match report.verdict {
        Verdict::Implementable => ("implementable", None, None),
        Verdict::Violated { constraint, t } => ("violated", Some(constraint.label()), Some(t)),
        Verdict::Indeterminate { constraint, t } => {
            ("indeterminate", Some(constraint.label()), Some(t))
        }
    };
    let failure = match verdict {
        "implementable" => None,
        _ => Some(Failure {
            code: 3,
            kind: "infeasible",
            message: match verdict {
                "violated" => format!(
                    "contract violates {} at t={}",
                    constraint.unwrap(),
                    t_bad.unwrap()
                ),
                _ => format!(
                    "stored prefix is too short to certify {} at t={}",
                    constraint.unwrap(),
                    t_bad.unwrap()
                ),
            },
            detail: Some(json!({"constraint": constraint, "t": t_bad, "verdict": verdict})),
        }),
    };
    Ok((
        json!({
            "verdict": verdict,
            "constraint": constraint,
            "t": t_bad,
            "feasibility_ok": report.feasibility_ok,
            "min_slack": report.min_slack,
            "tol": tol,
            "periods_checked": report.per_period.len(),
        }),
        failure,
    ))
}

fn oracle_cmd(spec: &RunSpec, cfg: &SolverConfig, prefix: &str) -> Result<Outcome, Failure> {
    let env = spec.env.build()?;
    let oracle = spec.oracle.as_ref().expect("presence was validated at parse time");
    let grid = GridSpec::new(oracle.m, oracle.horizon).map_err(Failure::from_core)?;
    match oracle.mode {
        OracleMode::Envelope => {
            let envelope = enumerate_envelope(&env, &grid, cfg).map_err(Failure::from_core)?;
            let rows: Vec<(usize, f64, f64)> =
                envelope.iter().enumerate().map(|(t, s)| (t, *s, 0.0)).collect();
            output::sequence_csv(prefix, &rows)?;
            Ok((
                json!({
                    "mode": "envelope",
                    "m": oracle.m,
                    "horizon": oracle.horizon,
                    "envelope": envelope,
                }),
                None,
            ))
        }
        OracleMode::Retirement => {
            let env_r = spec
                .retire
                .as_ref()
                .expect("presence was validated at parse time")
                .build(&env)?;
            let best = oracle_retirement(&env_r, &grid, cfg).map_err(Failure::from_core)?;
            let rows: Vec<(usize, f64, f64)> =
                best.sequence.iter().enumerate().map(|(t, s)| (t, *s, 0.0)).collect();
            output::sequence_csv(prefix, &rows)?;
            Ok((
                json!({
                    "mode": "retirement",
                    "m": oracle.m,
                    "horizon": oracle.horizon,
                    "profit": best.profit,
                    "sequence": best.sequence,
                }),
                None,
            ))
        }
    }
}
