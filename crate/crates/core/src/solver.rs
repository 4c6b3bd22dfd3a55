//! Solver for the optimal self-enforcing training contract over an infinite
//! horizon.
//!
//! The construction has three stages.  First, locate the long-run knowledge
//! level: the smallest maximizer of `delta * pi(s) + w(s)` on `[s0, 1]`,
//! together with the maximal value `M` of that map.  Second, back out the
//! initial transfer `s1` from `delta * pi(s1) + w(s0) = M`.  Third, roll the
//! break-even recursion forward from `(s0, s1)`: each period the expert gives
//! away exactly as much future knowledge as the principal's extra profit is
//! worth, so the level `delta * pi(s_{t+1}) + w(s_t)` stays pinned at `M` and
//! every self-enforcement constraint binds.  Payments are then frontloaded so
//! the expert is always indifferent between continuing and walking away.

use crate::config::SolverConfig;
use crate::contract::{ContractPath, FrontierPoint, OptimalContract};
use crate::env::PayoffEnv;
use crate::error::{Error, Result};
use crate::numeric::{
    argmax_first, bisect_boundary, bisect_root, grid_point, polish_max, refined_max, scan_values,
};

/// Slack under which the long-run level is considered equal to the start
/// level, making the optimal contract the degenerate "never train" one.
pub const TRIVIAL_TOL: f64 = 1e-12;

/// Value slack under which the level map evaluated at full knowledge counts
/// as attaining the scanned maximum.  Kept well above floating-point noise
/// but far below the value gap left by any interior maximum at the probed
/// discount factors.
pub const FULL_TOL: f64 = 1e-13;

/// Residual size below which a touching (non-crossing) maximum of the level
/// map counts as reaching the level.
const TANGENCY_TOL: f64 = 1e-9;

/// Smallest maximizer of `s -> delta * pi(s) + w(s)` on `[s0, 1]`, together
/// with the maximum value.
///
/// The map is scanned on a dense grid and the winning cell is polished with a
/// parabolic fit.  When the map is flat near its maximum (within
/// `cfg.eps_val`), the returned point is the left edge of the plateau: the
/// first point whose value enters the band `[max - eps_val, max]`, located by
/// bisection inside the first grid cell that enters the band.
pub fn smallest_maximizer(env: &PayoffEnv, cfg: &SolverConfig) -> (f64, f64) {
    let f = |s: f64| env.delta() * env.pi(s) + env.w(s);
    let lo = cfg.s0;
    if lo >= 1.0 {
        return (1.0, f(1.0));
    }
    let n = cfg.scan_points.max(3);
    let values = scan_values(&f, lo, 1.0, n);
    let j = argmax_first(&values);
    let (mut sbar, m) = polish_max(&f, lo, 1.0, n, &values, j);
    let band = values[j] - cfg.eps_val;
    let entry = values.iter().position(|v| *v >= band).unwrap_or(j);
    if entry < j {
        sbar = if entry == 0 {
            lo
        } else {
            bisect_boundary(
                |s| f(s) >= band,
                grid_point(lo, 1.0, entry - 1, n),
                grid_point(lo, 1.0, entry, n),
                1e-13,
            )
        };
    }
    (sbar, m)
}

/// Initial knowledge transfer: the unique `s1` with
/// `delta * pi(s1) + w(s0) = m_star`.
///
/// This is the "gift" that opens the relationship: the largest first-period
/// transfer the principal can credibly promise never to regret.  Returns
/// `s0` when the contract is trivial (`sbar_star <= s0`).
pub fn knowledge_gift(env: &PayoffEnv, sbar_star: f64, m_star: f64, cfg: &SolverConfig) -> Result<f64> {
    if sbar_star <= cfg.s0 + TRIVIAL_TOL {
        return Ok(cfg.s0);
    }
    let target = (m_star - env.w(cfg.s0)) / env.delta();
    let s1 = env.pi_fn().invert(target, cfg.eps_root, cfg.bisect_max_iter)?;
    Ok(s1.max(cfg.s0))
}

/// One step of the break-even recursion: given consecutive levels
/// `(s_prev, s_curr)`, the next level `s_next` solves
/// `delta * (pi(s_next) - pi(s_curr)) = w(s_prev) - w(s_curr)`.
///
/// The expert's flow loss from last period's transfer is exactly offset by
/// the discounted profit gain from the next one.  Fails with
/// [`Error::NoSolution`] when the required profit exceeds `pi(1)`, i.e. the
/// recursion would have to push knowledge past the feasible ceiling.
pub fn be_step(env: &PayoffEnv, s_prev: f64, s_curr: f64, cfg: &SolverConfig) -> Result<f64> {
    let target = env.pi(s_curr) + (env.w(s_prev) - env.w(s_curr)) / env.delta();
    let top = env.pi(1.0);
    if target > top + 1e-12 * (1.0 + top.abs()) {
        return Err(Error::NoSolution {
            required: target,
            max: top,
        });
    }
    let s_next = env
        .pi_fn()
        .invert(target.min(top), cfg.eps_root, cfg.bisect_max_iter)?;
    // Inversion noise must not break the montone-transfer requirement.
    Ok(s_next.max(s_curr))
}

/// Smallest `s >= from` at which `delta * pi(s) + w(s)` reaches `level`, if
/// any.
///
/// On an optimal path the level map touches its own maximum tangentially at
/// the long-run point, so a plain sign-change search can miss the root; when
/// the polished maximum of the residual is within [`TANGENCY_TOL`] of zero,
/// the touching point itself is returned.
fn smallest_level_crossing(
    env: &PayoffEnv,
    from: f64,
    level: f64,
    cfg: &SolverConfig,
) -> Option<f64> {
    let g = |s: f64| env.delta() * env.pi(s) + env.w(s) - level;
    if g(from) >= 0.0 {
        return Some(from);
    }
    if from >= 1.0 {
        return None;
    }
    let n = cfg.scan_points.max(3);
    let (s_m, g_m, _) = refined_max(g, from, 1.0, n);
    if g_m < -TANGENCY_TOL {
        return None;
    }
    if g_m <= TANGENCY_TOL {
        return Some(s_m);
    }
    // A genuine crossing: bracket it at the first nonnegative grid point.
    for i in 1..n {
        let x = grid_point(from, 1.0, i, n);
        if g(x) >= 0.0 {
            let left = grid_point(from, 1.0, i - 1, n);
            return Some(bisect_root(&g, left, x, 0.0, cfg.bisect_max_iter));
        }
    }
    // The polish found a positive peak strictly between grid points.
    Some(bisect_root(&g, from, s_m, 0.0, cfg.bisect_max_iter))
}

/// Knowledge path generated by the break-even recursion from `(s0, s1)`.
///
/// Iterates [`be_step`] until the per-period increment falls below
/// `cfg.eps_step` or the path reaches `cfg.max_periods` transitions
/// (`truncated` is set in the latter case).  Payments are left at zero; use
/// [`frontload_payments`] to attach them.  The reported `s_limit` is the
/// crossing point of the conserved level `delta * pi(s1) + w(s0)`, which the
/// recursion approaches monotonically from below.
pub fn generate_sequence(env: &PayoffEnv, s1: f64, cfg: &SolverConfig) -> Result<ContractPath> {
    if !s1.is_finite() || s1 < cfg.s0 - 1e-12 || s1 > 1.0 + 1e-12 {
        return Err(Error::BadParams(format!(
            "initial transfer {s1} outside [{}, 1]",
            cfg.s0
        )));
    }
    let s1 = s1.clamp(cfg.s0, 1.0);
    let mut s = vec![cfg.s0, s1];
    let mut truncated = false;
    loop {
        let t = s.len() - 1;
        if s[t] - s[t - 1] < cfg.eps_step {
            break;
        }
        if t >= cfg.max_periods {
            truncated = true;
            break;
        }
        let next = be_step(env, s[t - 1], s[t], cfg)?;
        s.push(next);
    }
    let level = env.delta() * env.pi(s1) + env.w(cfg.s0);
    let last = *s.last().expect("path has at least two entries");
    let s_limit = smallest_level_crossing(env, s1, level, cfg)
        .unwrap_or(last)
        .max(last);
    let p = vec![0.0; s.len()];
    ContractPath::new(s, p, s_limit, truncated)
}

/// Attach the frontloaded payment scheme to a knowledge path: `p_0 = 0` and
/// `p_t = (w(s_{t-1}) - w(s_t)) / (1 - delta)` for `t >= 1`.
///
/// Each payment hands the expert the full capitalized value of the wage drop
/// caused by the previous period's transfer, which makes every one of the
/// expert's continuation constraints bind.
pub fn frontload_payments(env: &PayoffEnv, mut path: ContractPath) -> ContractPath {
    let cap = 1.0 / (1.0 - env.delta());
    path.p = vec![0.0; path.s.len()];
    for t in 1..path.s.len() {
        // Rounding in the wage differences must not produce a negative pay.
        path.p[t] = ((env.w(path.s[t - 1]) - env.w(path.s[t])) * cap).max(0.0);
    }
    path
}

/// Solve for the principal-optimal self-enforcing contract.
///
/// Composes [`smallest_maximizer`], [`knowledge_gift`],
/// [`generate_sequence`], and [`frontload_payments`].  When the long-run
/// level coincides with the start level the contract is trivial: knowledge
/// stays at `s0` forever and no payments flow.
pub fn solve_optimal(env: &PayoffEnv, cfg: &SolverConfig) -> Result<OptimalContract> {
    let (sbar_star, m_star) = smallest_maximizer(env, cfg);
    let cap = 1.0 / (1.0 - env.delta());
    if sbar_star <= cfg.s0 + TRIVIAL_TOL {
        return Ok(OptimalContract {
            path: ContractPath::constant(cfg.s0),
            sbar_star: cfg.s0,
            s1_star: cfg.s0,
            m_star,
            pi0: env.pi(cfg.s0) * cap,
            w0: env.w(cfg.s0) * cap,
            trivial: true,
        });
    }
    let s1_star = knowledge_gift(env, sbar_star, m_star, cfg)?;
    let path = frontload_payments(env, generate_sequence(env, s1_star, cfg)?);
    Ok(OptimalContract {
        path,
        sbar_star,
        s1_star,
        m_star,
        pi0: env.pi(cfg.s0) + env.delta() * env.pi(s1_star) * cap,
        w0: env.w(cfg.s0) * cap,
        trivial: false,
    })
}

/// Discount-factor thresholds `(delta_low, delta_high)` for an environment's
/// payoff functions, holding everything but `delta` fixed.
///
/// Below `delta_low` the optimal contract is trivial; above `delta_high` the
/// long-run level is full knowledge.  Both are located by bisection on
/// monotone indicators to absolute tolerance `tol`.  Triviality is read off
/// the smallest maximizer of the level map; full training is detected by
/// value — the level at `s = 1` attains the scanned maximum — which stays
/// sharp even where the map is nearly flat at the top and the reported
/// maximizer is pulled onto the plateau's left edge.  The conventions for
/// families without an interior switch: `delta_low = 0` when training is
/// profitable at every probed discount factor and `1` when it never is;
/// `delta_high = 1` when full transfer is never reached and `0` when it
/// already holds at the most impatient probe.  Probes stay in
/// `[1e-6, 1 - 1e-6]`; boundaries closer to the ends report the convention
/// value.
pub fn delta_thresholds(env: &PayoffEnv, tol: f64, cfg: &SolverConfig) -> (f64, f64) {
    let tol = tol.max(1e-12);
    let probe_at = |d: f64| {
        env.with_delta(d)
            .expect("probe discount factors lie strictly inside (0, 1)")
    };
    let trivial = |d: f64| smallest_maximizer(&probe_at(d), cfg).0 <= cfg.s0 + TRIVIAL_TOL;
    let full = |d: f64| {
        let probe = probe_at(d);
        let (_, m) = smallest_maximizer(&probe, cfg);
        d * probe.pi(1.0) + probe.w(1.0) >= m - FULL_TOL
    };
    let lo = 1e-6;
    let hi = 1.0 - lo;
    let delta_low = if !trivial(lo) {
        0.0
    } else if trivial(hi) {
        1.0
    } else {
        bisect_boundary(|d| !trivial(d), lo, hi, tol)
    };
    let delta_high = if full(lo) {
        0.0
    } else if !full(hi) {
        1.0
    } else {
        bisect_boundary(full, lo, hi, tol)
    };
    (delta_low, delta_high)
}

/// Limit of the initial transfer as the discount factor approaches one: the
/// `s1` with `pi(s1) = pi(1) + w(1) - w(s0)`.
///
/// Even with unbounded patience the first gift stays strictly interior —
/// the expert can never credibly hand over everything at once.
pub fn patience_limit_gift(env: &PayoffEnv, cfg: &SolverConfig) -> f64 {
    let target = (env.pi(1.0) + env.w(1.0) - env.w(cfg.s0)).clamp(env.pi(cfg.s0), env.pi(1.0));
    env.pi_fn()
        .invert(target, cfg.eps_root, cfg.bisect_max_iter)
        .expect("limit target was clamped into the range of pi")
}

/// Equally spaced sweep of the welfare frontier traced by the time-zero
/// payment `p0`.
///
/// Raising `p0` from zero shifts value one-for-one from principal to expert
/// while the knowledge path stays fixed; the feasible range is
/// `[0, delta * (pi(s1) - pi(s0)) / (1 - delta)]`, at whose upper end the
/// principal's time-zero constraint binds.  Fails with
/// [`Error::TrivialContract`] when there is no training to split the gains
/// from.
pub fn pareto_frontier(
    env: &PayoffEnv,
    opt: &OptimalContract,
    n_points: usize,
) -> Result<Vec<FrontierPoint>> {
    if opt.trivial {
        return Err(Error::TrivialContract);
    }
    if n_points == 0 {
        return Err(Error::BadParams("frontier sweep needs at least one point".into()));
    }
    let s0 = opt.path.s[0];
    let p0_max = env.delta() * (env.pi(opt.s1_star) - env.pi(s0)) / (1.0 - env.delta());
    let points = (0..n_points)
        .map(|i| {
            let frac = if n_points == 1 {
                0.0
            } else {
                i as f64 / (n_points - 1) as f64
            };
            let p0 = p0_max * frac;
            FrontierPoint {
                p0,
                pi0: opt.pi0 - p0,
                w0: opt.w0 + p0,
            }
        })
        .collect();
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::tests::reference_env;
    use crate::env::make_polynomial_env;

    fn affine_env(delta: f64) -> PayoffEnv {
        make_polynomial_env(vec![0.0, 1.0], vec![0.6, -0.3], vec![0.0, 1.0], delta).unwrap()
    }

    #[test]
    fn maximizer_of_reference_level_map() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let (sbar, m) = smallest_maximizer(&env, &cfg);
        assert!((sbar - 0.8).abs() <= 1e-9, "sbar = {sbar}");
        assert!((m - 0.92).abs() <= 1e-12, "m = {m}");
    }

    #[test]
    fn maximizer_sits_at_left_end_when_training_never_pays() {
        // delta * s + 0.6 - 0.3 s falls whenever delta < 0.3.
        let env = affine_env(0.2);
        let cfg = SolverConfig::default();
        let (sbar, m) = smallest_maximizer(&env, &cfg);
        assert_eq!(sbar, 0.0);
        assert!((m - 0.6).abs() <= 1e-12);
    }

    #[test]
    fn maximizer_breaks_plateau_ties_leftward() {
        // At delta = 0.3 the level map 0.3 s + 0.6 - 0.3 s is constant, so
        // the whole interval maximizes it and the smallest point wins.
        let env = affine_env(0.3);
        let cfg = SolverConfig::default();
        let (sbar, m) = smallest_maximizer(&env, &cfg);
        assert!(sbar <= 1e-9, "sbar = {sbar}");
        assert!((m - 0.6).abs() <= 1e-9);
    }

    #[test]
    fn maximizer_with_shifted_start_level() {
        let env = reference_env();
        let cfg = SolverConfig {
            s0: 0.9,
            ..SolverConfig::default()
        };
        // On [0.9, 1] the reference level map is decreasing, so the start
        // point itself is the long-run level.
        let (sbar, m) = smallest_maximizer(&env, &cfg);
        assert!((sbar - 0.9).abs() <= 1e-9);
        assert!((m - (0.8 * 0.9 + 0.6 - 0.5 * 0.81)).abs() <= 1e-9);
    }

    #[test]
    fn gift_solves_the_level_equation() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let s1 = knowledge_gift(&env, 0.8, 0.92, &cfg).unwrap();
        assert!((s1 - 0.4).abs() <= 1e-9, "s1 = {s1}");
    }

    #[test]
    fn gift_collapses_to_start_when_trivial() {
        let env = affine_env(0.2);
        let cfg = SolverConfig::default();
        let s1 = knowledge_gift(&env, 0.0, 0.6, &cfg).unwrap();
        assert_eq!(s1, 0.0);
    }

    #[test]
    fn gift_for_affine_wage_family() {
        // delta = 0.4: level map 0.4 s + 0.6 - 0.3 s rises, sbar = 1,
        // m = 0.7; gift solves 0.4 s1 + 0.6 = 0.7.
        let env = affine_env(0.4);
        let cfg = SolverConfig::default();
        let (sbar, m) = smallest_maximizer(&env, &cfg);
        assert!((sbar - 1.0).abs() <= 1e-9);
        assert!((m - 0.7).abs() <= 1e-9);
        let s1 = knowledge_gift(&env, sbar, m, &cfg).unwrap();
        assert!((s1 - 0.25).abs() <= 1e-9, "s1 = {s1}");
    }

    #[test]
    fn break_even_step_reproduces_the_reference_path() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let s2 = be_step(&env, 0.0, 0.4, &cfg).unwrap();
        assert!((s2 - 0.5).abs() <= 1e-9, "s2 = {s2}");
        let s3 = be_step(&env, 0.4, 0.5, &cfg).unwrap();
        assert!((s3 - 0.55625).abs() <= 1e-9, "s3 = {s3}");
    }

    #[test]
    fn break_even_step_is_stationary_on_repeats() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        for &x in &[0.0, 0.3, 0.7, 1.0] {
            let next = be_step(&env, x, x, &cfg).unwrap();
            assert!((next - x).abs() <= 1e-9, "fixed point at {x} moved to {next}");
        }
    }

    #[test]
    fn break_even_step_rejects_overambitious_transfers() {
        // Starting the reference environment at s1 = 0.75 demands more
        // profit than full knowledge can deliver within two periods.
        let env = reference_env();
        let cfg = SolverConfig::default();
        let err = be_step(&env, 0.0, 0.75, &cfg).unwrap_err();
        match err {
            Error::NoSolution { required, max } => {
                assert!(required > max);
                assert!((max - 1.0).abs() <= 1e-12);
            }
            other => panic!("expected NoSolution, got {other}"),
        }
    }

    #[test]
    fn sequence_matches_reference_prefix_and_limit() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let path = generate_sequence(&env, 0.4, &cfg).unwrap();
        let expect = [0.0, 0.4, 0.5, 0.55625];
        for (t, want) in expect.iter().enumerate() {
            assert!(
                (path.s[t] - want).abs() <= 1e-9,
                "s[{t}] = {} want {want}",
                path.s[t]
            );
        }
        assert!((path.s_limit - 0.8).abs() <= 1e-9, "limit = {}", path.s_limit);
        // Convergence toward the limit is harmonically slow here (the
        // recursion's slope at its fixed point is exactly one), so the cap
        // on generated periods kicks in before the step tolerance does.
        assert!(path.truncated);
        assert_eq!(path.horizon(), cfg.max_periods);
        let last = *path.s.last().unwrap();
        assert!(last < 0.8 && last > 0.79);
        for t in 1..path.s.len() {
            assert!(path.s[t] >= path.s[t - 1]);
        }
    }

    #[test]
    fn sequence_from_stationary_start_is_constant() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let path = generate_sequence(&env, 0.0, &cfg).unwrap();
        assert_eq!(path.s, vec![0.0, 0.0]);
        assert!(!path.truncated);
        assert_eq!(path.s_limit, 0.0);
    }

    #[test]
    fn sequence_rejects_transfers_outside_the_unit_interval() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        assert!(matches!(
            generate_sequence(&env, -0.2, &cfg),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(
            generate_sequence(&env, 1.2, &cfg),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn sequence_conserves_the_level_along_the_path() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let path = generate_sequence(&env, 0.4, &cfg).unwrap();
        let level = 0.8 * env.pi(0.4) + env.w(0.0);
        for t in 0..path.s.len().min(200) - 1 {
            let here = 0.8 * env.pi(path.s[t + 1]) + env.w(path.s[t]);
            assert!(
                (here - level).abs() <= 1e-9,
                "level drifted to {here} at t = {t}"
            );
        }
    }

    #[test]
    fn frontloaded_payments_match_reference_values() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let path = frontload_payments(&env, generate_sequence(&env, 0.4, &cfg).unwrap());
        assert_eq!(path.p[0], 0.0);
        assert!((path.p[1] - 0.4).abs() <= 1e-9, "p1 = {}", path.p[1]);
        assert!((path.p[2] - 0.225).abs() <= 1e-9, "p2 = {}", path.p[2]);
        for &p in &path.p {
            assert!(p >= 0.0);
        }
    }

    #[test]
    fn optimal_contract_reference_scalars() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let opt = solve_optimal(&env, &cfg).unwrap();
        assert!(!opt.trivial);
        assert!((opt.sbar_star - 0.8).abs() <= 1e-9);
        assert!((opt.s1_star - 0.4).abs() <= 1e-9);
        assert!((opt.m_star - 0.92).abs() <= 1e-12);
        assert!((opt.pi0 - 1.6).abs() <= 1e-9, "pi0 = {}", opt.pi0);
        assert!((opt.w0 - 3.0).abs() <= 1e-12, "w0 = {}", opt.w0);
    }

    #[test]
    fn optimal_contract_trivial_branch() {
        let env = affine_env(0.2);
        let cfg = SolverConfig::default();
        let opt = solve_optimal(&env, &cfg).unwrap();
        assert!(opt.trivial);
        assert_eq!(opt.path.s, vec![0.0]);
        assert_eq!(opt.path.p, vec![0.0]);
        assert_eq!(opt.path.s_limit, 0.0);
        assert_eq!(opt.pi0, 0.0);
        assert!((opt.w0 - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn optimal_path_limit_agrees_with_the_long_run_level() {
        // A market-entry environment whose level map peaks at the corner
        // s = 1: the path limit must land exactly on the long-run level.
        let env = crate::env::make_cournot_env(4.0, 1.0, 0.9).unwrap();
        let cfg = SolverConfig::coarse();
        let opt = solve_optimal(&env, &cfg).unwrap();
        assert!((opt.sbar_star - 1.0).abs() <= 1e-9);
        assert!((opt.path.s_limit - opt.sbar_star).abs() <= 1e-9);
        // Convergence is geometric at a corner, so no truncation here.
        assert!(!opt.path.truncated);
    }

    #[test]
    fn thresholds_for_the_affine_wage_family_coincide() {
        // With pi = s and w = 0.6 - 0.3 s the level map's slope is
        // delta - 0.3 at every s: trivial below 0.3, full above.
        let env = affine_env(0.5);
        let cfg = SolverConfig::coarse();
        let (d_lo, d_hi) = delta_thresholds(&env, 1e-7, &cfg);
        assert!((d_lo - 0.3).abs() <= 1e-6, "d_lo = {d_lo}");
        assert!((d_hi - 0.3).abs() <= 1e-6, "d_hi = {d_hi}");
    }

    #[test]
    fn thresholds_for_the_reference_family_are_extreme() {
        // The reference level map delta*s + 0.6 - 0.5 s^2 has an interior
        // peak at s = delta for every delta in (0,1): training always pays
        // a little, and full transfer is never optimal.
        let env = reference_env();
        let cfg = SolverConfig::coarse();
        let (d_lo, d_hi) = delta_thresholds(&env, 1e-6, &cfg);
        assert_eq!(d_lo, 0.0);
        assert_eq!(d_hi, 1.0);
    }

    #[test]
    fn patience_limit_for_reference_and_affine_families() {
        let cfg = SolverConfig::default();
        let env = reference_env();
        let s_inf = patience_limit_gift(&env, &cfg);
        assert!((s_inf - 0.5).abs() <= 1e-9, "s_inf = {s_inf}");
        let env = affine_env(0.8);
        let s_inf = patience_limit_gift(&env, &cfg);
        assert!((s_inf - 0.7).abs() <= 1e-9, "s_inf = {s_inf}");
    }

    #[test]
    fn patience_limit_dominates_every_discounted_gift() {
        let cfg = SolverConfig::default();
        for &delta in &[0.5, 0.8, 0.9, 0.99] {
            let env = reference_env().with_delta(delta).unwrap();
            let opt = solve_optimal(&env, &cfg).unwrap();
            let s_inf = patience_limit_gift(&env, &cfg);
            assert!(
                opt.s1_star <= s_inf + 1e-9,
                "gift {} exceeds limit {s_inf} at delta {delta}",
                opt.s1_star
            );
        }
    }

    #[test]
    fn frontier_spans_the_feasible_initial_payment() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let opt = solve_optimal(&env, &cfg).unwrap();
        let pts = pareto_frontier(&env, &opt, 5).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0].p0, 0.0);
        assert!((pts[0].pi0 - 1.6).abs() <= 1e-9);
        assert!((pts[0].w0 - 3.0).abs() <= 1e-9);
        // p0 caps out at delta * (pi(s1) - pi(s0)) / (1 - delta) = 1.6.
        assert!((pts[4].p0 - 1.6).abs() <= 1e-9, "p0 max = {}", pts[4].p0);
        assert!(pts[4].pi0.abs() <= 1e-9);
        assert!((pts[4].w0 - 4.6).abs() <= 1e-9);
        for pair in pts.windows(2) {
            assert!(pair[1].p0 > pair[0].p0);
        }
        for pt in &pts {
            assert!((pt.pi0 + pt.w0 - 4.6).abs() <= 1e-9, "surplus drifted");
        }
    }

    #[test]
    fn frontier_with_one_point_is_the_principal_optimum() {
        let env = reference_env();
        let cfg = SolverConfig::default();
        let opt = solve_optimal(&env, &cfg).unwrap();
        let pts = pareto_frontier(&env, &opt, 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].p0, 0.0);
    }

    #[test]
    fn frontier_requires_a_nontrivial_contract() {
        let env = affine_env(0.2);
        let cfg = SolverConfig::default();
        let opt = solve_optimal(&env, &cfg).unwrap();
        assert!(matches!(
            pareto_frontier(&env, &opt, 3),
            Err(Error::TrivialContract)
        ));
        assert!(matches!(
            pareto_frontier(&env, &solve_optimal(&reference_env(), &cfg).unwrap(), 0),
            Err(Error::BadParams(_))
        ));
    }
}
