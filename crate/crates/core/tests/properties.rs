//! Randomized invariants over a two-parameter polynomial family.
//!
//! Every test draws environments with linear profit `a * s`, concave wage
//! `w0 - b * s^2`, and linear novice payoff, constrained so that joint
//! surplus rises (`a > 2b`).  The family covers both interior long-run
//! levels (vertex of the level map inside the unit interval) and corner
//! solutions with full training, which is exactly the split the solvers
//! have to get right.

use gradual_core::{
    check_contract, check_retirement_contract, enumerate_envelope, make_polynomial_env,
    pareto_frontier, solve_optimal, solve_retirement, be_step, simulate_deviation, ContractPath,
    Direction, GridSpec, MonotoneFn, PayoffEnv, Player, RetirementEnv, SolverConfig, Verdict,
};
use proptest::prelude::*;

/// Parameter box for the polynomial family; `a > 2b` keeps joint surplus
/// strictly increasing so every drawn environment validates.
fn family() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.8f64..2.0, 0.1f64..0.35, 0.4f64..1.0, 0.4f64..0.95)
}

fn build(a: f64, b: f64, w0: f64, delta: f64) -> PayoffEnv {
    make_polynomial_env(vec![0.0, a], vec![w0, 0.0, -b], vec![0.0, 1.0], delta)
        .expect("family parameters satisfy the monotonicity checks")
}

fn retirement(env: &PayoffEnv, horizon: usize, c: f64) -> RetirementEnv {
    let cost = MonotoneFn::polynomial(vec![c, -c], Direction::Decreasing)
        .expect("linear catch-up cost is well formed");
    RetirementEnv::new(env.clone(), horizon, cost).expect("catch-up cost vanishes at full knowledge")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The returned step satisfies the break-even equation whenever a
    /// genuine root exists (clamped and out-of-range draws are skipped).
    #[test]
    fn break_even_step_solves_its_equation(
        (a, b, w0, d) in family(),
        lo in 0.0f64..0.6,
        width in 0.0f64..0.3,
    ) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let (s_prev, s_curr) = (lo, lo + width);
        if let Ok(next) = be_step(&env, s_prev, s_curr, &cfg) {
            prop_assert!(next >= s_curr);
            if next > s_curr + 1e-12 {
                let residual = d * (env.pi(next) - env.pi(s_curr))
                    - (env.w(s_prev) - env.w(s_curr));
                prop_assert!(residual.abs() <= 1e-9, "residual {residual:e}");
            }
        }
    }

    /// Optimal paths climb monotonically, never pass the conserved-level
    /// crossing, and keep `delta * pi(s_{t+1}) + w(s_t)` pinned at the
    /// maximum of the level map.
    #[test]
    fn solved_paths_climb_along_the_level_set((a, b, w0, d) in family()) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let opt = solve_optimal(&env, &cfg).unwrap();
        prop_assert!(!opt.trivial);
        let s = &opt.path.s;
        for t in 1..s.len() {
            prop_assert!(s[t] >= s[t - 1]);
            prop_assert!(s[t] <= opt.path.s_limit + 1e-9);
            let level = d * env.pi(s[t]) + env.w(s[t - 1]);
            prop_assert!(
                (level - opt.m_star).abs() <= 1e-8,
                "level drift {:e} at t={t}",
                level - opt.m_star
            );
        }
    }

    /// Both the first gift and the long-run level respond (weakly)
    /// positively to patience.
    #[test]
    fn patience_raises_the_gift_and_the_long_run_level((a, b, w0, d) in family()) {
        let cfg = SolverConfig::coarse();
        let slow = solve_optimal(&build(a, b, w0, d), &cfg).unwrap();
        let fast = solve_optimal(&build(a, b, w0, d + 0.02), &cfg).unwrap();
        prop_assert!(fast.s1_star >= slow.s1_star - 1e-9);
        prop_assert!(fast.sbar_star >= slow.sbar_star - 1e-9);
    }

    /// Sliding along the frontier moves value one-for-one between the two
    /// parties: totals are conserved, the first point is the
    /// principal-optimal contract, and the last squeezes the principal down
    /// to the value of never training.
    #[test]
    fn frontier_conserves_total_surplus((a, b, w0, d) in family()) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let opt = solve_optimal(&env, &cfg).unwrap();
        let rows = pareto_frontier(&env, &opt, 17).unwrap();
        prop_assert_eq!(rows.len(), 17);
        let total = opt.pi0 + opt.w0;
        prop_assert!((rows[0].p0).abs() <= 1e-12);
        prop_assert!((rows[0].pi0 - opt.pi0).abs() <= 1e-12);
        for pair in rows.windows(2) {
            prop_assert!(pair[1].p0 > pair[0].p0);
            prop_assert!(pair[1].pi0 <= pair[0].pi0 + 1e-12);
            prop_assert!(pair[1].w0 >= pair[0].w0 - 1e-12);
        }
        for row in &rows {
            prop_assert!((row.pi0 + row.w0 - total).abs() <= 1e-9);
        }
        let floor = env.pi(cfg.s0) / (1.0 - d);
        prop_assert!((rows[16].pi0 - floor).abs() <= 1e-9);
    }

    /// Anything the solver emits passes the independent constraint check,
    /// including from nonzero start levels.
    #[test]
    fn verifier_accepts_solver_output((a, b, w0, d) in family(), s0 in 0.0f64..0.3) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig { s0, ..SolverConfig::coarse() };
        let opt = solve_optimal(&env, &cfg).unwrap();
        prop_assert!((opt.path.s[0] - s0).abs() <= 1e-15);
        let report = check_contract(&env, &opt.path, 50, 1e-8).unwrap();
        prop_assert!(report.feasibility_ok);
        prop_assert_eq!(report.verdict, Verdict::Implementable);
    }

    /// Extending the stored prefix can only tighten each period's slack
    /// bracket: the interval from a longer prefix nests inside the one from
    /// a shorter prefix.
    #[test]
    fn longer_prefixes_tighten_the_slack_brackets((a, b, w0, d) in family()) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let opt = solve_optimal(&env, &cfg).unwrap();
        let path = &opt.path;
        prop_assume!(path.s.len() >= 8);
        let cut = |n: usize| {
            ContractPath::new(path.s[..n].to_vec(), path.p[..n].to_vec(), path.s_limit, true)
                .unwrap()
        };
        let short = check_contract(&env, &cut(path.s.len() / 2), usize::MAX, 1e-8).unwrap();
        let long = check_contract(&env, &cut(path.s.len() - 1), usize::MAX, 1e-8).unwrap();
        for (rs, rl) in short.per_period.iter().zip(long.per_period.iter()) {
            prop_assert_eq!(rs.t, rl.t);
            for (is, il) in [(rs.pic, rl.pic), (rs.eic, rl.eic), (rs.sic, rl.sic)] {
                if let (Some(is), Some(il)) = (is, il) {
                    prop_assert!(is.lo <= il.lo + 1e-12);
                    prop_assert!(is.hi >= il.hi - 1e-12);
                }
            }
        }
    }

    /// Shortchanging the expert on an otherwise-optimal path is always
    /// flagged: the report cannot come back clean and the deviation
    /// simulator cannot certify obedience.
    #[test]
    fn tampered_payments_are_flagged((a, b, w0, d) in family()) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let opt = solve_optimal(&env, &cfg).unwrap();
        let mut path = opt.path.clone();
        prop_assume!(path.p[1] > 1e-9);
        path.p[1] *= 0.5;
        let report = check_contract(&env, &path, 50, 1e-8).unwrap();
        prop_assert!(report.verdict != Verdict::Implementable);
        prop_assert!(simulate_deviation(&env, &path, Player::Expert, 0, 1e-8) != Some(false));
    }

    /// On the untampered path neither party gains from a one-shot walkout
    /// in any early period.
    #[test]
    fn no_profitable_walkout_on_the_optimal_path((a, b, w0, d) in family()) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let opt = solve_optimal(&env, &cfg).unwrap();
        for t in [0usize, 1, 3] {
            if t <= opt.path.horizon() {
                for player in [Player::Principal, Player::Expert] {
                    prop_assert_eq!(simulate_deviation(&env, &opt.path, player, t, 1e-8), Some(false));
                }
            }
        }
    }

    /// Stationary-tail enumeration collapses to the start level for every
    /// environment in the family, regardless of where the novice starts.
    #[test]
    fn envelope_is_flat_at_the_start_level((a, b, w0, d) in family(), s0 in 0.0f64..0.4) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig { s0, ..SolverConfig::coarse() };
        let grid = GridSpec::new(5, 3).unwrap();
        let envelope = enumerate_envelope(&env, &grid, &cfg).unwrap();
        prop_assert_eq!(envelope, vec![s0; 4]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Retirement contracts from the shooting solver train all the way to
    /// full knowledge, satisfy the stage equations they were built from,
    /// and pass the finite-horizon constraint check.
    #[test]
    fn retirement_solution_verifies(
        (a, b, w0, d) in family(),
        c in 0.3f64..1.5,
        k in 2usize..4,
    ) {
        let env = build(a, b, w0, d);
        let env_r = retirement(&env, k, c);
        let cfg = SolverConfig::coarse();
        let rc = solve_retirement(&env_r, &cfg).unwrap();
        prop_assert_eq!(rc.s.len(), k + 1);
        prop_assert_eq!(rc.s[k], 1.0);
        for t in 1..k {
            prop_assert!(rc.s[t] >= rc.s[t - 1] - 1e-12);
            let geo = |n: i32| (1.0 - d.powi(n)) / (1.0 - d);
            let a_coef = d * geo((k - t - 1) as i32);
            let b_coef = d.powi((k - 1 - t) as i32);
            let rhs = geo((k - t) as i32) * (env.w(rc.s[t - 1]) - env.w(rc.s[t]));
            let lhs = a_coef * (env.pi(rc.s[t + 1]) - env.pi(rc.s[t]))
                + b_coef * (env_r.cost(rc.s[t]) - env_r.cost(rc.s[t + 1]));
            prop_assert!((lhs - rhs).abs() <= 1e-6, "stage residual {:e} at t={t}", lhs - rhs);
        }
        let report = check_retirement_contract(&env_r, &rc, 1e-8).unwrap();
        prop_assert!(report.feasibility_ok);
        prop_assert_eq!(report.verdict, Verdict::Implementable);
    }

    /// In the two-period problem a steeper catch-up cost is a better
    /// commitment device: the first transfer and the profit both rise.
    #[test]
    fn steeper_catch_up_costs_help_the_principal(
        (a, b, w0, d) in family(),
        c in 0.3f64..1.5,
    ) {
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let base = solve_retirement(&retirement(&env, 2, c), &cfg).unwrap();
        let steep = solve_retirement(
            &retirement(&env, 2, c).with_cost_scale(2.0).unwrap(),
            &cfg,
        )
        .unwrap();
        prop_assert!(steep.s[1] >= base.s[1] - 1e-9);
        prop_assert!(steep.pi0_r >= base.pi0_r - 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// For the polynomial family the full-training threshold has the closed
    /// form `2b / a` (the discount factor at which the level map's vertex
    /// leaves the unit interval), and training is profitable at every
    /// discount factor, so the lower threshold sits at the convention value.
    #[test]
    fn thresholds_match_the_family_closed_form((a, b, w0, d) in family()) {
        use gradual_core::delta_thresholds;
        let env = build(a, b, w0, d);
        let cfg = SolverConfig::coarse();
        let (lo, hi) = delta_thresholds(&env, 1e-4, &cfg);
        prop_assert_eq!(lo, 0.0);
        prop_assert!((hi - 2.0 * b / a).abs() <= 2e-4, "hi={hi}, closed form={}", 2.0 * b / a);
    }
}
