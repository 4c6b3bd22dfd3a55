//! Payoff environments: the primitive functions of the training relationship.
//!
//! An environment bundles the principal's stage payoff `pi`, the expert's
//! stage payoff `w`, the novice's stage payoff `v`, and a discount factor
//! `delta`.  All solvers require `pi`, `v`, and the joint surplus
//! `G = pi + w` to rise strictly with the novice's knowledge while `w`
//! falls strictly; [`validate_assumption_one`] checks those directions on
//! an equally spaced grid.

use crate::error::{Error, Result};
use crate::monotone::{Composite, Direction, MonotoneFn};

/// Strictness tolerance applied to grid differences during validation.
pub const EPS_MONO: f64 = 1e-12;

/// Grid resolution used by the constructors when they self-validate.
pub const DEFAULT_VALIDATION_POINTS: usize = 10_001;

/// One direction breach found during validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Which function failed: `"pi"`, `"w"`, `"v"`, or `"G"`.
    pub constraint: String,
    pub s_lo: f64,
    pub s_hi: f64,
    pub value_lo: f64,
    pub value_hi: f64,
}

/// Outcome of a monotonicity sweep over the validation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

/// Stage payoffs and discounting for the infinite-horizon relationship.
#[derive(Debug, Clone)]
pub struct PayoffEnv {
    pi: MonotoneFn,
    w: MonotoneFn,
    v: MonotoneFn,
    delta: f64,
}

impl PayoffEnv {
    /// Builds an environment and validates it at the default grid
    /// resolution.  The declared directions must be increasing for `pi`
    /// and `v` and decreasing for `w`.
    pub fn new(pi: MonotoneFn, w: MonotoneFn, v: MonotoneFn, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) || !delta.is_finite() {
            return Err(Error::BadDelta(delta));
        }
        if pi.direction() != Direction::Increasing {
            return Err(Error::BadParams("pi must be declared increasing".into()));
        }
        if w.direction() != Direction::Decreasing {
            return Err(Error::BadParams("w must be declared decreasing".into()));
        }
        if v.direction() != Direction::Increasing {
            return Err(Error::BadParams("v must be declared increasing".into()));
        }
        let env = PayoffEnv { pi, w, v, delta };
        let report = validate_assumption_one(&env, DEFAULT_VALIDATION_POINTS);
        if let Some(first) = report.violations.first() {
            return Err(Error::AssumptionViolated {
                constraint: first.constraint.clone(),
                s_lo: first.s_lo,
                s_hi: first.s_hi,
                value_lo: first.value_lo,
                value_hi: first.value_hi,
            });
        }
        Ok(env)
    }

    /// Principal's stage payoff.
    pub fn pi(&self, s: f64) -> f64 {
        self.pi.eval(s)
    }

    /// Expert's stage payoff.
    pub fn w(&self, s: f64) -> f64 {
        self.w.eval(s)
    }

    /// Novice's stage payoff.
    pub fn v(&self, s: f64) -> f64 {
        self.v.eval(s)
    }

    /// Joint surplus of principal and expert, `G(s) = pi(s) + w(s)`.
    pub fn g(&self, s: f64) -> f64 {
        self.pi.eval(s) + self.w.eval(s)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn pi_fn(&self) -> &MonotoneFn {
        &self.pi
    }

    pub fn w_fn(&self) -> &MonotoneFn {
        &self.w
    }

    pub fn v_fn(&self) -> &MonotoneFn {
        &self.v
    }

    /// Same payoffs under a different discount factor.  Monotonicity does
    /// not depend on `delta`, so no re-validation is needed.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) || !delta.is_finite() {
            return Err(Error::BadDelta(delta));
        }
        Ok(PayoffEnv { delta, ..self.clone() })
    }

    /// Preimage of `y` under `pi`, by bisection to a value residual of
    /// `1e-12`.
    pub fn inverse_pi(&self, y: f64) -> Result<f64> {
        self.pi.invert(y, 1e-12, 200)
    }
}

fn check_direction(
    f: &dyn Fn(f64) -> f64,
    name: &str,
    rising: bool,
    n_grid: usize,
    violations: &mut Vec<Violation>,
) {
    let n = n_grid.max(2);
    let mut prev_s = 0.0;
    let mut prev_v = f(0.0);
    for i in 1..n {
        let s = i as f64 / (n - 1) as f64;
        let val = f(s);
        let diff = if rising { val - prev_v } else { prev_v - val };
        if diff <= EPS_MONO {
            violations.push(Violation {
                constraint: name.to_string(),
                s_lo: prev_s,
                s_hi: s,
                value_lo: prev_v,
                value_hi: val,
            });
        }
        prev_s = s;
        prev_v = val;
    }
}

/// Sweeps an equally spaced grid of `n_grid` points and records every pair
/// of adjacent points at which `pi`, `v`, or `G` fails to rise strictly or
/// `w` fails to fall strictly (differences must clear [`EPS_MONO`]).
pub fn validate_assumption_one(env: &PayoffEnv, n_grid: usize) -> ValidationReport {
    let mut violations = Vec::new();
    check_direction(&|s| env.pi(s), "pi", true, n_grid, &mut violations);
    check_direction(&|s| env.w(s), "w", false, n_grid, &mut violations);
    check_direction(&|s| env.v(s), "v", true, n_grid, &mut violations);
    check_direction(&|s| env.g(s), "G", true, n_grid, &mut violations);
    ValidationReport { passed: violations.is_empty(), violations }
}

/// Environment from raw polynomial coefficient lists (ascending powers).
pub fn make_polynomial_env(
    pi: Vec<f64>,
    w: Vec<f64>,
    v: Vec<f64>,
    delta: f64,
) -> Result<PayoffEnv> {
    PayoffEnv::new(
        MonotoneFn::polynomial(pi, Direction::Increasing)?,
        MonotoneFn::polynomial(w, Direction::Decreasing)?,
        MonotoneFn::polynomial(v, Direction::Increasing)?,
        delta,
    )
}

/// Apprenticeship environment: expert and novice split a continuum of
/// tasks inside a firm that pays a piece rate `p` and books revenue `q`
/// per completed task.  Requires `q > 2p > 0`.
pub fn make_apprenticeship_env(p: f64, q: f64, delta: f64) -> Result<PayoffEnv> {
    if !(p > 0.0) || !(q > 2.0 * p) || !p.is_finite() || !q.is_finite() {
        return Err(Error::BadParams(format!(
            "apprenticeship requires q > 2p > 0, got p={p}, q={q}"
        )));
    }
    PayoffEnv::new(
        MonotoneFn::composite(Composite::ApprenticeshipPrincipal { p, q }),
        MonotoneFn::composite(Composite::ApprenticeshipExpert { p, q }),
        MonotoneFn::composite(Composite::ApprenticeshipNovice { p, q }),
        delta,
    )
}

/// Quantity-setting duopoly taxed per unit at rate `beta`, demand
/// intercept `a`.  The novice's unit cost exceeds the expert's by `1 - s`.
/// Requires `a >= 2 + beta` (interior quantities) and `beta >= 1` (rising
/// joint surplus).
pub fn make_cournot_env(a: f64, beta: f64, delta: f64) -> Result<PayoffEnv> {
    if !(beta >= 1.0) || !(a >= 2.0 + beta) || !a.is_finite() || !beta.is_finite() {
        return Err(Error::BadParams(format!(
            "quantity duopoly requires a >= 2 + beta and beta >= 1, got a={a}, beta={beta}"
        )));
    }
    PayoffEnv::new(
        MonotoneFn::composite(Composite::CournotPrincipal { a, beta }),
        MonotoneFn::composite(Composite::CournotExpert { a, beta }),
        MonotoneFn::composite(Composite::CournotNovice { a, beta }),
        delta,
    )
}

/// Differentiated price-setting duopoly with profit tax rate `gamma` and
/// demand intercept `a`.  The novice's quality lags by `1 - s`.  Requires
/// `a >= 2` and `0 <= gamma < 1`.
pub fn make_bertrand_env(a: f64, gamma: f64, delta: f64) -> Result<PayoffEnv> {
    if !(a >= 2.0) || !(0.0..1.0).contains(&gamma) || !a.is_finite() || !gamma.is_finite() {
        return Err(Error::BadParams(format!(
            "price duopoly requires a >= 2 and gamma in [0, 1), got a={a}, gamma={gamma}"
        )));
    }
    PayoffEnv::new(
        MonotoneFn::composite(Composite::BertrandPrincipal { a, gamma }),
        MonotoneFn::composite(Composite::BertrandExpert { a, gamma }),
        MonotoneFn::composite(Composite::BertrandNovice { a, gamma }),
        delta,
    )
}
