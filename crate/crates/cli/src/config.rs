//! JSON run-configuration schema, validation, and canonical form.
//!
//! A configuration names a command, describes the payoff environment, and
//! optionally overrides solver knobs or supplies command-specific sections.
//! Parsing fills defaults, rejects unknown keys, and reports the offending
//! key by name.  Serializing a parsed specification yields the canonical
//! form, which is a fixpoint: parsing it back and serializing again
//! reproduces the same bytes.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use gradual_core::{
    make_apprenticeship_env, make_bertrand_env, make_cournot_env, Direction, MonotoneFn,
    PayoffEnv, RetirementEnv, SolverConfig,
};

use crate::Failure;

/// Parse, validate, and default-fill a run configuration.
pub fn parse_config(text: &str) -> Result<RunSpec, Failure> {
    let spec: RunSpec = serde_json::from_str(text).map_err(|e| {
        let class = if e.is_syntax() || e.is_eof() { "parse" } else { "schema" };
        Failure::config(format!("{class} error in run configuration: {e}"))
    })?;
    spec.validate()?;
    Ok(spec)
}

/// A full run specification: one command plus its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub command: CommandName,
    pub env: EnvSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retire: Option<RetireSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<FrontierSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

/// The seven supported commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Solve,
    Retire,
    Pareto,
    SweepDelta,
    SweepCost,
    Verify,
    Oracle,
}

impl CommandName {
    pub fn label(self) -> &'static str {
        match self {
            CommandName::Solve => "solve",
            CommandName::Retire => "retire",
            CommandName::Pareto => "pareto",
            CommandName::SweepDelta => "sweep-delta",
            CommandName::SweepCost => "sweep-cost",
            CommandName::Verify => "verify",
            CommandName::Oracle => "oracle",
        }
    }
}

/// Named payoff-function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Polynomial,
    Apprenticeship,
    Cournot,
    Bertrand,
    Custom,
}

impl FamilyName {
    fn label(self) -> &'static str {
        match self {
            FamilyName::Polynomial => "polynomial",
            FamilyName::Apprenticeship => "apprenticeship",
            FamilyName::Cournot => "cournot",
            FamilyName::Bertrand => "bertrand",
            FamilyName::Custom => "custom",
        }
    }
}

/// Payoff-environment descriptor: a family name plus its parameter fields.
///
/// Each family uses a fixed subset of the optional keys; anything else
/// present is rejected with a message naming the key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSpec {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<FnSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<FnSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<FnSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub delta: f64,
}

impl EnvSpec {
    /// Check that exactly the family's parameter keys are present.
    fn validate(&self) -> Result<(), Failure> {
        let fam = self.family.label();
        let needs: &[&str] = match self.family {
            FamilyName::Polynomial | FamilyName::Custom => &["pi", "w", "v"],
            FamilyName::Apprenticeship => &["p", "q"],
            FamilyName::Cournot => &["a", "beta"],
            FamilyName::Bertrand => &["a", "gamma"],
        };
        let have = [
            ("pi", self.pi.is_some()),
            ("w", self.w.is_some()),
            ("v", self.v.is_some()),
            ("p", self.p.is_some()),
            ("q", self.q.is_some()),
            ("a", self.a.is_some()),
            ("beta", self.beta.is_some()),
            ("gamma", self.gamma.is_some()),
        ];
        for (key, present) in have {
            let required = needs.contains(&key);
            if required && !present {
                return Err(Failure::config(format!(
                    "config key \"{key}\" is required for env family \"{fam}\""
                )));
            }
            if !required && present {
                return Err(Failure::config(format!(
                    "config key \"{key}\" does not apply to env family \"{fam}\""
                )));
            }
        }
        if self.family == FamilyName::Polynomial {
            for (key, f) in [("pi", &self.pi), ("w", &self.w), ("v", &self.v)] {
                if !matches!(f, Some(FnSpec::Coeffs(_))) {
                    return Err(Failure::config(format!(
                        "config key \"{key}\" must be a coefficient array for env family \
                         \"polynomial\" (use family \"custom\" for other shapes)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Build the payoff environment this descriptor names.
    pub fn build(&self) -> Result<PayoffEnv, Failure> {
        match self.family {
            FamilyName::Polynomial | FamilyName::Custom => {
                let part = |f: &Option<FnSpec>, dir| {
                    f.as_ref()
                        .expect("presence was validated at parse time")
                        .build(dir)
                        .map_err(Failure::from_core)
                };
                let pi = part(&self.pi, Direction::Increasing)?;
                let w = part(&self.w, Direction::Decreasing)?;
                let v = part(&self.v, Direction::Increasing)?;
                PayoffEnv::new(pi, w, v, self.delta).map_err(Failure::from_core)
            }
            FamilyName::Apprenticeship => {
                make_apprenticeship_env(self.p.unwrap(), self.q.unwrap(), self.delta)
                    .map_err(Failure::from_core)
            }
            FamilyName::Cournot => {
                make_cournot_env(self.a.unwrap(), self.beta.unwrap(), self.delta)
                    .map_err(Failure::from_core)
            }
            FamilyName::Bertrand => {
                make_bertrand_env(self.a.unwrap(), self.gamma.unwrap(), self.delta)
                    .map_err(Failure::from_core)
            }
        }
    }
}

/// A monotone-function descriptor: either a bare coefficient array
/// (polynomial in ascending powers) or a tagged object for the other
/// shapes.  The canonical form of a polynomial is always the bare array.
#[derive(Debug, Clone, PartialEq)]
pub enum FnSpec {
    /// Polynomial coefficients in ascending powers.
    Coeffs(Vec<f64>),
    /// `intercept + slope * s`.
    Affine { intercept: f64, slope: f64 },
    /// Piecewise-linear table on strictly increasing breakpoints.
    Lookup { points: Vec<(f64, f64)> },
}

impl FnSpec {
    /// Realize the descriptor with a declared monotonicity direction.
    pub fn build(&self, direction: Direction) -> Result<MonotoneFn, gradual_core::Error> {
        match self {
            FnSpec::Coeffs(c) => MonotoneFn::polynomial(c.clone(), direction),
            FnSpec::Affine { intercept, slope } => {
                MonotoneFn::affine(*intercept, *slope, direction)
            }
            FnSpec::Lookup { points } => MonotoneFn::lookup(points.clone(), direction),
        }
    }
}

impl Serialize for FnSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            FnSpec::Coeffs(c) => c.serialize(ser),
            FnSpec::Affine { intercept, slope } => {
                let mut map = serde_json::Map::new();
                map.insert("kind".into(), "affine".into());
                map.insert("intercept".into(), (*intercept).into());
                map.insert("slope".into(), (*slope).into());
                serde_json::Value::Object(map).serialize(ser)
            }
            FnSpec::Lookup { points } => {
                let mut map = serde_json::Map::new();
                map.insert("kind".into(), "lookup".into());
                map.insert(
                    "points".into(),
                    serde_json::to_value(points).map_err(serde::ser::Error::custom)?,
                );
                serde_json::Value::Object(map).serialize(ser)
            }
        }
    }
}

impl<'de> Deserialize<'de> for FnSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(de)?;
        match value {
            serde_json::Value::Array(_) => {
                let coeffs: Vec<f64> = serde_json::from_value(value).map_err(D::Error::custom)?;
                Ok(FnSpec::Coeffs(coeffs))
            }
            serde_json::Value::Object(map) => {
                let kind = map
                    .get("kind")
                    .and_then(|k| k.as_str())
                    .ok_or_else(|| D::Error::custom("function object needs a string \"kind\""))?
                    .to_string();
                let allowed: &[&str] = match kind.as_str() {
                    "polynomial" => &["kind", "coeffs"],
                    "affine" => &["kind", "intercept", "slope"],
                    "lookup" => &["kind", "points"],
                    other => {
                        return Err(D::Error::custom(format!(
                            "unknown function kind \"{other}\" \
                             (expected polynomial, affine, or lookup)"
                        )))
                    }
                };
                if let Some(bad) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                    return Err(D::Error::custom(format!(
                        "unknown key \"{bad}\" in {kind} function object"
                    )));
                }
                let field = |name: &str| {
                    map.get(name).cloned().ok_or_else(|| {
                        D::Error::custom(format!("{kind} function object is missing \"{name}\""))
                    })
                };
                match kind.as_str() {
                    "polynomial" => Ok(FnSpec::Coeffs(
                        serde_json::from_value(field("coeffs")?).map_err(D::Error::custom)?,
                    )),
                    "affine" => Ok(FnSpec::Affine {
                        intercept: serde_json::from_value(field("intercept")?)
                            .map_err(D::Error::custom)?,
                        slope: serde_json::from_value(field("slope")?)
                            .map_err(D::Error::custom)?,
                    }),
                    _ => Ok(FnSpec::Lookup {
                        points: serde_json::from_value(field("points")?)
                            .map_err(D::Error::custom)?,
                    }),
                }
            }
            _ => Err(D::Error::custom(
                "expected a coefficient array or a function object",
            )),
        }
    }
}

/// Finite-horizon section: terminal period, catch-up cost, optional scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetireSpec {
    /// Retirement period: the expert trains in periods `1..K` and the
    /// novice reaches full knowledge at `K`.
    #[serde(rename = "K")]
    pub k: usize,
    /// Catch-up cost as a function of the novice's knowledge; must be
    /// weakly decreasing and vanish at full knowledge.
    pub cost: FnSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_scale: Option<f64>,
}

impl RetireSpec {
    /// Build the finite-horizon environment over a base environment.
    pub fn build(&self, base: &PayoffEnv) -> Result<RetirementEnv, Failure> {
        let cost = self
            .cost
            .build(Direction::Decreasing)
            .map_err(Failure::from_core)?;
        let env_r =
            RetirementEnv::new(base.clone(), self.k, cost).map_err(Failure::from_core)?;
        match self.cost_scale {
            Some(scale) => env_r.with_cost_scale(scale).map_err(Failure::from_core),
            None => Ok(env_r),
        }
    }
}

/// Optional overrides for the numerical knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shoot_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_root: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_val: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_periods: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bisect_max_iter: Option<usize>,
    /// Enumeration budget for the oracle.
    #[serde(default, rename = "cap", skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
}

impl SolverSpec {
    fn validate(&self) -> Result<(), Failure> {
        if let Some(s0) = self.s0 {
            if !(0.0..1.0).contains(&s0) || !s0.is_finite() {
                return Err(Failure::config(format!(
                    "config key \"s0\" must lie in [0, 1), got {s0}"
                )));
            }
        }
        for (key, value) in [
            ("eps_step", self.eps_step),
            ("eps_root", self.eps_root),
            ("eps_val", self.eps_val),
        ] {
            if let Some(x) = value {
                if !(x > 0.0) || !x.is_finite() {
                    return Err(Failure::config(format!(
                        "config key \"{key}\" must be a positive number, got {x}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Apply the overrides on top of a base configuration.
    pub fn apply(&self, cfg: &mut SolverConfig) {
        if let Some(x) = self.s0 {
            cfg.s0 = x;
        }
        if let Some(n) = self.scan_points {
            cfg.scan_points = n;
        }
        if let Some(n) = self.shoot_points {
            cfg.shoot_points = n;
        }
        if let Some(x) = self.eps_step {
            cfg.eps_step = x;
        }
        if let Some(x) = self.eps_root {
            cfg.eps_root = x;
        }
        if let Some(x) = self.eps_val {
            cfg.eps_val = x;
        }
        if let Some(n) = self.max_periods {
            cfg.max_periods = n;
        }
        if let Some(n) = self.bisect_max_iter {
            cfg.bisect_max_iter = n;
        }
        if let Some(n) = self.cap {
            cfg.enum_cap = n;
        }
    }
}

/// Welfare-frontier resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierSpec {
    #[serde(default = "default_frontier_points")]
    pub points: usize,
}

fn default_frontier_points() -> usize {
    101
}

/// Parameter lists for the sweep commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
}

/// Contract source and tolerances for the verify command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    /// CSV file with columns `t,s_t,p_t`; mutually exclusive with the
    /// inline `s`/`p` arrays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contract: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    /// Long-run level the stored prefix approaches; defaults to its last
    /// entry (a contract that stays put after the prefix ends).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_limit: Option<f64>,
    /// Whether the prefix was cut short rather than converged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
    #[serde(default = "default_verify_tol")]
    pub tol: f64,
    /// Last period whose constraints are checked explicitly.
    #[serde(default = "default_verify_horizon")]
    pub horizon: usize,
}

fn default_verify_tol() -> f64 {
    1e-8
}

fn default_verify_horizon() -> usize {
    50
}

/// Oracle mode and grid size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub mode: OracleMode,
    /// Number of evenly spaced knowledge levels on the unit interval.
    pub m: usize,
    /// Periods enumerated (the retirement mode must match `retire.K`).
    pub horizon: usize,
}

/// What the enumeration cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Envelope,
    Retirement,
}

/// Artifact location and table format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub prefix: String,
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_format() -> String {
    "csv".to_string()
}

impl RunSpec {
    /// Cross-field validation: env keys, solver ranges, section presence.
    fn validate(&self) -> Result<(), Failure> {
        self.env.validate()?;
        if let Some(solver) = &self.solver {
            solver.validate()?;
        }
        if let Some(out) = &self.output {
            if out.format != "csv" {
                return Err(Failure::config(format!(
                    "config key \"format\" only supports \"csv\", got \"{}\"",
                    out.format
                )));
            }
        }
        if let Some(frontier) = &self.frontier {
            if frontier.points < 2 {
                return Err(Failure::config(format!(
                    "config key \"points\" must be at least 2, got {}",
                    frontier.points
                )));
            }
        }
        if let Some(retire) = &self.retire {
            if retire.k < 2 {
                return Err(Failure::config(format!(
                    "config key \"K\" must be at least 2, got {}",
                    retire.k
                )));
            }
            if let Some(scale) = retire.cost_scale {
                if !(scale > 0.0) || !scale.is_finite() {
                    return Err(Failure::config(format!(
                        "config key \"cost_scale\" must be a positive number, got {scale}"
                    )));
                }
            }
        }
        let needs_retire = matches!(self.command, CommandName::Retire | CommandName::SweepCost)
            || (self.command == CommandName::Oracle
                && self.oracle.as_ref().map_or(false, |o| o.mode == OracleMode::Retirement));
        if needs_retire && self.retire.is_none() {
            return Err(Failure::config(format!(
                "config section \"retire\" (horizon \"K\" and \"cost\") is required for \
                 command \"{}\"",
                self.command.label()
            )));
        }
        match self.command {
            CommandName::SweepDelta => {
                let deltas = self
                    .sweep
                    .as_ref()
                    .and_then(|s| s.deltas.as_ref())
                    .ok_or_else(|| {
                        Failure::config(
                            "config key \"deltas\" (under \"sweep\") is required for command \
                             \"sweep-delta\""
                                .to_string(),
                        )
                    })?;
                if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
                    return Err(Failure::config(
                        "config key \"deltas\" must be a nonempty list of discount factors \
                         strictly between 0 and 1"
                            .to_string(),
                    ));
                }
            }
            CommandName::SweepCost => {
                let lambdas = self
                    .sweep
                    .as_ref()
                    .and_then(|s| s.lambdas.as_ref())
                    .ok_or_else(|| {
                        Failure::config(
                            "config key \"lambdas\" (under \"sweep\") is required for command \
                             \"sweep-cost\""
                                .to_string(),
                        )
                    })?;
                if lambdas.is_empty() || lambdas.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
                    return Err(Failure::config(
                        "config key \"lambdas\" must be a nonempty list of positive scales"
                            .to_string(),
                    ));
                }
            }
            CommandName::Verify => {
                let verify = self.verify.as_ref().ok_or_else(|| {
                    Failure::config(
                        "config section \"verify\" is required for command \"verify\""
                            .to_string(),
                    )
                })?;
                if verify.s.is_some() != verify.p.is_some() {
                    return Err(Failure::config(
                        "config keys \"s\" and \"p\" must be supplied together".to_string(),
                    ));
                }
                match (&verify.contract, &verify.s) {
                    (None, None) => {
                        return Err(Failure::config(
                            "config key \"contract\" or inline keys \"s\" and \"p\" are \
                             required for command \"verify\""
                                .to_string(),
                        ))
                    }
                    (Some(_), Some(_)) => {
                        return Err(Failure::config(
                            "config keys \"contract\" and \"s\"/\"p\" are mutually exclusive"
                                .to_string(),
                        ))
                    }
                    _ => {}
                }
                if !(verify.tol > 0.0) || !verify.tol.is_finite() {
                    return Err(Failure::config(format!(
                        "config key \"tol\" must be a positive number, got {}",
                        verify.tol
                    )));
                }
            }
            CommandName::Oracle => {
                if self.oracle.is_none() {
                    return Err(Failure::config(
                        "config section \"oracle\" (with \"mode\", \"m\", \"horizon\") is \
                         required for command \"oracle\""
                            .to_string(),
                    ));
                }
            }
            CommandName::Solve | CommandName::Retire | CommandName::Pareto => {}
        }
        Ok(())
    }
}
