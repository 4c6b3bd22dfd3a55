//! Contract data carried between the solvers, the verifier, and the CLI.

use crate::error::{Error, Result};

/// An infinite-horizon contract, stored as a finite knowledge prefix plus
/// the analytic limit the tail converges to.
///
/// `s[t]` is the novice's knowledge entering period `t` (so `s[0]` is the
/// starting level) and `p[t]` is the payment in period `t`.  Beyond the
/// prefix the knowledge path is nondecreasing and approaches `s_limit`;
/// payments beyond the prefix follow the frontloading convention, so they
/// total at most `(w(s_T) - w(s_limit)) / (1 - delta)` in period-`T+1`
/// value.  `truncated` records that the prefix was cut by the period cap
/// rather than by step-size convergence.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractPath {
    pub s: Vec<f64>,
    pub p: Vec<f64>,
    pub s_limit: f64,
    pub truncated: bool,
}

impl ContractPath {
    /// Structural construction: lengths must match, entries must be finite,
    /// and the limit may not sit below the last prefix level by more than
    /// rounding (it is clamped up to that level otherwise).
    pub fn new(s: Vec<f64>, p: Vec<f64>, s_limit: f64, truncated: bool) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::MalformedContract("knowledge prefix is empty".into()));
        }
        if s.len() != p.len() {
            return Err(Error::MalformedContract(format!(
                "{} knowledge levels but {} payments",
                s.len(),
                p.len()
            )));
        }
        if s.iter().chain(p.iter()).any(|x| !x.is_finite()) || !s_limit.is_finite() {
            return Err(Error::MalformedContract("non-finite entry".into()));
        }
        let last = *s.last().unwrap();
        if s_limit < last - 1e-9 {
            return Err(Error::MalformedContract(format!(
                "limit {s_limit} sits below the last prefix level {last}"
            )));
        }
        Ok(ContractPath { s, p, s_limit: s_limit.max(last), truncated })
    }

    /// A contract that never trains or pays: knowledge stays at `s0`.
    pub fn constant(s0: f64) -> Self {
        ContractPath { s: vec![s0], p: vec![0.0], s_limit: s0, truncated: false }
    }

    /// Index of the last prefix period.
    pub fn horizon(&self) -> usize {
        self.s.len() - 1
    }

    /// Training increments `x[t] = s[t+1] - s[t]` along the prefix.
    pub fn steps(&self) -> Vec<f64> {
        self.s.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Solution of the profit-maximization problem over self-enforcing
/// contracts, together with the scalars that characterize it.
#[derive(Debug, Clone)]
pub struct OptimalContract {
    pub path: ContractPath,
    /// Smallest maximizer of `delta * pi + w` on the knowledge interval.
    pub sbar_star: f64,
    /// First-period knowledge gift `s[1]`.
    pub s1_star: f64,
    /// Maximum of `delta * pi + w`.
    pub m_star: f64,
    /// Principal's value at the start of the relationship.
    pub pi0: f64,
    /// Expert's value at the start of the relationship.
    pub w0: f64,
    /// Whether no knowledge is ever transferred.
    pub trivial: bool,
}

/// One efficient division of surplus, indexed by the time-zero payment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub p0: f64,
    pub pi0: f64,
    pub w0: f64,
}
