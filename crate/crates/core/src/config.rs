//! Numerical tolerances and search budgets shared by the solvers.

/// Knobs for every grid scan, bisection, and recursion in the crate.
///
/// The defaults reproduce all reference results; tests that only probe
/// qualitative behaviour shrink `scan_points` and `max_periods` to stay
/// fast.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Novice's knowledge level at the start of the relationship.
    pub s0: f64,
    /// Dense-scan resolution for maximizer and level-crossing searches.
    pub scan_points: usize,
    /// Grid resolution for the terminal-condition root search over `s1`.
    pub shoot_points: usize,
    /// Stop extending a knowledge sequence once increments fall below this.
    pub eps_step: f64,
    /// Value residual accepted when inverting a payoff function.
    pub eps_root: f64,
    /// Plateau half-width for resolving ties among near-maximal values.
    pub eps_val: f64,
    /// Longest knowledge prefix generated before truncation.
    pub max_periods: usize,
    /// Halving budget for every bisection.
    pub bisect_max_iter: usize,
    /// Upper bound on the number of sequences the oracle may enumerate.
    pub enum_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            s0: 0.0,
            scan_points: 100_001,
            shoot_points: 20_001,
            eps_step: 1e-10,
            eps_root: 1e-12,
            eps_val: 1e-11,
            max_periods: 10_000,
            bisect_max_iter: 200,
            enum_cap: 5_000_000,
        }
    }
}

impl SolverConfig {
    /// A cheap profile for property tests and sweeps: coarser scans, shorter
    /// prefixes, same tolerances.
    pub fn coarse() -> Self {
        SolverConfig {
            scan_points: 4_001,
            shoot_points: 2_001,
            max_periods: 400,
            ..SolverConfig::default()
        }
    }
}
