//! Closed-form stage payoffs for the three microfounded environments.
//!
//! Each environment describes one period of a training relationship: an
//! expert (knowledge 1) works alongside a novice whose knowledge level is
//! `s`, and a principal collects the residual surplus.  The functions here
//! evaluate the stage payoffs at the unique equilibrium of the within-period
//! game, so they are plain formulas in `s` and the environment parameters.

/// Equilibrium task shares in the apprenticeship environment.
///
/// The expert takes the share `(3 - s)/4` of the task mass and the novice
/// takes `(1 + s)/4`; the two always sum to one.
pub fn apprenticeship_shares(s: f64) -> (f64, f64) {
    ((3.0 - s) / 4.0, (1.0 + s) / 4.0)
}

fn apprenticeship_k(p: f64, q: f64) -> f64 {
    1.0 / (q - p)
}

/// Principal's stage payoff in the apprenticeship environment:
/// `K q (s^2 + 2s + 9) / 16` with `K = 1/(q - p)`.
pub fn apprenticeship_principal(p: f64, q: f64, s: f64) -> f64 {
    apprenticeship_k(p, q) * q * (s * s + 2.0 * s + 9.0) / 16.0
}

/// Expert's stage payoff in the apprenticeship environment:
/// `K p (3 - s)^2 / 32`.
pub fn apprenticeship_expert(p: f64, q: f64, s: f64) -> f64 {
    let a = 3.0 - s;
    apprenticeship_k(p, q) * p * a * a / 32.0
}

/// Novice's stage payoff in the apprenticeship environment:
/// `K p (1 + s)^2 / 32`.
pub fn apprenticeship_novice(p: f64, q: f64, s: f64) -> f64 {
    let a = 1.0 + s;
    apprenticeship_k(p, q) * p * a * a / 32.0
}

/// Equilibrium quantities `(q1, q2)` in the quantity-setting duopoly where
/// the novice carries the unit-cost handicap `1 - s`.
pub fn cournot_quantities(a: f64, beta: f64, s: f64) -> (f64, f64) {
    let gap = 1.0 - s;
    ((a - beta + gap) / 3.0, (a - beta - 2.0 * gap) / 3.0)
}

/// Total equilibrium output in the quantity-setting duopoly.
pub fn cournot_total_output(a: f64, beta: f64, s: f64) -> f64 {
    (2.0 * (a - beta) - (1.0 - s)) / 3.0
}

/// Per-unit tax revenue `beta * Q` collected by the principal.
pub fn cournot_tax(a: f64, beta: f64, s: f64) -> f64 {
    beta * cournot_total_output(a, beta, s)
}

/// Consumer surplus `Q^2 / 2` under the linear inverse demand.
pub fn cournot_consumer_surplus(a: f64, beta: f64, s: f64) -> f64 {
    let q = cournot_total_output(a, beta, s);
    q * q / 2.0
}

/// Principal's stage payoff (tax revenue plus consumer surplus).
pub fn cournot_principal(a: f64, beta: f64, s: f64) -> f64 {
    cournot_tax(a, beta, s) + cournot_consumer_surplus(a, beta, s)
}

/// Expert's stage profit `q1^2`.
pub fn cournot_expert(a: f64, beta: f64, s: f64) -> f64 {
    let (q1, _) = cournot_quantities(a, beta, s);
    q1 * q1
}

/// Novice's stage profit `q2^2`.
pub fn cournot_novice(a: f64, beta: f64, s: f64) -> f64 {
    let (_, q2) = cournot_quantities(a, beta, s);
    q2 * q2
}

/// Equilibrium prices `(p1, p2)` in the differentiated price-setting duopoly
/// where the novice's quality lags by `1 - s`.
pub fn bertrand_prices(a: f64, s: f64) -> (f64, f64) {
    let gap = 1.0 - s;
    ((5.0 * a + 2.0 * gap) / 15.0, (5.0 * a - 7.0 * gap) / 15.0)
}

/// Income-tax revenue collected by the principal at rate `gamma`.
pub fn bertrand_tax(a: f64, gamma: f64, s: f64) -> f64 {
    let gap = 1.0 - s;
    let e = 5.0 * a + 2.0 * gap;
    let n = 5.0 * a - 7.0 * gap;
    2.0 * gamma * (e * e + n * n) / 225.0
}

/// Consumer surplus in the differentiated price-setting duopoly.
pub fn bertrand_consumer_surplus(a: f64, s: f64) -> f64 {
    let gap = 1.0 - s;
    (100.0 * a * a - 100.0 * a * gap + 52.0 * gap * gap) / 225.0
}

/// Principal's stage payoff (tax revenue plus consumer surplus).
pub fn bertrand_principal(a: f64, gamma: f64, s: f64) -> f64 {
    bertrand_tax(a, gamma, s) + bertrand_consumer_surplus(a, s)
}

/// Expert's after-tax stage profit `2 (1 - gamma) (5A + 2(1 - s))^2 / 225`.
pub fn bertrand_expert(a: f64, gamma: f64, s: f64) -> f64 {
    let e = 5.0 * a + 2.0 * (1.0 - s);
    2.0 * (1.0 - gamma) * e * e / 225.0
}

/// Novice's after-tax stage profit `2 (1 - gamma) (5A - 7(1 - s))^2 / 225`.
pub fn bertrand_novice(a: f64, gamma: f64, s: f64) -> f64 {
    let n = 5.0 * a - 7.0 * (1.0 - s);
    2.0 * (1.0 - gamma) * n * n / 225.0
}
