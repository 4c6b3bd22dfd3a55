//! Monotone stage-payoff functions on the unit knowledge interval.
//!
//! Every payoff primitive used by the solvers is a scalar function of the
//! knowledge level `s` in `[0, 1]` together with a declared direction.  The
//! declared direction is what downstream code relies on for bracketing and
//! inversion; [`crate::env::validate_assumption_one`] checks it numerically.

use crate::error::{Error, Result};
use crate::micro;

/// Declared monotonicity direction on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Microfounded closed forms, selectable by role within each environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Composite {
    ApprenticeshipPrincipal { p: f64, q: f64 },
    ApprenticeshipExpert { p: f64, q: f64 },
    ApprenticeshipNovice { p: f64, q: f64 },
    CournotPrincipal { a: f64, beta: f64 },
    CournotExpert { a: f64, beta: f64 },
    CournotNovice { a: f64, beta: f64 },
    BertrandPrincipal { a: f64, gamma: f64 },
    BertrandExpert { a: f64, gamma: f64 },
    BertrandNovice { a: f64, gamma: f64 },
}

impl Composite {
    fn eval(&self, s: f64) -> f64 {
        match *self {
            Composite::ApprenticeshipPrincipal { p, q } => micro::apprenticeship_principal(p, q, s),
            Composite::ApprenticeshipExpert { p, q } => micro::apprenticeship_expert(p, q, s),
            Composite::ApprenticeshipNovice { p, q } => micro::apprenticeship_novice(p, q, s),
            Composite::CournotPrincipal { a, beta } => micro::cournot_principal(a, beta, s),
            Composite::CournotExpert { a, beta } => micro::cournot_expert(a, beta, s),
            Composite::CournotNovice { a, beta } => micro::cournot_novice(a, beta, s),
            Composite::BertrandPrincipal { a, gamma } => micro::bertrand_principal(a, gamma, s),
            Composite::BertrandExpert { a, gamma } => micro::bertrand_expert(a, gamma, s),
            Composite::BertrandNovice { a, gamma } => micro::bertrand_novice(a, gamma, s),
        }
    }

    /// Direction implied by the role: expert payoffs fall in the novice's
    /// knowledge, everything else rises.
    pub fn direction(&self) -> Direction {
        match self {
            Composite::ApprenticeshipExpert { .. }
            | Composite::CournotExpert { .. }
            | Composite::BertrandExpert { .. } => Direction::Decreasing,
            _ => Direction::Increasing,
        }
    }
}

/// Functional form of a [`MonotoneFn`].
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Coefficients in ascending powers: `c[0] + c[1] s + c[2] s^2 + ...`.
    Polynomial(Vec<f64>),
    Affine { intercept: f64, slope: f64 },
    /// Piecewise-linear interpolation through `(x, y)` breakpoints covering
    /// `[0, 1]` with strictly increasing `x`.
    Lookup(Vec<(f64, f64)>),
    Composite(Composite),
}

/// A scalar function on `[0, 1]` with a declared monotonicity direction.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneFn {
    shape: Shape,
    direction: Direction,
}

impl MonotoneFn {
    /// Builds a function after structural checks (finiteness, breakpoint
    /// layout).  Monotonicity itself is validated separately on a grid.
    pub fn new(shape: Shape, direction: Direction) -> Result<Self> {
        match &shape {
            Shape::Polynomial(coeffs) => {
                if coeffs.is_empty() {
                    return Err(Error::BadParams("polynomial needs at least one coefficient".into()));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::BadParams("polynomial coefficients must be finite".into()));
                }
            }
            Shape::Affine { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return Err(Error::BadParams("affine parameters must be finite".into()));
                }
            }
            Shape::Lookup(points) => {
                if points.len() < 2 {
                    return Err(Error::BadParams("lookup table needs at least two breakpoints".into()));
                }
                if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(Error::BadParams("lookup breakpoints must be finite".into()));
                }
                if (points[0].0).abs() > 1e-12 || (points[points.len() - 1].0 - 1.0).abs() > 1e-12 {
                    return Err(Error::BadParams("lookup breakpoints must cover [0, 1]".into()));
                }
                if points.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::BadParams("lookup abscissae must be strictly increasing".into()));
                }
            }
            Shape::Composite(_) => {}
        }
        Ok(MonotoneFn { shape, direction })
    }

    pub fn polynomial(coeffs: Vec<f64>, direction: Direction) -> Result<Self> {
        Self::new(Shape::Polynomial(coeffs), direction)
    }

    pub fn affine(intercept: f64, slope: f64, direction: Direction) -> Result<Self> {
        Self::new(Shape::Affine { intercept, slope }, direction)
    }

    pub fn lookup(points: Vec<(f64, f64)>, direction: Direction) -> Result<Self> {
        Self::new(Shape::Lookup(points), direction)
    }

    pub fn composite(c: Composite) -> Self {
        MonotoneFn { shape: Shape::Composite(c), direction: c.direction() }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Evaluates the function at `s`.
    pub fn eval(&self, s: f64) -> f64 {
        match &self.shape {
            Shape::Polynomial(coeffs) => {
                // Horner's rule.
                coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
            }
            Shape::Affine { intercept, slope } => intercept + slope * s,
            Shape::Lookup(points) => {
                let s = s.clamp(points[0].0, points[points.len() - 1].0);
                let i = match points.partition_point(|(x, _)| *x <= s) {
                    0 => 0,
                    k if k >= points.len() => points.len() - 2,
                    k => k - 1,
                };
                let (x0, y0) = points[i];
                let (x1, y1) = points[i + 1];
                y0 + (y1 - y0) * (s - x0) / (x1 - x0)
            }
            Shape::Composite(c) => c.eval(s),
        }
    }

    /// Range endpoints `(min, max)` over `[0, 1]` implied by the declared
    /// direction.
    pub fn range(&self) -> (f64, f64) {
        let (a, b) = (self.eval(0.0), self.eval(1.0));
        match self.direction {
            Direction::Increasing => (a, b),
            Direction::Decreasing => (b, a),
        }
    }

    /// Inverts the function on `[0, 1]` by bisection, stopping once the
    /// value residual drops below `eps` or after `max_iter` halvings.
    pub fn invert(&self, y: f64, eps: f64, max_iter: usize) -> Result<f64> {
        let (min, max) = self.range();
        // A hair of slack absorbs roundoff at the range endpoints.
        let slack = 1e-12 * (1.0 + y.abs());
        if y < min - slack || y > max + slack {
            return Err(Error::OutOfRange { y, min, max });
        }
        let y = y.clamp(min, max);
        let rising = self.direction == Direction::Increasing;
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..max_iter {
            mid = 0.5 * (lo + hi);
            let val = self.eval(mid);
            if (val - y).abs() <= eps {
                return Ok(mid);
            }
            if (val < y) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(mid)
    }
}
