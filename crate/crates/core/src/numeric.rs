//! Low-level search primitives shared by the solvers.

/// `i`-th point of an equally spaced grid of `n >= 2` points on `[lo, hi]`.
pub(crate) fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Index of the first maximal element (ties resolve to the smallest index).
pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Vertex abscissa of the parabola through three equally spaced samples
/// `(x1 - h, y0)`, `(x1, y1)`, `(x1 + h, y2)`.  Returns `None` when the fit
/// is not strictly concave, in which case no interior peak is implied.
pub(crate) fn parabola_vertex(x1: f64, h: f64, y0: f64, y1: f64, y2: f64) -> Option<f64> {
    let curvature = y0 - 2.0 * y1 + y2;
    if !(curvature < 0.0) {
        return None;
    }
    Some(x1 + 0.5 * h * (y0 - y2) / curvature)
}

/// Values of `f` on an equally spaced grid of `n` points over `[lo, hi]`.
pub(crate) fn scan_values(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| f(grid_point(lo, hi, i, n))).collect()
}

/// Parabolic polish of the cell around grid index `j` of a previous scan.
/// Returns the polished `(argmax, max)`; falls back to the grid point when
/// the local fit is not concave or its vertex leaves the cell.
pub(crate) fn polish_max(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
    values: &[f64],
    j: usize,
) -> (f64, f64) {
    let mut best_x = grid_point(lo, hi, j, n);
    let mut best_v = values[j];
    // Fit through the three points around the winner; at either edge use the
    // one-sided triple so an off-grid peak just inside the boundary is still
    // caught.
    let i0 = j.clamp(1, n - 2) - 1;
    let h = (hi - lo) / (n - 1) as f64;
    if let Some(x) = parabola_vertex(
        grid_point(lo, hi, i0 + 1, n),
        h,
        values[i0],
        values[i0 + 1],
        values[i0 + 2],
    ) {
        let left = grid_point(lo, hi, i0, n);
        let right = grid_point(lo, hi, i0 + 2, n);
        if x >= left && x <= right {
            let x = x.clamp(lo, hi);
            let v = f(x);
            if v >= best_v {
                best_x = x;
                best_v = v;
            }
        }
    }
    (best_x, best_v)
}

/// Maximum of `f` on `[lo, hi]`: dense scan of `n` points, then a parabolic
/// polish of the winning cell.  Returns `(argmax, max, grid_index)` where
/// `grid_index` is the first grid index attaining the grid maximum.
pub(crate) fn refined_max(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
) -> (f64, f64, usize) {
    let n = n.max(3);
    let values = scan_values(&f, lo, hi, n);
    let j = argmax_first(&values);
    let (best_x, best_v) = polish_max(&f, lo, hi, n, &values, j);
    (best_x, best_v, j)
}

/// Boundary of a predicate that is false at `lo` and true at `hi`: shrinks
/// the bracket to `tol` and returns the true-side end.
pub(crate) fn bisect_boundary(pred: impl Fn(f64) -> bool, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Root of a continuous `f` with `f(lo) <= 0 <= f(hi)` or the reverse sign
/// arrangement, by bisection to residual `eps` (at most `max_iter` steps).
pub(crate) fn bisect_root(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    eps: f64,
    max_iter: usize,
) -> f64 {
    let rising = f(hi) >= f(lo);
    let (mut lo, mut hi) = (lo, hi);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        mid = 0.5 * (lo + hi);
        let val = f(mid);
        if val.abs() <= eps {
            return mid;
        }
        if (val < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

/// Discounted sum of `n` ones: `1 + d + ... + d^(n-1)`.
pub(crate) fn geometric(d: f64, n: usize) -> f64 {
    (1.0 - d.powi(n as i32)) / (1.0 - d)
}
