//! Golden-section search for the maximum of a unimodal function on an interval.

/// Outcome of a scalar maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    /// Maximizing argument.
    pub argmax: f64,
    /// Function value there.
    pub value: f64,
    /// Bracket reductions performed.
    pub iterations: usize,
    /// Final bracket width.
    pub bracket: f64,
}

// 1/phi
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` over `[lo, hi]` until the bracket is at most `tol` wide.
///
/// Ties keep the lower half of the bracket, so flat objectives resolve toward
/// `lo`. Both endpoints are compared against the interior result at the end,
/// which covers maxima sitting on the boundary.
pub fn maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Maximum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 || (fx == best.1 && x < best.0) {
            best = (x, fx);
        }
    }
    Maximum { argmax: best.0, value: best.1, iterations, bracket: b - a }
}
