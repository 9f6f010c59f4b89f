//! Bracketed scalar root finding: bisection to a tight bracket followed by a
//! few safeguarded Newton steps. Newton alone is not trusted anywhere near a
//! pole or a flat spot, so every root is located inside a sign-change bracket
//! first.

/// Refine a root of `f` inside a bracket with a sign change. Bisects until
/// the bracket width drops below `width_tol`, then applies up to
/// `newton_steps` Newton corrections from `df`, rejecting any step that
/// leaves the bracket.
pub fn bisect_then_newton(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    width_tol: f64,
    newton_steps: usize,
) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    debug_assert!(
        (f_lo < 0.0) != (f(hi) < 0.0),
        "bisect_then_newton requires a sign change"
    );
    while hi - lo > width_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket exhausted at f64 resolution
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..newton_steps {
        let fx = f(x);
        if fx == 0.0 {
            break;
        }
        let dfx = df(x);
        if dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if !(next > lo && next < hi) {
            break;
        }
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// Scan `[lo, hi]` with `n` equal subintervals and return the subintervals
/// on which `f` changes sign (endpoints with `f == 0` count as a change).
pub fn scan_sign_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let mut brackets = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    if prev_f == 0.0 {
        brackets.push((lo, lo + (hi - lo) / n as f64));
    }
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let fx = f(x);
        // A zero at the left endpoint was already bracketed by the previous
        // interval; count it once.
        if prev_f != 0.0 && (fx == 0.0 || (prev_f < 0.0) != (fx < 0.0)) {
            brackets.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    brackets
}
