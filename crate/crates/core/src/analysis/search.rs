//! Scalar bracketing searches: bisection on a discrete-valued function and
//! golden-section maximisation.

/// Narrows `[lo, hi]` until `hi - lo <= tol`, keeping `f(lo) == at_lo`.
/// Returns the final bracket and the value found at its right end.
pub fn bisect_change<T, F>(mut lo: f64, mut hi: f64, at_lo: &T, tol: f64, f: F) -> (f64, f64, T)
where
    T: PartialEq,
    F: Fn(f64) -> T,
{
    let mut at_hi = f(hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if &v == at_lo {
            lo = mid;
        } else {
            hi = mid;
            at_hi = v;
        }
    }
    (lo, hi, at_hi)
}

/// Root of `f` on a sign-changing bracket, to `tol` in the argument.
/// Non-finite evaluations count as "same side as `lo`".
pub fn bisect_sign<F: Fn(f64) -> f64>(lo: f64, hi: f64, tol: f64, f: F) -> f64 {
    let positive_at_lo = f(lo) > 0.0;
    let (a, b, _) = bisect_change(lo, hi, &positive_at_lo, tol, |x| {
        let v = f(x);
        if v.is_finite() {
            v > 0.0
        } else {
            positive_at_lo
        }
    });
    0.5 * (a + b)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[a, b]`, to `tol` in the
/// argument. Returns `(x, f(x))`; the end points are also compared so that
/// a maximum on the boundary is found.
pub fn golden_section_max<F: Fn(f64) -> f64>(mut a: f64, mut b: f64, tol: f64, f: F) -> (f64, f64) {
    let (a0, b0) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
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
    }
    let x = 0.5 * (a + b);
    let mut best = (x, f(x));
    for e in [a0, b0] {
        if (best.0 - e).abs() <= tol {
            let fe = f(e);
            if fe > best.1 {
                best = (e, fe);
            }
        }
    }
    best
}
