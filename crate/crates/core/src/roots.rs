//! Scalar root bracketing helpers shared by the analytic solvers.

use crate::error::{bail, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Bisection on `[a, b]`, which must carry a sign change of `f`.
///
/// Stops once the bracket is narrower than `rel_tol` relative to its
/// magnitude (absolute `rel_tol` near zero).
pub(crate) fn bisect<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        bail!(Bracket, "no sign change on [{lo}, {hi}] (f = {flo}, {fhi})");
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A few Newton steps from `x`, kept only while they stay inside `[a, b]`
/// and reduce `|f|`.
pub(crate) fn newton_polish<F, D>(f: F, df: D, mut x: f64, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut fx = f(x);
    for _ in 0..4 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let fn_ = f(next);
        if fn_.abs() > fx.abs() {
            break;
        }
        x = next;
        fx = fn_;
        if fx == 0.0 {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        let p = newton_polish(|x| x * x - 2.0, |x| 2.0 * x, r, 0.0, 2.0);
        assert!((p - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }
}
