//! Bracketing and bisection on a scalar function.

use crate::scalar::Real;

/// Bisects `f` on `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
///
/// Returns `None` when the endpoints do not bracket a sign change.
pub fn bisect<R, F>(f: F, mut lo: R, mut hi: R, x_tol: R, max_iter: usize) -> Option<R>
where
    R: Real,
    F: Fn(R) -> R,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == R::zero() {
        return Some(lo);
    }
    if f_hi == R::zero() {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..max_iter {
        let mid = R::lit(0.5) * (lo + hi);
        if hi - lo <= x_tol {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == R::zero() {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(R::lit(0.5) * (lo + hi))
}

/// Smallest `x` in `(lo, hi]` where `f` first becomes non-negative, located by a
/// uniform scan with `steps` panels followed by bisection inside the first bracket.
pub fn first_nonnegative<R, F>(f: F, lo: R, hi: R, steps: usize, x_tol: R) -> Option<R>
where
    R: Real,
    F: Fn(R) -> R,
{
    let steps = steps.max(1);
    let h = (hi - lo) / R::from_usize(steps).expect("step count fits float");
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for i in 1..=steps {
        let x = if i == steps {
            hi
        } else {
            lo + h * R::from_usize(i).expect("index fits float")
        };
        let fx = f(x);
        if fx >= R::zero() {
            if prev_f >= R::zero() {
                return Some(prev_x);
            }
            return bisect(&f, prev_x, x, x_tol, 200);
        }
        prev_x = x;
        prev_f = fx;
    }
    None
}
