//! Quadratic roots and bracketed bisection.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots of `a x^2 + b x + c` given its discriminant, sorted by real part.
///
/// The discriminant is passed in so callers can use an algebraically
/// simplified form that does not cancel near a double root. Real roots use
/// the larger-magnitude root first and recover the other from the product.
pub fn quadratic(a: f64, b: f64, c: f64, disc: f64) -> [Complex64; 2] {
    debug_assert!(a != 0.0);
    let mut roots = if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            [Complex64::new(0.0, 0.0); 2]
        } else {
            [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
        }
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        [Complex64::new(re, -im), Complex64::new(re, im)]
    };
    if (roots[1].re, roots[1].im) < (roots[0].re, roots[0].im) {
        roots.swap(0, 1);
    }
    roots
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops when `|f(mid)| < ftol` or the bracket is narrower than `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, ftol: f64, xtol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidParameter {
            name: "bracket",
            reason: format!("no sign change on [{lo}, {hi}]: f = {flo:e}, {fhi:e}"),
        });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < ftol || (hi - lo).abs() < xtol {
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
