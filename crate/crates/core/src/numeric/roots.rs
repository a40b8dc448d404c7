use alloc::format;

use crate::{Error, Result};

/// Settings for [`bisect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Stop once the bracket width falls below `rel_tol * |midpoint|`.
    pub rel_tol: f64,
    /// Hard cap on halvings.
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[lo, hi]` by bisection. The endpoints must bracket
/// a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, cfg: Bisection) -> Result<f64> {
    if lo > hi {
        core::mem::swap(&mut lo, &mut hi);
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::Solver(format!("no sign change in bracket [{lo:e}, {hi:e}]")));
    }
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= cfg.rel_tol * libm::fabs(mid) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Solver(format!(
        "bisection did not converge in {} iterations (bracket [{lo:e}, {hi:e}])",
        cfg.max_iter
    )))
}
