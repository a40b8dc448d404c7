use crate::{Error, Result};

/// Settings for [`adaptive_simpson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSimpson {
    /// Absolute tolerance on the whole integral.
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_depth: 48,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

/// Integrates `f` over `[a, b]` with recursive Simpson refinement and
/// Richardson correction.
///
/// The tolerance is halved at each split so the accumulated estimate stays
/// under `cfg.abs_tol`. Mirror-symmetric intervals are refined symmetrically,
/// so exactly odd integrands integrate to exactly zero.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: AdaptiveSimpson) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut worst = 0.0_f64;
    let value = refine(
        &f,
        Panel { a, b, fa, fm, fb, whole },
        cfg.abs_tol,
        cfg.max_depth,
        &mut worst,
    );
    if worst > 0.0 {
        return Err(Error::Quadrature {
            achieved: worst,
            requested: cfg.abs_tol,
        });
    }
    if !value.is_finite() {
        return Err(Error::Quadrature {
            achieved: f64::INFINITY,
            requested: cfg.abs_tol,
        });
    }
    Ok(value)
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32, unconverged: &mut f64) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    let right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    let delta = left + right - p.whole;
    if libm::fabs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *unconverged += libm::fabs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    let l = refine(
        f,
        Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left },
        0.5 * tol,
        depth - 1,
        unconverged,
    );
    let r = refine(
        f,
        Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right },
        0.5 * tol,
        depth - 1,
        unconverged,
    );
    l + r
}
