//! Optical-scan ingestion, Gaussian waist fitting and transverse-mode
//! classification.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::beam::{BeamParams, ComplexFieldMap};
use crate::material::AnisotropyProfile;
use crate::numeric::{invert, solve};
use crate::{Error, Result};

/// Default spurious-mode threshold on the dominant projection fraction.
pub const SPURIOUS_THRESHOLD: f64 = 0.6;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = libm::fmod(phase, two_pi);
    if r <= -PI {
        r += two_pi;
    } else if r > PI {
        r -= two_pi;
    }
    r
}

/// Scanned optical image on a rectilinear grid, row-major with `y` outer
/// and `x` inner.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanImage {
    x_grid: Vec<f64>,
    y_grid: Vec<f64>,
    amplitude: Vec<f64>,
    phase: Vec<f64>,
    dc_power: Option<Vec<f64>>,
}

impl ScanImage {
    /// Validates dimensions and amplitude sign, and wraps the phase.
    pub fn new(
        x_grid: Vec<f64>,
        y_grid: Vec<f64>,
        amplitude: Vec<f64>,
        phase: Vec<f64>,
        dc_power: Option<Vec<f64>>,
    ) -> Result<Self> {
        if x_grid.is_empty() || y_grid.is_empty() {
            return Err(Error::InvariantViolation("scan grids must be non-empty".into()));
        }
        for (name, g) in [("x", &x_grid), ("y", &y_grid)] {
            if g.iter().any(|v| !v.is_finite()) || g.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvariantViolation(format!("{name} grid not strictly increasing")));
            }
        }
        let n = x_grid.len() * y_grid.len();
        let check = |name: &str, len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(Error::InvariantViolation(format!(
                    "{name} has {len} samples for a {}x{} grid",
                    y_grid.len(),
                    x_grid.len()
                )))
            }
        };
        check("amplitude", amplitude.len())?;
        check("phase", phase.len())?;
        if let Some(dc) = &dc_power {
            check("dc power", dc.len())?;
        }
        if amplitude.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
            return Err(Error::InvariantViolation("amplitude must be finite and non-negative".into()));
        }
        if phase.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvariantViolation("phase must be finite".into()));
        }
        let phase = phase.into_iter().map(wrap_phase).collect();
        Ok(Self {
            x_grid,
            y_grid,
            amplitude,
            phase,
            dc_power,
        })
    }

    /// Image of a complex field: amplitude `|u|`, phase `arg u`.
    pub fn from_field(field: &ComplexFieldMap) -> Result<Self> {
        Self::new(
            field.x_grid().to_vec(),
            field.y_grid().to_vec(),
            field.values().iter().map(|v| v.norm()).collect(),
            field.values().iter().map(|v| v.arg()).collect(),
            None,
        )
    }

    /// Propagation-axis samples (m).
    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    /// Transverse samples (m).
    pub fn y_grid(&self) -> &[f64] {
        &self.y_grid
    }

    /// Amplitudes, row-major.
    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    /// Phases in `(-π, π]`, row-major.
    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// Optional DC optical power (W), row-major.
    pub fn dc_power(&self) -> Option<&[f64]> {
        self.dc_power.as_deref()
    }

    fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.x_grid.len() + ix
    }

    /// Column index whose `x` is nearest to `x`.
    pub fn nearest_column(&self, x: f64) -> usize {
        let mut best = 0;
        for (i, v) in self.x_grid.iter().enumerate() {
            if libm::fabs(v - x) < libm::fabs(self.x_grid[best] - x) {
                best = i;
            }
        }
        best
    }

    /// Amplitude cross-section at column `ix`.
    pub fn amplitude_column(&self, ix: usize) -> Vec<f64> {
        (0..self.y_grid.len()).map(|iy| self.amplitude[self.index(ix, iy)]).collect()
    }

    /// Complex signal `amplitude · e^{iφ}` at column `ix`.
    pub fn signal_column(&self, ix: usize) -> Vec<Complex64> {
        (0..self.y_grid.len())
            .map(|iy| {
                let k = self.index(ix, iy);
                Complex64::from_polar(self.amplitude[k], self.phase[k])
            })
            .collect()
    }
}

/// Result of a Gaussian cross-section fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaistFit {
    /// Estimated `1/e` amplitude half-width (m).
    pub w0_est: f64,
    /// One-sigma uncertainty of `w0_est` (m).
    pub w0_err: f64,
    /// Fitted center (m).
    pub center_y: f64,
    /// Fitted peak amplitude above the offset.
    pub amplitude_scale: f64,
    /// Fitted baseline.
    pub offset: f64,
    /// Root-mean-square residual.
    pub residual_rms: f64,
    /// Levenberg-Marquardt iterations used.
    pub iterations: usize,
    /// `x` of the column actually fitted (m).
    pub x_slice: f64,
    /// Set when the largest sample sits on the first or last row.
    pub peak_at_edge: bool,
}

/// Iteration limits for [`fit_waist_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Maximum iterations before giving up.
    pub max_iterations: usize,
    /// Convergence threshold on the relative parameter step.
    pub step_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            step_tol: 1e-13,
        }
    }
}

/// Fits `A exp(-(y-y0)²/w²) + b` to the amplitude column nearest `x_slice`.
pub fn fit_waist(img: &ScanImage, x_slice: f64) -> Result<WaistFit> {
    fit_waist_with(img, x_slice, &FitOptions::default())
}

/// [`fit_waist`] with explicit iteration limits.
pub fn fit_waist_with(img: &ScanImage, x_slice: f64, opts: &FitOptions) -> Result<WaistFit> {
    let xs = img.x_grid();
    let tol = 1e-9 * (xs[xs.len() - 1] - xs[0]).max(libm::fabs(xs[0])).max(1e-30);
    if !(x_slice >= xs[0] - tol && x_slice <= xs[xs.len() - 1] + tol) {
        return Err(Error::OutOfRange {
            quantity: "x_slice",
            value: x_slice,
            min: xs[0],
            max: xs[xs.len() - 1],
        });
    }
    let ix = img.nearest_column(x_slice);
    let mut fit = fit_gaussian(img.y_grid(), &img.amplitude_column(ix), opts)?;
    fit.x_slice = xs[ix];
    Ok(fit)
}

fn percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[libm::floor(q * (v.len() - 1) as f64) as usize]
}

fn initial_guess(y: &[f64], a: &[f64]) -> Result<[f64; 4]> {
    let b0 = percentile(a, 0.1);
    let (peak, &max) = a
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.total_cmp(q.1))
        .ok_or_else(|| Error::invalid("empty profile"))?;
    let height = max - b0;
    if !(height > 0.0) {
        return Err(Error::invalid("profile has no peak above its baseline"));
    }
    let half = b0 + 0.5 * height;
    let above = a.iter().filter(|v| **v >= half).count();
    if above < 6 {
        return Err(Error::invalid(format!(
            "only {above} samples across the peak (at least 6 required)"
        )));
    }
    let crossing = |range: &mut dyn Iterator<Item = usize>, step: isize| -> Option<f64> {
        for i in range {
            let j = (i as isize + step) as usize;
            if a[j] < half {
                let t = (a[i] - half) / (a[i] - a[j]);
                return Some(y[i] + t * (y[j] - y[i]));
            }
        }
        None
    };
    let left = crossing(&mut (1..=peak).rev(), -1);
    let right = crossing(&mut (peak..a.len() - 1), 1);
    let fwhm = match (left, right) {
        (Some(l), Some(r)) => r - l,
        (Some(l), None) => 2.0 * (y[peak] - l),
        (None, Some(r)) => 2.0 * (r - y[peak]),
        (None, None) => 0.5 * (y[y.len() - 1] - y[0]),
    };
    Ok([height, y[peak], fwhm / (2.0 * libm::sqrt(libm::log(2.0))), b0])
}

fn residuals(y: &[f64], a: &[f64], p: &[f64; 4]) -> (f64, Vec<[f64; 4]>, Vec<f64>) {
    let [amp, y0, w, b] = *p;
    let mut cost = 0.0;
    let mut jac = Vec::with_capacity(y.len());
    let mut res = Vec::with_capacity(y.len());
    for (&yi, &ai) in y.iter().zip(a) {
        let u = (yi - y0) / w;
        let e = libm::exp(-u * u);
        let r = amp * e + b - ai;
        cost += r * r;
        res.push(r);
        jac.push([e, 2.0 * amp * e * u / w, 2.0 * amp * e * u * u / w, 1.0]);
    }
    (cost, jac, res)
}

fn normal_equations(jac: &[[f64; 4]], res: &[f64]) -> ([[f64; 4]; 4], [f64; 4]) {
    let mut jtj = [[0.0; 4]; 4];
    let mut jtr = [0.0; 4];
    for (row, r) in jac.iter().zip(res) {
        for i in 0..4 {
            jtr[i] += row[i] * r;
            for j in 0..4 {
                jtj[i][j] += row[i] * row[j];
            }
        }
    }
    (jtj, jtr)
}

/// Levenberg-Marquardt fit of a four-parameter Gaussian to `(y, a)`.
pub fn fit_gaussian(y: &[f64], a: &[f64], opts: &FitOptions) -> Result<WaistFit> {
    if y.len() != a.len() || y.len() < 5 {
        return Err(Error::invalid("profile needs matching axes and at least five samples"));
    }
    let mut p = initial_guess(y, a)?;
    let (mut cost, mut jac, mut res) = residuals(y, a, &p);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&jac, &res);
        let mut improved = false;
        for _ in 0..60 {
            let mut m = jtj;
            for i in 0..4 {
                m[i][i] += lambda * jtj[i][i].max(f64::MIN_POSITIVE);
            }
            let step = match solve(m, jtr.map(|v| -v)) {
                Some(s) => s,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2], p[3] + step[3]];
            let (c, j, r) = residuals(y, a, &trial);
            if c.is_finite() && c <= cost {
                let scale = [libm::fabs(p[0]).max(libm::fabs(p[3])), libm::fabs(p[2]), libm::fabs(p[2]), libm::fabs(p[0]).max(libm::fabs(p[3]))];
                let rel = (0..4).map(|i| libm::fabs(step[i]) / scale[i].max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
                p = trial;
                cost = c;
                jac = j;
                res = r;
                lambda = (lambda * 0.1).max(1e-12);
                improved = true;
                if rel < opts.step_tol {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if converged {
            break;
        }
        if !improved {
            // No descent direction left at this precision: a stationary point.
            converged = true;
            break;
        }
    }
    let n = y.len();
    if !converged {
        let residual_rms = libm::sqrt(cost / n as f64);
        return Err(Error::Fit {
            iterations,
            residual_rms,
        });
    }
    // Gauss-Newton polish: the gradient still resolves the minimum where
    // the cost itself no longer changes in floating point.
    for _ in 0..8 {
        let (jtj, jtr) = normal_equations(&jac, &res);
        let Some(step) = solve(jtj, jtr.map(|v| -v)) else { break };
        let rel = libm::fabs(step[2]) / libm::fabs(p[2]);
        if !(rel < 1e-6) {
            break;
        }
        for i in 0..4 {
            p[i] += step[i];
        }
        (cost, jac, res) = residuals(y, a, &p);
        if rel < 1e-15 {
            break;
        }
    }
    let (jtj, _) = normal_equations(&jac, &res);
    let sigma2 = if n > 4 { cost / (n - 4) as f64 } else { 0.0 };
    let w0_err = invert(jtj)
        .map(|cov| libm::sqrt((sigma2 * cov[2][2]).max(0.0)))
        .unwrap_or(f64::INFINITY);
    let peak = a
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.total_cmp(q.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(WaistFit {
        w0_est: libm::fabs(p[2]),
        w0_err,
        center_y: p[1],
        amplitude_scale: p[0],
        offset: p[3],
        residual_rms: libm::sqrt(cost / n as f64),
        iterations,
        x_slice: f64::NAN,
        peak_at_edge: peak == 0 || peak == n - 1,
    })
}

/// Outcome of projecting a scan onto the Hermite-Gauss basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// Index with the largest projection.
    pub l_best: u32,
    /// `|c_l|² / Σ|c_k|²` for `l = 0..=l_max`.
    pub projections: Vec<f64>,
    /// Raw complex coefficients against unit-norm basis columns.
    pub coefficients: Vec<Complex64>,
    /// Set when the dominant fraction is below the threshold.
    pub spurious: bool,
    /// `x` of the column used (m).
    pub x_slice: f64,
}

/// [`classify_mode_with`] at the default threshold.
pub fn classify_mode(
    img: &ScanImage,
    beam: &BeamParams,
    profile: &AnisotropyProfile,
    l_max: u32,
) -> Result<Classification> {
    classify_mode_with(img, beam, profile, l_max, SPURIOUS_THRESHOLD)
}

/// Projects the complex signal of one column onto `u_l(x_s, y)`,
/// `l = 0..=l_max`. The column is the one nearest `x = 0` when the scan
/// covers the waist, else the one with the largest integrated amplitude.
pub fn classify_mode_with(
    img: &ScanImage,
    beam: &BeamParams,
    profile: &AnisotropyProfile,
    l_max: u32,
    threshold: f64,
) -> Result<Classification> {
    if img.amplitude().iter().all(|a| *a == 0.0) {
        return Err(Error::Classification("scan amplitude is identically zero".into()));
    }
    let xs = img.x_grid();
    let ix = if xs[0] <= 0.0 && xs[xs.len() - 1] >= 0.0 {
        img.nearest_column(0.0)
    } else {
        (0..xs.len())
            .map(|ix| (ix, img.amplitude_column(ix).iter().sum::<f64>()))
            .max_by(|p, q| p.1.total_cmp(&q.1))
            .map(|(ix, _)| ix)
            .unwrap_or(0)
    };
    let x = xs[ix];
    let ys = img.y_grid();
    let weights = trapezoid_weights(ys);
    let signal = img.signal_column(ix);

    let mut coefficients = Vec::with_capacity(l_max as usize + 1);
    for l in 0..=l_max {
        let basis: Vec<Complex64> = ys
            .iter()
            .map(|&y| beam.displacement(profile, l, x, y))
            .collect::<Result<_>>()?;
        let norm2: f64 = basis.iter().zip(&weights).map(|(u, w)| u.norm_sqr() * w).sum();
        if !(norm2 > 0.0) {
            return Err(Error::Classification(format!("basis column l = {l} vanishes on the scan grid")));
        }
        let c: Complex64 = basis
            .iter()
            .zip(&signal)
            .zip(&weights)
            .map(|((u, s), w)| s * u.conj() * *w)
            .sum();
        coefficients.push(c / libm::sqrt(norm2));
    }
    let total: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if !(total > 0.0) {
        return Err(Error::Classification("signal is orthogonal to every basis mode".into()));
    }
    let projections: Vec<f64> = coefficients.iter().map(|c| c.norm_sqr() / total).collect();
    let (best, &frac) = projections
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.total_cmp(q.1))
        .expect("l_max >= 0 gives at least one projection");
    Ok(Classification {
        l_best: best as u32,
        projections,
        coefficients,
        spurious: frac < threshold,
        x_slice: x,
    })
}

fn trapezoid_weights(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    if n == 1 {
        return alloc::vec![1.0];
    }
    (0..n)
        .map(|i| {
            let lo = if i == 0 { y[0] } else { y[i - 1] };
            let hi = if i == n - 1 { y[n - 1] } else { y[i + 1] };
            0.5 * (hi - lo)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::IsotropicProfile;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn phase_wrapping() {
        assert!((wrap_phase(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert_eq!(wrap_phase(0.25), 0.25);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ScanImage::new(alloc::vec![0.0, 1.0], alloc::vec![0.0], alloc::vec![1.0], alloc::vec![0.0, 0.0], None).is_err());
        assert!(ScanImage::new(alloc::vec![0.0], alloc::vec![0.0], alloc::vec![-1.0], alloc::vec![0.0], None).is_err());
    }

    #[test]
    fn exact_gaussian_fit() {
        let y = grid(-10e-6, 10e-6, 81);
        let a: Vec<f64> = y.iter().map(|v| 3.0 * libm::exp(-(v - 0.4e-6) * (v - 0.4e-6) / 4e-12) + 0.1).collect();
        let fit = fit_gaussian(&y, &a, &FitOptions::default()).unwrap();
        assert!((fit.w0_est - 2e-6).abs() < 1e-15, "{fit:?}");
        assert!((fit.center_y - 0.4e-6).abs() < 1e-15);
        assert!((fit.offset - 0.1).abs() < 1e-10);
        assert!(!fit.peak_at_edge);
    }

    #[test]
    fn narrow_peak_is_rejected() {
        let y = grid(-10e-6, 10e-6, 21);
        let a: Vec<f64> = y.iter().map(|v| libm::exp(-v * v / 1e-12)).collect();
        assert!(matches!(fit_gaussian(&y, &a, &FitOptions::default()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn zero_scan_is_a_classification_error() {
        let b = BeamParams::new(2e-6, 2e-6).unwrap();
        let p: AnisotropyProfile = IsotropicProfile::new(4400.0).unwrap().into();
        let img = ScanImage::new(alloc::vec![0.0], grid(-1e-5, 1e-5, 5), alloc::vec![0.0; 5], alloc::vec![0.0; 5], None).unwrap();
        assert!(matches!(classify_mode(&img, &b, &p, 3), Err(Error::Classification(_))));
    }
}
