//! Anisotropic in-plane velocity model of the piezoelectric film.
//!
//! A profile tabulates the phase velocity against the in-plane angle from the
//! propagation axis for electrically free and shorted surfaces. Natural cubic
//! splines provide the C² interpolant needed by the group velocity and the
//! diffraction parameter.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::numeric::CubicSpline;
use crate::{Error, Result};

/// Slack allowed when checking that the angle grid covers `[-π/2, π/2]`.
const SPAN_SLACK: f64 = 1e-9;
/// Relative mismatch `|v(-θ) - v(θ)| / v(θ)` tolerated by the symmetry check.
pub const SYMMETRY_TOLERANCE: f64 = 1e-6;

/// Electrical boundary condition of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Electrically free (open) surface.
    Free,
    /// Metallised, shorted surface.
    Short,
}

/// Direction-independent velocity, used to validate against isotropic
/// Gaussian-beam theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicProfile {
    vp: f64,
}

impl IsotropicProfile {
    /// `vp` in m/s, must be positive.
    pub fn new(vp: f64) -> Result<Self> {
        if !(vp > 0.0 && vp.is_finite()) {
            return Err(Error::invalid(format!("isotropic velocity must be positive, got {vp}")));
        }
        Ok(Self { vp })
    }

    /// Phase velocity in m/s.
    pub fn vp(&self) -> f64 {
        self.vp
    }
}

impl From<IsotropicProfile> for AnisotropyProfile {
    fn from(iso: IsotropicProfile) -> Self {
        AnisotropyProfile::isotropic(iso.vp).expect("validated isotropic velocity")
    }
}

/// Tabulated phase velocity `v_p(θ)` for free and shorted surfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropyProfile {
    free: CubicSpline,
    short: CubicSpline,
}

/// Normalised curvature of `v_p(θ)` at the propagation axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffractionParameter {
    /// `γ = v_p''(0) / v_p(0)`.
    pub gamma: f64,
    /// `v_p'(0) / v_p(0)`; zero for a profile symmetric about the axis.
    pub axis_slope: f64,
}

impl DiffractionParameter {
    /// False when the first derivative at the axis does not vanish, i.e. the
    /// parabolic-anisotropy picture behind `γ` is questionable.
    pub fn is_symmetric(&self) -> bool {
        libm::fabs(self.axis_slope) <= SYMMETRY_TOLERANCE
    }
}

impl AnisotropyProfile {
    /// Builds a profile from samples and validates every invariant: equal
    /// lengths, strictly increasing angles covering `[-π/2, π/2]`, positive
    /// velocities, `v_short <= v_free`, and mirror symmetry about `θ = 0`.
    pub fn new(theta: &[f64], vp_free: &[f64], vp_short: &[f64]) -> Result<Self> {
        if theta.len() != vp_free.len() || theta.len() != vp_short.len() {
            return Err(Error::invalid(format!(
                "profile arrays differ in length: theta {}, free {}, short {}",
                theta.len(),
                vp_free.len(),
                vp_short.len()
            )));
        }
        if theta.len() < 3 {
            return Err(Error::invalid("a profile needs at least three angle samples"));
        }
        for (i, w) in theta.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::InvariantViolation(format!(
                    "theta grid not strictly increasing at sample {}",
                    i + 1
                )));
            }
        }
        if theta[0] > -FRAC_PI_2 + SPAN_SLACK || theta[theta.len() - 1] < FRAC_PI_2 - SPAN_SLACK {
            return Err(Error::InvariantViolation(format!(
                "theta grid [{}, {}] does not span [-pi/2, pi/2]",
                theta[0],
                theta[theta.len() - 1]
            )));
        }
        for (i, (&f, &s)) in vp_free.iter().zip(vp_short).enumerate() {
            if !(f > 0.0 && f.is_finite() && s > 0.0 && s.is_finite()) {
                return Err(Error::InvariantViolation(format!(
                    "non-positive velocity at sample {i} (free {f}, short {s})"
                )));
            }
            if s > f {
                return Err(Error::InvariantViolation(format!(
                    "shorted velocity {s} exceeds free velocity {f} at sample {i}"
                )));
            }
        }
        let profile = Self {
            free: CubicSpline::natural(theta, vp_free)?,
            short: CubicSpline::natural(theta, vp_short)?,
        };
        profile.check_symmetry()?;
        Ok(profile)
    }

    /// Constant profile `vp` on a three-point grid.
    pub fn isotropic(vp: f64) -> Result<Self> {
        let theta = [-FRAC_PI_2, 0.0, FRAC_PI_2];
        Self::new(&theta, &[vp; 3], &[vp; 3])
    }

    /// Samples two velocity laws on `samples` angles spaced evenly over
    /// `[-π/2, π/2]`. The grid is exactly mirror-symmetric.
    pub fn tabulate(samples: usize, vp_free: impl Fn(f64) -> f64, vp_short: impl Fn(f64) -> f64) -> Result<Self> {
        if samples < 3 {
            return Err(Error::invalid("need at least three samples"));
        }
        let theta = symmetric_grid(samples);
        let free: Vec<f64> = theta.iter().map(|&t| vp_free(t)).collect();
        let short: Vec<f64> = theta.iter().map(|&t| vp_short(t)).collect();
        Self::new(&theta, &free, &short)
    }

    fn check_symmetry(&self) -> Result<()> {
        let (lo, hi) = self.span();
        for spline in [&self.free, &self.short] {
            for (&t, &v) in spline.knots().iter().zip(spline.values()) {
                if -t < lo || -t > hi {
                    continue;
                }
                let mirrored = spline.value(-t);
                if libm::fabs(mirrored - v) > SYMMETRY_TOLERANCE * v {
                    return Err(Error::InvariantViolation(format!(
                        "profile not symmetric about theta = 0: v({t}) = {v}, v({}) = {mirrored}",
                        -t
                    )));
                }
            }
        }
        Ok(())
    }

    /// Angle range covered by the table.
    pub fn span(&self) -> (f64, f64) {
        self.free.span()
    }

    /// Tabulated angles (rad).
    pub fn theta_grid(&self) -> &[f64] {
        self.free.knots()
    }

    /// Tabulated velocities for one boundary condition.
    pub fn samples(&self, boundary: Boundary) -> &[f64] {
        self.spline(boundary).values()
    }

    fn spline(&self, boundary: Boundary) -> &CubicSpline {
        match boundary {
            Boundary::Free => &self.free,
            Boundary::Short => &self.short,
        }
    }

    fn check_range(&self, theta: f64) -> Result<()> {
        let (lo, hi) = self.span();
        if !(theta >= lo && theta <= hi) {
            return Err(Error::OutOfRange {
                quantity: "theta",
                value: theta,
                min: lo,
                max: hi,
            });
        }
        Ok(())
    }

    /// Clamps an angle into the tabulated span.
    pub fn clamp_angle(&self, theta: f64) -> f64 {
        let (lo, hi) = self.span();
        theta.clamp(lo, hi)
    }

    /// Interpolated phase velocity (m/s). Exact at the samples.
    pub fn phase_velocity(&self, theta: f64, boundary: Boundary) -> Result<f64> {
        self.check_range(theta)?;
        Ok(self.spline(boundary).value(theta))
    }

    /// `dv_p/dθ` of the free-surface curve.
    pub fn phase_velocity_slope(&self, theta: f64) -> Result<f64> {
        self.check_range(theta)?;
        Ok(self.free.derivative(theta))
    }

    /// Magnitude of the in-plane group velocity of the free-surface mode,
    /// `sqrt(v_p² + (dv_p/dθ)²)`.
    pub fn group_velocity(&self, theta: f64) -> Result<f64> {
        self.check_range(theta)?;
        let v = self.free.value(theta);
        let dv = self.free.derivative(theta);
        Ok(libm::hypot(v, dv))
    }

    /// Electromechanical coupling `K² = 2 (v_free - v_short) / v_free`.
    pub fn coupling_k2(&self, theta: f64) -> Result<f64> {
        coupling_k2(
            self.phase_velocity(theta, Boundary::Free)?,
            self.phase_velocity(theta, Boundary::Short)?,
        )
    }

    /// `γ = v_p''(0)/v_p(0)` of the free-surface curve.
    pub fn diffraction_parameter(&self) -> Result<DiffractionParameter> {
        self.check_range(0.0)?;
        let v0 = self.free.value(0.0);
        Ok(DiffractionParameter {
            gamma: self.free.second_derivative(0.0) / v0,
            axis_slope: self.free.derivative(0.0) / v0,
        })
    }

    /// Same profile with every velocity multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let scale = |v: &[f64]| v.iter().map(|x| x * factor).collect::<Vec<_>>();
        Self::new(
            self.theta_grid(),
            &scale(self.samples(Boundary::Free)),
            &scale(self.samples(Boundary::Short)),
        )
    }
}

/// `K²` from a pair of velocities. Fails when `v_short > v_free`.
pub fn coupling_k2(vp_free: f64, vp_short: f64) -> Result<f64> {
    if !(vp_free > 0.0) {
        return Err(Error::invalid(format!("free velocity must be positive, got {vp_free}")));
    }
    let k2 = 2.0 * (vp_free - vp_short) / vp_free;
    if k2 < 0.0 {
        return Err(Error::InvariantViolation(format!(
            "shorted velocity {vp_short} exceeds free velocity {vp_free}"
        )));
    }
    Ok(k2)
}

fn symmetric_grid(samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|i| FRAC_PI_2 * (2.0 * i as f64 - last) / last)
        .collect()
}

/// Synthetic reference profiles shipped with the toolkit.
///
/// These are not simulation output. They are smooth, symmetric laws
/// `v_free(θ) = v0 (1 + (γ/2) sin²θ)` chosen so the Love-mode curve has
/// `γ = -0.45` and the on-axis `K²` of the Love mode is 4.2 times that of the
/// Rayleigh mode.
pub mod reference {
    use super::{AnisotropyProfile, Result};

    /// Angle samples over `[-π/2, π/2]` (0.5° spacing).
    pub const SAMPLES: usize = 361;
    /// Target diffraction parameter of the Love-mode profile.
    pub const LOVE_GAMMA: f64 = -0.45;
    /// On-axis free-surface Love-mode velocity (m/s).
    pub const LOVE_VP0: f64 = 4420.0;
    /// On-axis Love-mode coupling.
    pub const LOVE_K2: f64 = 0.21;
    /// On-axis free-surface Rayleigh-mode velocity (m/s).
    pub const RAYLEIGH_VP0: f64 = 3650.0;
    /// On-axis Rayleigh-mode coupling.
    pub const RAYLEIGH_K2: f64 = 0.05;

    fn sin2(t: f64) -> f64 {
        let s = libm::sin(t);
        s * s
    }

    /// Love-mode profile.
    pub fn love() -> Result<AnisotropyProfile> {
        let free = |t: f64| LOVE_VP0 * (1.0 + 0.5 * LOVE_GAMMA * sin2(t));
        let k2 = |t: f64| LOVE_K2 * (1.0 - 0.5 * sin2(t));
        AnisotropyProfile::tabulate(SAMPLES, free, |t| free(t) * (1.0 - 0.5 * k2(t)))
    }

    /// Rayleigh-mode profile.
    pub fn rayleigh() -> Result<AnisotropyProfile> {
        let free = |t: f64| RAYLEIGH_VP0 * (1.0 + 0.04 * sin2(t));
        let k2 = |t: f64| RAYLEIGH_K2 * (1.0 + 0.2 * sin2(t));
        AnisotropyProfile::tabulate(SAMPLES, free, |t| free(t) * (1.0 - 0.5 * k2(t)))
    }
}
