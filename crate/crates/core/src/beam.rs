//! Two-dimensional Hermite-Gauss beam modes of a surface acoustic wave.
//!
//! The scalar displacement of transverse order `l` is
//!
//! ```text
//! u_l(x, y) = U (w0 / w(x)) H_l(√2 y / w(x)) exp(-y² / w(x)²)
//!             · exp(-i (k x + k y² / (2 R_SAW(x, y)) - ψ_l(x)))
//! ```
//!
//! with `w(x) = w0 sqrt(1 + (x/x_R)²)`, `x_R = π w0² / λ` and the 2D Gouy
//! phase `ψ_l(x) = (l + 1/2) atan(x / x_R)`. The wavefront curvature follows
//! `R(x) = x (1 + (x_R/x)²)` rescaled by the group-velocity anisotropy.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2, TAU};

use num_complex::Complex64;

use crate::material::AnisotropyProfile;
use crate::{Error, Result};

/// Wavelength, waist and amplitude of a beam family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    wavelength: f64,
    waist: f64,
    rayleigh_length: f64,
    wavenumber: f64,
    amplitude: f64,
}

impl BeamParams {
    /// Beam with unit amplitude. Both lengths in metres, positive.
    pub fn new(wavelength: f64, waist: f64) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::invalid(format!("wavelength must be positive, got {wavelength}")));
        }
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::invalid(format!("waist must be positive, got {waist}")));
        }
        Ok(Self {
            wavelength,
            waist,
            rayleigh_length: PI * waist * waist / wavelength,
            wavenumber: TAU / wavelength,
            amplitude: 1.0,
        })
    }

    /// Replaces the amplitude `U_l`.
    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::invalid("amplitude must be finite"));
        }
        self.amplitude = amplitude;
        Ok(self)
    }

    /// `λ` (m).
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// `w0` (m).
    pub fn waist(&self) -> f64 {
        self.waist
    }

    /// `x_R = π w0² / λ` (m).
    pub fn rayleigh_length(&self) -> f64 {
        self.rayleigh_length
    }

    /// `k = 2π / λ` (rad/m).
    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    /// `U_l`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// `w(x) = w0 sqrt(1 + (x/x_R)²)`.
    pub fn beam_radius(&self, x: f64) -> f64 {
        let r = x / self.rayleigh_length;
        self.waist * libm::sqrt(1.0 + r * r)
    }

    /// `ψ_l(x) = (l + 1/2) atan(x / x_R)`.
    pub fn gouy_phase(&self, l: u32, x: f64) -> f64 {
        (l as f64 + 0.5) * libm::atan(x / self.rayleigh_length)
    }

    /// On-axis wavefront radius `R(x) = x (1 + (x_R/x)²)`. Infinite at the
    /// waist plane `x = 0`.
    pub fn curvature_radius(&self, x: f64) -> f64 {
        if x == 0.0 {
            return f64::INFINITY;
        }
        let r = self.rayleigh_length / x;
        x * (1.0 + r * r)
    }

    /// `R_SAW(x, y) = R(x) v_g(θ) / v_g(0)` with `θ = atan(y/x)` clamped to
    /// the profile's span.
    pub fn anisotropic_curvature(&self, profile: &AnisotropyProfile, x: f64, y: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(f64::INFINITY);
        }
        let theta = profile.clamp_angle(libm::atan(y / x));
        let ratio = profile.group_velocity(theta)? / profile.group_velocity(0.0)?;
        Ok(self.curvature_radius(x) * ratio)
    }

    /// `φ_l(x, y) = k y² / (2 R_SAW(x, y)) - ψ_l(x)`; the curvature term is
    /// zero at the waist plane.
    pub fn wavefront_phase(&self, profile: &AnisotropyProfile, l: u32, x: f64, y: f64) -> Result<f64> {
        let curvature_term = if x == 0.0 || y == 0.0 {
            0.0
        } else {
            self.wavenumber * y * y / (2.0 * self.anisotropic_curvature(profile, x, y)?)
        };
        Ok(curvature_term - self.gouy_phase(l, x))
    }

    /// Real transverse envelope `U (w0/w) H_l(√2 y/w) exp(-y²/w²)`.
    pub fn envelope(&self, l: u32, x: f64, y: f64) -> f64 {
        let w = self.beam_radius(x);
        let s = y / w;
        self.amplitude * (self.waist / w) * hermite(l, SQRT_2 * s) * libm::exp(-s * s)
    }

    /// Complex displacement `u_l(x, y)`.
    pub fn displacement(&self, profile: &AnisotropyProfile, l: u32, x: f64, y: f64) -> Result<Complex64> {
        let envelope = self.envelope(l, x, y);
        let phase = self.wavenumber * x + self.wavefront_phase(profile, l, x, y)?;
        Ok(Complex64::from_polar(1.0, -phase) * envelope)
    }

    /// `∫ |u_l(x, y)|² dy = U² (w0²/w) sqrt(π/2) 2^l l!`, exact.
    pub fn transverse_norm(&self, l: u32, x: f64) -> f64 {
        let w = self.beam_radius(x);
        self.amplitude * self.amplitude * self.waist * self.waist / w
            * libm::sqrt(PI / 2.0)
            * hermite_norm_factor(l)
    }

    /// Samples `u_l` on a grid. Values are row-major: `y` outer, `x` inner.
    pub fn render_field(
        &self,
        profile: &AnisotropyProfile,
        l: u32,
        x_grid: &[f64],
        y_grid: &[f64],
    ) -> Result<ComplexFieldMap> {
        if x_grid.is_empty() || y_grid.is_empty() {
            return Err(Error::invalid("field grids must be non-empty"));
        }
        let mut values = Vec::with_capacity(x_grid.len() * y_grid.len());
        for &y in y_grid {
            for &x in x_grid {
                values.push(self.displacement(profile, l, x, y)?);
            }
        }
        ComplexFieldMap::new(x_grid.to_vec(), y_grid.to_vec(), values)
    }
}

/// `2^l l!`, the squared norm of `H_l` against `exp(-t²)` up to `sqrt(π)`.
pub fn hermite_norm_factor(l: u32) -> f64 {
    (1..=l).fold(1.0, |acc, k| acc * 2.0 * k as f64)
}

/// Physicists' Hermite polynomial from `H_{n+1} = 2t H_n - 2n H_{n-1}`.
pub fn hermite(l: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if l == 0 {
        return prev;
    }
    for n in 1..l {
        let next = 2.0 * t * cur - 2.0 * n as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite function `H_l(t) exp(-t²/2) / sqrt(2^l l! sqrt(π))`,
/// evaluated with the normalised recurrence so it stays O(1) for large `l`.
pub fn hermite_function(l: u32, t: f64) -> f64 {
    let mut prev = libm::exp(-0.5 * t * t) / libm::sqrt(libm::sqrt(PI));
    if l == 0 {
        return prev;
    }
    let mut cur = SQRT_2 * t * prev;
    for n in 1..l {
        let n = n as f64;
        let next = libm::sqrt(2.0 / (n + 1.0)) * t * cur - libm::sqrt(n / (n + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Complex field sampled on a rectilinear grid, row-major over `y × x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFieldMap {
    x_grid: Vec<f64>,
    y_grid: Vec<f64>,
    values: Vec<Complex64>,
}

impl ComplexFieldMap {
    /// Checks that both grids are strictly increasing and that
    /// `values.len() == x_grid.len() * y_grid.len()`.
    pub fn new(x_grid: Vec<f64>, y_grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if x_grid.is_empty() || y_grid.is_empty() {
            return Err(Error::invalid("field grids must be non-empty"));
        }
        for (name, g) in [("x", &x_grid), ("y", &y_grid)] {
            if g.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvariantViolation(format!("{name} grid not strictly increasing")));
            }
        }
        if values.len() != x_grid.len() * y_grid.len() {
            return Err(Error::InvariantViolation(format!(
                "{} values for a {}x{} grid",
                values.len(),
                y_grid.len(),
                x_grid.len()
            )));
        }
        Ok(Self { x_grid, y_grid, values })
    }

    /// Propagation-axis samples (m).
    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    /// Transverse samples (m).
    pub fn y_grid(&self) -> &[f64] {
        &self.y_grid
    }

    /// All values, row-major.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at column `ix`, row `iy`.
    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.x_grid.len() + ix]
    }

    /// Largest magnitude on the grid.
    pub fn peak_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Copy rescaled so the peak magnitude is one. An all-zero map is
    /// returned unchanged.
    pub fn normalized(&self) -> Self {
        let peak = self.peak_magnitude();
        let mut out = self.clone();
        if peak > 0.0 {
            for v in &mut out.values {
                *v /= peak;
            }
        }
        out
    }
}
