//! Transverse overlap between the beam modes and the IDT aperture.
//!
//! The conversion efficiency of mode `l` for a half-aperture `L` is
//!
//! ```text
//! E_l(L) = η |∫_{-L}^{L} u_l(0, y) dy|² / (2L ∫ u_l(0, y)² dy)
//! ```
//!
//! The denominator uses the closed-form Hermite-Gauss norm; the numerator is
//! integrated adaptively in the scaled coordinate `t = √2 y / w0`, where it
//! becomes `(w0/√2)² (∫ ψ_l dt)²` with the orthonormal Hermite function `ψ_l`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::beam::{hermite_function, BeamParams};
use crate::numeric::{adaptive_simpson, AdaptiveSimpson};
use crate::{Error, Result};

/// Aperture and mode-independent efficiency prefactor of an IDT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransducerSpec {
    half_aperture: f64,
    eta: f64,
    pairs: u32,
}

impl TransducerSpec {
    /// `half_aperture` is `L` (m); `eta` defaults to 1 via [`TransducerSpec::with_eta`].
    pub fn new(half_aperture: f64, pairs: u32) -> Result<Self> {
        if !(half_aperture > 0.0 && half_aperture.is_finite()) {
            return Err(Error::invalid(format!("half aperture must be positive, got {half_aperture}")));
        }
        if pairs == 0 {
            return Err(Error::invalid("a transducer needs at least one finger pair"));
        }
        Ok(Self {
            half_aperture,
            eta: 1.0,
            pairs,
        })
    }

    /// Replaces `η`.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::invalid(format!("eta must be positive, got {eta}")));
        }
        self.eta = eta;
        Ok(self)
    }

    /// `L` (m).
    pub fn half_aperture(&self) -> f64 {
        self.half_aperture
    }

    /// `η`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Finger pairs.
    pub fn pairs(&self) -> u32 {
        self.pairs
    }

    /// Efficiency of mode `l` for this transducer.
    pub fn efficiency(&self, beam: &BeamParams, l: u32) -> Result<f64> {
        conversion_efficiency(beam, l, self.half_aperture, self.eta)
    }
}

fn quadrature() -> AdaptiveSimpson {
    AdaptiveSimpson {
        abs_tol: 1e-12,
        max_depth: 48,
    }
}

/// `∫_{-T}^{T} ψ_l(t) dt` by adaptive Simpson.
pub fn hermite_overlap(l: u32, t_max: f64) -> Result<f64> {
    adaptive_simpson(|t| hermite_function(l, t), -t_max, t_max, quadrature())
}

/// `E_l(L)` at the waist cross-section.
pub fn conversion_efficiency(beam: &BeamParams, l: u32, half_aperture: f64, eta: f64) -> Result<f64> {
    if !(half_aperture > 0.0 && half_aperture.is_finite()) {
        return Err(Error::invalid(format!("half aperture must be positive, got {half_aperture}")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!("eta must be positive, got {eta}")));
    }
    let t_max = SQRT_2 * half_aperture / beam.waist();
    let overlap = hermite_overlap(l, t_max)?;
    // (w0/√2)² I² / (2L · w0/√2) = I² / (2 T)
    Ok(eta * overlap * overlap / (2.0 * t_max))
}

/// `E_l / E_0` for `l = 0..=l_max`. Odd entries are exactly zero.
pub fn efficiency_ladder(beam: &BeamParams, l_max: u32, half_aperture: f64, eta: f64) -> Result<Vec<f64>> {
    let e0 = conversion_efficiency(beam, 0, half_aperture, eta)?;
    (0..=l_max)
        .map(|l| {
            if l == 0 {
                Ok(1.0)
            } else if l % 2 == 1 {
                Ok(0.0)
            } else {
                Ok(conversion_efficiency(beam, l, half_aperture, eta)? / e0)
            }
        })
        .collect()
}

/// Per-mode external Q from `1/Q_ext,l = (E_l/E_0) / Q_ext,base`.
/// A zero efficiency gives `INFINITY` (the mode does not couple).
pub fn external_coupling_scale(efficiency_ratio: f64, base_q_ext: f64) -> Result<f64> {
    if !(efficiency_ratio >= 0.0 && efficiency_ratio.is_finite()) {
        return Err(Error::invalid(format!("efficiency ratio must be non-negative, got {efficiency_ratio}")));
    }
    if !(base_q_ext > 0.0) {
        return Err(Error::invalid("base external Q must be positive"));
    }
    if efficiency_ratio == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(base_q_ext / efficiency_ratio)
}
