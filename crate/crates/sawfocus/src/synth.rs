//! Seeded synthetic scans for tests and demos.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use sawfocus_core::beam::BeamParams;
use sawfocus_core::imaging::ScanImage;
use sawfocus_core::material::{reference, AnisotropyProfile};

use crate::error::{Error, Result};

/// Profile used for the wavefront phase of a synthetic scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMaterial {
    /// [`reference::love`].
    Love,
    /// [`reference::rayleigh`].
    Rayleigh,
}

impl ReferenceMaterial {
    /// Builds the profile.
    pub fn profile(self) -> Result<AnisotropyProfile> {
        match self {
            ReferenceMaterial::Love => reference::love(),
            ReferenceMaterial::Rayleigh => reference::rayleigh(),
        }
        .map_err(Error::model("reference profile"))
    }
}

/// Generator parameters; the shipped metadata file is one of these.
///
/// Amplitude is `|u_l| / max|u_l| + floor + N(0, 1/snr)` clipped at zero,
/// so `snr` is the peak signal over the noise standard deviation. The phase
/// is the noiseless field phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticScan {
    /// SAW wavelength.
    pub wavelength_m: f64,
    /// Beam waist.
    pub waist_m: f64,
    /// Transverse mode index.
    pub mode_l: u32,
    /// Phase profile.
    pub material: ReferenceMaterial,
    /// `x` range start.
    pub x_min_m: f64,
    /// `x` range end.
    pub x_max_m: f64,
    /// `x` samples.
    pub nx: usize,
    /// `y` range start.
    pub y_min_m: f64,
    /// `y` range end.
    pub y_max_m: f64,
    /// `y` samples.
    pub ny: usize,
    /// Peak signal over noise sigma; `null` for a noiseless scan.
    pub snr: Option<f64>,
    /// Constant detector background.
    pub floor: f64,
    /// ChaCha8 seed.
    pub seed: u64,
}

/// `n` evenly spaced samples from `a` to `b`, both included; a single sample
/// sits at `a`. The midpoint of a symmetric range is exactly zero.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let m = (n - 1) as f64;
    (0..n).map(|i| (a * (m - i as f64) + b * i as f64) / m).collect()
}

impl SyntheticScan {
    /// Renders the scan.
    pub fn generate(&self) -> Result<ScanImage> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Config("synthetic scan grid must be non-empty".into()));
        }
        let beam = BeamParams::new(self.wavelength_m, self.waist_m).map_err(Error::model("synthetic beam"))?;
        let profile = self.material.profile()?;
        let x = linspace(self.x_min_m, self.x_max_m, self.nx);
        let y = linspace(self.y_min_m, self.y_max_m, self.ny);
        let field = beam
            .render_field(&profile, self.mode_l, &x, &y)
            .map_err(Error::model("synthetic field"))?;
        let peak = field.peak_magnitude();
        if !(peak > 0.0) {
            return Err(Error::Config("synthetic field vanishes on the grid".into()));
        }
        let noise = match self.snr {
            Some(snr) if snr > 0.0 && snr.is_finite() => Some(Normal::new(0.0, 1.0 / snr).expect("finite sigma")),
            Some(snr) => return Err(Error::Config(format!("snr must be positive, got {snr}"))),
            None => None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let amplitude = field
            .values()
            .iter()
            .map(|u| {
                let a = u.norm() / peak + self.floor;
                match &noise {
                    Some(n) => (a + n.sample(&mut rng)).max(0.0),
                    None => a,
                }
            })
            .collect();
        let phase = field.values().iter().map(|u| u.arg()).collect();
        ScanImage::new(x, y, amplitude, phase, None).map_err(Error::model("synthetic scan"))
    }
}
