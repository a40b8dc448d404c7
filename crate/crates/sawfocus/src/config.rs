//! Device configuration file (JSON, SI units in field names).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sawfocus_core::beam::BeamParams;
use sawfocus_core::material::{AnisotropyProfile, Boundary};
use sawfocus_core::resonator::{
    mirror_effective_length, ApertureCurve, ApertureRule, MirrorModel, ModeId, ResonatorSpec,
};

use crate::error::{Error, Result};
use crate::formats::material::load_profile;

/// Schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Bragg-mirror description used when no effective length is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorConfig {
    /// On-axis distance between the two mirrors' inner edges.
    pub physical_gap_m: f64,
    /// Reflectivity per electrode period `r_s`.
    pub reflectivity_per_period: f64,
    /// Stopband center.
    pub stopband_center_hz: f64,
}

/// Finger-length rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApertureConfig {
    /// `±2w(x)`.
    #[serde(rename = "full_2w")]
    Full2w,
    /// `±w0`.
    #[serde(rename = "apodized_const_w0")]
    ApodizedConstW0,
    /// Tabulated half-width against `|x|`.
    Custom {
        /// `|x|` samples (m).
        x_m: Vec<f64>,
        /// Half-width at each sample (m).
        half_width_m: Vec<f64>,
    },
}

/// Modes to include in spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    /// First longitudinal index.
    pub n_min: u32,
    /// Last longitudinal index (inclusive). `n_max < n_min` selects none.
    pub n_max: u32,
    /// Transverse indices.
    pub l: Vec<u32>,
}

/// Quality factors of the fundamental; higher transverse modes scale the
/// external ones by their transducer efficiency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityConfig {
    /// Internal Q.
    pub internal: f64,
    /// External Q of each port for `l = 0`.
    pub external: [f64; 2],
}

/// Frequency grid of the synthesized trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    /// First frequency.
    pub f_start_hz: f64,
    /// Last frequency (inclusive).
    pub f_stop_hz: f64,
    /// Number of points (at least 1).
    pub points: usize,
}

/// Rectilinear sampling grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
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
}

/// Linear film-thickness correction applied to every resonance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThicknessConfig {
    /// `df/dt` (Hz/m).
    pub sensitivity_hz_per_m: f64,
    /// Thickness deviation (m).
    pub delta_m: f64,
}

/// Layout export knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutConfig {
    /// Samples per long polygon edge.
    #[serde(default = "default_samples")]
    pub samples_per_edge: usize,
    /// SVG pixels per metre.
    #[serde(default = "default_scale")]
    pub svg_scale_px_per_m: f64,
}

fn default_samples() -> usize {
    64
}

fn default_scale() -> f64 {
    1e7
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            samples_per_edge: default_samples(),
            svg_scale_px_per_m: default_scale(),
        }
    }
}

/// Complete device description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    /// Must equal [`SCHEMA_VERSION`].
    pub schema_version: u32,
    /// Anisotropy CSV, relative to the config file.
    pub material_file: PathBuf,
    /// Propagation velocity; defaults to the free-surface profile value at
    /// `θ = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vp_m_per_s: Option<f64>,
    /// SAW wavelength.
    pub wavelength_m: f64,
    /// Beam waist half-width.
    pub waist_m: f64,
    /// Effective cavity length; exclusive with `mirror`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_length_m: Option<f64>,
    /// Mirror model; exclusive with `effective_length_m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<MirrorConfig>,
    /// Electrode period.
    pub pitch_m: f64,
    /// Finger pairs per port.
    pub idt_pairs: u32,
    /// Strips per mirror.
    pub mirror_strips: u32,
    /// Finger-length rule.
    pub aperture_rule: ApertureConfig,
    /// Relative coupling of the two ports.
    #[serde(default = "default_port_coupling")]
    pub port_coupling: [f64; 2],
    /// Transducer prefactor `η`.
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Modes for spectra.
    pub modes: ModesConfig,
    /// Quality factors.
    pub q: QualityConfig,
    /// Trace grid.
    pub spectrum: SpectrumConfig,
    /// Field-map grid.
    pub field: GridConfig,
    /// Optional thickness correction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<ThicknessConfig>,
    /// Layout export knobs.
    #[serde(default)]
    pub layout: LayoutConfig,
    /// Output directory, relative to the config file.
    pub output_dir: PathBuf,
}

fn default_port_coupling() -> [f64; 2] {
    [1.0, 1.0]
}

fn default_eta() -> f64 {
    1.0
}

/// Config together with everything it references.
#[derive(Debug, Clone)]
pub struct Device {
    /// Parsed file.
    pub config: DeviceConfig,
    /// Directory the config was read from.
    pub base_dir: PathBuf,
    /// Loaded anisotropy profile.
    pub profile: AnisotropyProfile,
    /// Beam parameters.
    pub beam: BeamParams,
    /// Resonator geometry.
    pub spec: ResonatorSpec,
    /// Propagation velocity.
    pub vp: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl DeviceConfig {
    /// Parses JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid device config: {e}")))
    }

    /// Checks values that do not need the referenced files.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        positive("wavelength_m", self.wavelength_m)?;
        positive("waist_m", self.waist_m)?;
        positive("pitch_m", self.pitch_m)?;
        positive("eta", self.eta)?;
        positive("q.internal", self.q.internal)?;
        for q in self.q.external {
            positive("q.external", q)?;
        }
        if let Some(v) = self.vp_m_per_s {
            positive("vp_m_per_s", v)?;
        }
        match (&self.effective_length_m, &self.mirror) {
            (Some(d), None) => positive("effective_length_m", *d)?,
            (None, Some(m)) => {
                positive("mirror.physical_gap_m", m.physical_gap_m)?;
                positive("mirror.stopband_center_hz", m.stopband_center_hz)?;
            }
            _ => {
                return Err(Error::Config(
                    "exactly one of effective_length_m and mirror must be given".into(),
                ))
            }
        }
        if self.idt_pairs == 0 || self.mirror_strips == 0 {
            return Err(Error::Config("idt_pairs and mirror_strips must be at least 1".into()));
        }
        if self.spectrum.points == 0 || !(self.spectrum.f_stop_hz >= self.spectrum.f_start_hz) {
            return Err(Error::Config("spectrum grid must have points and f_stop_hz >= f_start_hz".into()));
        }
        positive("spectrum.f_start_hz", self.spectrum.f_start_hz)?;
        let g = &self.field;
        if g.nx == 0 || g.ny == 0 || !(g.x_max_m >= g.x_min_m) || !(g.y_max_m >= g.y_min_m) {
            return Err(Error::Config("field grid must be non-empty with max >= min".into()));
        }
        if self.layout.samples_per_edge < 3 {
            return Err(Error::Config("layout.samples_per_edge must be at least 3".into()));
        }
        positive("layout.svg_scale_px_per_m", self.layout.svg_scale_px_per_m)?;
        Ok(())
    }

    /// Effective cavity length, from the mirror model when not given.
    pub fn effective_length(&self) -> Result<f64> {
        match (&self.effective_length_m, &self.mirror) {
            (Some(d), _) => Ok(*d),
            (None, Some(m)) => {
                let model = MirrorModel::new(m.reflectivity_per_period, m.stopband_center_hz)
                    .map_err(Error::model("mirror model"))?;
                Ok(mirror_effective_length(&model, m.physical_gap_m, self.pitch_m))
            }
            (None, None) => Err(Error::Config("no cavity length".into())),
        }
    }

    /// Aperture rule, with `apodized` forcing the `±w0` rule.
    pub fn aperture(&self, apodized: bool) -> Result<ApertureRule> {
        if apodized {
            return Ok(ApertureRule::ApodizedConstW0);
        }
        Ok(match &self.aperture_rule {
            ApertureConfig::Full2w => ApertureRule::Full2w,
            ApertureConfig::ApodizedConstW0 => ApertureRule::ApodizedConstW0,
            ApertureConfig::Custom { x_m, half_width_m } => ApertureRule::Custom(
                ApertureCurve::new(x_m.clone(), half_width_m.clone()).map_err(Error::model("aperture curve"))?,
            ),
        })
    }

    /// Requested modes, `n` outer and `l` inner.
    pub fn mode_list(&self) -> Result<Vec<ModeId>> {
        let mut out = Vec::new();
        for n in self.modes.n_min..=self.modes.n_max {
            for &l in &self.modes.l {
                out.push(ModeId::new(n, l).map_err(Error::model("mode list"))?);
            }
        }
        Ok(out)
    }
}

impl Device {
    /// Reads, validates and resolves a config file.
    pub fn load(path: &Path, apodized: bool) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let config = DeviceConfig::from_json(&text)?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_config(config, base_dir, apodized)
    }

    /// Resolves an already parsed config against `base_dir`.
    pub fn from_config(config: DeviceConfig, base_dir: PathBuf, apodized: bool) -> Result<Self> {
        config.validate()?;
        let material = base_dir.join(&config.material_file);
        if !material.is_file() {
            return Err(Error::Config(format!("material file {} does not exist", material.display())));
        }
        let profile = load_profile(&material)?;
        let vp = match config.vp_m_per_s {
            Some(v) => v,
            None => profile
                .phase_velocity(0.0, Boundary::Free)
                .map_err(Error::model("on-axis velocity"))?,
        };
        let beam = BeamParams::new(config.wavelength_m, config.waist_m).map_err(Error::model("beam"))?;
        let spec = ResonatorSpec::new(
            config.effective_length()?,
            config.pitch_m,
            config.idt_pairs,
            config.mirror_strips,
            config.aperture(apodized)?,
        )
        .and_then(|s| s.with_port_coupling(config.port_coupling))
        .map_err(Error::model("resonator"))?;
        Ok(Self {
            config,
            base_dir,
            profile,
            beam,
            spec,
            vp,
        })
    }

    /// `--out` when given, else the configured directory.
    pub fn output_dir(&self, out: Option<&Path>) -> PathBuf {
        match out {
            Some(p) => p.to_path_buf(),
            None => self.base_dir.join(&self.config.output_dir),
        }
    }
}
