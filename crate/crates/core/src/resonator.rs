//! Resonance frequencies, transverse-mode splittings, loss bounds and
//! two-port transmission spectra of a focusing SAW resonator.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_2_PI, PI, TAU};

use num_complex::Complex64;

use crate::beam::BeamParams;
use crate::material::AnisotropyProfile;
use crate::numeric::{bisect, Bisection};
use crate::{Error, Result};

/// Half-aperture of the IDT fingers as a function of the on-axis position.
#[derive(Debug, Clone, PartialEq)]
pub struct ApertureCurve {
    x: Vec<f64>,
    half_width: Vec<f64>,
}

impl ApertureCurve {
    /// Piecewise-linear curve over `|x|`; abscissae strictly increasing and
    /// non-negative, widths positive. Constant beyond the table ends.
    pub fn new(x: Vec<f64>, half_width: Vec<f64>) -> Result<Self> {
        if x.is_empty() || x.len() != half_width.len() {
            return Err(Error::invalid("aperture curve needs matching, non-empty arrays"));
        }
        if x[0] < 0.0 || x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("aperture curve abscissae must be non-negative and increasing"));
        }
        if half_width.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::invalid("aperture half-widths must be positive"));
        }
        Ok(Self { x, half_width })
    }

    /// Half-width at on-axis position `x` (m).
    pub fn half_width(&self, x: f64) -> f64 {
        let ax = libm::fabs(x);
        let i = self.x.partition_point(|&v| v <= ax);
        if i == 0 {
            return self.half_width[0];
        }
        if i == self.x.len() {
            return self.half_width[i - 1];
        }
        let t = (ax - self.x[i - 1]) / (self.x[i] - self.x[i - 1]);
        self.half_width[i - 1] + t * (self.half_width[i] - self.half_width[i - 1])
    }

    /// Abscissae (m).
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Tabulated half-widths (m).
    pub fn half_widths(&self) -> &[f64] {
        &self.half_width
    }
}

/// Electrode overlap rule for the transducer fingers.
#[derive(Debug, Clone, PartialEq)]
pub enum ApertureRule {
    /// Fingers span `±2 w(x)`.
    Full2w,
    /// Fingers restricted to `±w0` everywhere.
    ApodizedConstW0,
    /// User-supplied half-width curve.
    Custom(ApertureCurve),
}

impl ApertureRule {
    /// IDT half-aperture at on-axis position `x`.
    pub fn half_aperture(&self, beam: &BeamParams, x: f64) -> f64 {
        match self {
            ApertureRule::Full2w => 2.0 * beam.beam_radius(x),
            ApertureRule::ApodizedConstW0 => beam.waist(),
            ApertureRule::Custom(curve) => curve.half_width(x),
        }
    }
}

/// Geometry and coupling of a two-port resonator.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorSpec {
    effective_length: f64,
    pitch: f64,
    idt_pairs: u32,
    mirror_fingers: u32,
    aperture_rule: ApertureRule,
    port_coupling: [f64; 2],
}

impl ResonatorSpec {
    /// `effective_length` is the mirror-to-mirror distance `d` including
    /// penetration, `pitch` the electrode period. Port couplings default to 1.
    pub fn new(
        effective_length: f64,
        pitch: f64,
        idt_pairs: u32,
        mirror_fingers: u32,
        aperture_rule: ApertureRule,
    ) -> Result<Self> {
        if !(effective_length > 0.0 && effective_length.is_finite()) {
            return Err(Error::invalid(format!("effective length must be positive, got {effective_length}")));
        }
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(Error::invalid(format!("pitch must be positive, got {pitch}")));
        }
        if idt_pairs == 0 || mirror_fingers == 0 {
            return Err(Error::invalid("electrode counts must be at least one"));
        }
        Ok(Self {
            effective_length,
            pitch,
            idt_pairs,
            mirror_fingers,
            aperture_rule,
            port_coupling: [1.0, 1.0],
        })
    }

    /// Sets the per-port external-coupling scales.
    pub fn with_port_coupling(mut self, port_coupling: [f64; 2]) -> Result<Self> {
        if port_coupling.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(Error::invalid("port coupling scales must be non-negative"));
        }
        self.port_coupling = port_coupling;
        Ok(self)
    }

    /// `d` (m).
    pub fn effective_length(&self) -> f64 {
        self.effective_length
    }

    /// Electrode period (m).
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Finger pairs per IDT.
    pub fn idt_pairs(&self) -> u32 {
        self.idt_pairs
    }

    /// Strips per Bragg mirror.
    pub fn mirror_fingers(&self) -> u32 {
        self.mirror_fingers
    }

    /// IDT aperture rule.
    pub fn aperture_rule(&self) -> &ApertureRule {
        &self.aperture_rule
    }

    /// Per-port coupling scale.
    pub fn port_coupling(&self) -> [f64; 2] {
        self.port_coupling
    }
}

/// Longitudinal index `n >= 1` and transverse index `l >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId {
    n: u32,
    l: u32,
}

impl ModeId {
    /// Fails for `n = 0`.
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("longitudinal index n must be >= 1"));
        }
        Ok(Self { n, l })
    }

    /// Longitudinal index.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Transverse index.
    pub fn l(&self) -> u32 {
        self.l
    }
}

/// One resonance with its quality factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    /// Mode indices.
    pub mode: ModeId,
    /// Resonance frequency (Hz).
    pub frequency: f64,
    /// Internal quality factor.
    pub q_internal: f64,
    /// External quality factor per port; `INFINITY` for an uncoupled port.
    pub q_external: [f64; 2],
    /// Phase offset of the mode's contribution to `S21` (rad).
    pub phase: f64,
}

impl Resonance {
    /// Loss rates `(κ_ext1, κ_ext2, κ_tot)` in rad/s.
    pub fn rates(&self) -> (f64, f64, f64) {
        let omega = TAU * self.frequency;
        let k1 = omega / self.q_external[0];
        let k2 = omega / self.q_external[1];
        (k1, k2, omega / self.q_internal + k1 + k2)
    }
}

/// Resonances sorted by frequency.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResonanceSet {
    entries: Vec<Resonance>,
}

impl ResonanceSet {
    /// Validates and sorts the entries.
    pub fn new(mut entries: Vec<Resonance>) -> Result<Self> {
        for r in &entries {
            if !(r.frequency > 0.0 && r.frequency.is_finite()) {
                return Err(Error::invalid(format!("resonance frequency must be positive, got {}", r.frequency)));
            }
            if !(r.q_internal > 0.0 && r.q_internal.is_finite()) {
                return Err(Error::invalid(format!("internal Q must be positive, got {}", r.q_internal)));
            }
            if r.q_external.iter().any(|q| !(*q > 0.0)) {
                return Err(Error::invalid("external Q must be positive (INFINITY for no coupling)"));
            }
        }
        entries.sort_by(|a, b| a.frequency.total_cmp(&b.frequency).then(a.mode.cmp(&b.mode)));
        Ok(Self { entries })
    }

    /// Builds the set for a list of modes. `coupling_ratio(l)` is the
    /// normalised transducer efficiency `E_l / E_0` that scales the base
    /// external coupling of both ports.
    pub fn for_modes(
        spec: &ResonatorSpec,
        beam: &BeamParams,
        vp: f64,
        modes: &[ModeId],
        q_internal: f64,
        q_external_base: [f64; 2],
        coupling_ratio: impl Fn(u32) -> f64,
    ) -> Result<Self> {
        let entries = modes
            .iter()
            .map(|&mode| {
                let ratio = coupling_ratio(mode.l);
                let q_external = [0, 1].map(|port| {
                    let scale = ratio * spec.port_coupling[port];
                    if scale > 0.0 {
                        q_external_base[port] / scale
                    } else {
                        f64::INFINITY
                    }
                });
                Resonance {
                    mode,
                    frequency: resonance_frequency(spec, beam, vp, mode),
                    q_internal,
                    q_external,
                    phase: 0.0,
                }
            })
            .collect();
        Self::new(entries)
    }

    /// Entries in frequency order.
    pub fn entries(&self) -> &[Resonance] {
        &self.entries
    }

    /// Number of resonances.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when there are no resonances.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `f_{n,l} = (v_p / 2d) [n + (2/π)(l + 1/2) atan(d / 2x_R)]`.
pub fn resonance_frequency(spec: &ResonatorSpec, beam: &BeamParams, vp: f64, mode: ModeId) -> f64 {
    let d = spec.effective_length;
    let fsr = vp / (2.0 * d);
    let gouy = FRAC_2_PI * (mode.l as f64 + 0.5) * libm::atan(d / (2.0 * beam.rayleigh_length()));
    fsr * mode.n as f64 + fsr * gouy
}

/// Solves the round-trip condition `φ_l(d/2,0) - φ_l(-d/2,0) + k d = n π`
/// for the frequency by bisection, with `k = 2π f / v_p` and the beam's
/// on-axis phase.
pub fn round_trip_phase_solve(spec: &ResonatorSpec, beam: &BeamParams, vp: f64, mode: ModeId) -> Result<f64> {
    if !(vp > 0.0 && vp.is_finite()) {
        return Err(Error::invalid(format!("phase velocity must be positive, got {vp}")));
    }
    let profile = AnisotropyProfile::isotropic(vp)?;
    let half = 0.5 * spec.effective_length;
    let gouy_difference = beam.wavefront_phase(&profile, mode.l, half, 0.0)?
        - beam.wavefront_phase(&profile, mode.l, -half, 0.0)?;
    let target = mode.n as f64 * PI;
    let condition = |f: f64| gouy_difference + TAU * f / vp * spec.effective_length - target;

    let estimate = resonance_frequency(spec, beam, vp, mode);
    let (mut lo, mut hi) = (0.5 * estimate, 1.5 * estimate);
    for _ in 0..16 {
        if condition(lo) < 0.0 && condition(hi) > 0.0 {
            break;
        }
        lo *= 0.5;
        hi *= 2.0;
    }
    bisect(condition, lo, hi, Bisection { rel_tol: 1e-12, max_iter: 400 })
}

/// `Δf_{l0} = (v_p / 2d)(2l/π) atan(d / 2x_R)`.
pub fn transverse_splitting(spec: &ResonatorSpec, beam: &BeamParams, vp: f64, l: u32) -> f64 {
    let d = spec.effective_length;
    vp / (2.0 * d) * (FRAC_2_PI * l as f64) * libm::atan(d / (2.0 * beam.rayleigh_length()))
}

/// Longitudinal mode spacing `v_p / 2d`.
pub fn free_spectral_range(vp: f64, effective_length: f64) -> f64 {
    vp / (2.0 * effective_length)
}

/// Diffraction-limited quality factor `Q_d = 5π / |1 + γ| (W/λ)²` of a
/// planar resonator with full beam width `W`.
pub fn diffraction_q(gamma: f64, full_width: f64, wavelength: f64) -> Result<f64> {
    if !(full_width > 0.0) || !(wavelength > 0.0) {
        return Err(Error::invalid("beam width and wavelength must be positive"));
    }
    let denom = libm::fabs(1.0 + gamma);
    if denom == 0.0 {
        return Err(Error::DivideByZero(
            "gamma = -1 is the autocollimating case; the diffraction-limited Q is unbounded".into(),
        ));
    }
    let ratio = full_width / wavelength;
    Ok(5.0 * PI / denom * ratio * ratio)
}

/// Linear film-thickness correction `Δf = sensitivity · Δt`
/// (`sensitivity` in Hz/m).
pub fn thickness_shift(sensitivity: f64, delta_thickness: f64) -> f64 {
    sensitivity * delta_thickness
}

/// Bragg-mirror model with penetration length `L_p = pitch / (4 r_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorModel {
    reflectivity_per_period: f64,
    stopband_center: f64,
}

impl MirrorModel {
    /// `0 < r_s < 1`; `stopband_center` in Hz.
    pub fn new(reflectivity_per_period: f64, stopband_center: f64) -> Result<Self> {
        if !(reflectivity_per_period > 0.0 && reflectivity_per_period < 1.0) {
            return Err(Error::invalid(format!(
                "reflectivity per period must lie in (0, 1), got {reflectivity_per_period}"
            )));
        }
        if !(stopband_center > 0.0 && stopband_center.is_finite()) {
            return Err(Error::invalid("stopband center must be positive"));
        }
        Ok(Self {
            reflectivity_per_period,
            stopband_center,
        })
    }

    /// Reflectivity per electrode period `r_s`.
    pub fn reflectivity_per_period(&self) -> f64 {
        self.reflectivity_per_period
    }

    /// Stopband center (Hz).
    pub fn stopband_center(&self) -> f64 {
        self.stopband_center
    }

    /// `L_p = pitch / (4 r_s)`.
    pub fn penetration_length(&self, pitch: f64) -> f64 {
        pitch / (4.0 * self.reflectivity_per_period)
    }

    /// Full stopband width `2 r_s f0 / π` (Hz).
    pub fn stopband_width(&self) -> f64 {
        2.0 * self.reflectivity_per_period * self.stopband_center / PI
    }
}

/// `d = gap + 2 L_p`, with `gap` the physical distance between the mirrors'
/// inner edges.
pub fn mirror_effective_length(mirror: &MirrorModel, physical_gap: f64, pitch: f64) -> f64 {
    physical_gap + 2.0 * mirror.penetration_length(pitch)
}

/// Per-period reflectivity that makes [`mirror_effective_length`] equal
/// `target_length`. Fails when the implied `r_s` is outside `(0, 1)`.
pub fn calibrate_reflectivity(target_length: f64, physical_gap: f64, pitch: f64) -> Result<f64> {
    let penetration = 0.5 * (target_length - physical_gap);
    if !(penetration > 0.0) {
        return Err(Error::invalid("target length must exceed the physical gap"));
    }
    let r = pitch / (4.0 * penetration);
    if !(r < 1.0) {
        return Err(Error::invalid(format!(
            "penetration {penetration:e} m is shorter than a quarter pitch; r_s = {r} is not < 1"
        )));
    }
    Ok(r)
}

/// Comparison of the predicted longitudinal spacing with a measured one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsrDiagnostic {
    /// `v_p / 2d` (Hz).
    pub predicted: f64,
    /// Measured spacing of consecutive fundamentals (Hz).
    pub observed: f64,
    /// `observed - predicted` (Hz).
    pub residual: f64,
    /// Velocity that would reproduce the observed spacing, `2 d Δf` (m/s).
    pub implied_velocity: f64,
}

/// Reports how far the measured spacing of two fundamentals is from `v_p/2d`.
pub fn fsr_diagnostic(vp: f64, effective_length: f64, lower_peak: f64, upper_peak: f64) -> FsrDiagnostic {
    let predicted = free_spectral_range(vp, effective_length);
    let observed = upper_peak - lower_peak;
    FsrDiagnostic {
        predicted,
        observed,
        residual: observed - predicted,
        implied_velocity: 2.0 * effective_length * observed,
    }
}

/// Coherent input-output sum
/// `S21(f) = Σ e^{iφ} sqrt(κ1 κ2) / (i 2π (f - f0) + κ_tot / 2)`.
pub fn synthesize_s21(set: &ResonanceSet, freq_grid: &[f64]) -> Vec<Complex64> {
    let modes: Vec<(f64, f64, f64, Complex64)> = set
        .entries
        .iter()
        .map(|r| {
            let (k1, k2, kt) = r.rates();
            (r.frequency, libm::sqrt(k1 * k2), kt, Complex64::from_polar(1.0, r.phase))
        })
        .collect();
    freq_grid
        .iter()
        .map(|&f| {
            modes
                .iter()
                .filter(|m| m.1 > 0.0)
                .map(|&(f0, coupling, kt, rot)| rot * coupling / Complex64::new(0.5 * kt, TAU * (f - f0)))
                .sum()
        })
        .collect()
}

/// `20 log10 |s|`.
pub fn magnitude_db(s: Complex64) -> f64 {
    20.0 * libm::log10(s.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ResonatorSpec {
        ResonatorSpec::new(33.6e-6, 1e-6, 5, 200, ApertureRule::Full2w).unwrap()
    }

    #[test]
    fn planar_limit_is_fsr_multiple() {
        let beam = BeamParams::new(2e-6, 1.0).unwrap();
        let f = resonance_frequency(&spec(), &beam, 4300.0, ModeId::new(40, 3).unwrap());
        let base = 40.0 * 4300.0 / (2.0 * 33.6e-6);
        assert!((f - base).abs() / base < 1e-9);
    }

    #[test]
    fn tight_focus_limit() {
        let beam = BeamParams::new(2e-6, 1e-11).unwrap();
        let f = resonance_frequency(&spec(), &beam, 4300.0, ModeId::new(40, 2).unwrap());
        let limit = 4300.0 / (2.0 * 33.6e-6) * 42.5;
        assert!((f - limit).abs() / limit < 1e-9);
    }

    #[test]
    fn solver_agrees_and_is_monotone() {
        let beam = BeamParams::new(2e-6, 2e-6).unwrap();
        let mode = ModeId::new(67, 0).unwrap();
        let closed = resonance_frequency(&spec(), &beam, 4300.0, mode);
        let solved = round_trip_phase_solve(&spec(), &beam, 4300.0, mode).unwrap();
        assert!((closed - solved).abs() / closed < 1e-9);
        let next = round_trip_phase_solve(&spec(), &beam, 4300.0, ModeId::new(68, 0).unwrap()).unwrap();
        assert!(next > solved);
    }

    #[test]
    fn splitting_zero_for_fundamental() {
        let beam = BeamParams::new(2e-6, 2e-6).unwrap();
        assert_eq!(transverse_splitting(&spec(), &beam, 4420.0, 0), 0.0);
    }

    #[test]
    fn diffraction_q_values() {
        assert!((diffraction_q(0.0, 2e-6, 2e-6).unwrap() - 5.0 * PI).abs() < 1e-15);
        let q = diffraction_q(-0.45, 4e-6, 2e-6).unwrap();
        assert!((q - 5.0 * PI / 0.55 * 4.0).abs() / q < 1e-12);
        let q2 = diffraction_q(-0.45, 8e-6, 2e-6).unwrap();
        assert!((q2 / q - 4.0).abs() < 1e-12);
        assert!(matches!(diffraction_q(-1.0, 4e-6, 2e-6), Err(Error::DivideByZero(_))));
    }

    #[test]
    fn mirror_calibration_round_trip() {
        let r = calibrate_reflectivity(33.6e-6, 21.5e-6, 1e-6).unwrap();
        let m = MirrorModel::new(r, 2.2e9).unwrap();
        let d = mirror_effective_length(&m, 21.5e-6, 1e-6);
        assert!((d - 33.6e-6).abs() < 1e-18);
        let hard = MirrorModel::new(1.0 - 1e-12, 2.2e9).unwrap();
        assert!((hard.penetration_length(1e-6) - 0.25e-6).abs() < 1e-15);
        assert!(MirrorModel::new(1.0, 1e9).is_err());
        assert!(calibrate_reflectivity(1e-6, 1e-6, 1e-6).is_err());
    }

    #[test]
    fn fsr_mismatch_is_reported() {
        let diag = fsr_diagnostic(4300.0, 33.6e-6, 2.15e9, 2.23e9);
        assert!((diag.predicted - 63.988e6).abs() < 1e3);
        assert!((diag.residual - (80e6 - diag.predicted)).abs() < 1e-3);
        assert!((diag.implied_velocity - 5376.0).abs() < 1e-6);
    }

    #[test]
    fn thickness_examples() {
        assert_eq!(thickness_shift(-0.45e15, 0.0), 0.0);
        assert_eq!(thickness_shift(-0.45e6 / 1e-9, 20e-9), -9e6);
        assert_eq!(thickness_shift(-3.0, 4.0), 2.0 * thickness_shift(-3.0, 2.0));
    }

    fn single(q_in: f64, q1: f64, q2: f64) -> ResonanceSet {
        ResonanceSet::new(alloc::vec![Resonance {
            mode: ModeId::new(1, 0).unwrap(),
            frequency: 1e9,
            q_internal: q_in,
            q_external: [q1, q2],
            phase: 0.0,
        }])
        .unwrap()
    }

    #[test]
    fn critical_coupling_transmits_fully() {
        let s = synthesize_s21(&single(1e300, 1000.0, 1000.0), &[1e9]);
        assert!((s[0].norm() - 1.0).abs() < 1e-12);
        let set = single(3000.0, 1000.0, 2000.0);
        let (k1, k2, kt) = set.entries()[0].rates();
        let s = synthesize_s21(&set, &[1e9]);
        assert!((s[0].norm_sqr() - 4.0 * k1 * k2 / (kt * kt)).abs() < 1e-12);
        let far = synthesize_s21(&set, &[1.5e9]);
        let detuned = Complex64::new(0.0, 2.0 * PI * 0.5e9) + 0.5 * kt;
        assert!((far[0].norm() - (k1 * k2).sqrt() / detuned.norm()).abs() < 1e-15);
    }

    #[test]
    fn uncoupled_mode_is_invisible() {
        let s = synthesize_s21(&single(1000.0, f64::INFINITY, 1000.0), &[1e9, 1.001e9]);
        assert!(s.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn set_is_sorted_and_validated() {
        let beam = BeamParams::new(2e-6, 2e-6).unwrap();
        let modes = [ModeId::new(34, 0).unwrap(), ModeId::new(33, 2).unwrap(), ModeId::new(33, 0).unwrap()];
        let set = ResonanceSet::for_modes(&spec(), &beam, 4420.0, &modes, 3000.0, [2000.0; 2], |_| 1.0).unwrap();
        assert!(set.entries().windows(2).all(|w| w[0].frequency <= w[1].frequency));
        assert!(ModeId::new(0, 0).is_err());
        assert!(ResonanceSet::new(alloc::vec![Resonance {
            mode: ModeId::new(1, 0).unwrap(),
            frequency: -1.0,
            q_internal: 1.0,
            q_external: [1.0; 2],
            phase: 0.0
        }])
        .is_err());
    }

    #[test]
    fn custom_aperture_interpolates() {
        let c = ApertureCurve::new(alloc::vec![0.0, 10e-6], alloc::vec![2e-6, 4e-6]).unwrap();
        assert!((c.half_width(-5e-6) - 3e-6).abs() < 1e-18);
        assert_eq!(c.half_width(20e-6), 4e-6);
    }
}
