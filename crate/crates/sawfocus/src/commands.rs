//! Command implementations. Each writes its files under `out` and returns
//! their paths in the order written.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::{GrayImage, Luma};

use sawfocus_core::beam::BeamParams;
use sawfocus_core::imaging::{classify_mode_with, fit_waist_with, FitOptions};
use sawfocus_core::layout::{generate_device, LayoutOptions};
use sawfocus_core::resonator::{
    synthesize_s21, thickness_shift, transverse_splitting, ResonanceSet,
};
use sawfocus_core::transducer::{conversion_efficiency, efficiency_ladder};

use crate::config::Device;
use crate::error::{Error, Result};
use crate::formats::field::{field_csv, load_field, FieldEnvelope};
use crate::formats::layout::{export_svg, layout_json};
use crate::formats::material::profile_csv;
use crate::formats::report::{classification_json, fit_json, FitInputs};
use crate::formats::scan::{load_scan, scan_csv};
use crate::formats::tables::{ladder_csv, resonances_csv, spectrum_csv, sweep_csv, SweepRow};
use crate::formats::write_file;
use crate::synth::{linspace, SyntheticScan};

fn emit(out: &Path, name: &str, contents: impl AsRef<[u8]>, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = out.join(name);
    write_file(&path, contents.as_ref())?;
    written.push(path);
    Ok(())
}

/// Resonances of the configured modes with thickness correction applied.
pub fn device_resonances(dev: &Device) -> Result<ResonanceSet> {
    let cfg = &dev.config;
    let modes = cfg.mode_list()?;
    let half = dev.spec.aperture_rule().half_aperture(&dev.beam, 0.0);
    let mut ratio = BTreeMap::new();
    let e0 = conversion_efficiency(&dev.beam, 0, half, cfg.eta).map_err(Error::model("transducer efficiency"))?;
    for m in &modes {
        if let Entry::Vacant(slot) = ratio.entry(m.l()) {
            let e = conversion_efficiency(&dev.beam, m.l(), half, cfg.eta)
                .map_err(Error::model("transducer efficiency"))?;
            slot.insert(e / e0);
        }
    }
    let set = ResonanceSet::for_modes(&dev.spec, &dev.beam, dev.vp, &modes, cfg.q.internal, cfg.q.external, |l| {
        ratio[&l]
    })
    .map_err(Error::model("resonances"))?;
    match &cfg.thickness {
        None => Ok(set),
        Some(t) => {
            let shift = thickness_shift(t.sensitivity_hz_per_m, t.delta_m);
            let entries = set
                .entries()
                .iter()
                .map(|r| {
                    let mut r = *r;
                    r.frequency += shift;
                    r
                })
                .collect();
            ResonanceSet::new(entries).map_err(Error::model("thickness-corrected resonances"))
        }
    }
}

/// `resonances.csv` and `s21.csv`.
pub fn spectrum(dev: &Device, out: &Path) -> Result<Vec<PathBuf>> {
    let set = device_resonances(dev)?;
    let s = &dev.config.spectrum;
    let freq = linspace(s.f_start_hz, s.f_stop_hz, s.points);
    let s21 = synthesize_s21(&set, &freq);
    let mut written = Vec::new();
    emit(out, "resonances.csv", resonances_csv(&set), &mut written)?;
    emit(out, "s21.csv", spectrum_csv(&freq, &s21), &mut written)?;
    Ok(written)
}

/// Waist range `start..=stop` in steps of `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaistRange {
    /// First waist (m).
    pub start: f64,
    /// Last waist (m), included when on the step grid.
    pub stop: f64,
    /// Increment (m).
    pub step: f64,
}

impl WaistRange {
    /// `start + i·step` up to `stop` (with a 1e-9 relative allowance).
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.start > 0.0 && self.step > 0.0 && self.stop >= self.start) {
            return Err(Error::Config(format!(
                "waist range needs 0 < start <= stop and step > 0, got {:e}..{:e} step {:e}",
                self.start, self.stop, self.step
            )));
        }
        let n = ((self.stop - self.start) / self.step * (1.0 + 1e-9)).floor() as usize + 1;
        Ok((0..n).map(|i| self.start + self.step * i as f64).collect())
    }
}

/// Transverse splitting against waist, `w0` outer and `l` inner.
pub fn sweep_rows(dev: &Device, range: WaistRange, modes: &[u32]) -> Result<Vec<SweepRow>> {
    if modes.is_empty() {
        return Err(Error::Config("sweep needs at least one transverse index".into()));
    }
    let mut rows = Vec::new();
    for w0 in range.values()? {
        let beam = BeamParams::new(dev.config.wavelength_m, w0).map_err(Error::model("sweep beam"))?;
        for &l in modes {
            rows.push(SweepRow {
                w0,
                delta_f: transverse_splitting(&dev.spec, &beam, dev.vp, l),
                l,
            });
        }
    }
    Ok(rows)
}

/// `sweep.csv`.
pub fn sweep(dev: &Device, range: WaistRange, modes: &[u32], out: &Path) -> Result<Vec<PathBuf>> {
    let rows = sweep_rows(dev, range, modes)?;
    let mut written = Vec::new();
    emit(out, "sweep.csv", sweep_csv(&rows), &mut written)?;
    Ok(written)
}

/// `layout.json` and `layout.svg`.
pub fn layout(dev: &Device, out: &Path) -> Result<Vec<PathBuf>> {
    let options = LayoutOptions {
        samples_per_edge: dev.config.layout.samples_per_edge,
        ..LayoutOptions::default()
    };
    let set = generate_device(&dev.spec, &dev.beam, &dev.profile, &options).map_err(Error::model("layout"))?;
    let mut written = Vec::new();
    emit(out, "layout.json", layout_json(&set), &mut written)?;
    emit(out, "layout.svg", export_svg(&set, dev.config.layout.svg_scale_px_per_m)?, &mut written)?;
    Ok(written)
}

/// `field_l{l}.csv` and `field_l{l}.json` on the configured grid.
pub fn field(dev: &Device, l: u32, out: &Path) -> Result<Vec<PathBuf>> {
    let g = &dev.config.field;
    let x = linspace(g.x_min_m, g.x_max_m, g.nx);
    let y = linspace(g.y_min_m, g.y_max_m, g.ny);
    let map = dev.beam.render_field(&dev.profile, l, &x, &y).map_err(Error::model("field"))?;
    let envelope = FieldEnvelope {
        mode_l: l,
        wavelength_m: dev.beam.wavelength(),
        waist_m: dev.beam.waist(),
        rayleigh_length_m: dev.beam.rayleigh_length(),
        peak_magnitude: map.peak_magnitude(),
        x_m: x,
        y_m: y,
        re: map.values().iter().map(|v| v.re).collect(),
        im: map.values().iter().map(|v| v.im).collect(),
    };
    let mut json = serde_json::to_string(&envelope).expect("field serializes");
    json.push('\n');
    let mut written = Vec::new();
    emit(out, &format!("field_l{l}.csv"), field_csv(&map), &mut written)?;
    emit(out, &format!("field_l{l}.json"), json, &mut written)?;
    Ok(written)
}

/// Grayscale magnitude (peak = 255) and phase (`-π..π` to `0..255`) PNGs of
/// a field CSV, `+y` at the top.
pub fn raster(field_path: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let map = load_field(field_path)?;
    let (nx, ny) = (map.x_grid().len(), map.y_grid().len());
    let peak = map.peak_magnitude();
    let scale = if peak > 0.0 { 255.0 / peak } else { 0.0 };
    let mut mag = GrayImage::new(nx as u32, ny as u32);
    let mut phase = GrayImage::new(nx as u32, ny as u32);
    for j in 0..ny {
        for i in 0..nx {
            let v = map.get(i, j);
            let row = (ny - 1 - j) as u32;
            mag.put_pixel(i as u32, row, Luma([(v.norm() * scale).round().min(255.0) as u8]));
            let p = (v.arg() + std::f64::consts::PI) / std::f64::consts::TAU * 255.0;
            phase.put_pixel(i as u32, row, Luma([p.round().clamp(0.0, 255.0) as u8]));
        }
    }
    let stem = field_path.file_stem().and_then(|s| s.to_str()).unwrap_or("field").to_owned();
    let mut written = Vec::new();
    for (suffix, img) in [("magnitude", mag), ("phase", phase)] {
        let path = out.join(format!("{stem}_{suffix}.png"));
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        img.save(&path).map_err(|e| match e {
            image::ImageError::IoError(io) => Error::io(&path, io),
            other => Error::Config(format!("{}: {other}", path.display())),
        })?;
        written.push(path);
    }
    Ok(written)
}

/// `ladder.csv`: `E_l / E_0` for `l = 0..=l_max` at the configured aperture.
pub fn ladder(dev: &Device, l_max: u32, out: &Path) -> Result<Vec<PathBuf>> {
    let half = dev.spec.aperture_rule().half_aperture(&dev.beam, 0.0);
    let ladder =
        efficiency_ladder(&dev.beam, l_max, half, dev.config.eta).map_err(Error::model("efficiency ladder"))?;
    let mut written = Vec::new();
    emit(out, "ladder.csv", ladder_csv(&ladder), &mut written)?;
    Ok(written)
}

/// `fit.json` for the column nearest `x_slice`.
pub fn fit(scan: &Path, x_slice: f64, out: &Path) -> Result<Vec<PathBuf>> {
    let img = load_scan(scan)?;
    let opts = FitOptions::default();
    let result = fit_waist_with(&img, x_slice, &opts).map_err(Error::model("waist fit"))?;
    let inputs = FitInputs {
        scan: scan.display().to_string(),
        x_slice_requested_m: x_slice,
        max_iterations: opts.max_iterations,
        step_tol: opts.step_tol,
    };
    let mut written = Vec::new();
    emit(out, "fit.json", fit_json(&result, &inputs), &mut written)?;
    Ok(written)
}

/// `classify.json` against the configured beam.
pub fn classify(dev: &Device, scan: &Path, l_max: u32, threshold: f64, out: &Path) -> Result<Vec<PathBuf>> {
    let img = load_scan(scan)?;
    let c = classify_mode_with(&img, &dev.beam, &dev.profile, l_max, threshold)
        .map_err(Error::model("mode classification"))?;
    let doc = classification_json(
        &c,
        threshold,
        &scan.display().to_string(),
        dev.beam.waist(),
        dev.beam.wavelength(),
    );
    let mut written = Vec::new();
    emit(out, "classify.json", doc, &mut written)?;
    Ok(written)
}

/// Renders a synthetic scan described by a JSON parameter file to
/// `<stem>.csv`.
pub fn synth_scan(params_path: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(params_path).map_err(|e| Error::Config(format!("{}: {e}", params_path.display())))?;
    let params: SyntheticScan =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", params_path.display())))?;
    let img = params.generate()?;
    let stem = params_path.file_stem().and_then(|s| s.to_str()).unwrap_or("scan");
    let mut written = Vec::new();
    emit(out, &format!("{stem}.csv"), scan_csv(&img), &mut written)?;
    Ok(written)
}

/// `reference_love.csv` and `reference_rayleigh.csv`.
pub fn reference_profiles(out: &Path) -> Result<Vec<PathBuf>> {
    use crate::synth::ReferenceMaterial as M;
    let mut written = Vec::new();
    for (name, m) in [("reference_love.csv", M::Love), ("reference_rayleigh.csv", M::Rayleigh)] {
        emit(out, name, profile_csv(&m.profile()?), &mut written)?;
    }
    Ok(written)
}
