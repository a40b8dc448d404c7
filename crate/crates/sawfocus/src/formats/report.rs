//! JSON reports of the imaging commands.

use serde::Serialize;

use sawfocus_core::imaging::{Classification, WaistFit};

/// Inputs echoed into a report.
#[derive(Debug, Clone, Serialize)]
pub struct FitInputs {
    /// Scan file as given.
    pub scan: String,
    /// Requested slice (m).
    pub x_slice_requested_m: f64,
    /// Iteration cap.
    pub max_iterations: usize,
    /// Step tolerance.
    pub step_tol: f64,
}

#[derive(Serialize)]
struct FitOut<'a> {
    w0_est: f64,
    w0_err: f64,
    center_y: f64,
    amplitude_scale: f64,
    offset: f64,
    residual_rms: f64,
    iterations: usize,
    x_slice: f64,
    peak_at_edge: bool,
    config: &'a FitInputs,
}

/// Fit report with every [`WaistFit`] field plus the inputs.
pub fn fit_json(fit: &WaistFit, inputs: &FitInputs) -> String {
    let doc = FitOut {
        w0_est: fit.w0_est,
        w0_err: fit.w0_err,
        center_y: fit.center_y,
        amplitude_scale: fit.amplitude_scale,
        offset: fit.offset,
        residual_rms: fit.residual_rms,
        iterations: fit.iterations,
        x_slice: fit.x_slice,
        peak_at_edge: fit.peak_at_edge,
        config: inputs,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ClassOut<'a> {
    l_best: u32,
    projections: &'a [f64],
    spurious: bool,
    threshold: f64,
    x_slice: f64,
    scan: &'a str,
    waist_m: f64,
    wavelength_m: f64,
}

/// Classification report.
pub fn classification_json(c: &Classification, threshold: f64, scan: &str, waist: f64, wavelength: f64) -> String {
    let doc = ClassOut {
        l_best: c.l_best,
        projections: &c.projections,
        spurious: c.spurious,
        threshold,
        x_slice: c.x_slice,
        scan,
        waist_m: waist,
        wavelength_m: wavelength,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}
