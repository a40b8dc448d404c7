//! CSV tables emitted by the spectrum, sweep and ladder commands.

use std::fmt::Write;

use num_complex::Complex64;

use sawfocus_core::resonator::{magnitude_db, ResonanceSet};

/// `freq_hz,re_s21,im_s21,abs_s21_db`. Points with no coupled mode give
/// `-inf` in the last column.
pub fn spectrum_csv(freq: &[f64], s21: &[Complex64]) -> String {
    let mut out = String::from("freq_hz,re_s21,im_s21,abs_s21_db\n");
    for (f, s) in freq.iter().zip(s21) {
        let _ = writeln!(out, "{f:e},{:e},{:e},{:e}", s.re, s.im, magnitude_db(*s));
    }
    out
}

/// `n,l,freq_hz,q_in,q_ext1,q_ext2` in frequency order. Uncoupled ports
/// give `inf`.
pub fn resonances_csv(set: &ResonanceSet) -> String {
    let mut out = String::from("n,l,freq_hz,q_in,q_ext1,q_ext2\n");
    for r in set.entries() {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{:e},{:e}",
            r.mode.n(),
            r.mode.l(),
            r.frequency,
            r.q_internal,
            r.q_external[0],
            r.q_external[1]
        );
    }
    out
}

/// One sweep sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Waist (m).
    pub w0: f64,
    /// Splitting from the fundamental (Hz).
    pub delta_f: f64,
    /// Transverse index.
    pub l: u32,
}

/// `w0_m,delta_f_hz,l`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("w0_m,delta_f_hz,l\n");
    for r in rows {
        let _ = writeln!(out, "{:e},{:e},{}", r.w0, r.delta_f, r.l);
    }
    out
}

/// `l,efficiency_normalized`, with `ladder[l]` the ratio `E_l / E_0`.
pub fn ladder_csv(ladder: &[f64]) -> String {
    let mut out = String::from("l,efficiency_normalized\n");
    for (l, e) in ladder.iter().enumerate() {
        let _ = writeln!(out, "{l},{e:e}");
    }
    out
}
