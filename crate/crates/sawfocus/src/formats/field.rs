//! Complex field maps: CSV `x_m,y_m,re,im` and a JSON envelope.

use std::fmt::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use sawfocus_core::beam::ComplexFieldMap;

use super::read_csv;
use crate::error::{Error, Result};

const HEADER: [&str; 4] = ["x_m", "y_m", "re", "im"];

/// JSON form of a field map. `re` and `im` are row-major, `y` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEnvelope {
    /// Transverse mode index.
    pub mode_l: u32,
    /// SAW wavelength.
    pub wavelength_m: f64,
    /// Beam waist.
    pub waist_m: f64,
    /// Rayleigh length.
    pub rayleigh_length_m: f64,
    /// Largest `|u|` on the grid.
    pub peak_magnitude: f64,
    /// `x` samples.
    pub x_m: Vec<f64>,
    /// `y` samples.
    pub y_m: Vec<f64>,
    /// Real parts.
    pub re: Vec<f64>,
    /// Imaginary parts.
    pub im: Vec<f64>,
}

/// CSV form of a field map.
pub fn field_csv(map: &ComplexFieldMap) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    let nx = map.x_grid().len();
    for (k, v) in map.values().iter().enumerate() {
        let x = map.x_grid()[k % nx];
        let y = map.y_grid()[k / nx];
        let _ = writeln!(out, "{x:e},{y:e},{:e},{:e}", v.re, v.im);
    }
    out
}

/// Reads a field CSV written by [`field_csv`].
pub fn load_field(path: &Path) -> Result<ComplexFieldMap> {
    let (_, rows) = read_csv(path, &[&HEADER])?;
    let Some((_, first)) = rows.first() else {
        return Err(Error::parse(path, 2, "no data rows"));
    };
    let nx = rows.iter().take_while(|(_, r)| r[1] == first[1]).count();
    if rows.len() % nx != 0 {
        return Err(Error::parse(path, rows.last().map_or(0, |r| r.0), "rows do not fill a grid"));
    }
    let ny = rows.len() / nx;
    let x: Vec<f64> = rows[..nx].iter().map(|(_, r)| r[0]).collect();
    let y: Vec<f64> = (0..ny).map(|j| rows[j * nx].1[1]).collect();
    for (k, (line, r)) in rows.iter().enumerate() {
        if r[0] != x[k % nx] || r[1] != y[k / nx] {
            return Err(Error::parse(path, *line, "pixel out of row-major grid order"));
        }
    }
    let values = rows.iter().map(|(_, r)| Complex64::new(r[2], r[3])).collect();
    ComplexFieldMap::new(x, y, values).map_err(Error::model(path.display().to_string()))
}
