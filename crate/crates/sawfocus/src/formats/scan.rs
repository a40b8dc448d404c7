//! Scan CSV: `x_m,y_m,amplitude,phase_rad[,dc_w]`, one row per pixel,
//! `y` outer and `x` inner.

use std::fmt::Write;
use std::path::Path;

use sawfocus_core::imaging::ScanImage;

use super::read_csv;
use crate::error::{Error, Result};

const HEADER: [&str; 4] = ["x_m", "y_m", "amplitude", "phase_rad"];
const HEADER_DC: [&str; 5] = ["x_m", "y_m", "amplitude", "phase_rad", "dc_w"];

/// Loads a scan. The grid is inferred from the first row of `y` values and
/// every row must then follow it exactly.
pub fn load_scan(path: &Path) -> Result<ScanImage> {
    let (form, rows) = read_csv(path, &[&HEADER, &HEADER_DC])?;
    let Some((_, first)) = rows.first() else {
        return Err(Error::parse(path, 2, "no data rows"));
    };
    let y0 = first[1];
    let nx = rows.iter().take_while(|(_, r)| r[1] == y0).count();
    if rows.len() % nx != 0 {
        return Err(Error::parse(
            path,
            rows.last().map_or(0, |r| r.0),
            format!("{} rows do not fill a grid of {nx} columns", rows.len()),
        ));
    }
    let ny = rows.len() / nx;
    let x_grid: Vec<f64> = rows[..nx].iter().map(|(_, r)| r[0]).collect();
    let y_grid: Vec<f64> = (0..ny).map(|j| rows[j * nx].1[1]).collect();
    for (k, (line, r)) in rows.iter().enumerate() {
        if r[0] != x_grid[k % nx] || r[1] != y_grid[k / nx] {
            return Err(Error::parse(path, *line, "pixel out of row-major grid order"));
        }
    }
    let col = |i: usize| rows.iter().map(|(_, r)| r[i]).collect::<Vec<_>>();
    let dc = (form == 1).then(|| col(4));
    ScanImage::new(x_grid, y_grid, col(2), col(3), dc).map_err(Error::model(path.display().to_string()))
}

/// Canonical serialization; `load_scan` followed by this reproduces any file
/// it wrote.
pub fn scan_csv(img: &ScanImage) -> String {
    let dc = img.dc_power();
    let mut out = if dc.is_some() { HEADER_DC.join(",") } else { HEADER.join(",") };
    out.push('\n');
    let nx = img.x_grid().len();
    for (j, y) in img.y_grid().iter().enumerate() {
        for (i, x) in img.x_grid().iter().enumerate() {
            let k = j * nx + i;
            let _ = write!(out, "{x:e},{y:e},{:e},{:e}", img.amplitude()[k], img.phase()[k]);
            if let Some(dc) = dc {
                let _ = write!(out, ",{:e}", dc[k]);
            }
            out.push('\n');
        }
    }
    out
}
