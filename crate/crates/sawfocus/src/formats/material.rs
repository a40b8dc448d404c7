//! Anisotropy profile CSV: `theta_rad,vp_free_mps,vp_short_mps`.

use std::fmt::Write;
use std::path::Path;

use sawfocus_core::material::{AnisotropyProfile, Boundary};

use super::read_csv;
use crate::error::{Error, Result};

/// Column names.
pub const HEADER: [&str; 3] = ["theta_rad", "vp_free_mps", "vp_short_mps"];

/// Loads and validates a profile.
pub fn load_profile(path: &Path) -> Result<AnisotropyProfile> {
    let (_, rows) = read_csv(path, &[&HEADER])?;
    if rows.is_empty() {
        return Err(Error::parse(path, 2, "no data rows"));
    }
    for pair in rows.windows(2) {
        if !(pair[1].1[0] > pair[0].1[0]) {
            return Err(Error::parse(path, pair[1].0, "theta_rad must be strictly increasing"));
        }
    }
    for (line, r) in &rows {
        if !(r[1] > 0.0 && r[2] > 0.0) {
            return Err(Error::parse(path, *line, "velocities must be positive"));
        }
        if r[2] > r[1] {
            return Err(Error::parse(path, *line, "short-circuit velocity exceeds free-surface velocity"));
        }
    }
    let col = |i: usize| rows.iter().map(|(_, r)| r[i]).collect::<Vec<_>>();
    AnisotropyProfile::new(&col(0), &col(1), &col(2)).map_err(Error::model(path.display().to_string()))
}

/// Serializes a profile in the loader's format.
pub fn profile_csv(profile: &AnisotropyProfile) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    let free = profile.samples(Boundary::Free);
    let short = profile.samples(Boundary::Short);
    for (i, t) in profile.theta_grid().iter().enumerate() {
        let _ = writeln!(out, "{t:e},{:e},{:e}", free[i], short[i]);
    }
    out
}
