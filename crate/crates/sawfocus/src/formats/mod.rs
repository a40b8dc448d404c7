//! File formats. Floats are written with `{:e}` (shortest round-trip
//! representation) so that output is byte-stable and reloads exactly.

pub mod field;
pub mod layout;
pub mod material;
pub mod report;
pub mod scan;
pub mod tables;

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Writes `contents`, creating parent directories.
pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents).map_err(|e| Error::io(path, e))
}

/// Reads a headed CSV file. Returns data rows with their one-based line
/// numbers after checking the header against each accepted form.
/// Data rows as `(line, values)`.
pub(crate) type Rows = Vec<(u64, Vec<f64>)>;

pub(crate) fn read_csv(path: &Path, headers: &[&[&str]]) -> Result<(usize, Rows)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::parse(path, 1, format!("{other:?}")),
        })?;
    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(r)) => r,
        Some(Err(e)) => return Err(csv_error(path, e)),
        None => return Err(Error::parse(path, 1, "empty file")),
    };
    let found: Vec<&str> = header.iter().collect();
    let form = headers
        .iter()
        .position(|h| *h == found.as_slice())
        .ok_or_else(|| {
            let expected: Vec<String> = headers.iter().map(|h| h.join(",")).collect();
            Error::parse(path, 1, format!("header `{}`, expected `{}`", found.join(","), expected.join("` or `")))
        })?;
    let width = headers[form].len();
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(Error::parse(path, line, format!("expected {width} fields, found {}", record.len())));
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(path, line, format!("field {} `{s}` is not a finite number", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line, values));
    }
    Ok((form, rows))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(path, line, e.to_string())
}
