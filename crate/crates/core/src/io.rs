//! CSV sample files, profile sidecars and JSON reports.
//!
//! Sample files have a header naming the coordinate (`x` or `v`) followed by
//! `re,im` and optionally `abs`; the coordinates must be uniformly spaced.
//! Numbers are written with 17 significant digits so files re-read to the
//! same doubles.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid1D};
use crate::profile::{Profile, QuadratureControls};

/// Fixed 17-significant-digit scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `field` as CSV with coordinate column `axis` and, optionally, an
/// `abs` column.
pub fn write_field_csv<W: Write>(out: W, field: &ComplexField, axis: &str, with_abs: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![axis, "re", "im"];
    if with_abs {
        header.push("abs");
    }
    w.write_record(&header).map_err(csv_io)?;
    for (x, z) in field.grid().coordinates().zip(field.values()) {
        let mut row = vec![format_number(x), format_number(z.re), format_number(z.im)];
        if with_abs {
            row.push(format_number(z.norm()));
        }
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse { line, message: format!("{other:?}") },
    }
}

/// A field read back from CSV together with the name of its coordinate
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedField {
    pub axis: String,
    pub field: ComplexField,
}

/// Parses a sample file. Errors carry the 1-based line number.
pub fn read_field_csv<R: Read>(input: R) -> Result<ParsedField> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(csv_io)?.clone();
    let column = |name: &str| header.iter().position(|h| h == name);
    let axis_col = ["x", "v"].iter().find_map(|a| column(a).map(|i| (i, a.to_string())));
    let (axis_idx, axis) =
        axis_col.ok_or_else(|| Error::Parse { line: 1, message: "header needs an `x` or `v` column".into() })?;
    let re_idx = column("re").ok_or_else(|| Error::Parse { line: 1, message: "header lacks `re` column".into() })?;
    let im_idx = column("im").ok_or_else(|| Error::Parse { line: 1, message: "header lacks `im` column".into() })?;

    let mut coords = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_io)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let get = |idx: usize, name: &str| -> Result<f64> {
            let text = record
                .get(idx)
                .ok_or_else(|| Error::Parse { line, message: format!("missing `{name}` value") })?;
            text.parse::<f64>()
                .map_err(|e| Error::Parse { line, message: format!("`{name}` value {text:?}: {e}") })
        };
        coords.push(get(axis_idx, &axis)?);
        values.push(Complex64::new(get(re_idx, "re")?, get(im_idx, "im")?));
    }
    let grid = Grid1D::from_coordinates(&coords)?;
    Ok(ParsedField { axis, field: ComplexField::new(grid, values)? })
}

pub fn read_field_file(path: &Path) -> Result<ParsedField> {
    read_field_csv(File::open(path)?)
}

pub fn write_field_file(path: &Path, field: &ComplexField, axis: &str, with_abs: bool) -> Result<()> {
    write_field_csv(BufWriter::new(File::create(path)?), field, axis, with_abs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchConstant {
    pub re: f64,
    pub im: f64,
}

/// Metadata written next to a profile CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSidecar {
    pub alpha: f64,
    pub epsilon: f64,
    pub branch_c: BranchConstant,
    pub quadrature: QuadratureControls,
    pub convergence_estimate: f64,
    pub unconverged: bool,
}

impl From<&Profile> for ProfileSidecar {
    fn from(p: &Profile) -> Self {
        Self {
            alpha: p.spec.alpha,
            epsilon: p.spec.epsilon,
            branch_c: BranchConstant { re: p.spec.branch_c.re, im: p.spec.branch_c.im },
            quadrature: p.spec.quad,
            convergence_estimate: p.convergence_estimate,
            unconverged: p.unconverged,
        }
    }
}

/// `<output>.json`
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Writes the profile CSV (`v,re,im,abs`) and its sidecar.
pub fn write_profile(output: &Path, profile: &Profile) -> Result<()> {
    write_field_file(output, &profile.field, "v", true)?;
    write_json(&sidecar_path(output), &ProfileSidecar::from(profile))
}

/// Reads the sidecar of a profile CSV if one exists.
pub fn read_sidecar(output: &Path) -> Result<Option<ProfileSidecar>> {
    let path = sidecar_path(output);
    if !path.exists() {
        return Ok(None);
    }
    Ok(Some(serde_json::from_reader(File::open(path)?)?))
}
