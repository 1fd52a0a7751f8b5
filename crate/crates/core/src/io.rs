//! CSV matrices, complex CSV cells, PGM dumps and experiment reports.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! written matrix reads back bit-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexField, RealMatrix};
use crate::spectral::ExperimentReport;

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn parse_grid<T>(text: &str, cell: impl Fn(&str) -> Result<T>) -> Result<(usize, usize, Vec<T>)> {
    let mut rows = 0;
    let mut cols = None;
    let mut data = Vec::new();
    for record in reader(text).records() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {c}",
                    rows + 1,
                    record.len()
                )))
            }
            _ => {}
        }
        for field in record.iter() {
            data.push(cell(field)?);
        }
        rows += 1;
    }
    match cols {
        Some(c) => Ok((rows, c, data)),
        None => Err(Error::InvalidSize("matrix CSV has no rows".into())),
    }
}

pub fn parse_matrix_csv(text: &str) -> Result<RealMatrix> {
    let (rows, cols, data) = parse_grid(text, |s| {
        s.parse::<f64>()
            .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
    })?;
    RealMatrix::new(rows, cols, data)
}

pub fn read_matrix_csv(path: &Path) -> Result<RealMatrix> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

pub fn matrix_to_csv(m: &RealMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(f64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(path: &Path, m: &RealMatrix) -> Result<()> {
    fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

/// Parses `a`, `bi`, `a+bi` or `a-bj` (either `i` or `j` as the unit).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("`{s}` is not a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(
            body[..k].parse::<f64>().map_err(|_| bad())?,
            imag(&body[k..])?,
        )),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn parse_complex_csv(text: &str) -> Result<ComplexField> {
    let (rows, cols, data) = parse_grid(text, parse_complex)?;
    ComplexField::new(rows, cols, data)
}

pub fn read_complex_csv(path: &Path) -> Result<ComplexField> {
    parse_complex_csv(&fs::read_to_string(path)?)
}

/// 8-bit binary PGM, min–max normalized (a constant field maps to 0).
pub fn pgm_bytes(m: &RealMatrix) -> Vec<u8> {
    let lo = m.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = m
        .as_slice()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let mut out = format!("P5\n{} {}\n255\n", m.cols(), m.rows()).into_bytes();
    out.extend(m.as_slice().iter().map(|&x| {
        if span > 0.0 {
            ((x - lo) / span * 255.0).round() as u8
        } else {
            0
        }
    }));
    out
}

pub fn write_pgm(path: &Path, m: &RealMatrix) -> Result<()> {
    fs::write(path, pgm_bytes(m))?;
    Ok(())
}

pub fn write_report_csv(path: &Path, report: &ExperimentReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&report.columns)?;
    for row in &report.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `report.csv`, `field_<stage>.csv` (and `.pgm` when asked) and
/// `physicality.csv` into `dir`. Returns the written paths.
pub fn write_experiment(dir: &Path, report: &ExperimentReport, pgm: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("report.csv");
    write_report_csv(&path, report)?;
    written.push(path);
    for (stage, field) in &report.fields {
        let path = dir.join(format!("field_{stage}.csv"));
        write_matrix_csv(&path, field)?;
        written.push(path);
        if pgm {
            let path = dir.join(format!("field_{stage}.pgm"));
            write_pgm(&path, field)?;
            written.push(path);
        }
    }
    if !report.physicality.is_empty() {
        let path = dir.join("physicality.csv");
        let mut f = fs::File::create(&path)?;
        writeln!(f, "stage,min_eigenvalue,physical")?;
        for c in &report.physicality {
            writeln!(f, "{},{},{}", c.stage, c.min_eigenvalue, c.is_physical())?;
        }
        written.push(path);
    }
    Ok(written)
}
