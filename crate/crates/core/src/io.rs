//! File formats.
//!
//! Recordings are CSV with the header `t_ms,x_deg,y_deg`, one row per
//! sample. Spectra, responses and velocity traces are two-column CSV
//! (`freq_hz,mag_db`, `freq_hz,amplitude_deg`, `t_ms,v_deg_s`). Floats are
//! written in shortest round-trip form so files reload bit-exactly.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::kinematics::Recording;
use crate::spectral::{AmplitudeSpectrum, FrequencyResponse, ResponseSource};

pub const RECORDING_HEADER: [&str; 3] = ["t_ms", "x_deg", "y_deg"];

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn load_recording(path: impl AsRef<Path>, fs_hz: f64) -> Result<Recording> {
    read_recording(File::open(path)?, fs_hz)
}

/// Parses and validates a recording. Timestamps must increase, every value
/// must be finite and each step must be within half a sample period of
/// `1000 / fs_hz` ms. Errors carry the 1-based file line.
pub fn read_recording<R: Read>(reader: R, fs_hz: f64) -> Result<Recording> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    for col in RECORDING_HEADER {
        if !names.contains(&col) {
            return Err(parse_err(1, format!("missing column `{col}` (header is `{}`)", names.join(","))));
        }
    }
    let idx: Vec<usize> = RECORDING_HEADER
        .iter()
        .map(|c| names.iter().position(|n| n == c).unwrap())
        .collect();

    let (mut t, mut x, mut y) = (Vec::new(), Vec::new(), Vec::new());
    let mut record = csv::StringRecord::new();
    loop {
        let more = csv.read_record(&mut record).map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        if !more {
            break;
        }
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut values = [0.0; 3];
        for (slot, (&col, name)) in values.iter_mut().zip(idx.iter().zip(RECORDING_HEADER)) {
            let field = record.get(col).ok_or_else(|| parse_err(line, format!("missing `{name}` value")))?;
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line, format!("`{name}` value `{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("`{name}` is {field}; recordings with gaps are rejected")));
            }
            *slot = v;
        }
        if let Some(&prev) = t.last() {
            if values[0] <= prev {
                return Err(parse_err(line, format!("timestamp {} does not increase (previous {prev})", values[0])));
            }
        }
        t.push(values[0]);
        x.push(values[1]);
        y.push(values[2]);
        // data rows start on line 2
        debug_assert!(line >= 2);
    }
    if t.is_empty() {
        return Err(parse_err(1, "recording has no samples"));
    }
    let rec = Recording { fs_hz, t_ms: t, x_deg: x, y_deg: y };
    if let Some(i) = rec.first_irregular_step() {
        return Err(parse_err(
            i + 2,
            format!(
                "sampling gap of {} ms, expected {} ms at {fs_hz} Hz",
                rec.t_ms[i] - rec.t_ms[i - 1],
                rec.period_ms()
            ),
        ));
    }
    rec.validate()?;
    Ok(rec)
}

pub fn write_recording<W: Write>(writer: W, rec: &Recording) -> Result<()> {
    write_columns(writer, &RECORDING_HEADER, &[&rec.t_ms, &rec.x_deg, &rec.y_deg])
}

/// Writes equal-length columns under `header`.
pub fn write_columns<W: Write>(writer: W, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let mut out = std::io::BufWriter::new(writer);
    writeln!(out, "{}", header.join(","))?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| format!("{}", c[i])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// A two-column CSV series with its header.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub header: [String; 2],
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn read_series<R: Read>(reader: R) -> Result<Series> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.len() != 2 {
        return Err(parse_err(1, format!("expected 2 columns, found {}", header.len())));
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let parse = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| parse_err(line, format!("`{}` is not a number", &record[i])))
        };
        x.push(parse(0)?);
        y.push(parse(1)?);
    }
    Ok(Series { header: [header[0].to_string(), header[1].to_string()], x, y })
}

pub fn write_spectrum<W: Write>(writer: W, spectrum: &AmplitudeSpectrum) -> Result<()> {
    write_columns(writer, &["freq_hz", "amplitude_deg"], &[&spectrum.freqs_hz, &spectrum.amplitude_deg])
}

pub fn write_response<W: Write>(writer: W, response: &FrequencyResponse) -> Result<()> {
    write_columns(writer, &["freq_hz", "mag_db"], &[&response.freqs_hz, &response.magnitude_db])
}

/// Reads a `freq_hz,mag_db` file. The source is not stored in the file.
pub fn read_response<R: Read>(reader: R, source: ResponseSource) -> Result<FrequencyResponse> {
    let s = read_series(reader)?;
    if s.header != ["freq_hz", "mag_db"] {
        return Err(parse_err(1, format!("expected header `freq_hz,mag_db`, got `{}`", s.header.join(","))));
    }
    Ok(FrequencyResponse { freqs_hz: s.x, magnitude_db: s.y, source })
}

/// Writes to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: impl AsRef<Path>, write: impl FnOnce(&mut File) -> Result<()>) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write(tmp.as_file_mut())?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
