//! File formats for signals, matrices, IF tracks and reports.
//!
//! Floats are written in shortest round-trip form, so every write/read pair
//! is bit-exact. Every file goes to a temporary sibling first and is renamed
//! into place, so a failed run never leaves a partial file behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};
use crate::instfreq::{Estimator, IFTrack};
use crate::signal::{Grid, Signal};
use crate::transforms::{MatrixValues, TimeFrequencyMatrix, ValueKind};

/// `path` with `suffix` appended to the file name (`out` + `.csv`).
pub fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| TfError::Io(e.error))?;
    Ok(())
}

/// Writes several files; nothing is renamed into place until all contents
/// have been produced.
fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    for (path, bytes) in files {
        write_atomic(path, bytes)?;
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn csv_err(e: csv::Error) -> TfError {
    TfError::Format(e.to_string())
}

fn parse_f64(field: &str, what: &str, row: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| TfError::Format(format!("row {row}: cannot parse {what} from {field:?}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SignalMeta {
    t0: f64,
    dt: f64,
    n: usize,
    unit_time: String,
}

/// Writes `<stem>.csv` (`t,re,im`) and `<stem>.json` (grid metadata).
pub fn write_signal(stem: &Path, s: &Signal) -> Result<()> {
    let g = s.grid();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "re", "im"]).map_err(csv_err)?;
    for (k, z) in s.samples().iter().enumerate() {
        w.write_record([fmt(g.time(k)), fmt(z.re), fmt(z.im)]).map_err(csv_err)?;
    }
    let csv_bytes = w.into_inner().map_err(|e| TfError::Format(e.to_string()))?;
    let meta = SignalMeta { t0: g.t0, dt: g.dt, n: g.n, unit_time: "s".into() };
    let mut json = serde_json::to_vec_pretty(&meta)?;
    json.push(b'\n');
    write_all_atomic(&[(with_suffix(stem, ".csv"), csv_bytes), (with_suffix(stem, ".json"), json)])
}

pub fn read_signal(stem: &Path) -> Result<Signal> {
    let meta: SignalMeta = serde_json::from_slice(&fs::read(with_suffix(stem, ".json"))?)?;
    if meta.unit_time != "s" {
        return Err(TfError::Format(format!("unsupported time unit {:?}", meta.unit_time)));
    }
    let grid = Grid::new(meta.t0, meta.dt, meta.n)?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_path(with_suffix(stem, ".csv")).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?;
    if header.iter().map(str::trim).collect::<Vec<_>>() != ["t", "re", "im"] {
        return Err(TfError::Format(format!("expected header t,re,im, got {:?}", header)));
    }
    let mut samples = Vec::with_capacity(grid.n);
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 3 {
            return Err(TfError::Format(format!("row {k}: expected 3 fields, got {}", rec.len())));
        }
        if k >= grid.n {
            return Err(TfError::Format(format!("more than n = {} data rows", grid.n)));
        }
        let t = parse_f64(&rec[0], "t", k)?;
        let expect = grid.time(k);
        if !((t - expect).abs() <= 1e-12 * expect.abs().max(grid.dt)) {
            return Err(TfError::Format(format!("row {k}: t = {t} does not match grid time {expect}")));
        }
        let re = parse_f64(&rec[1], "re", k)?;
        let im = parse_f64(&rec[2], "im", k)?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(TfError::Format(format!("row {k}: non-finite sample")));
        }
        samples.push(Complex64::new(re, im));
    }
    if samples.len() != grid.n {
        return Err(TfError::Format(format!("{} data rows, metadata says n = {}", samples.len(), grid.n)));
    }
    Signal::new(grid, samples)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MatrixAxes {
    time_axis: Vec<f64>,
    freq_axis: Vec<f64>,
    value_kind: ValueKind,
}

/// Writes `<stem>.csv` (one time row per line, complex entries as `re,im`
/// pairs) and `<stem>.axes.json`.
pub fn write_matrix(stem: &Path, m: &TimeFrequencyMatrix) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let cols = m.cols();
    for k in 0..m.rows() {
        let row: Vec<String> = match m.values() {
            MatrixValues::Real(v) => v[k * cols..(k + 1) * cols].iter().map(|&x| fmt(x)).collect(),
            MatrixValues::Complex(v) => {
                v[k * cols..(k + 1) * cols].iter().flat_map(|z| [fmt(z.re), fmt(z.im)]).collect()
            }
        };
        w.write_record(&row).map_err(csv_err)?;
    }
    let csv_bytes = w.into_inner().map_err(|e| TfError::Format(e.to_string()))?;
    let axes = MatrixAxes { time_axis: m.time_axis().to_vec(), freq_axis: m.freq_axis().to_vec(), value_kind: m.kind() };
    let mut json = serde_json::to_vec(&axes)?;
    json.push(b'\n');
    write_all_atomic(&[(with_suffix(stem, ".csv"), csv_bytes), (with_suffix(stem, ".axes.json"), json)])
}

pub fn read_matrix(stem: &Path) -> Result<TimeFrequencyMatrix> {
    let axes: MatrixAxes = serde_json::from_slice(&fs::read(with_suffix(stem, ".axes.json"))?)?;
    let cols = axes.freq_axis.len();
    let per_row = match axes.value_kind {
        ValueKind::Real => cols,
        ValueKind::Complex => 2 * cols,
    };
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(with_suffix(stem, ".csv")).map_err(csv_err)?;
    let mut flat = Vec::with_capacity(axes.time_axis.len() * per_row);
    let mut rows = 0;
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != per_row {
            return Err(TfError::Format(format!("row {k}: expected {per_row} fields, got {}", rec.len())));
        }
        for field in rec.iter() {
            flat.push(parse_f64(field, "value", k)?);
        }
        rows += 1;
    }
    if rows != axes.time_axis.len() {
        return Err(TfError::Format(format!("{rows} rows, axes file lists {}", axes.time_axis.len())));
    }
    let values = match axes.value_kind {
        ValueKind::Real => MatrixValues::Real(flat),
        ValueKind::Complex => MatrixValues::Complex(flat.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()),
    };
    TimeFrequencyMatrix::new(axes.time_axis, axes.freq_axis, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TrackMeta {
    threshold: f64,
    estimator: Estimator,
}

/// Writes `<stem>.csv` (`t,if_value,valid`, NaN where invalid) and
/// `<stem>.json` with the threshold and estimator tag.
pub fn write_if_track(stem: &Path, track: &IFTrack) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "if_value", "valid"]).map_err(csv_err)?;
    for k in 0..track.len() {
        w.write_record([fmt(track.time_axis[k]), fmt(track.values[k]), track.valid[k].to_string()])
            .map_err(csv_err)?;
    }
    let csv_bytes = w.into_inner().map_err(|e| TfError::Format(e.to_string()))?;
    let mut json = serde_json::to_vec_pretty(&TrackMeta { threshold: track.threshold, estimator: track.estimator })?;
    json.push(b'\n');
    write_all_atomic(&[(with_suffix(stem, ".csv"), csv_bytes), (with_suffix(stem, ".json"), json)])
}

pub fn read_if_track(stem: &Path) -> Result<IFTrack> {
    let meta: TrackMeta = serde_json::from_slice(&fs::read(with_suffix(stem, ".json"))?)?;
    let mut r = csv::Reader::from_path(with_suffix(stem, ".csv")).map_err(csv_err)?;
    let mut track = IFTrack {
        time_axis: Vec::new(),
        values: Vec::new(),
        valid: Vec::new(),
        threshold: meta.threshold,
        estimator: meta.estimator,
    };
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 3 {
            return Err(TfError::Format(format!("row {k}: expected 3 fields, got {}", rec.len())));
        }
        track.time_axis.push(parse_f64(&rec[0], "t", k)?);
        track.values.push(parse_f64(&rec[1], "if_value", k)?);
        track.valid.push(
            rec[2].trim().parse::<bool>().map_err(|_| TfError::Format(format!("row {k}: bad valid flag")))?,
        );
    }
    Ok(track)
}
