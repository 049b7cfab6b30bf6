//! Descent traces as plot-ready CSV or JSON. Files are written to a temporary
//! sibling and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use prefmax_core::descent::DescentTrace;
use prefmax_core::Point;
use tempfile::NamedTempFile;

use crate::HarnessError;

pub const CSV_HEADER: &str = "k,x,xstar,theta,dist_to_ref,gap_to_ref,fejer_residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    Json,
}

impl TraceFormat {
    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv") => Ok(TraceFormat::Csv),
            Some("json") => Ok(TraceFormat::Json),
            _ => Err(HarnessError::Config(format!("trace path {} must end in .csv or .json", path.display()))),
        }
    }
}

fn coords(p: &Point) -> String {
    p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn trace_to_csv(trace: &DescentTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &trace.rows {
        let xstar = r.xstar.as_ref().map(coords).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            coords(&r.x),
            xstar,
            opt(r.theta),
            opt(r.dist_to_ref),
            opt(r.gap_to_ref),
            opt(r.fejer_residual)
        ));
    }
    out
}

pub fn trace_to_json(trace: &DescentTrace) -> String {
    serde_json::to_string_pretty(trace).expect("traces serialize")
}

pub fn read_trace_json(path: &Path) -> Result<DescentTrace, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<PathBuf, HarnessError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(contents).map_err(|e| io_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(path.to_path_buf())
}

/// Emits the trace in the format given by the file extension.
pub fn emit_trace(trace: &DescentTrace, path: &Path) -> Result<PathBuf, HarnessError> {
    if trace.rows.is_empty() {
        return Err(prefmax_core::Error::EmptyTrace.into());
    }
    let body = match TraceFormat::from_path(path)? {
        TraceFormat::Csv => trace_to_csv(trace),
        TraceFormat::Json => trace_to_json(trace),
    };
    write_atomic(path, body.as_bytes())
}
