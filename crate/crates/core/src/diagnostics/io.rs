//! CSV trace format.
//!
//! One row per iterate under the fixed header [`TRACE_HEADER`]. Floats are
//! written with 17 significant digits so they parse back to the same bits;
//! absent values (the `k = 0` residual, the step columns of the terminal
//! row) are empty fields. Problem name, start-point hash and the solver
//! configuration go to a JSON sidecar next to the CSV (see [`meta_path`]).

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solver::SolverConfig;

use super::trace::TraceMeta;
use super::{IterateRecord, StepRecord, Trace};

pub const TRACE_HEADER: [&str; 10] = [
    "k",
    "f",
    "phi",
    "psi",
    "gamma0",
    "gamma",
    "inner_iters",
    "step_norm",
    "residual",
    "accepted_ref",
];

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Serializes the records of `trace` to CSV text.
pub fn trace_to_csv(trace: &Trace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for r in &trace.records {
        let s = r.step.as_ref();
        w.write_record([
            r.k.to_string(),
            fmt_f64(r.f),
            fmt_f64(r.phi),
            fmt_f64(r.psi),
            fmt_opt(s.map(|s| s.gamma0)),
            fmt_opt(s.map(|s| s.gamma)),
            s.map(|s| s.inner_iters.to_string()).unwrap_or_default(),
            fmt_opt(s.map(|s| s.step_norm)),
            fmt_opt(r.residual),
            fmt_opt(s.map(|s| s.accepted_ref)),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Format(format!("flushing csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

fn parse_f64(row: usize, col: &str, field: &str) -> Result<f64> {
    field.parse::<f64>().map_err(|_| {
        Error::Format(format!(
            "row {row}: column {col}: `{field}` is not a number"
        ))
    })
}

fn parse_opt(row: usize, col: &str, field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(row, col, field).map(Some)
    }
}

/// Parses CSV text into records. Config echo, problem name and hash are
/// taken from `meta` when given, otherwise defaulted.
pub fn trace_from_csv(text: &str, meta: Option<(String, String, SolverConfig)>) -> Result<Trace> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(TRACE_HEADER.iter().copied()) {
        return Err(Error::Format(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let k = field(0)
            .parse::<usize>()
            .map_err(|_| Error::Format(format!("row {row}: bad index `{}`", field(0))))?;
        let gamma0 = parse_opt(row, "gamma0", field(4))?;
        let gamma = parse_opt(row, "gamma", field(5))?;
        let inner =
            if field(6).is_empty() {
                None
            } else {
                Some(field(6).parse::<usize>().map_err(|_| {
                    Error::Format(format!("row {row}: bad inner_iters `{}`", field(6)))
                })?)
            };
        let step_norm = parse_opt(row, "step_norm", field(7))?;
        let accepted_ref = parse_opt(row, "accepted_ref", field(9))?;
        let step = match (gamma0, gamma, inner, step_norm, accepted_ref) {
            (Some(gamma0), Some(gamma), Some(inner_iters), Some(step_norm), Some(accepted_ref)) => {
                Some(StepRecord {
                    gamma0,
                    gamma,
                    inner_iters,
                    step_norm,
                    accepted_ref,
                })
            }
            (None, None, None, None, None) => None,
            _ => {
                return Err(Error::Format(format!(
                    "row {row}: step columns are partially filled"
                )))
            }
        };
        records.push(IterateRecord {
            k,
            f: parse_f64(row, "f", field(1))?,
            phi: parse_f64(row, "phi", field(2))?,
            psi: parse_f64(row, "psi", field(3))?,
            residual: parse_opt(row, "residual", field(8))?,
            step,
        });
    }
    let (problem_name, x0_hash, config_echo) = meta.unwrap_or_default();
    let trace = Trace {
        records,
        config_echo,
        problem_name,
        x0_hash,
    };
    trace.validate()?;
    Ok(trace)
}

/// `<trace>.meta.json`.
pub fn meta_path(trace_path: &Path) -> PathBuf {
    let mut name = trace_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the CSV trace and its sidecar.
pub fn write_trace(path: &Path, trace: &Trace) -> Result<()> {
    let csv = trace_to_csv(trace)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, csv).map_err(io_err(path))?;
    let meta = meta_path(path);
    let json = serde_json::to_string_pretty(&trace.meta())?;
    fs::write(&meta, json + "\n").map_err(io_err(&meta))?;
    Ok(())
}

/// Reads a CSV trace, picking up the sidecar if one exists.
pub fn read_trace(path: &Path) -> Result<Trace> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let meta_file = meta_path(path);
    let meta = if meta_file.exists() {
        let raw = fs::read_to_string(&meta_file).map_err(io_err(&meta_file))?;
        let m: TraceMeta = serde_json::from_str(&raw)?;
        Some((m.problem_name, m.x0_hash, m.config))
    } else {
        None
    };
    trace_from_csv(&text, meta)
}
