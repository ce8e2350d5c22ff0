//! Subcommand implementations for the `proxgrad` binary.
//!
//! Each command writes to the given streams and returns the process exit
//! code, so the same code paths are exercised by the binary and the tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use proxgrad::diagnostics::{self, CheckSettings};
use proxgrad::registry::{self, RunConfig};
use proxgrad::{solve, SolveReport, SolveStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MAX_OUTER: i32 = 2;
pub const EXIT_INNER_CAP: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Header of the comparison table written by [`cmd_compare`].
pub const COMPARE_HEADER: &str =
    "m,status,outer_iterations,inner_iterations,final_psi,final_residual";

pub fn status_exit_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::ConvergedResidual | SolveStatus::ConvergedStep => EXIT_OK,
        SolveStatus::MaxOuterReached => EXIT_MAX_OUTER,
        SolveStatus::InnerLoopCap(_) => EXIT_INNER_CAP,
    }
}

fn trace_path(config: &RunConfig, output: Option<&Path>) -> PathBuf {
    output
        .map(Path::to_path_buf)
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.trace.csv", config.problem_name())))
}

/// `<stem>.m<m>.<ext>` next to `base`.
pub fn variant_path(base: &Path, m: usize) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into());
    let name = match base.extension() {
        Some(ext) => format!("{stem}.m{m}.{}", ext.to_string_lossy()),
        None => format!("{stem}.m{m}"),
    };
    base.with_file_name(name)
}

fn run_one(config: &RunConfig) -> proxgrad::Result<SolveReport> {
    let run = config.prepare()?;
    solve(&run.problem, &run.config, &run.x0)
}

/// `run <config>`: solve, write the trace, print a summary line.
pub fn cmd_run(
    config_path: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let config = match RunConfig::load(config_path) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", config_path.display());
            return EXIT_ERROR;
        }
    };
    let report = match run_one(&config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let path = trace_path(&config, output);
    if let Err(e) = diagnostics::write_trace(&path, &report.trace) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_ERROR;
    }
    let _ = writeln!(
        out,
        "status={} k={} psi={:e} residual={:e} trace={}",
        report.status.label(),
        report.iterations(),
        report.final_psi(),
        report.final_residual,
        path.display()
    );
    status_exit_code(report.status)
}

/// Tolerance overrides for [`cmd_check`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckTolerances {
    pub step_tol: Option<f64>,
    pub gamma_step_tol: Option<f64>,
}

/// `check <trace> --m <int>`: run every checker on a trace file.
pub fn cmd_check(
    trace_path: &Path,
    m: usize,
    tolerances: CheckTolerances,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let trace = match diagnostics::read_trace(trace_path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", trace_path.display());
            return EXIT_ERROR;
        }
    };
    if trace.problem_name.is_empty() {
        let _ = writeln!(
            err,
            "warning: no sidecar metadata; checking with the default solver configuration"
        );
    } else if trace.config_echo.m != m {
        let _ = writeln!(
            err,
            "warning: trace was produced with m = {}, checking with m = {m}",
            trace.config_echo.m
        );
    }
    let mut settings = CheckSettings::new(m);
    if let Some(t) = tolerances.step_tol {
        settings.step_tol = t;
    }
    if let Some(t) = tolerances.gamma_step_tol {
        settings.gamma_step_tol = t;
    }
    let outcomes = match diagnostics::run_all(&trace, &settings) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    for c in &outcomes {
        let verdict = if c.passed { "pass" } else { "fail" };
        let _ = writeln!(out, "{:<20} {verdict}  {}", c.name, c.detail);
    }
    if outcomes.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// `compare <config> --m <list>`: one run per window size, identical
/// otherwise. Variant traces go next to the configured trace path as
/// `<stem>.m<m>.csv`; the comparison table goes to `output` or `out`.
pub fn cmd_compare(
    config_path: &Path,
    m_values: &[usize],
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let config = match RunConfig::load(config_path) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", config_path.display());
            return EXIT_ERROR;
        }
    };
    if m_values.is_empty() {
        let _ = writeln!(err, "error: no m values given");
        return EXIT_ERROR;
    }
    let base = trace_path(&config, None);

    // Runs are independent; results are collected back in input order.
    let results: Vec<proxgrad::Result<SolveReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = m_values
            .iter()
            .map(|&m| {
                let mut variant = config.clone();
                variant.solver.m = m;
                scope.spawn(move || run_one(&variant))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });

    let mut table = String::from(COMPARE_HEADER);
    table.push('\n');
    let mut code = EXIT_OK;
    for (&m, result) in m_values.iter().zip(results) {
        let report = match result {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(err, "error (m = {m}): {e}");
                return EXIT_ERROR;
            }
        };
        let path = variant_path(&base, m);
        if let Err(e) = diagnostics::write_trace(&path, &report.trace) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
        table.push_str(&format!(
            "{m},{},{},{},{:.16e},{:.16e}\n",
            report.status.label(),
            report.iterations(),
            report.total_inner_iters(),
            report.final_psi(),
            report.final_residual
        ));
        code = code.max(status_exit_code(report.status));
    }

    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &table) {
                let _ = writeln!(err, "error: {}: {e}", p.display());
                return EXIT_ERROR;
            }
        }
        None => {
            let _ = out.write_all(table.as_bytes());
        }
    }
    code
}

/// `list`: registry contents and shipped configs.
pub fn cmd_list(out: &mut dyn Write) -> i32 {
    let join = |it: &mut dyn Iterator<Item = &'static str>| it.collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "smooth:  {}", join(&mut registry::smooth_names()));
    let _ = writeln!(out, "prox:    {}", join(&mut registry::prox_names()));
    let _ = writeln!(out, "configs: {}", join(&mut registry::preset_names()));
    EXIT_OK
}

/// Maps `PROXGRAD_LOG` (`quiet`, `info`, `debug`) to a log filter; unset
/// means warnings only.
pub fn log_filter(value: Option<&str>) -> Result<log::LevelFilter, String> {
    match value {
        None => Ok(log::LevelFilter::Warn),
        Some("quiet") => Ok(log::LevelFilter::Off),
        Some("info") => Ok(log::LevelFilter::Info),
        Some("debug") => Ok(log::LevelFilter::Debug),
        Some(other) => Err(format!(
            "PROXGRAD_LOG={other} is not one of quiet, info, debug"
        )),
    }
}
