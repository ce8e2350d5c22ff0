use crate::error::Result;

use super::Trace;

/// Absolute slack used by every checker.
pub const CHECK_TOL: f64 = 1e-10;

/// A row whose objective value breaks the acceptance rule of the step that
/// produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcceptanceViolation {
    /// Index of the offending iterate `x^{k+1}`.
    pub row: usize,
    pub psi: f64,
    /// `max_{j≤m_k} ψ(x^{k−j}) − δ(γ_k/2)‖x^{k+1} − x^k‖²`.
    pub bound: f64,
}

/// `max_{j=0..min(k,m)} psi[k−j]` for every `k`.
pub fn window_maxima(psi: &[f64], m: usize) -> Vec<f64> {
    (0..psi.len())
        .map(|k| {
            psi[k.saturating_sub(m)..=k]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Re-derives the acceptance inequality of every step from the `psi`,
/// `gamma` and `step_norm` columns, using `m` and `δ` from the config echo.
pub fn check_acceptance(trace: &Trace) -> Result<Vec<AcceptanceViolation>> {
    trace.validate()?;
    let psi = trace.psi();
    let m = trace.config_echo.m;
    let delta = trace.config_echo.delta;
    let reference = window_maxima(&psi, m);
    let violations = trace
        .steps()
        .filter_map(|(k, s)| {
            let bound = reference[k] - delta * (s.gamma / 2.0) * s.step_norm * s.step_norm;
            let next = psi[k + 1];
            (next > bound + CHECK_TOL).then_some(AcceptanceViolation {
                row: k + 1,
                psi: next,
                bound,
            })
        })
        .collect();
    Ok(violations)
}

/// True iff the window maxima of `psi` never increase.
pub fn check_envelope_values(psi: &[f64], m: usize) -> bool {
    window_maxima(psi, m)
        .windows(2)
        .all(|w| w[1] <= w[0] + CHECK_TOL)
}

pub fn check_envelope(trace: &Trace, m: usize) -> bool {
    check_envelope_values(&trace.psi(), m)
}

/// Every iterate stays in the initial level set `{ψ ≤ ψ(x⁰)}`.
pub fn check_level_set(trace: &Trace) -> bool {
    match trace.records.first() {
        None => true,
        Some(first) => trace.records.iter().all(|r| r.psi <= first.psi + CHECK_TOL),
    }
}

/// The last `⌈n/10⌉` steps (at least one).
fn tail_steps(trace: &Trace) -> Vec<&super::StepRecord> {
    let steps: Vec<_> = trace.steps().map(|(_, s)| s).collect();
    let take = steps.len().div_ceil(10).max(1).min(steps.len());
    steps[steps.len() - take..].to_vec()
}

/// `min ‖x^{k+1} − x^k‖` over the final tenth of the steps is at most `tol`.
pub fn check_vanishing_steps(trace: &Trace, tol: f64) -> bool {
    tail_steps(trace)
        .iter()
        .map(|s| s.step_norm)
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.min(x)))
        })
        .is_some_and(|min| min <= tol)
}

/// `min γ_k‖x^{k+1} − x^k‖` over the final tenth of the steps is at most `tol`.
pub fn check_gamma_step_product(trace: &Trace, tol: f64) -> bool {
    tail_steps(trace)
        .iter()
        .map(|s| s.gamma * s.step_norm)
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.min(x)))
        })
        .is_some_and(|min| min <= tol)
}

/// Empirical boundedness of the accepted `γ_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaBound {
    pub max_gamma: f64,
    /// Every accepted `γ` in the last quarter of the run exceeds `τ·γ_max`.
    pub trend: bool,
}

pub fn gamma_bound(trace: &Trace) -> GammaBound {
    let gammas: Vec<f64> = trace.steps().map(|(_, s)| s.gamma).collect();
    let max_gamma = gammas.iter().copied().fold(0.0, f64::max);
    let limit = trace.config_echo.tau * trace.config_echo.gamma_max;
    let quarter = gammas.len().div_ceil(4);
    let trend = quarter > 0 && gammas[gammas.len() - quarter..].iter().all(|&g| g > limit);
    GammaBound { max_gamma, trend }
}

/// Thresholds for the tail-window checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckSettings {
    pub m: usize,
    pub step_tol: f64,
    pub gamma_step_tol: f64,
}

impl CheckSettings {
    /// Step tolerance `1e-6` and γ-weighted tolerance `1e-5`.
    pub fn new(m: usize) -> Self {
        Self {
            m,
            step_tol: 1e-6,
            gamma_step_tol: 1e-5,
        }
    }
}

/// Result of one checker.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs every checker. The acceptance check uses `settings.m` in place of
/// the window recorded in the config echo.
pub fn run_all(trace: &Trace, settings: &CheckSettings) -> Result<Vec<CheckOutcome>> {
    let mut echo = trace.clone();
    echo.config_echo.m = settings.m;
    let violations = check_acceptance(&echo)?;
    let rows: Vec<String> = violations.iter().map(|v| v.row.to_string()).collect();
    let bound = gamma_bound(trace);

    Ok(vec![
        CheckOutcome {
            name: "acceptance",
            passed: violations.is_empty(),
            detail: if violations.is_empty() {
                format!("{} steps certified", trace.steps().count())
            } else {
                format!("violations at rows {}", rows.join(" "))
            },
        },
        CheckOutcome {
            name: "envelope",
            passed: check_envelope(trace, settings.m),
            detail: format!("m = {}", settings.m),
        },
        CheckOutcome {
            name: "level_set",
            passed: check_level_set(trace),
            detail: format!("psi0 = {:e}", trace.records[0].psi),
        },
        CheckOutcome {
            name: "vanishing_steps",
            passed: check_vanishing_steps(trace, settings.step_tol),
            detail: format!("tol = {:e}", settings.step_tol),
        },
        CheckOutcome {
            name: "gamma_step_product",
            passed: check_gamma_step_product(trace, settings.gamma_step_tol),
            detail: format!("tol = {:e}", settings.gamma_step_tol),
        },
        CheckOutcome {
            name: "gamma_bound",
            passed: !bound.trend,
            detail: format!("max gamma = {:e}, trend = {}", bound.max_gamma, bound.trend),
        },
    ])
}
