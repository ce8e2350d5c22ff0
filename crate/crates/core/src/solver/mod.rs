//! The proximal gradient engine.
//!
//! A single loop covers both the monotone method (`m = 0`) and the
//! nonmonotone method (`m > 0`). Each outer iteration picks `γ_k⁰`, then
//! tries `γ = τⁱ·γ_k⁰` for `i = 0, 1, …`, solving the proximal subproblem
//! for each trial until
//!
//! ```text
//! ψ(x^{k,i}) ≤ max_{j=0..m_k} ψ(x^{k−j}) − δ(γ/2)‖x^{k,i} − x^k‖²
//! ```
//!
//! holds. No Lipschitz constant of `∇f` is needed anywhere.
//!
//! Arithmetic order is part of the contract: the `m = 0` trace must be
//! reproducible bit for bit by a plain monotone loop that evaluates the
//! same expressions.

mod config;
mod window;

pub use config::{Gamma0Strategy, SolverConfig};
pub use window::{acceptance_reference, WindowState};

use log::{debug, info, warn};

use crate::diagnostics::{x0_hash, IterateRecord, StepRecord, Trace};
use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, Evaluation};
use crate::vector::{ExtReal, Vector};

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// The stationarity residual fell below `tau_abs`.
    ConvergedResidual,
    /// The step norm fell below `eps_step` with a bounded `γ`.
    ConvergedStep,
    MaxOuterReached,
    /// The inner loop hit `max_inner` at outer iteration `k`.
    InnerLoopCap(usize),
}

impl SolveStatus {
    pub fn is_converged(self) -> bool {
        matches!(
            self,
            SolveStatus::ConvergedResidual | SolveStatus::ConvergedStep
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            SolveStatus::ConvergedResidual => "converged_residual",
            SolveStatus::ConvergedStep => "converged_step",
            SolveStatus::MaxOuterReached => "max_outer_reached",
            SolveStatus::InnerLoopCap(_) => "inner_loop_cap",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub x_final: Vector,
    pub status: SolveStatus,
    /// Residual at `x_final`; `+∞` if the run stopped at `k = 0`.
    pub final_residual: f64,
    pub trace: Trace,
    /// Outer iteration whose step was accepted by the inner stationarity
    /// residual rather than by sufficient decrease, if any.
    pub inner_residual_exit: Option<usize>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    /// Number of accepted steps.
    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn total_inner_iters(&self) -> usize {
        self.trace.steps().map(|(_, s)| s.inner_iters).sum()
    }

    pub fn final_psi(&self) -> f64 {
        self.trace.records.last().map_or(f64::NAN, |r| r.psi)
    }
}

/// How a trial point was accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerExit {
    SufficientDecrease,
    /// `‖∇f(x) − ∇f(x_k) + γ(x_k − x)‖ ≤ tau_abs`.
    StationarityResidual,
}

/// Result of a successful inner loop.
#[derive(Clone, Debug)]
pub struct BacktrackStep {
    pub x_next: Vector,
    pub eval: Evaluation,
    pub gamma: f64,
    pub inner_iters: usize,
    pub exit: InnerExit,
    /// `∇f(x_next)` when the inner loop already computed it.
    pub grad_next: Option<Vector>,
}

/// The inner loop ran `max_inner` trials without accepting one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerCapExceeded {
    pub last_gamma: f64,
}

/// Minimizer of the linearized model
/// `⟨∇f(x_k), x − x_k⟩ + (γ/2)‖x − x_k‖² + φ(x)`, i.e. `prox(γ, x_k − ∇f(x_k)/γ)`.
pub fn subproblem_solve(
    problem: &CompositeProblem,
    x_k: &Vector,
    grad_k: &Vector,
    gamma: f64,
) -> Vector {
    let v = Vector::from_raw(x_k.iter().zip(grad_k).map(|(x, g)| x - g / gamma).collect());
    problem.nonsmooth().prox(gamma, &v)
}

/// `‖γ_prev·(x_prev − x_cur) + ∇f(x_cur) − ∇f(x_prev)‖`.
///
/// With `(x_prev, x_cur)` two consecutive iterates this certifies
/// approximate M-stationarity of `x_cur`; with `(x_k, x^{k,i})` it is the
/// inner-loop residual.
pub fn outer_residual(
    x_prev: &Vector,
    x_cur: &Vector,
    gamma_prev: f64,
    grad_prev: &Vector,
    grad_cur: &Vector,
) -> f64 {
    x_prev
        .iter()
        .zip(x_cur)
        .zip(grad_prev.iter().zip(grad_cur))
        .map(|((xp, xc), (gp, gc))| {
            let r = gamma_prev * (xp - xc) + gc - gp;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Difference pair for spectral initialization.
#[derive(Clone, Debug)]
pub struct SecantPair {
    /// `x^k − x^{k−1}`.
    pub s: Vector,
    /// `∇f(x^k) − ∇f(x^{k−1})`.
    pub y: Vector,
}

/// Chooses `γ_k⁰ ∈ [gamma_min, gamma_max]`.
///
/// `prev_gamma` is the accepted `γ_{k−1}`, used as the fallback when the
/// spectral quotient is unavailable (`k = 0` falls back to 1) or does not
/// indicate positive curvature.
pub fn gamma0_select(
    strategy: Gamma0Strategy,
    prev_step: Option<&SecantPair>,
    prev_gamma: Option<f64>,
    config: &SolverConfig,
) -> f64 {
    match strategy {
        Gamma0Strategy::Constant { value } => config.clamp_gamma(value),
        Gamma0Strategy::BbSafeguarded => {
            let fallback = config.clamp_gamma(prev_gamma.unwrap_or(1.0));
            let Some(pair) = prev_step else {
                return fallback;
            };
            let ss = pair.s.dot_unchecked(&pair.s);
            let sy = pair.s.dot_unchecked(&pair.y);
            if ss == 0.0 || !(sy > 0.0) {
                return fallback;
            }
            let quotient = sy / ss;
            if quotient.is_finite() {
                config.clamp_gamma(quotient)
            } else {
                fallback
            }
        }
    }
}

/// Inner loop: increase `γ` geometrically from `gamma0` until the trial point
/// passes the acceptance test against `psi_ref`.
///
/// A trial that fails the test is still accepted if its stationarity
/// residual is below `tau_abs`; this covers iterates that are already
/// numerically stationary, where sufficient decrease can fail forever.
pub fn backtrack(
    problem: &CompositeProblem,
    x_k: &Vector,
    grad_k: &Vector,
    gamma0: f64,
    psi_ref: f64,
    config: &SolverConfig,
) -> Result<BacktrackStep, InnerCapExceeded> {
    let mut gamma = gamma0;
    for i in 0..config.max_inner {
        if i > 0 {
            gamma *= config.tau;
        }
        let x = subproblem_solve(problem, x_k, grad_k, gamma);
        let eval = problem.evaluate_unchecked(&x);
        let dist_sq = x.sub(x_k).norm_squared();
        if let ExtReal::Finite(psi) = eval.psi {
            if psi <= psi_ref - config.delta * (gamma / 2.0) * dist_sq {
                return Ok(BacktrackStep {
                    x_next: x,
                    eval,
                    gamma,
                    inner_iters: i,
                    exit: InnerExit::SufficientDecrease,
                    grad_next: None,
                });
            }
            let grad = problem.smooth().grad(&x);
            if outer_residual(x_k, &x, gamma, grad_k, &grad) <= config.tau_abs {
                return Ok(BacktrackStep {
                    x_next: x,
                    eval,
                    gamma,
                    inner_iters: i,
                    exit: InnerExit::StationarityResidual,
                    grad_next: Some(grad),
                });
            }
        }
    }
    Err(InnerCapExceeded { last_gamma: gamma })
}

struct Previous {
    x: Vector,
    grad: Vector,
    gamma: f64,
    step_norm: f64,
}

fn assumption_warnings(problem: &CompositeProblem, config: &SolverConfig) -> Vec<String> {
    let md = problem.metadata();
    let mut out = Vec::new();
    if config.m > 0 && !md.phi_continuous_on_domain {
        out.push(format!(
            "{}: φ = {} is not continuous on its domain; with m = {} the nonmonotone \
             convergence guarantee does not apply",
            problem.name(),
            problem.nonsmooth().name(),
            config.m
        ));
    }
    if !md.phi_continuous_on_domain && !md.grad_f_locally_lipschitz {
        out.push(format!(
            "{}: neither is φ continuous on its domain nor ∇f locally Lipschitz; \
             accumulation points are not guaranteed to be M-stationary",
            problem.name()
        ));
    }
    if !md.psi_bounded_below {
        out.push(format!(
            "{}: ψ is not declared bounded below",
            problem.name()
        ));
    }
    if !md.phi_affine_minorant {
        out.push(format!(
            "{}: φ is not declared to have an affine minorant",
            problem.name()
        ));
    }
    out
}

/// Runs the proximal gradient method from `x0`.
pub fn solve(
    problem: &CompositeProblem,
    config: &SolverConfig,
    x0: &Vector,
) -> Result<SolveReport> {
    config.validate()?;
    let eval0 = problem.evaluate(x0)?;
    let psi0 = eval0.psi.finite().ok_or_else(|| Error::NotInDomain {
        oracle: problem.nonsmooth().name().to_string(),
    })?;

    let warnings = assumption_warnings(problem, config);
    for w in &warnings {
        warn!("{w}");
    }

    let mut x = x0.clone();
    let mut eval = eval0;
    let mut psi = psi0;
    let mut grad = problem.smooth().grad(&x);
    let mut window = WindowState::new(config.m, psi0);
    let mut prev: Option<Previous> = None;
    let mut records = Vec::new();
    let mut inner_residual_exit = None;

    let mut k = 0usize;
    let (status, residual) = loop {
        let residual = prev
            .as_ref()
            .map(|p| outer_residual(&p.x, &x, p.gamma, &p.grad, &grad));

        if let (Some(r), Some(p)) = (residual, prev.as_ref()) {
            if r <= config.tau_abs {
                break (SolveStatus::ConvergedResidual, residual);
            }
            if p.step_norm <= config.eps_step && p.gamma <= config.gamma_max * config.tau {
                break (SolveStatus::ConvergedStep, residual);
            }
        }
        if k == config.max_outer {
            break (SolveStatus::MaxOuterReached, residual);
        }

        let secant = prev.as_ref().map(|p| SecantPair {
            s: x.sub(&p.x),
            y: grad.sub(&p.grad),
        });
        let gamma0 = gamma0_select(
            config.gamma0_strategy,
            secant.as_ref(),
            prev.as_ref().map(|p| p.gamma),
            config,
        );
        let psi_ref = window.acceptance_reference();

        let step = match backtrack(problem, &x, &grad, gamma0, psi_ref, config) {
            Ok(step) => step,
            Err(cap) => {
                warn!(
                    "{}: inner loop reached max_inner = {} at k = {k} (last γ = {:e})",
                    problem.name(),
                    config.max_inner,
                    cap.last_gamma
                );
                break (SolveStatus::InnerLoopCap(k), residual);
            }
        };
        if step.exit == InnerExit::StationarityResidual {
            info!(
                "{}: step {k} accepted by the inner stationarity residual",
                problem.name()
            );
            inner_residual_exit.get_or_insert(k);
        }

        let step_norm = step.x_next.sub(&x).norm();
        debug!(
            "k={k} psi={psi:e} gamma0={gamma0:e} gamma={:e} i={} step={step_norm:e}",
            step.gamma, step.inner_iters
        );
        records.push(IterateRecord {
            k,
            f: eval.f,
            phi: eval.phi.to_f64(),
            psi,
            residual,
            step: Some(StepRecord {
                gamma0,
                gamma: step.gamma,
                inner_iters: step.inner_iters,
                step_norm,
                accepted_ref: psi_ref,
            }),
        });

        let grad_next = step
            .grad_next
            .unwrap_or_else(|| problem.smooth().grad(&step.x_next));
        prev = Some(Previous {
            x: std::mem::replace(&mut x, step.x_next),
            grad: std::mem::replace(&mut grad, grad_next),
            gamma: step.gamma,
            step_norm,
        });
        eval = step.eval;
        psi = eval.psi.to_f64();
        window.push(psi);
        k += 1;
    };

    records.push(IterateRecord {
        k,
        f: eval.f,
        phi: eval.phi.to_f64(),
        psi,
        residual,
        step: None,
    });
    let final_residual = residual.unwrap_or(f64::INFINITY);
    info!(
        "{}: {} after {k} iterations, psi = {psi:e}, residual = {final_residual:e}",
        problem.name(),
        status.label()
    );

    Ok(SolveReport {
        x_final: x,
        status,
        final_residual,
        trace: Trace {
            records,
            config_echo: config.clone(),
            problem_name: problem.name().to_string(),
            x0_hash: x0_hash(x0),
        },
        inner_residual_exit,
        warnings,
    })
}

/// The monotone method: [`solve`] with `m = 0`.
pub fn solve_monotone(
    problem: &CompositeProblem,
    config: &SolverConfig,
    x0: &Vector,
) -> Result<SolveReport> {
    solve(problem, &config.clone().with_m(0), x0)
}
