//! Proximal gradient methods for composite problems `min ψ(x) = f(x) + φ(x)`
//! with `f` continuously differentiable and `φ` lower semicontinuous.
//!
//! The engine in [`solver`] needs neither convexity of `φ` nor a global
//! Lipschitz constant for `∇f`: step sizes come from backtracking on a
//! sufficient-decrease test, optionally measured against the maximum of the
//! last `m + 1` objective values (nonmonotone variant). Oracle libraries for
//! `f` ([`smooth`]) and `φ` ([`prox`]) and trace checkers ([`diagnostics`])
//! complete the crate.
//!
//! ```
//! use std::sync::Arc;
//! use proxgrad::{prox::L1, smooth::Quadratic, solve, CompositeProblem, SolverConfig, Vector};
//!
//! let a = vec![Vector::new(vec![1.0, 0.0])?, Vector::new(vec![0.0, 1.0])?];
//! let f = Quadratic::new(a, Vector::new(vec![1.0, 0.1])?)?;
//! let problem = CompositeProblem::new("lasso", Arc::new(f), Arc::new(L1::new(0.5)?))?;
//! let report = solve(&problem, &SolverConfig::default(), &Vector::zeros(2))?;
//! assert!((report.x_final[0] - 0.5).abs() < 1e-8);
//! # Ok::<(), proxgrad::Error>(())
//! ```

// `!(a > b)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
mod error;
mod problem;
pub mod prox;
pub mod registry;
pub mod smooth;
pub mod solver;
mod vector;

pub use error::{Error, Result};
pub use problem::{psi_eval, CompositeProblem, Evaluation, ProblemMetadata};
pub use prox::ProxOracle;
pub use smooth::SmoothOracle;
pub use solver::{solve, solve_monotone, SolveReport, SolveStatus, SolverConfig};
pub use vector::{axpy, dot, norm, ExtReal, Vector};
