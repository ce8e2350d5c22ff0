//! Smooth terms `f` with exact gradients.
//!
//! Every oracle here has a locally Lipschitz gradient. The quartic is the
//! standard example whose gradient is *not* globally Lipschitz, which is the
//! regime the backtracking solver is built for.

use std::fmt;

use crate::error::{invalid, Result};
use crate::vector::Vector;

/// Default central-difference step for [`fd_gradient_check`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A continuously differentiable function `f: ℝⁿ → ℝ` with its gradient.
///
/// Implementations are immutable and must be safe to evaluate concurrently.
pub trait SmoothOracle: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    /// `f(x)`. May return `+∞` if the evaluation overflows.
    fn eval(&self, x: &Vector) -> f64;

    fn grad(&self, x: &Vector) -> Vector;

    fn grad_locally_lipschitz(&self) -> bool {
        true
    }
}

/// `f(x) = ½‖Ax − b‖²`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    rows: Vec<Vector>,
    b: Vec<f64>,
    cols: usize,
}

impl Quadratic {
    pub fn new(rows: Vec<Vector>, b: Vector) -> Result<Self> {
        let cols = rows
            .first()
            .map(Vector::dim)
            .ok_or_else(|| invalid("quadratic: A must have at least one row"))?;
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.dim() != cols) {
            return Err(invalid(format!(
                "quadratic: row {i} of A has {} columns, expected {cols}",
                r.dim()
            )));
        }
        if b.dim() != rows.len() {
            return Err(invalid(format!(
                "quadratic: b has {} entries but A has {} rows",
                b.dim(),
                rows.len()
            )));
        }
        Ok(Self {
            rows,
            b: b.into_inner(),
            cols,
        })
    }

    fn residual(&self, x: &Vector) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(r, bi)| r.dot_unchecked(x) - bi)
            .collect()
    }
}

impl SmoothOracle for Quadratic {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn dim(&self) -> usize {
        self.cols
    }

    fn eval(&self, x: &Vector) -> f64 {
        0.5 * self.residual(x).iter().map(|r| r * r).sum::<f64>()
    }

    fn grad(&self, x: &Vector) -> Vector {
        let res = self.residual(x);
        let mut g = vec![0.0; self.cols];
        for (row, ri) in self.rows.iter().zip(&res) {
            for (gj, aij) in g.iter_mut().zip(row) {
                *gj += aij * ri;
            }
        }
        Vector::from_raw(g)
    }
}

/// `f(x) = ¼ Σ xᵢ⁴`, with `∇f(x) = (x₁³, …, xₙ³)`.
#[derive(Clone, Debug)]
pub struct Quartic {
    dim: usize,
}

impl Quartic {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("quartic: dimension must be positive"));
        }
        Ok(Self { dim })
    }
}

impl SmoothOracle for Quartic {
    fn name(&self) -> &str {
        "quartic"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector) -> f64 {
        0.25 * x.iter().map(|c| c.powi(4)).sum::<f64>()
    }

    fn grad(&self, x: &Vector) -> Vector {
        x.map(|c| c * c * c)
    }
}

/// Logistic loss `f(x) = Σᵢ log(1 + exp(−yᵢ⟨aᵢ, x⟩))` with labels `yᵢ ∈ {−1, +1}`.
#[derive(Clone, Debug)]
pub struct Logistic {
    rows: Vec<Vector>,
    labels: Vec<f64>,
    cols: usize,
}

impl Logistic {
    pub fn new(rows: Vec<Vector>, labels: Vec<f64>) -> Result<Self> {
        let cols = rows
            .first()
            .map(Vector::dim)
            .ok_or_else(|| invalid("logistic: data matrix must have at least one row"))?;
        if rows.iter().any(|r| r.dim() != cols) {
            return Err(invalid(
                "logistic: rows of the data matrix differ in length",
            ));
        }
        if labels.len() != rows.len() {
            return Err(invalid(format!(
                "logistic: {} labels for {} rows",
                labels.len(),
                rows.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
            return Err(invalid(format!(
                "logistic: label {bad} is not in {{-1, +1}}"
            )));
        }
        Ok(Self { rows, labels, cols })
    }

    fn margins<'a>(&'a self, x: &'a Vector) -> impl Iterator<Item = (&'a Vector, f64, f64)> + 'a {
        self.rows
            .iter()
            .zip(&self.labels)
            .map(move |(a, &y)| (a, y, y * a.dot_unchecked(x)))
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `1 / (1 + exp(−z))` without overflow.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl SmoothOracle for Logistic {
    fn name(&self) -> &str {
        "logistic"
    }

    fn dim(&self) -> usize {
        self.cols
    }

    fn eval(&self, x: &Vector) -> f64 {
        self.margins(x).map(|(_, _, t)| softplus(-t)).sum()
    }

    fn grad(&self, x: &Vector) -> Vector {
        let mut g = vec![0.0; self.cols];
        for (a, y, t) in self.margins(x) {
            // d/dt log(1 + e^{-t}) = -σ(-t)
            let w = -y * sigmoid(-t);
            for (gj, aj) in g.iter_mut().zip(a) {
                *gj += w * aj;
            }
        }
        Vector::from_raw(g)
    }
}

/// Largest relative discrepancy between a central-difference slope and the
/// oracle gradient: `maxᵢ |Dₕf(x)ᵢ − ∇f(x)ᵢ| / max(1, |∇f(x)ᵢ|)`.
pub fn fd_gradient_check(oracle: &dyn SmoothOracle, x: &Vector, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(invalid(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    x.check_dim(oracle.dim())?;
    let g = oracle.grad(x);
    let mut coords = x.as_slice().to_vec();
    let mut worst = 0.0f64;
    for i in 0..coords.len() {
        let xi = coords[i];
        coords[i] = xi + h;
        let fp = oracle.eval(&Vector::from_raw(coords.clone()));
        coords[i] = xi - h;
        let fm = oracle.eval(&Vector::from_raw(coords.clone()));
        coords[i] = xi;
        let slope = (fp - fm) / (2.0 * h);
        worst = worst.max((slope - g[i]).abs() / g[i].abs().max(1.0));
    }
    Ok(worst)
}
