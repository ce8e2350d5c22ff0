use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::prox::ProxOracle;
use crate::smooth::SmoothOracle;
use crate::vector::{ExtReal, Vector};

/// Standing assumptions as declared by the problem author.
///
/// These are informational: the solver reports them but never relies on
/// them silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemMetadata {
    pub phi_continuous_on_domain: bool,
    pub grad_f_locally_lipschitz: bool,
    pub psi_bounded_below: bool,
    pub phi_affine_minorant: bool,
}

/// `ψ(x) = f(x) + φ(x)` with `f` smooth and `φ` prox-friendly.
#[derive(Clone, Debug)]
pub struct CompositeProblem {
    name: String,
    smooth: Arc<dyn SmoothOracle>,
    nonsmooth: Arc<dyn ProxOracle>,
    dimension: usize,
    metadata: ProblemMetadata,
}

impl CompositeProblem {
    /// Pairs two oracles. Metadata defaults to what the oracles report, with
    /// `psi_bounded_below` left to the caller via [`with_metadata`].
    ///
    /// [`with_metadata`]: CompositeProblem::with_metadata
    pub fn new(
        name: impl Into<String>,
        smooth: Arc<dyn SmoothOracle>,
        nonsmooth: Arc<dyn ProxOracle>,
    ) -> Result<Self> {
        let dimension = smooth.dim();
        if let Some(d) = nonsmooth.dim() {
            if d != dimension {
                return Err(invalid(format!(
                    "{} expects dimension {d} but {} has dimension {dimension}",
                    nonsmooth.name(),
                    smooth.name()
                )));
            }
        }
        let metadata = ProblemMetadata {
            phi_continuous_on_domain: nonsmooth.continuous_on_domain(),
            grad_f_locally_lipschitz: smooth.grad_locally_lipschitz(),
            psi_bounded_below: false,
            phi_affine_minorant: nonsmooth.affine_minorant(),
        };
        Ok(Self {
            name: name.into(),
            smooth,
            nonsmooth,
            dimension,
            metadata,
        })
    }

    pub fn with_metadata(mut self, metadata: ProblemMetadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn metadata(&self) -> ProblemMetadata {
        self.metadata
    }

    pub fn smooth(&self) -> &dyn SmoothOracle {
        self.smooth.as_ref()
    }

    pub fn nonsmooth(&self) -> &dyn ProxOracle {
        self.nonsmooth.as_ref()
    }

    /// `f(x)`, `φ(x)` and `ψ(x)` in one call. `f` overflowing to `+∞` is
    /// folded into `ψ = +∞`.
    pub fn evaluate(&self, x: &Vector) -> Result<Evaluation> {
        x.check_dim(self.dimension)?;
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &Vector) -> Evaluation {
        let f = self.smooth.eval(x);
        let phi = self.nonsmooth.eval(x);
        Evaluation {
            f,
            phi,
            psi: ExtReal::from_f64(f) + phi,
        }
    }

    pub fn psi_eval(&self, x: &Vector) -> Result<ExtReal> {
        Ok(self.evaluate(x)?.psi)
    }
}

/// Objective values at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub f: f64,
    pub phi: ExtReal,
    pub psi: ExtReal,
}

/// Free-function form of [`CompositeProblem::psi_eval`].
pub fn psi_eval(problem: &CompositeProblem, x: &Vector) -> Result<ExtReal> {
    problem.psi_eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::{BoxIndicator, Zero, L1};
    use crate::smooth::Quadratic;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn shifted_norm(b: &[f64]) -> Arc<dyn SmoothOracle> {
        let rows = (0..b.len())
            .map(|i| Vector::unit(b.len(), i, 1.0))
            .collect();
        Arc::new(Quadratic::new(rows, v(b)).unwrap())
    }

    #[test]
    fn psi_examples() {
        let p = CompositeProblem::new("p", shifted_norm(&[0.0, 0.0]), Arc::new(Zero)).unwrap();
        assert_eq!(psi_eval(&p, &v(&[0.0, 0.0])).unwrap(), ExtReal::Finite(0.0));

        let boxed = Arc::new(BoxIndicator::new(vec![0.0; 2], vec![1.0; 2]).unwrap());
        let p = CompositeProblem::new("p", shifted_norm(&[0.0, 0.0]), boxed).unwrap();
        assert_eq!(p.psi_eval(&v(&[2.0, 0.0])).unwrap(), ExtReal::PosInf);

        let l1 = Arc::new(L1::new(0.5).unwrap());
        let smooth = shifted_norm(&[1.0, 0.1]);
        let p = CompositeProblem::new("lasso", smooth.clone(), l1.clone()).unwrap();
        let x = v(&[0.5, 0.0]);
        let psi = p.psi_eval(&x).unwrap().to_f64();
        let by_parts = smooth.eval(&x) + l1.eval(&x).to_f64();
        assert!((psi - 0.38).abs() < 1e-15);
        assert_eq!(psi, by_parts);
    }

    #[test]
    fn dimension_checks() {
        let p = CompositeProblem::new("p", shifted_norm(&[0.0, 0.0]), Arc::new(Zero)).unwrap();
        assert!(p.psi_eval(&v(&[1.0])).is_err());
        let boxed = Arc::new(BoxIndicator::new(vec![0.0; 3], vec![1.0; 3]).unwrap());
        assert!(CompositeProblem::new("p", shifted_norm(&[0.0, 0.0]), boxed).is_err());
    }

    #[test]
    fn metadata_follows_the_oracles() {
        let p = CompositeProblem::new(
            "p",
            shifted_norm(&[0.0]),
            Arc::new(crate::prox::L0::new(1.0).unwrap()),
        )
        .unwrap();
        let md = p.metadata();
        assert!(!md.phi_continuous_on_domain);
        assert!(md.grad_f_locally_lipschitz);
        assert!(!md.psi_bounded_below);
    }
}
