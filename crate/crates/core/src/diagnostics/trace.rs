use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::solver::SolverConfig;
use crate::vector::Vector;

/// The step taken out of an iterate: `x^k → x^{k+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    /// Initial trial parameter `γ_k⁰`.
    pub gamma0: f64,
    /// Accepted parameter `γ_k`.
    pub gamma: f64,
    /// Number of rejected trials `i_k`.
    pub inner_iters: usize,
    /// `‖x^{k+1} − x^k‖`.
    pub step_norm: f64,
    /// The window maximum the trial was compared against.
    pub accepted_ref: f64,
}

/// One outer iterate `x^k`.
///
/// Every record except the last carries the step out of `x^k`; the last
/// record is the terminal iterate and has `step == None`. `residual` is the
/// approximate-stationarity residual at `x^k` and is `None` at `k = 0`,
/// where no previous iterate exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterateRecord {
    pub k: usize,
    pub f: f64,
    pub phi: f64,
    pub psi: f64,
    pub residual: Option<f64>,
    pub step: Option<StepRecord>,
}

/// Full audit trail of one solver run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub records: Vec<IterateRecord>,
    pub config_echo: SolverConfig,
    pub problem_name: String,
    pub x0_hash: String,
}

/// Side information that does not fit the CSV columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub(crate) struct TraceMeta {
    pub problem_name: String,
    pub x0_hash: String,
    pub config: SolverConfig,
}

impl Trace {
    pub fn psi(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.psi).collect()
    }

    /// Records that carry a step, in order.
    pub fn steps(&self) -> impl DoubleEndedIterator<Item = (usize, &StepRecord)> {
        self.records
            .iter()
            .filter_map(|r| r.step.as_ref().map(|s| (r.k, s)))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Structural checks: contiguous indices from 0, a step on every record
    /// but the last, a residual on every record but the first, finite values.
    pub fn validate(&self) -> Result<()> {
        let n = self.records.len();
        if n == 0 {
            return Err(Error::Format("trace has no records".into()));
        }
        for (i, r) in self.records.iter().enumerate() {
            if r.k != i {
                return Err(Error::Format(format!("row {i} has index k = {}", r.k)));
            }
            if !(r.psi.is_finite() && r.f.is_finite() && r.phi.is_finite()) {
                return Err(Error::Format(format!(
                    "row {i}: objective values must be finite"
                )));
            }
            if i + 1 < n && r.step.is_none() {
                return Err(Error::Format(format!(
                    "row {i} is not terminal but has no step"
                )));
            }
            if i > 0 && r.residual.is_none() {
                return Err(Error::Format(format!("row {i} is missing its residual")));
            }
            if let Some(s) = &r.step {
                let vals = [s.gamma0, s.gamma, s.step_norm, s.accepted_ref];
                if vals.iter().any(|v| !v.is_finite()) || s.gamma <= 0.0 || s.step_norm < 0.0 {
                    return Err(Error::Format(format!("row {i}: invalid step columns")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn meta(&self) -> TraceMeta {
        TraceMeta {
            problem_name: self.problem_name.clone(),
            x0_hash: self.x0_hash.clone(),
            config: self.config_echo.clone(),
        }
    }
}

/// SHA-256 of the little-endian coordinates, hex encoded.
pub fn x0_hash(x0: &Vector) -> String {
    let mut h = Sha256::new();
    for c in x0 {
        h.update(c.to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(k: usize, psi: f64, step: Option<f64>) -> IterateRecord {
        IterateRecord {
            k,
            f: psi,
            phi: 0.0,
            psi,
            residual: (k > 0).then_some(1.0),
            step: step.map(|s| StepRecord {
                gamma0: 1.0,
                gamma: 1.0,
                inner_iters: 0,
                step_norm: s,
                accepted_ref: psi,
            }),
        }
    }

    fn trace(records: Vec<IterateRecord>) -> Trace {
        Trace {
            records,
            config_echo: SolverConfig::default(),
            problem_name: "t".into(),
            x0_hash: String::new(),
        }
    }

    #[test]
    fn validate_accepts_well_formed() {
        trace(vec![row(0, 2.0, Some(1.0)), row(1, 1.0, None)])
            .validate()
            .unwrap();
        trace(vec![row(0, 2.0, None)]).validate().unwrap();
    }

    #[test]
    fn validate_rejects_malformed() {
        assert!(trace(vec![]).validate().is_err());
        assert!(trace(vec![row(0, 2.0, Some(1.0)), row(2, 1.0, None)])
            .validate()
            .is_err());
        assert!(trace(vec![row(0, 2.0, None), row(1, 1.0, None)])
            .validate()
            .is_err());
        let mut r = row(1, 1.0, None);
        r.residual = None;
        assert!(trace(vec![row(0, 2.0, Some(1.0)), r]).validate().is_err());
    }

    #[test]
    fn hash_depends_on_every_coordinate() {
        let a = x0_hash(&Vector::new(vec![1.0, 2.0]).unwrap());
        let b = x0_hash(&Vector::new(vec![1.0, 2.0000000000000004]).unwrap());
        assert_eq!(a.len(), 64);
        assert_ne!(a, b);
    }
}
