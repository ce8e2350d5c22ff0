use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// How the initial trial parameter `γ_k⁰` of each outer iteration is chosen.
/// Whatever the rule, the result is clamped into `[gamma_min, gamma_max]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Gamma0Strategy {
    Constant {
        value: f64,
    },
    /// Spectral (Barzilai–Borwein) estimate `⟨s, y⟩ / ⟨s, s⟩` with a fallback
    /// to the previous accepted `γ` when the curvature estimate is unusable.
    #[default]
    BbSafeguarded,
}

/// Parameters of the proximal gradient engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Backtracking factor, `γ_{k,i} = tauⁱ·γ_k⁰`.
    pub tau: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    /// Sufficient-decrease constant.
    pub delta: f64,
    /// Nonmonotonicity window; `m = 0` is the monotone method.
    pub m: usize,
    pub gamma0_strategy: Gamma0Strategy,
    /// Tolerance on the approximate-stationarity residual.
    pub tau_abs: f64,
    /// Step-norm tolerance for the fallback exit.
    pub eps_step: f64,
    pub max_outer: usize,
    pub max_inner: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tau: 2.0,
            gamma_min: 1e-8,
            gamma_max: 1e8,
            delta: 1e-4,
            m: 5,
            gamma0_strategy: Gamma0Strategy::BbSafeguarded,
            tau_abs: 1e-6,
            eps_step: 1e-10,
            max_outer: 10_000,
            max_inner: 100,
        }
    }
}

impl SolverConfig {
    /// Defaults with `m = 0`.
    pub fn monotone() -> Self {
        Self {
            m: 0,
            ..Self::default()
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 1.0) || !self.tau.is_finite() {
            return Err(invalid(format!("tau = {} violates τ > 1", self.tau)));
        }
        if !(self.gamma_min > 0.0 && self.gamma_min <= self.gamma_max && self.gamma_max.is_finite())
        {
            return Err(invalid(format!(
                "gamma bounds [{}, {}] violate 0 < γ_min ≤ γ_max < ∞",
                self.gamma_min, self.gamma_max
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!(
                "delta = {} violates δ ∈ (0,1)",
                self.delta
            )));
        }
        if !(self.tau_abs > 0.0) {
            return Err(invalid(format!(
                "tau_abs = {} must be positive",
                self.tau_abs
            )));
        }
        if !(self.eps_step >= 0.0) {
            return Err(invalid(format!(
                "eps_step = {} must be nonnegative",
                self.eps_step
            )));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(invalid("max_outer and max_inner must be positive"));
        }
        if let Gamma0Strategy::Constant { value } = self.gamma0_strategy {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid(format!(
                    "constant γ⁰ = {value} must be positive and finite"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn clamp_gamma(&self, gamma: f64) -> f64 {
        gamma.clamp(self.gamma_min, self.gamma_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SolverConfig::default().validate().unwrap();
        assert_eq!(SolverConfig::monotone().m, 0);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let bad = |c: SolverConfig| c.validate().unwrap_err().to_string();
        let base = SolverConfig::default;
        assert!(bad(SolverConfig {
            delta: 1.5,
            ..base()
        })
        .contains("δ ∈ (0,1)"));
        assert!(bad(SolverConfig {
            delta: 0.0,
            ..base()
        })
        .contains("δ ∈ (0,1)"));
        assert!(bad(SolverConfig { tau: 1.0, ..base() }).contains("τ > 1"));
        assert!(bad(SolverConfig {
            gamma_min: 2.0,
            gamma_max: 1.0,
            ..base()
        })
        .contains("γ_min"));
        assert!(bad(SolverConfig {
            gamma_max: f64::INFINITY,
            ..base()
        })
        .contains("γ_max"));
        assert!(SolverConfig {
            tau_abs: 0.0,
            ..base()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            max_inner: 0,
            ..base()
        }
        .validate()
        .is_err());
        let c = SolverConfig {
            gamma0_strategy: Gamma0Strategy::Constant { value: -1.0 },
            ..base()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_fields() {
        let c: SolverConfig = serde_json::from_str(
            r#"{"m": 0, "gamma0_strategy": {"kind": "constant", "value": 2.0}}"#,
        )
        .unwrap();
        assert_eq!(c.m, 0);
        assert_eq!(c.gamma0_strategy, Gamma0Strategy::Constant { value: 2.0 });
        assert_eq!(c.tau, 2.0);
        assert!(serde_json::from_str::<SolverConfig>(r#"{"tua": 2.0}"#).is_err());
    }
}
