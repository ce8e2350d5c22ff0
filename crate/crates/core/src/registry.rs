//! Name-based oracle registries and the JSON run-config format.
//!
//! ```json
//! {
//!   "problem": {
//!     "name": "lasso_small",
//!     "dimension": 2,
//!     "smooth": { "name": "quadratic", "params": { "a": [[1, 0], [0, 1]], "b": [1, 0.1] } },
//!     "nonsmooth": { "name": "l1", "params": { "lambda": 0.5 } },
//!     "metadata": { "psi_bounded_below": true }
//!   },
//!   "solver": { "m": 0 },
//!   "x0": "zeros",
//!   "output": "lasso_small.trace.csv"
//! }
//! ```
//!
//! Omitted solver fields take their defaults; omitted metadata flags are
//! taken from the oracles (`psi_bounded_below` defaults to `false`).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::problem::{CompositeProblem, ProblemMetadata};
use crate::prox::{BoxIndicator, LpHalf, ProxOracle, SphereIndicator, Zero, L0, L1};
use crate::smooth::{Logistic, Quadratic, Quartic, SmoothOracle};
use crate::solver::SolverConfig;
use crate::vector::Vector;

type SmoothCtor = fn(&Value, usize) -> Result<Arc<dyn SmoothOracle>>;
type ProxCtor = fn(&Value, usize) -> Result<Arc<dyn ProxOracle>>;

fn params<T: DeserializeOwned>(oracle: &str, value: &Value) -> Result<T> {
    let value = if value.is_null() {
        Value::Object(Default::default())
    } else {
        value.clone()
    };
    serde_json::from_value(value).map_err(|e| invalid(format!("{oracle} params: {e}")))
}

fn rows(a: Vec<Vec<f64>>) -> Result<Vec<Vector>> {
    a.into_iter().map(Vector::new).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticParams {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LogisticParams {
    a: Vec<Vec<f64>>,
    labels: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightParams {
    lambda: f64,
}

/// A bound given either per coordinate or as one scalar for all.
#[derive(Deserialize)]
#[serde(untagged)]
enum Bound {
    Scalar(f64),
    Coords(Vec<f64>),
}

impl Bound {
    fn expand(self, n: usize) -> Vec<f64> {
        match self {
            Bound::Scalar(x) => vec![x; n],
            Bound::Coords(v) => v,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxParams {
    lo: Bound,
    hi: Bound,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SphereParams {
    radius: f64,
}

/// Smooth oracles by name.
pub static SMOOTH_ORACLES: &[(&str, SmoothCtor)] = &[
    ("quadratic", |p, _| {
        let p: QuadraticParams = params("quadratic", p)?;
        Ok(Arc::new(Quadratic::new(rows(p.a)?, Vector::new(p.b)?)?))
    }),
    ("quartic", |p, n| {
        let _: NoParams = params("quartic", p)?;
        Ok(Arc::new(Quartic::new(n)?))
    }),
    ("logistic", |p, _| {
        let p: LogisticParams = params("logistic", p)?;
        Ok(Arc::new(Logistic::new(rows(p.a)?, p.labels)?))
    }),
];

/// Prox oracles by name.
pub static PROX_ORACLES: &[(&str, ProxCtor)] = &[
    ("zero", |p, _| {
        let _: NoParams = params("zero", p)?;
        Ok(Arc::new(Zero))
    }),
    ("l1", |p, _| {
        let p: WeightParams = params("l1", p)?;
        Ok(Arc::new(L1::new(p.lambda)?))
    }),
    ("l0", |p, _| {
        let p: WeightParams = params("l0", p)?;
        Ok(Arc::new(L0::new(p.lambda)?))
    }),
    ("lp_half", |p, _| {
        let p: WeightParams = params("lp_half", p)?;
        Ok(Arc::new(LpHalf::new(p.lambda)?))
    }),
    ("box", |p, n| {
        let p: BoxParams = params("box", p)?;
        Ok(Arc::new(BoxIndicator::new(p.lo.expand(n), p.hi.expand(n))?))
    }),
    ("sphere", |p, _| {
        let p: SphereParams = params("sphere", p)?;
        Ok(Arc::new(SphereIndicator::new(p.radius)?))
    }),
];

/// Shipped example configurations.
pub static PRESETS: &[(&str, &str)] = &[
    ("lasso_small", include_str!("../presets/lasso_small.json")),
    ("quartic_box", include_str!("../presets/quartic_box.json")),
    ("quartic_l0", include_str!("../presets/quartic_l0.json")),
    ("logistic_l1", include_str!("../presets/logistic_l1.json")),
    (
        "sphere_quadratic",
        include_str!("../presets/sphere_quadratic.json"),
    ),
];

pub fn smooth_names() -> impl Iterator<Item = &'static str> {
    SMOOTH_ORACLES.iter().map(|(n, _)| *n)
}

pub fn prox_names() -> impl Iterator<Item = &'static str> {
    PROX_ORACLES.iter().map(|(n, _)| *n)
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn make_smooth(spec: &OracleSpec, dimension: usize) -> Result<Arc<dyn SmoothOracle>> {
    let ctor = SMOOTH_ORACLES
        .iter()
        .find(|(n, _)| *n == spec.name)
        .ok_or_else(|| Error::UnknownName {
            kind: "smooth oracle",
            name: spec.name.clone(),
        })?
        .1;
    ctor(&spec.params, dimension)
}

pub fn make_prox(spec: &OracleSpec, dimension: usize) -> Result<Arc<dyn ProxOracle>> {
    let ctor = PROX_ORACLES
        .iter()
        .find(|(n, _)| *n == spec.name)
        .ok_or_else(|| Error::UnknownName {
            kind: "prox oracle",
            name: spec.name.clone(),
        })?
        .1;
    ctor(&spec.params, dimension)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

/// Metadata flags; any flag left out is derived from the oracles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetadataSpec {
    pub phi_continuous_on_domain: Option<bool>,
    pub grad_f_locally_lipschitz: Option<bool>,
    pub psi_bounded_below: Option<bool>,
    pub phi_affine_minorant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub dimension: usize,
    pub smooth: OracleSpec,
    pub nonsmooth: OracleSpec,
    #[serde(default)]
    pub metadata: MetadataSpec,
}

/// Starting point: explicit coordinates or `"zeros"` / `"ones"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartPoint {
    Preset(String),
    Coords(Vec<f64>),
}

impl Default for StartPoint {
    fn default() -> Self {
        StartPoint::Preset("zeros".into())
    }
}

impl StartPoint {
    pub fn resolve(&self, dimension: usize) -> Result<Vector> {
        let x = match self {
            StartPoint::Preset(p) if p == "zeros" => Vector::zeros(dimension),
            StartPoint::Preset(p) if p == "ones" => Vector::filled(dimension, 1.0),
            StartPoint::Preset(p) => {
                return Err(Error::UnknownName {
                    kind: "x0 preset",
                    name: p.clone(),
                })
            }
            StartPoint::Coords(c) => Vector::new(c.clone())?,
        };
        x.check_dim(dimension)?;
        Ok(x)
    }
}

/// A complete run description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub x0: StartPoint,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// Everything [`crate::solve`] needs, validated.
#[derive(Clone, Debug)]
pub struct PreparedRun {
    pub problem: CompositeProblem,
    pub config: SolverConfig,
    pub x0: Vector,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a config file, or a shipped preset when `path` names one and no
    /// such file exists.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            if let Some(text) = path.to_str().and_then(preset) {
                return Self::from_json(text);
            }
        }
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn problem_name(&self) -> String {
        self.problem.name.clone().unwrap_or_else(|| {
            format!(
                "{}+{}",
                self.problem.smooth.name, self.problem.nonsmooth.name
            )
        })
    }

    pub fn build_problem(&self) -> Result<CompositeProblem> {
        let spec = &self.problem;
        if spec.dimension == 0 {
            return Err(invalid("problem dimension must be positive"));
        }
        let smooth = make_smooth(&spec.smooth, spec.dimension)?;
        if smooth.dim() != spec.dimension {
            return Err(invalid(format!(
                "{} has dimension {} but the problem declares {}",
                smooth.name(),
                smooth.dim(),
                spec.dimension
            )));
        }
        let prox = make_prox(&spec.nonsmooth, spec.dimension)?;
        let problem = CompositeProblem::new(self.problem_name(), smooth, prox)?;
        let base = problem.metadata();
        let md = &spec.metadata;
        let metadata = ProblemMetadata {
            phi_continuous_on_domain: md
                .phi_continuous_on_domain
                .unwrap_or(base.phi_continuous_on_domain),
            grad_f_locally_lipschitz: md
                .grad_f_locally_lipschitz
                .unwrap_or(base.grad_f_locally_lipschitz),
            psi_bounded_below: md.psi_bounded_below.unwrap_or(base.psi_bounded_below),
            phi_affine_minorant: md.phi_affine_minorant.unwrap_or(base.phi_affine_minorant),
        };
        Ok(problem.with_metadata(metadata))
    }

    /// Resolves names, validates the solver parameters and checks that
    /// `ψ(x0) < ∞`.
    pub fn prepare(&self) -> Result<PreparedRun> {
        let problem = self.build_problem()?;
        self.solver.validate()?;
        let x0 = self.x0.resolve(problem.dimension())?;
        if !problem.psi_eval(&x0)?.is_finite() {
            return Err(Error::NotInDomain {
                oracle: problem.nonsmooth().name().to_string(),
            });
        }
        Ok(PreparedRun {
            problem,
            config: self.solver.clone(),
            x0,
        })
    }
}
