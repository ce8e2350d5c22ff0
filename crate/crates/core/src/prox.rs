//! Lower semicontinuous terms `φ` with exact proximal maps.
//!
//! `prox(γ, v)` returns a global minimizer of `x ↦ (γ/2)‖x − v‖² + φ(x)`.
//! For the nonconvex oracles this set can have several elements; ties are
//! broken deterministically toward the smaller-norm point so that solver
//! traces are reproducible:
//!
//! | oracle    | tie rule                                                  |
//! |-----------|-----------------------------------------------------------|
//! | `l0`      | `(γ/2)vᵢ² = λ` keeps `xᵢ = 0`                             |
//! | `lp_half` | equal objective at `0` and at the smooth root keeps `0`   |
//! | `sphere`  | `v = 0` maps to `r·e₁`                                    |

use std::fmt;

use crate::error::{invalid, Result};
use crate::vector::{ExtReal, Vector};

/// Relative tolerance used when testing membership of the sphere.
pub const SPHERE_MEMBERSHIP_TOL: f64 = 1e-9;

/// Default grid for [`brute_force_prox`].
pub const BRUTE_FORCE_LO: f64 = -10.0;
pub const BRUTE_FORCE_HI: f64 = 10.0;
pub const BRUTE_FORCE_STEP: f64 = 1e-4;

/// A proper lower semicontinuous `φ: ℝⁿ → ℝ ∪ {+∞}` with a proximal oracle.
pub trait ProxOracle: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn eval(&self, x: &Vector) -> ExtReal;

    /// A global minimizer of `(γ/2)‖x − v‖² + φ(x)`; `gamma > 0`.
    fn prox(&self, gamma: f64, v: &Vector) -> Vector;

    /// Required dimension, if the oracle carries one (box bounds do).
    fn dim(&self) -> Option<usize> {
        None
    }

    fn continuous_on_domain(&self) -> bool;

    /// `φ` is bounded below by an affine function.
    fn affine_minorant(&self) -> bool {
        true
    }

    fn convex(&self) -> bool;

    /// The scalar penalty for separable oracles, used to cross-check the prox
    /// against [`brute_force_prox`].
    fn scalar_eval(&self, _x: f64) -> Option<f64> {
        None
    }
}

/// `φ ≡ 0`.
#[derive(Clone, Debug, Default)]
pub struct Zero;

impl ProxOracle for Zero {
    fn name(&self) -> &str {
        "zero"
    }

    fn eval(&self, _x: &Vector) -> ExtReal {
        ExtReal::Finite(0.0)
    }

    fn prox(&self, _gamma: f64, v: &Vector) -> Vector {
        v.clone()
    }

    fn continuous_on_domain(&self) -> bool {
        true
    }

    fn convex(&self) -> bool {
        true
    }

    fn scalar_eval(&self, _x: f64) -> Option<f64> {
        Some(0.0)
    }
}

fn check_weight(name: &str, lambda: f64) -> Result<f64> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(lambda)
    } else {
        Err(invalid(format!(
            "{name}: lambda must be finite and ≥ 0, got {lambda}"
        )))
    }
}

/// `φ(x) = λ‖x‖₁`.
#[derive(Clone, Debug)]
pub struct L1 {
    lambda: f64,
}

impl L1 {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Self {
            lambda: check_weight("l1", lambda)?,
        })
    }
}

/// `sign(v)·max(|v| − t, 0)`.
pub fn soft_threshold(v: f64, t: f64) -> f64 {
    let mag = v.abs() - t;
    if mag > 0.0 {
        mag.copysign(v)
    } else {
        0.0
    }
}

impl ProxOracle for L1 {
    fn name(&self) -> &str {
        "l1"
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::from_f64(self.lambda * x.iter().map(|c| c.abs()).sum::<f64>())
    }

    fn prox(&self, gamma: f64, v: &Vector) -> Vector {
        let t = self.lambda / gamma;
        v.map(|c| soft_threshold(c, t))
    }

    fn continuous_on_domain(&self) -> bool {
        true
    }

    fn convex(&self) -> bool {
        true
    }

    fn scalar_eval(&self, x: f64) -> Option<f64> {
        Some(self.lambda * x.abs())
    }
}

/// `φ(x) = λ·#{i : xᵢ ≠ 0}`.
#[derive(Clone, Debug)]
pub struct L0 {
    lambda: f64,
}

impl L0 {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Self {
            lambda: check_weight("l0", lambda)?,
        })
    }
}

/// Keeps `v` iff `(γ/2)v² > λ`; the tie goes to zero.
pub fn hard_threshold(v: f64, lambda: f64, gamma: f64) -> f64 {
    if 0.5 * gamma * v * v > lambda {
        v
    } else {
        0.0
    }
}

impl ProxOracle for L0 {
    fn name(&self) -> &str {
        "l0"
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::Finite(self.lambda * x.iter().filter(|c| **c != 0.0).count() as f64)
    }

    fn prox(&self, gamma: f64, v: &Vector) -> Vector {
        v.map(|c| hard_threshold(c, self.lambda, gamma))
    }

    fn continuous_on_domain(&self) -> bool {
        false
    }

    fn convex(&self) -> bool {
        false
    }

    fn scalar_eval(&self, x: f64) -> Option<f64> {
        Some(if x != 0.0 { self.lambda } else { 0.0 })
    }
}

/// `φ(x) = λ Σ |xᵢ|^{1/2}`.
#[derive(Clone, Debug)]
pub struct LpHalf {
    lambda: f64,
}

impl LpHalf {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Self {
            lambda: check_weight("lp_half", lambda)?,
        })
    }
}

/// Scalar prox of `λ|·|^{1/2}`.
///
/// On `x > 0` the stationarity condition of `(γ/2)(x − a)² + λ√x` is
/// `g(x) = γ(x − a) + λ/(2√x) = 0` with `a = |v|`. `g` is convex on `(0, ∞)`
/// with its minimum at `x* = (λ/(4γ))^{2/3}`, so a local minimizer exists
/// only if `x* < a` and `g(x*) < 0`; it is then the root of `g` in `(x*, a)`.
/// That root is compared against `x = 0`.
pub fn lp_half_threshold(v: f64, lambda: f64, gamma: f64) -> f64 {
    let a = v.abs();
    if lambda == 0.0 || a == 0.0 {
        return if lambda == 0.0 { v } else { 0.0 };
    }
    let g = |x: f64| gamma * (x - a) + lambda / (2.0 * x.sqrt());
    let dg = |x: f64| gamma - lambda / (4.0 * x * x.sqrt());

    let x_star = (lambda / (4.0 * gamma)).powf(2.0 / 3.0);
    if x_star >= a || g(x_star) >= 0.0 {
        return 0.0;
    }

    // g(lo) < 0 < g(hi); Newton from the right stays in the bracket for a
    // convex increasing g, bisection covers the rest.
    let (mut lo, mut hi) = (x_star, a);
    let mut x = a;
    let scale = gamma * a + lambda / (2.0 * x_star.sqrt());
    for _ in 0..200 {
        let gx = g(x);
        if gx.abs() <= 1e-12 * scale {
            break;
        }
        if gx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - gx / dg(x);
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }

    let h_root = 0.5 * gamma * (x - a) * (x - a) + lambda * x.sqrt();
    let h_zero = 0.5 * gamma * a * a;
    if h_root < h_zero {
        x.copysign(v)
    } else {
        0.0
    }
}

impl ProxOracle for LpHalf {
    fn name(&self) -> &str {
        "lp_half"
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::from_f64(self.lambda * x.iter().map(|c| c.abs().sqrt()).sum::<f64>())
    }

    fn prox(&self, gamma: f64, v: &Vector) -> Vector {
        v.map(|c| lp_half_threshold(c, self.lambda, gamma))
    }

    fn continuous_on_domain(&self) -> bool {
        true
    }

    fn convex(&self) -> bool {
        false
    }

    fn scalar_eval(&self, x: f64) -> Option<f64> {
        Some(self.lambda * x.abs().sqrt())
    }
}

/// Indicator of the box `{x : lo ≤ x ≤ hi}`.
#[derive(Clone, Debug)]
pub struct BoxIndicator {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxIndicator {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(invalid(format!(
                "box: bounds must be nonempty and of equal length ({} vs {})",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] <= hi[i]) || lo[i].is_nan()) {
            return Err(invalid(format!(
                "box: lo[{i}] = {} exceeds hi[{i}] = {}",
                lo[i], hi[i]
            )));
        }
        Ok(Self { lo, hi })
    }

    /// The box `[−r, r]ⁿ`.
    pub fn symmetric(n: usize, r: f64) -> Result<Self> {
        Self::new(vec![-r; n], vec![r; n])
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.lo.len()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| l <= c && c <= h)
    }
}

impl ProxOracle for BoxIndicator {
    fn name(&self) -> &str {
        "box"
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        if self.contains(x) {
            ExtReal::Finite(0.0)
        } else {
            ExtReal::PosInf
        }
    }

    fn prox(&self, _gamma: f64, v: &Vector) -> Vector {
        Vector::from_raw(
            v.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .map(|(c, (l, h))| c.clamp(*l, *h))
                .collect(),
        )
    }

    fn dim(&self) -> Option<usize> {
        Some(self.lo.len())
    }

    fn continuous_on_domain(&self) -> bool {
        true
    }

    fn convex(&self) -> bool {
        true
    }

    fn scalar_eval(&self, x: f64) -> Option<f64> {
        // Only meaningful for one-dimensional boxes.
        (self.lo.len() == 1).then(|| {
            if self.lo[0] <= x && x <= self.hi[0] {
                0.0
            } else {
                f64::INFINITY
            }
        })
    }
}

/// Indicator of the sphere `{x : ‖x‖ = r}`, a closed nonconvex set.
///
/// Membership is tested with relative tolerance [`SPHERE_MEMBERSHIP_TOL`]
/// since a radial projection only lands on the sphere up to rounding.
#[derive(Clone, Debug)]
pub struct SphereIndicator {
    radius: f64,
}

impl SphereIndicator {
    pub fn new(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(Self { radius })
        } else {
            Err(invalid(format!(
                "sphere: radius must be positive, got {radius}"
            )))
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl ProxOracle for SphereIndicator {
    fn name(&self) -> &str {
        "sphere"
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        if (x.norm() - self.radius).abs() <= SPHERE_MEMBERSHIP_TOL * self.radius.max(1.0) {
            ExtReal::Finite(0.0)
        } else {
            ExtReal::PosInf
        }
    }

    fn prox(&self, _gamma: f64, v: &Vector) -> Vector {
        let n = v.norm();
        if n == 0.0 {
            Vector::unit(v.dim(), 0, self.radius)
        } else {
            v.scaled(self.radius / n)
        }
    }

    fn continuous_on_domain(&self) -> bool {
        true
    }

    fn convex(&self) -> bool {
        false
    }
}

/// Grid minimizer of `(γ/2)(x − v)² + φ(x)` over `{lo, lo + step, …, hi}`.
///
/// When `lo` is an integer multiple of `step` the grid is generated as
/// `i·step` so that `0` is represented exactly. Ties go to the smallest
/// `|x|`, then the smallest `x`.
pub fn brute_force_prox(
    phi: impl Fn(f64) -> f64,
    gamma: f64,
    v: f64,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!(
            "brute-force grid [{lo}, {hi}] with step {step} is empty"
        )));
    }
    let offset = lo / step;
    let lattice = (offset - offset.round()).abs() < 1e-9;
    let first = offset.round();
    let count = ((hi - lo) / step + 1e-9).floor() as i64;
    let point = |i: i64| {
        if lattice {
            (first + i as f64) * step
        } else {
            lo + i as f64 * step
        }
    };

    let mut best: Option<(f64, f64)> = None;
    for i in 0..=count {
        let x = point(i);
        let val = 0.5 * gamma * (x - v) * (x - v) + phi(x);
        if val.is_nan() || val == f64::INFINITY {
            continue;
        }
        let better = match best {
            None => true,
            Some((bx, bv)) => {
                val < bv || (val == bv && (x.abs() < bx.abs() || (x.abs() == bx.abs() && x < bx)))
            }
        };
        if better {
            best = Some((x, val));
        }
    }
    best.map(|(x, _)| x)
        .ok_or_else(|| invalid("brute-force grid contains no point of dom φ"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn zero_is_identity() {
        assert_eq!(Zero.prox(1.0, &v(&[1.0, 2.0])), v(&[1.0, 2.0]));
        assert_eq!(Zero.prox(7.0, &v(&[0.0, 0.0])), v(&[0.0, 0.0]));
    }

    #[test]
    fn l1_examples() {
        let off = L1::new(0.0).unwrap();
        assert_eq!(off.prox(3.0, &v(&[1.5, -2.0])), v(&[1.5, -2.0]));
        let l1 = L1::new(1.0).unwrap();
        assert_eq!(l1.prox(2.0, &v(&[0.0, 0.0])), v(&[0.0, 0.0]));
        assert_eq!(l1.prox(2.0, &v(&[3.0, -0.25])), v(&[2.5, 0.0]));
        for (vi, expect) in [(3.0, 2.5), (-0.25, 0.0)] {
            let bf = brute_force_prox(|x| x.abs(), 2.0, vi, -5.0, 5.0, 1e-4).unwrap();
            assert!((bf - expect).abs() <= 1e-4);
        }
        assert!(L1::new(-1.0).is_err());
    }

    #[test]
    fn l0_examples() {
        let l0 = L0::new(1.0).unwrap();
        assert_eq!(l0.prox(2.0, &v(&[0.9])), v(&[0.0]));
        assert_eq!(l0.prox(2.0, &v(&[1.5])), v(&[1.5]));
        // (γ/2)v² = λ exactly: tie goes to zero.
        assert_eq!(l0.prox(2.0, &v(&[1.0])), v(&[0.0]));
        assert_eq!(l0.eval(&v(&[0.0, 3.0, -1.0])), ExtReal::Finite(2.0));
        assert!(!l0.continuous_on_domain());
    }

    #[test]
    fn lp_half_examples() {
        let lp = LpHalf::new(1.0).unwrap();
        assert_eq!(lp.prox(2.0, &v(&[0.0])), v(&[0.0]));
        let off = LpHalf::new(0.0).unwrap();
        assert_eq!(off.prox(2.0, &v(&[1.8, -0.3])), v(&[1.8, -0.3]));

        let p = lp.prox(2.0, &v(&[1.8]))[0];
        let bf = brute_force_prox(|x| x.abs().sqrt(), 2.0, 1.8, -3.0, 3.0, 1e-5).unwrap();
        assert!((p - bf).abs() <= 1e-4, "prox {p} vs grid {bf}");
        assert_eq!(lp.prox(2.0, &v(&[-1.8]))[0], -p);
    }

    #[test]
    fn lp_half_root_is_stationary() {
        for &(lambda, gamma, a) in &[(1.0, 2.0, 1.8), (0.3, 0.7, 4.2), (2.0, 10.0, 0.9)] {
            let x = lp_half_threshold(a, lambda, gamma);
            if x != 0.0 {
                let g = gamma * (x - a) + lambda / (2.0 * x.sqrt());
                assert!(g.abs() <= 1e-10, "stationarity residual {g}");
            }
        }
    }

    #[test]
    fn lp_half_threshold_jump() {
        // Below the threshold the prox is zero, above it jumps to a positive root.
        let lambda = 1.0;
        let gamma = 2.0;
        let small = lp_half_threshold(0.5, lambda, gamma);
        let large = lp_half_threshold(3.0, lambda, gamma);
        assert_eq!(small, 0.0);
        assert!(large > 1.0);
    }

    #[test]
    fn box_examples() {
        let b = BoxIndicator::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(b.prox(1.0, &v(&[0.3, 0.9])), v(&[0.3, 0.9]));
        assert_eq!(b.prox(1.0, &v(&[2.0, -3.0])), v(&[1.0, 0.0]));
        assert_eq!(b.eval(&v(&[2.0, 0.0])), ExtReal::PosInf);
        assert!(BoxIndicator::new(vec![0.0, 1.0], vec![1.0, 0.5]).is_err());
        assert!(BoxIndicator::new(vec![0.0], vec![1.0, 2.0]).is_err());

        let b1 = BoxIndicator::new(vec![-0.5], vec![2.0]).unwrap();
        let phi = |x: f64| b1.scalar_eval(x).unwrap();
        for vi in [-3.0, 0.7, 4.0] {
            let bf = brute_force_prox(phi, 1.0, vi, -10.0, 10.0, 1e-4).unwrap();
            assert!((bf - b1.prox(1.0, &v(&[vi]))[0]).abs() <= 1e-4);
        }
    }

    #[test]
    fn sphere_examples() {
        let s = SphereIndicator::new(1.0).unwrap();
        let p = s.prox(1.0, &v(&[3.0, 4.0]));
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);

        // Independent check: no sampled sphere point is closer to v.
        let target = v(&[3.0, 4.0]);
        let best = (0..10_000)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 10_000.0;
                let z = v(&[t.cos(), t.sin()]);
                z.sub(&target).norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(p.sub(&target).norm() <= best + 1e-12);

        let s2 = SphereIndicator::new(2.0).unwrap();
        let on = v(&[2.0 * 0.3f64.cos(), 2.0 * 0.3f64.sin()]);
        let back = s2.prox(5.0, &on);
        assert!(back.sub(&on).norm() < 1e-15);

        assert_eq!(s.prox(1.0, &v(&[0.0, 0.0])), v(&[1.0, 0.0]));
        assert!(s.eval(&p).is_finite());
        assert!(!s.eval(&v(&[0.5, 0.0])).is_finite());
        assert!(SphereIndicator::new(0.0).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let x = brute_force_prox(|_| 0.0, 1.0, 0.5, -1.0, 1.0, 1e-3).unwrap();
        assert!((x - 0.5).abs() <= 1e-3);
        let x = brute_force_prox(f64::abs, 1.0, 2.0, -5.0, 5.0, 1e-4).unwrap();
        assert!((x - 1.0).abs() <= 1e-4);
        let two_point = |x: f64| {
            if x == 0.0 || x == 1.0 {
                0.0
            } else {
                f64::INFINITY
            }
        };
        assert_eq!(
            brute_force_prox(two_point, 1.0, 0.4, -1.0, 2.0, 0.5).unwrap(),
            0.0
        );
        // Exact tie between 0 and 1 at v = 0.5 resolves to the smaller magnitude.
        assert_eq!(
            brute_force_prox(two_point, 1.0, 0.5, -1.0, 2.0, 0.5).unwrap(),
            0.0
        );
    }

    #[test]
    fn brute_force_rejects_empty_grids() {
        assert!(brute_force_prox(|_| 0.0, 1.0, 0.0, 1.0, -1.0, 0.1).is_err());
        assert!(brute_force_prox(|_| 0.0, 1.0, 0.0, -1.0, 1.0, 0.0).is_err());
        let nowhere = |_: f64| f64::INFINITY;
        assert!(brute_force_prox(nowhere, 1.0, 0.0, -1.0, 1.0, 0.1).is_err());
    }
}
