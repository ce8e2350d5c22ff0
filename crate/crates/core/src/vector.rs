//! Dense vectors of the Euclidean space and extended-real objective values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A point of ℝⁿ with finite coordinates.
///
/// Construction rejects NaN and ±∞, and every binary operation checks that
/// both operands have the same dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("vector must have at least one coordinate"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Self(coords))
    }

    /// Builds a vector without the finiteness check. Callers guarantee the
    /// coordinates come from finite arithmetic or test fixtures.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n.max(1)])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Self(vec![value; n.max(1)])
    }

    /// The `i`-th canonical basis vector scaled by `scale`.
    pub fn unit(n: usize, i: usize, scale: f64) -> Self {
        let mut v = vec![0.0; n.max(1)];
        v[i] = scale;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn map(&self, f: impl FnMut(f64) -> f64) -> Self {
        Self(self.0.iter().copied().map(f).collect())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// `self - other`, panicking on dimension mismatch.
    pub(crate) fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub(crate) fn scaled(&self, a: f64) -> Self {
        self.map(|c| a * c)
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a Vector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Euclidean norm.
pub fn norm(x: &Vector) -> f64 {
    x.norm_squared().sqrt()
}

/// Euclidean inner product.
pub fn dot(x: &Vector, y: &Vector) -> Result<f64> {
    y.check_dim(x.dim())?;
    Ok(x.dot_unchecked(y))
}

/// `a·x + y`.
pub fn axpy(a: f64, x: &Vector, y: &Vector) -> Result<Vector> {
    y.check_dim(x.dim())?;
    Ok(Vector(
        x.0.iter().zip(&y.0).map(|(xi, yi)| a * xi + yi).collect(),
    ))
}

/// A value of ℝ ∪ {+∞}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Maps a raw double onto the extended reals. Any non-finite value
    /// (an overflowing evaluation, NaN) becomes [`ExtReal::PosInf`]; −∞ has no
    /// representation.
    pub fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            ExtReal::Finite(x)
        } else {
            ExtReal::PosInf
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    /// `+∞` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::from_f64(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::PosInf) => Some(Ordering::Less),
            (ExtReal::PosInf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::PosInf, ExtReal::PosInf) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => f.write_str("+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(norm(&v(&[3.0, 4.0])), 5.0);
        assert_eq!(dot(&v(&[1.0, 2.0]), &v(&[2.0, -1.0])).unwrap(), 0.0);
        assert_eq!(
            axpy(2.0, &v(&[1.0, 1.0]), &v(&[0.0, -1.0])).unwrap(),
            v(&[2.0, 1.0])
        );
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = v(&[1.0, 2.0]);
        let b = v(&[1.0]);
        assert!(matches!(
            dot(&a, &b),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
        assert!(axpy(1.0, &a, &b).is_err());
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Vector::new(vec![]).is_err());
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
        assert!(serde_json::from_str::<Vector>("[1.0, 2.0]").is_ok());
    }

    #[test]
    fn ext_real_ordering_and_sum() {
        let one = ExtReal::Finite(1.0);
        assert!(ExtReal::PosInf > ExtReal::Finite(f64::MAX));
        assert_eq!(one + ExtReal::PosInf, ExtReal::PosInf);
        assert_eq!(one + one, ExtReal::Finite(2.0));
        assert_eq!(ExtReal::from_f64(f64::NAN), ExtReal::PosInf);
        assert_eq!(ExtReal::PosInf.to_f64(), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            (xs, ys) in (1usize..8).prop_flat_map(|n| (
                prop::collection::vec(-1e3..1e3f64, n),
                prop::collection::vec(-1e3..1e3f64, n),
            )),
            a in -1e3..1e3f64,
        ) {
            let x = v(&xs);
            let y = v(&ys);
            let lhs = norm(&axpy(a, &x, &y).unwrap());
            let rhs = a.abs() * norm(&x) + norm(&y);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
        }
    }
}
