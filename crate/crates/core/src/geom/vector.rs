use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or direction in `R^d`.
///
/// Serialized as a plain JSON array. Deserialization rejects non-finite entries.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawVector", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Checked constructor: every coordinate must be finite and `d >= 1`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Argument("vector must have dimension >= 1".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::Argument(format!("coordinate {i} is not finite")));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self(v)
    }

    /// Unit vector `(cos t, sin t)`.
    pub fn polar(angle: f64) -> Self {
        Self(vec![angle.cos(), angle.sin()])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    #[inline]
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * t).collect())
    }

    /// `self + t * other`
    pub fn add_scaled(&self, t: f64, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + t * b).collect())
    }

    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Argument("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (self - other).norm()
    }

    /// `(self, other)` as one vector of `R^{2d}`.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Vector(c)
    }

    /// Sum of a nonempty list of vectors of dimension `dim`.
    pub fn sum<'a, I: IntoIterator<Item = &'a Vector>>(dim: usize, items: I) -> Vector {
        let mut acc = vec![0.0; dim];
        for v in items {
            for (a, c) in acc.iter_mut().zip(&v.0) {
                *a += c;
            }
        }
        Vector(acc)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl From<Vec<f64>> for Vector {
    /// Unchecked conversion for literals and internal use.
    fn from(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Vector(coords)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(coords: [f64; N]) -> Self {
        Vector::from(coords.to_vec())
    }
}

#[derive(Deserialize)]
#[serde(transparent)]
struct RawVector(Vec<f64>);

impl TryFrom<RawVector> for Vector {
    type Error = Error;
    fn try_from(raw: RawVector) -> Result<Self> {
        Vector::new(raw.0)
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

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, t: f64) -> Vector {
        self.scale(t)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, t: f64) -> Vector {
        self.scale(t)
    }
}

/// Fail unless every vector has dimension `dim`.
pub(crate) fn check_dims<'a, I: IntoIterator<Item = &'a Vector>>(dim: usize, items: I) -> Result<()> {
    for v in items {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
        }
    }
    Ok(())
}
