use serde::{Deserialize, Serialize};

use super::Vector;
use crate::error::{Error, Result};

/// An element `w = (u, v)` of `R^d x R^d`.
///
/// The inner product is the one of `R^{2d}`: `<(u,v),(u',v')> = <u,u'> + <v,v'>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPaired")]
pub struct PairedVector {
    pub u: Vector,
    pub v: Vector,
}

#[derive(Deserialize)]
struct RawPaired {
    u: Vector,
    v: Vector,
}

impl TryFrom<RawPaired> for PairedVector {
    type Error = Error;
    fn try_from(raw: RawPaired) -> Result<Self> {
        PairedVector::new(raw.u, raw.v)
    }
}

impl PairedVector {
    pub fn new(u: Vector, v: Vector) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
        }
        Ok(Self { u, v })
    }

    /// `(u, u)`
    pub fn diagonal(u: Vector) -> Self {
        Self { v: u.clone(), u }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { u: Vector::zeros(dim), v: Vector::zeros(dim) }
    }

    /// Dimension `d` of each half.
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// The swap `(u, v) -> (v, u)`.
    pub fn hat(&self) -> PairedVector {
        PairedVector { u: self.v.clone(), v: self.u.clone() }
    }

    pub fn dot(&self, other: &PairedVector) -> f64 {
        self.u.dot(&other.u) + self.v.dot(&other.v)
    }

    pub fn scale(&self, t: f64) -> PairedVector {
        PairedVector { u: self.u.scale(t), v: self.v.scale(t) }
    }

    pub fn add(&self, other: &PairedVector) -> PairedVector {
        PairedVector { u: &self.u + &other.u, v: &self.v + &other.v }
    }

    pub fn sub(&self, other: &PairedVector) -> PairedVector {
        PairedVector { u: &self.u - &other.u, v: &self.v - &other.v }
    }

    /// Flattened into `R^{2d}`.
    pub fn flatten(&self) -> Vector {
        self.u.concat(&self.v)
    }
}

/// Free-function form of [`PairedVector::hat`].
pub fn hat(w: &PairedVector) -> PairedVector {
    w.hat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn hat_is_an_involution(
            u in prop::collection::vec(-1e6f64..1e6, 3),
            v in prop::collection::vec(-1e6f64..1e6, 3),
        ) {
            let w = PairedVector::new(Vector::from(u), Vector::from(v)).unwrap();
            prop_assert_eq!(w.hat().hat(), w.clone());
            // <w, w^> = 2 <u, v>
            let lhs = w.dot(&w.hat());
            let rhs = 2.0 * w.u.dot(&w.v);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn mismatched_halves_rejected() {
        assert!(PairedVector::new(Vector::from([1.0]), Vector::from([1.0, 2.0])).is_err());
        let bad = r#"{"u":[1.0],"v":[1.0,2.0]}"#;
        assert!(serde_json::from_str::<PairedVector>(bad).is_err());
    }
}
