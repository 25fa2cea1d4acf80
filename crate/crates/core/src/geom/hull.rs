use serde::Serialize;

use super::{check_dims, Vector};
use crate::error::{Error, Result};
use crate::lp::{Bound, LinearProgram, Relation, Status};

/// Tolerance for the reconstruction `|sum alpha_i p_i| <= RECONSTRUCTION_TOL`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Answer of [`origin_in_hull`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HullMembership {
    /// Convex weights with `sum alpha_i p_i = 0`.
    Inside { weights: Vec<f64> },
    /// Unit direction `s` with `<s, p_i> > 0` for every point.
    Outside { separator: Vector, margin: f64 },
}

impl HullMembership {
    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            HullMembership::Inside { weights } => Some(weights),
            HullMembership::Outside { .. } => None,
        }
    }
}

/// Decide whether `0` lies in the convex hull of `points`.
///
/// Feasible case: returns convex weights reconstructing the origin.
/// Infeasible case: returns a strictly separating unit direction found by
/// maximizing `min_i <s, p_i>` over the box `|s_k| <= 1`.
pub fn origin_in_hull(points: &[Vector]) -> Result<HullMembership> {
    let Some(first) = points.first() else {
        return Err(Error::Argument("origin_in_hull needs at least one point".into()));
    };
    let dim = first.dim();
    check_dims(dim, points.iter())?;
    let n = points.len();

    // alpha >= 0, sum alpha = 1, sum alpha p = 0
    let mut lp = LinearProgram::new(vec![0.0; n]);
    for k in 0..dim {
        lp.add_constraint(points.iter().map(|p| p[k]).collect(), Relation::Eq, 0.0);
    }
    lp.add_constraint(vec![1.0; n], Relation::Eq, 1.0);
    let sol = lp.solve()?;
    if sol.status == Status::Optimal {
        let weights = normalize_weights(sol.x);
        let residual = reconstruction_residual(points, &weights);
        if residual <= RECONSTRUCTION_TOL {
            return Ok(HullMembership::Inside { weights });
        }
    }

    // maximize t subject to <s, p_i> >= t, s in [-1, 1]^d, t <= 1
    let mut lp = LinearProgram::new(std::iter::repeat_n(0.0, dim).chain([1.0]).collect());
    lp.set_bounds_all(Bound::new(-1.0, 1.0));
    lp.set_bounds(dim, Bound::new(f64::NEG_INFINITY, 1.0));
    for p in points {
        let mut row: Vec<f64> = p.as_slice().to_vec();
        row.push(-1.0);
        lp.add_constraint(row, Relation::Ge, 0.0);
    }
    let sol = lp.solve()?;
    if sol.status != Status::Optimal || sol.value <= 0.0 {
        return Err(Error::Certificate(
            "origin is on the hull boundary within tolerance: no weights and no strict separator".into(),
        ));
    }
    let s = Vector::from(sol.x[..dim].to_vec());
    let separator = s.normalized()?;
    let margin = points.iter().map(|p| separator.dot(p)).fold(f64::INFINITY, f64::min);
    if margin <= 0.0 {
        return Err(Error::Certificate(format!("separator does not strictly separate (margin {margin:e})")));
    }
    Ok(HullMembership::Outside { separator, margin })
}

/// `|sum alpha_i p_i|`
pub fn reconstruction_residual(points: &[Vector], weights: &[f64]) -> f64 {
    let dim = points.first().map_or(0, Vector::dim);
    let mut acc = Vector::zeros(dim);
    for (p, a) in points.iter().zip(weights) {
        acc = acc.add_scaled(*a, p);
    }
    acc.norm()
}

/// Check convex weights: nonnegative, summing to one, reconstructing the origin.
pub fn check_convex_weights(points: &[Vector], weights: &[f64], tol: f64) -> Result<()> {
    if weights.len() != points.len() {
        return Err(Error::DimensionMismatch { expected: points.len(), found: weights.len() });
    }
    if let Some(i) = weights.iter().position(|w| *w < -tol || !w.is_finite()) {
        return Err(Error::Certificate(format!("weight {i} is negative ({})", weights[i])));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::Certificate(format!("weights sum to {total}, not 1")));
    }
    let r = reconstruction_residual(points, weights);
    if r > tol {
        return Err(Error::Certificate(format!("weights reconstruct the origin only to {r:e}")));
    }
    Ok(())
}

fn normalize_weights(x: Vec<f64>) -> Vec<f64> {
    let clipped: Vec<f64> = x.into_iter().map(|a| a.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    clipped.into_iter().map(|a| a / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[[f64; 2]]) -> Vec<Vector> {
        raw.iter().map(|p| Vector::from(*p)).collect()
    }

    #[test]
    fn symmetric_pair() {
        let h = origin_in_hull(&pts(&[[1.0, 0.0], [-1.0, 0.0]])).unwrap();
        assert_eq!(h, HullMembership::Inside { weights: vec![0.5, 0.5] });
    }

    #[test]
    fn open_half_plane_refusal() {
        match origin_in_hull(&pts(&[[1.0, 0.0], [0.0, 1.0]])).unwrap() {
            HullMembership::Outside { separator, margin } => {
                let expect = Vector::from([1.0, 1.0]).normalized().unwrap();
                assert!(separator.distance(&expect) < 1e-12);
                assert!(margin > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triangle_weights_unique() {
        // 2x2 system: a1 - a2 - a3 = 0, a2 - a3 = 0, sum = 1 -> (1/2, 1/4, 1/4)
        let p = pts(&[[1.0, 0.0], [-1.0, 1.0], [-1.0, -1.0]]);
        let w = origin_in_hull(&p).unwrap().weights().unwrap().to_vec();
        for (a, b) in w.iter().zip([0.5, 0.25, 0.25]) {
            assert!((a - b).abs() < 1e-12);
        }
        check_convex_weights(&p, &w, 1e-9).unwrap();
    }

    #[test]
    fn single_point() {
        assert!(origin_in_hull(&pts(&[[0.0, 0.0]])).unwrap().weights().is_some());
        assert!(origin_in_hull(&pts(&[[0.0, 2.0]])).unwrap().weights().is_none());
        assert!(origin_in_hull(&[]).is_err());
    }
}
