//! Planar routines: convex hull, rotating calipers, Minkowski sums.

use serde::Serialize;

use super::{check_dims, Vector};
use crate::error::{Error, Result};

#[inline]
fn cross(o: &Vector, a: &Vector, b: &Vector) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Extreme points of a planar point set, counter-clockwise, starting from the
/// lexicographically smallest point. Collinear and duplicate points are dropped.
pub fn convex_hull_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.max_abs()));
    let dup_eps = 1e-12 * scale;
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= dup_eps && (a[1] - b[1]).abs() <= dup_eps);
    if pts.len() <= 2 {
        return pts;
    }
    let turn_eps = 1e-12 * scale * scale;
    let mut hull: Vec<Vector> = Vec::with_capacity(2 * pts.len());
    // lower chain
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= turn_eps {
            hull.pop();
        }
        hull.push(p.clone());
    }
    // upper chain, never popping into the lower one
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= turn_eps {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull.pop();
    hull
}

/// Minimal width of a planar convex body given by its vertices, via rotating calipers.
///
/// Returns the width and a unit direction achieving it.
pub fn min_width_of_points(points: &[Vector]) -> (f64, Vector) {
    let hull = convex_hull_2d(points);
    match hull.len() {
        0 | 1 => return (0.0, Vector::from([1.0, 0.0])),
        2 => {
            let e = &hull[1] - &hull[0];
            let n = Vector::from([e[1], -e[0]]).normalized().unwrap_or(Vector::from([1.0, 0.0]));
            return (0.0, n);
        }
        _ => {}
    }
    let n = hull.len();
    let mut best = f64::INFINITY;
    let mut best_dir = Vector::from([1.0, 0.0]);
    let mut j = 1;
    for i in 0..n {
        let a = &hull[i];
        let b = &hull[(i + 1) % n];
        // advance the antipodal pointer while the area keeps growing
        while cross(a, b, &hull[(j + 1) % n]) > cross(a, b, &hull[j]) {
            j = (j + 1) % n;
        }
        let edge = b - a;
        let len = edge.norm();
        let w = cross(a, b, &hull[j]) / len;
        if w < best {
            best = w;
            best_dir = Vector::from([edge[1] / len, -edge[0] / len]);
        }
    }
    (best, best_dir)
}

/// Vertices of the Minkowski sum of two point sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinkowskiSum {
    pub vertices: Vec<Vector>,
    /// `true` when the vertices were reduced to extreme points (planar case);
    /// `false` means all pairwise sums are returned as-is.
    pub reduced: bool,
}

pub fn minkowski_sum_vertices(a: &[Vector], b: &[Vector]) -> Result<MinkowskiSum> {
    let Some(first) = a.first().or(b.first()) else {
        return Ok(MinkowskiSum { vertices: vec![], reduced: true });
    };
    let dim = first.dim();
    check_dims(dim, a.iter().chain(b))?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("Minkowski sum with an empty set".into()));
    }
    let sums: Vec<Vector> = a.iter().flat_map(|p| b.iter().map(move |q| p + q)).collect();
    if dim == 2 {
        Ok(MinkowskiSum { vertices: convex_hull_2d(&sums), reduced: true })
    } else {
        Ok(MinkowskiSum { vertices: sums, reduced: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vector {
        Vector::from([x, y])
    }

    #[test]
    fn hull_of_square_with_interior_and_collinear_points() {
        let pts = vec![v(0.5, 0.5), v(1.0, 1.0), v(0.0, 0.0), v(0.5, 0.0), v(1.0, 0.0), v(0.0, 1.0), v(1.0, 0.0)];
        assert_eq!(convex_hull_2d(&pts), vec![v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]);
    }

    #[test]
    fn hull_degenerate_inputs() {
        assert_eq!(convex_hull_2d(&[v(1.0, 1.0), v(1.0, 1.0)]), vec![v(1.0, 1.0)]);
        assert_eq!(convex_hull_2d(&[v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.0)]), vec![v(0.0, 0.0), v(2.0, 2.0)]);
    }

    #[test]
    fn calipers_on_right_triangle() {
        // altitudes: 3 (base 4), 4 (base 3), 12/5 (hypotenuse)
        let (w, dir) = min_width_of_points(&[v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)]);
        assert!((w - 12.0 / 5.0).abs() < 1e-12);
        assert!((dir.norm() - 1.0).abs() < 1e-12);
        assert!((dir[0] * 3.0 + dir[1] * 4.0).abs() > 4.99);
    }

    #[test]
    fn calipers_flat_body() {
        let (w, dir) = min_width_of_points(&[v(0.0, 0.0), v(2.0, 0.0)]);
        assert_eq!(w, 0.0);
        assert!(dir[0].abs() < 1e-15);
    }

    #[test]
    fn minkowski_identity_and_square() {
        let s = vec![v(0.0, 0.0), v(1.0, 0.0), v(0.3, 2.0)];
        let m = minkowski_sum_vertices(&[v(0.0, 0.0)], &s).unwrap();
        assert_eq!(m.vertices, convex_hull_2d(&s));
        let sq = minkowski_sum_vertices(&[v(0.0, 0.0), v(1.0, 0.0)], &[v(0.0, 0.0), v(0.0, 1.0)]).unwrap();
        assert_eq!(sq.vertices, vec![v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]);
        assert!(sq.reduced);
    }

    #[test]
    fn minkowski_of_homothets_is_homothet() {
        // lambda U + mu U = (lambda + mu) U for U in convex position
        let u: Vec<Vector> = (0..5).map(|k| Vector::polar(0.3 + k as f64 * 1.2566370614359172)).collect();
        let (l, m) = (0.7, 1.9);
        let a: Vec<Vector> = u.iter().map(|p| p.scale(l)).collect();
        let b: Vec<Vector> = u.iter().map(|p| p.scale(m)).collect();
        let sum = minkowski_sum_vertices(&a, &b).unwrap().vertices;
        let expect = convex_hull_2d(&u.iter().map(|p| p.scale(l + m)).collect::<Vec<_>>());
        assert_eq!(sum.len(), expect.len());
        for (p, q) in sum.iter().zip(&expect) {
            assert!(p.distance(q) < 1e-12);
        }
    }

    #[test]
    fn minkowski_higher_dim_unreduced() {
        let a = vec![Vector::from([0.0, 0.0, 0.0]), Vector::from([1.0, 0.0, 0.0])];
        let m = minkowski_sum_vertices(&a, &a).unwrap();
        assert!(!m.reduced);
        assert_eq!(m.vertices.len(), 4);
        assert!(minkowski_sum_vertices(&a, &[Vector::from([1.0, 1.0])]).is_err());
    }
}
