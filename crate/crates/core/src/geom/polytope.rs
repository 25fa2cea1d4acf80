use serde::{Deserialize, Serialize};

use super::planar::{convex_hull_2d, min_width_of_points};
use super::{check_dims, Vector, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::lp::{Bound, LinearProgram, Relation, Status};

/// Closed half-space `{ x : <a, x> <= b }`. The normal is kept as given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHalfSpace")]
pub struct HalfSpace {
    #[serde(rename = "a")]
    pub normal: Vector,
    #[serde(rename = "b")]
    pub offset: f64,
}

#[derive(Deserialize)]
struct RawHalfSpace {
    a: Vector,
    b: f64,
}

impl TryFrom<RawHalfSpace> for HalfSpace {
    type Error = Error;
    fn try_from(raw: RawHalfSpace) -> Result<Self> {
        HalfSpace::new(raw.a, raw.b)
    }
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 {
            return Err(Error::Argument("half-space normal must be nonzero".into()));
        }
        if !offset.is_finite() {
            return Err(Error::Argument("half-space offset must be finite".into()));
        }
        Ok(Self { normal, offset })
    }

    /// Signed distance to the boundary, positive inside.
    pub fn margin(&self, p: &Vector) -> f64 {
        (self.offset - self.normal.dot(p)) / self.normal.norm()
    }

    /// Scale-aware tolerance for "p is on this boundary".
    fn scaled_tol(&self, p: &Vector, tol: f64) -> f64 {
        tol * 1f64.max(self.offset.abs()).max(self.normal.norm() * p.norm())
    }
}

/// Convex polyhedron `{ x : <a_j, x> <= b_j for all j }`.
///
/// The half-space list is the source of truth. Bounded bodies carry a vertex
/// list: computed on construction in dimensions 1 and 2, required as input
/// in higher dimensions for any operation that needs support values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vector>>,
    #[serde(skip)]
    bounded: bool,
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    #[serde(default)]
    vertices: Option<Vec<Vector>>,
}

impl TryFrom<RawPolytope> for Polytope {
    type Error = Error;
    fn try_from(raw: RawPolytope) -> Result<Self> {
        Polytope::new(raw.dim, raw.halfspaces, raw.vertices)
    }
}

impl Polytope {
    /// Build from an H-representation and an optional V-representation.
    ///
    /// When vertices are supplied both representations are checked against
    /// each other. Otherwise vertices are derived in `d <= 2` when the body is
    /// bounded, and redundant half-spaces (tight at no vertex) are dropped.
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>, vertices: Option<Vec<Vector>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("dimension must be >= 1".into()));
        }
        check_dims(dim, halfspaces.iter().map(|h| &h.normal))?;
        if let Some(vs) = vertices {
            check_dims(dim, vs.iter())?;
            if vs.is_empty() {
                return Err(Error::Representation("vertex list is empty".into()));
            }
            let p = Polytope { dim, halfspaces, vertices: Some(vs), bounded: true };
            p.check_representations(1e-7)?;
            return Ok(p);
        }
        let bounded = !halfspaces.is_empty() && normals_positively_span(dim, &halfspaces)?;
        let mut p = Polytope { dim, halfspaces, vertices: None, bounded };
        if bounded && dim <= 2 {
            let vs = if dim == 1 { p.interval_vertices()? } else { p.polygon_vertices()? };
            let tol = DEFAULT_TOL;
            p.halfspaces.retain(|h| vs.iter().any(|v| h.margin(v).abs() <= h.scaled_tol(v, tol)));
            p.vertices = Some(vs);
        }
        Ok(p)
    }

    /// Convex hull of planar points, with unit outer edge normals.
    pub fn from_vertices_2d(points: &[Vector]) -> Result<Self> {
        check_dims(2, points.iter())?;
        let hull = convex_hull_2d(points);
        if hull.len() < 3 {
            return Err(Error::Representation(format!(
                "hull of the given points is degenerate ({} extreme points)",
                hull.len()
            )));
        }
        let n = hull.len();
        let halfspaces = (0..n)
            .map(|i| {
                let e = &hull[(i + 1) % n] - &hull[i];
                let normal = Vector::from([e[1], -e[0]]).normalized()?;
                let offset = normal.dot(&hull[i]);
                HalfSpace::new(normal, offset)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polytope { dim: 2, halfspaces, vertices: Some(hull), bounded: true })
    }

    /// Regular `n`-gon with the given circumradius and centre, first vertex at angle `phase`.
    pub fn regular_polygon(n: usize, circumradius: f64, center: &Vector, phase: f64) -> Result<Self> {
        if n < 3 || circumradius <= 0.0 {
            return Err(Error::Argument("regular polygon needs n >= 3 and a positive radius".into()));
        }
        let pts: Vec<Vector> = (0..n)
            .map(|k| {
                let t = phase + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                center + &Vector::polar(t).scale(circumradius)
            })
            .collect();
        Self::from_vertices_2d(&pts)
    }

    /// Axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
    pub fn axis_box(lo: &Vector, hi: &Vector) -> Result<Self> {
        let dim = lo.dim();
        check_dims(dim, [hi])?;
        if (0..dim).any(|i| lo[i] >= hi[i]) {
            return Err(Error::Argument("box needs lo < hi in every coordinate".into()));
        }
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            hs.push(HalfSpace::new(Vector::basis(dim, i), hi[i])?);
            hs.push(HalfSpace::new(-Vector::basis(dim, i), -lo[i])?);
        }
        let vertices = (0..1usize << dim)
            .map(|mask| {
                Vector::from((0..dim).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect::<Vec<_>>())
            })
            .collect();
        Polytope::new(dim, hs, Some(vertices))
    }

    /// Plank `{ x : lo <= <normal, x> <= hi }`.
    pub fn plank(normal: &Vector, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Argument("plank needs lo < hi".into()));
        }
        let hs = vec![HalfSpace::new(normal.clone(), hi)?, HalfSpace::new(-normal, -lo)?];
        Polytope::new(normal.dim(), hs, None)
    }

    /// Regular simplex in `R^d` with centroid 0 and circumradius 1.
    ///
    /// Vertex `i` is `v_i`; half-space `i` is the facet opposite `v_i`,
    /// `<-v_i, x> <= 1/d`.
    pub fn regular_simplex(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Argument("simplex dimension must be >= 1".into()));
        }
        let vertices = regular_simplex_vertices(d);
        let hs = vertices
            .iter()
            .map(|v| HalfSpace::new(-v, 1.0 / d as f64))
            .collect::<Result<Vec<_>>>()?;
        Polytope::new(d, hs, Some(vertices))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> Option<&[Vector]> {
        self.vertices.as_deref()
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    fn require_vertices(&self) -> Result<&[Vector]> {
        self.vertices
            .as_deref()
            .ok_or_else(|| Error::Representation("operation needs a vertex representation".into()))
    }

    /// Support function `h(dir) = max <vertex, dir>` and a maximizing vertex
    /// (lowest index on ties).
    pub fn support(&self, dir: &Vector) -> Result<(f64, Vector)> {
        check_dims(self.dim, [dir])?;
        let vs = self.require_vertices()?;
        if dir.norm() == 0.0 {
            return Err(Error::Argument("support direction must be nonzero".into()));
        }
        let mut best = 0;
        let mut value = vs[0].dot(dir);
        for (i, v) in vs.iter().enumerate().skip(1) {
            let s = v.dot(dir);
            if s > value {
                value = s;
                best = i;
            }
        }
        Ok((value, vs[best].clone()))
    }

    pub fn support_value(&self, dir: &Vector) -> Result<f64> {
        self.support(dir).map(|(h, _)| h)
    }

    /// Width `h(u) + h(-u)` in a unit direction `u`.
    pub fn width_in_direction(&self, dir: &Vector) -> Result<f64> {
        let n = dir.norm();
        if n == 0.0 {
            return Err(Error::Argument("width direction must be nonzero".into()));
        }
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Argument(format!("width direction must be a unit vector (|u| = {n})")));
        }
        Ok(self.support_value(dir)? + self.support_value(&-dir)?)
    }

    /// Minimal width over all directions, planar bodies only.
    pub fn min_width_2d(&self) -> Result<(f64, Vector)> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        Ok(min_width_of_points(self.require_vertices()?))
    }

    /// Signed distance-like margin `min_j (b_j - <a_j, p>) / |a_j|`; inside iff margin >= -tol.
    pub fn contains_point(&self, p: &Vector, tol: f64) -> (bool, f64) {
        let margin = self.halfspaces.iter().map(|h| h.margin(p)).fold(f64::INFINITY, f64::min);
        (margin >= -tol, margin)
    }

    pub fn translate(&self, t: &Vector) -> Polytope {
        Polytope {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace { normal: h.normal.clone(), offset: h.offset + h.normal.dot(t) })
                .collect(),
            vertices: self.vertices.as_ref().map(|vs| vs.iter().map(|v| v + t).collect()),
            bounded: self.bounded,
        }
    }

    /// Homothetic image `lambda * self`; negative ratios give negative homothets.
    pub fn scale(&self, lambda: f64) -> Result<Polytope> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Argument("homothety ratio must be finite and nonzero".into()));
        }
        let sign = lambda.signum();
        Ok(Polytope {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace { normal: h.normal.scale(sign), offset: h.offset * lambda.abs() })
                .collect(),
            vertices: self.vertices.as_ref().map(|vs| vs.iter().map(|v| v.scale(lambda)).collect()),
            bounded: self.bounded,
        })
    }

    /// If this is a plank (two half-spaces with opposite normals), returns the
    /// unit normal `u` and `(lo, hi)` with the plank `lo <= <u, x> <= hi`.
    pub fn as_plank(&self) -> Option<(Vector, f64, f64)> {
        let [h1, h2] = self.halfspaces.as_slice() else { return None };
        let n1 = h1.normal.norm();
        let n2 = h2.normal.norm();
        let u = h1.normal.scale(1.0 / n1);
        let u2 = h2.normal.scale(1.0 / n2);
        if (&u + &u2).norm() > 1e-9 {
            return None;
        }
        let hi = h1.offset / n1;
        let lo = -h2.offset / n2;
        (lo <= hi).then_some((u, lo, hi))
    }

    /// Check that both representations describe the same body within `tol`:
    /// every vertex satisfies every half-space, every half-space is tight somewhere.
    pub fn check_representations(&self, tol: f64) -> Result<()> {
        let vs = self.require_vertices()?;
        for (j, h) in self.halfspaces.iter().enumerate() {
            let mut tight = false;
            for (i, v) in vs.iter().enumerate() {
                let slack = h.offset - h.normal.dot(v);
                let t = h.scaled_tol(v, tol);
                if slack < -t {
                    return Err(Error::Representation(format!("vertex {i} violates half-space {j} by {}", -slack)));
                }
                tight |= slack <= t;
            }
            if !tight {
                return Err(Error::Representation(format!("half-space {j} is not tight at any vertex")));
            }
        }
        Ok(())
    }

    fn interval_vertices(&self) -> Result<Vec<Vector>> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for h in &self.halfspaces {
            let a = h.normal[0];
            if a > 0.0 {
                hi = hi.min(h.offset / a);
            } else {
                lo = lo.max(h.offset / a);
            }
        }
        if lo > hi + DEFAULT_TOL * 1f64.max(hi.abs()) {
            return Err(Error::Representation("polytope is empty".into()));
        }
        if lo >= hi {
            return Ok(vec![Vector::from([lo])]);
        }
        Ok(vec![Vector::from([lo]), Vector::from([hi])])
    }

    fn polygon_vertices(&self) -> Result<Vec<Vector>> {
        let hs = &self.halfspaces;
        let mut pts = Vec::new();
        for i in 0..hs.len() {
            for j in (i + 1)..hs.len() {
                let (a, b) = (&hs[i].normal, &hs[j].normal);
                let det = a[0] * b[1] - a[1] * b[0];
                if det.abs() <= 1e-14 * a.norm() * b.norm() {
                    continue;
                }
                let x = (hs[i].offset * b[1] - hs[j].offset * a[1]) / det;
                let y = (a[0] * hs[j].offset - b[0] * hs[i].offset) / det;
                let p = Vector::from([x, y]);
                if hs.iter().all(|h| h.margin(&p) >= -h.scaled_tol(&p, DEFAULT_TOL)) {
                    pts.push(p);
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::Representation("polytope is empty".into()));
        }
        Ok(convex_hull_2d(&pts))
    }
}

/// Closed-form regular simplex: centroid 0, circumradius 1.
///
/// Uses the orthonormal Helmert basis of the hyperplane `sum x = 0` in `R^{d+1}`.
pub fn regular_simplex_vertices(d: usize) -> Vec<Vector> {
    let scale = ((d as f64 + 1.0) / d as f64).sqrt();
    (0..=d)
        .map(|i| {
            let coords = (1..=d)
                .map(|k| {
                    // Helmert row k: (1, ..., 1, -k, 0, ...) / sqrt(k (k+1))
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let entry = if i < k {
                        1.0
                    } else if i == k {
                        -(k as f64)
                    } else {
                        0.0
                    };
                    scale * entry / norm
                })
                .collect::<Vec<_>>();
            Vector::from(coords)
        })
        .collect()
}

/// A nonempty polyhedron is bounded iff its recession cone `{ x : <a_j, x> <= 0 }` is `{0}`.
fn normals_positively_span(dim: usize, hs: &[HalfSpace]) -> Result<bool> {
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut lp = LinearProgram::new(Vector::basis(dim, i).scale(sign).into_inner());
            for h in hs {
                lp.add_constraint(h.normal.as_slice().to_vec(), Relation::Le, 0.0);
            }
            lp.set_bounds_all(Bound::new(-1.0, 1.0));
            let sol = lp.solve()?;
            if sol.status != Status::Optimal || sol.value > DEFAULT_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
