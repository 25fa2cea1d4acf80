//! Maximal inscribed homothets and their contact pairs.
//!
//! The largest `lambda K + x` inside `L = { <a_j, y> <= b_j }` solves
//!
//! ```text
//! maximize lambda  s.t.  <a_j, x> + lambda h_K(a_j) <= b_j,  lambda >= 0,  x free.
//! ```
//!
//! Stationarity in `x` gives `sum_j y_j a_j = 0` for the optimal multipliers,
//! so the constraints with positive multipliers form a complete set of
//! contact normals and the normalized multipliers are its certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{check_convex_weights, check_dims, origin_in_hull, PairedVector, Polytope, Vector};
use crate::lp::{Bound, LinearProgram, Relation, Status};

/// Relative slack below which an inradius constraint counts as tight.
pub const TIGHT_TOL: f64 = 1e-8;

/// Tolerance for weight certificates attached to a contact system.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InscribedHomothet {
    pub lambda: f64,
    pub shift: Vector,
    /// Indices of the half-spaces of `L` that are tight at the optimum.
    pub tight_indices: Vec<usize>,
    /// LP multiplier of every half-space of `L`.
    pub duals: Vec<f64>,
}

/// `u` is a common boundary point, `v` a common outer normal there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactPair {
    pub u: Vector,
    pub v: Vector,
}

impl ContactPair {
    pub fn as_paired(&self) -> PairedVector {
        PairedVector { u: self.u.clone(), v: self.v.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactSystem {
    pub pairs: Vec<ContactPair>,
    /// Convex weights with `sum alpha_j v_j = 0`.
    pub normal_weights: Vec<f64>,
    /// Convex weights with `sum alpha_j (u_j, v_j) = (0, 0)`, when they exist.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_weights: Option<Vec<f64>>,
    /// Frame origin: contact points are expressed relative to it.
    pub origin: Vector,
}

impl ContactSystem {
    pub fn dim(&self) -> usize {
        self.origin.dim()
    }

    /// Check both weight certificates.
    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::Certificate("contact system has no pairs".into()));
        }
        let d = self.dim();
        check_dims(d, self.pairs.iter().flat_map(|p| [&p.u, &p.v]))?;
        let normals: Vec<Vector> = self.pairs.iter().map(|p| p.v.clone()).collect();
        let scale = normals.iter().fold(1.0f64, |m, v| m.max(v.norm()));
        check_convex_weights(&normals, &self.normal_weights, CERTIFICATE_TOL * scale)
            .map_err(|e| Error::Certificate(format!("normal weights: {e}")))?;
        if let Some(full) = &self.full_weights {
            let flat: Vec<Vector> = self.pairs.iter().map(|p| p.u.concat(&p.v)).collect();
            let scale = flat.iter().fold(1.0f64, |m, v| m.max(v.norm()));
            check_convex_weights(&flat, full, CERTIFICATE_TOL * scale)
                .map_err(|e| Error::Certificate(format!("full weights: {e}")))?;
        }
        Ok(())
    }

    pub fn as_paired(&self) -> Vec<PairedVector> {
        self.pairs.iter().map(ContactPair::as_paired).collect()
    }

    /// Rescale each normal that points along its contact point so that
    /// `|v| = |u|`, turning parallel pairs into `(u, u)` pairs.
    ///
    /// Positive rescaling of a normal keeps it an outer normal, and the normal
    /// certificate is reweighted accordingly. The full certificate is recomputed.
    pub fn align_normals(&self, tol: f64) -> Result<ContactSystem> {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        let mut weights = Vec::with_capacity(self.pairs.len());
        for (p, a) in self.pairs.iter().zip(&self.normal_weights) {
            let (nu, nv) = (p.u.norm(), p.v.norm());
            let parallel = nu > 0.0 && (p.u.dot(&p.v) / (nu * nv) - 1.0).abs() <= tol;
            let c = if parallel { nu / nv } else { 1.0 };
            pairs.push(ContactPair { u: p.u.clone(), v: p.v.scale(c) });
            weights.push(a / c);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let full_weights = full_certificate(&pairs)?;
        let sys = ContactSystem { pairs, normal_weights: weights, full_weights, origin: self.origin.clone() };
        sys.validate()?;
        Ok(sys)
    }
}

/// Largest homothet `lambda K + x` contained in `L`.
pub fn max_inscribed_homothet(k: &Polytope, l: &Polytope) -> Result<InscribedHomothet> {
    let d = k.dim();
    if l.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: l.dim() });
    }
    if k.vertices().is_none() {
        return Err(Error::Representation("inscribed body needs a vertex representation".into()));
    }
    let hs = l.halfspaces();
    if hs.is_empty() {
        return Err(Error::Unbounded("container is the whole space".into()));
    }
    // variables: [lambda, x_1, ..., x_d]
    let mut lp = LinearProgram::new(std::iter::once(1.0).chain(std::iter::repeat_n(0.0, d)).collect());
    for i in 1..=d {
        lp.set_bounds(i, Bound::free());
    }
    for h in hs {
        let s = k.support_value(&h.normal)?;
        let row = std::iter::once(s).chain(h.normal.as_slice().iter().copied()).collect();
        lp.add_constraint(row, Relation::Le, h.offset);
    }
    let sol = lp.solve()?;
    match sol.status {
        Status::Optimal => {}
        Status::Unbounded => {
            return Err(Error::Unbounded("arbitrarily large homothets fit".into()))
        }
        Status::Infeasible => return Err(Error::Infeasible("container is empty".into())),
    }
    let lambda = sol.x[0].max(0.0);
    let shift = Vector::from(sol.x[1..].to_vec());
    let tight_indices = tight_set(k, l, lambda, &shift)?;
    Ok(InscribedHomothet { lambda, shift, tight_indices, duals: sol.dual })
}

/// Among all maximal homothets, the one whose shift is nearest to `target` in the `l1` norm.
///
/// Constraints with a positive multiplier stay tight at every optimal shift,
/// so the multipliers of `h` remain valid for the recentered homothet.
pub fn recenter_homothet(k: &Polytope, l: &Polytope, h: &InscribedHomothet, target: &Vector) -> Result<InscribedHomothet> {
    let d = k.dim();
    check_dims(d, [target, &h.shift])?;
    // variables: [x_1..x_d, t_1..t_d], minimize sum t
    let mut lp = LinearProgram::new(std::iter::repeat_n(0.0, d).chain(std::iter::repeat_n(-1.0, d)).collect());
    for i in 0..d {
        lp.set_bounds(i, Bound::free());
    }
    for hs in l.halfspaces() {
        let s = k.support_value(&hs.normal)?;
        let rhs = hs.offset - h.lambda * s;
        let slack = 1e-12 * 1f64.max(hs.offset.abs()).max(hs.normal.norm() * (h.shift.norm() + h.lambda * s.abs()));
        let row = hs.normal.as_slice().iter().copied().chain(std::iter::repeat_n(0.0, d)).collect();
        lp.add_constraint(row, Relation::Le, rhs + slack);
    }
    for i in 0..d {
        let mut row = vec![0.0; 2 * d];
        row[i] = 1.0;
        row[d + i] = -1.0;
        lp.add_constraint(row.clone(), Relation::Le, target[i]);
        row[i] = -1.0;
        lp.add_constraint(row, Relation::Le, -target[i]);
    }
    let sol = lp.solve()?;
    if sol.status != Status::Optimal {
        return Ok(h.clone());
    }
    let shift = Vector::from(sol.x[..d].to_vec());
    let tight_indices = tight_set(k, l, h.lambda, &shift)?;
    if h.duals.iter().enumerate().any(|(j, y)| *y > 0.0 && !tight_indices.contains(&j)) {
        return Ok(h.clone());
    }
    Ok(InscribedHomothet { lambda: h.lambda, shift, tight_indices, duals: h.duals.clone() })
}

fn tight_set(k: &Polytope, l: &Polytope, lambda: f64, shift: &Vector) -> Result<Vec<usize>> {
    let mut tight = Vec::new();
    for (j, h) in l.halfspaces().iter().enumerate() {
        let s = k.support_value(&h.normal)?;
        let lhs = h.normal.dot(shift) + lambda * s;
        let scale = 1f64.max(h.offset.abs()).max(h.normal.norm() * (shift.norm() + lambda * s.abs()));
        if h.offset - lhs <= TIGHT_TOL * scale {
            tight.push(j);
        }
    }
    Ok(tight)
}

/// Contact pairs of `h.lambda K + h.shift` and `L`, expressed relative to `origin`.
///
/// Only constraints carrying a positive multiplier are kept: they already form
/// a complete system, certified by the normalized multipliers.
pub fn extract_contact_pairs(k: &Polytope, l: &Polytope, h: &InscribedHomothet, origin: &Vector) -> Result<ContactSystem> {
    let d = k.dim();
    check_dims(d, [origin, &h.shift])?;
    let hs = l.halfspaces();
    if h.duals.len() != hs.len() {
        return Err(Error::DimensionMismatch { expected: hs.len(), found: h.duals.len() });
    }
    let max_dual = h.duals.iter().copied().fold(0.0f64, f64::max);
    if !(max_dual > 0.0) {
        return Err(Error::Certificate("all inradius multipliers vanish".into()));
    }
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    for &j in &h.tight_indices {
        let y = h.duals[j];
        if y <= 1e-12 * max_dual {
            continue;
        }
        let normal = &hs[j].normal;
        let witness = face_centroid(k, normal)?;
        let point = h.shift.add_scaled(h.lambda, &witness);
        pairs.push(ContactPair { u: &point - origin, v: normal.clone() });
        weights.push(y);
    }
    if pairs.is_empty() {
        return Err(Error::Certificate("no tight constraint carries a positive multiplier".into()));
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let full_weights = full_certificate(&pairs)?;
    let sys = ContactSystem { pairs, normal_weights: weights, full_weights, origin: origin.clone() };
    sys.validate()?;
    Ok(sys)
}

/// Average of the vertices of `k` attaining the support value in direction `dir`.
fn face_centroid(k: &Polytope, dir: &Vector) -> Result<Vector> {
    let (value, _) = k.support(dir)?;
    let vs = k.vertices().unwrap_or_default();
    let scale = vs.iter().fold(1.0f64, |m, v| m.max(v.norm())) * dir.norm();
    let face: Vec<&Vector> = vs.iter().filter(|v| value - v.dot(dir) <= 1e-12 * scale).collect();
    Ok(Vector::sum(k.dim(), face.iter().copied()).scale(1.0 / face.len() as f64))
}

fn full_certificate(pairs: &[ContactPair]) -> Result<Option<Vec<f64>>> {
    let flat: Vec<Vector> = pairs.iter().map(|p| p.u.concat(&p.v)).collect();
    match origin_in_hull(&flat) {
        Ok(m) => Ok(m.weights().map(<[f64]>::to_vec)),
        // origin on the hull boundary within tolerance: treat as absent
        Err(Error::Certificate(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Worst cross violation of `<u_i, v_j> = <u_j, v_i>` between two systems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryCheck {
    pub holds: bool,
    pub worst_violation: f64,
    /// `(i, j)`: pair `i` of the first system and pair `j` of the second.
    pub worst_pair: Option<(usize, usize)>,
}

pub fn check_symmetric_condition(a: &ContactSystem, b: &ContactSystem, tol: f64) -> SymmetryCheck {
    let mut worst = 0.0f64;
    let mut worst_pair = None;
    for (i, p) in a.pairs.iter().enumerate() {
        for (j, q) in b.pairs.iter().enumerate() {
            let v = (p.u.dot(&q.v) - q.u.dot(&p.v)).abs();
            if v > worst || worst_pair.is_none() {
                worst = v;
                worst_pair = Some((i, j));
            }
        }
    }
    SymmetryCheck { holds: worst <= tol, worst_violation: worst, worst_pair }
}

/// Every pair has the form `(u, u)` within `tol * max(1, |u|)`.
pub fn check_uu_form(sys: &ContactSystem, tol: f64) -> bool {
    sys.pairs.iter().all(|p| p.u.distance(&p.v) <= tol * 1f64.max(p.u.norm()))
}

/// In `R^{2d}`, every pair has the form `((p, q), (q, p))` within tolerance.
pub fn check_w_hatw_form(sys: &ContactSystem, tol: f64) -> Result<bool> {
    let dim = sys.dim();
    if !dim.is_multiple_of(2) {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(sys.pairs.iter().all(|pair| {
        let u = PairedVector::new(Vector::from(pair.u.as_slice()[..dim / 2].to_vec()), Vector::from(pair.u.as_slice()[dim / 2..].to_vec()))
            .expect("halves of equal length");
        pair.v.distance(&u.hat().flatten()) <= tol * 1f64.max(pair.u.norm())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::HalfSpace;

    fn unit_square() -> Polytope {
        Polytope::axis_box(&Vector::zeros(2), &Vector::from([1.0, 1.0])).unwrap()
    }

    fn system(pairs: &[([f64; 2], [f64; 2])]) -> ContactSystem {
        let n = pairs.len();
        ContactSystem {
            pairs: pairs.iter().map(|(u, v)| ContactPair { u: Vector::from(*u), v: Vector::from(*v) }).collect(),
            normal_weights: vec![1.0 / n as f64; n],
            full_weights: None,
            origin: Vector::zeros(2),
        }
    }

    #[test]
    fn square_in_plank() {
        let plank = Polytope::plank(&Vector::from([1.0, 0.0]), 0.0, 0.3).unwrap();
        let h = max_inscribed_homothet(&unit_square(), &plank).unwrap();
        assert!((h.lambda - 0.3).abs() < 1e-12);
        assert_eq!(h.tight_indices, vec![0, 1]);
        let sys = extract_contact_pairs(&unit_square(), &plank, &h, &Vector::zeros(2)).unwrap();
        assert_eq!(sys.pairs.len(), 2);
        assert_eq!(sys.pairs[0].v, Vector::from([1.0, 0.0]));
        assert_eq!(sys.pairs[1].v, Vector::from([-1.0, 0.0]));
        assert!((sys.pairs[0].u[0] - 0.3).abs() < 1e-12 && sys.pairs[1].u[0].abs() < 1e-12);
        // contact points sit at the centres of the touching edges
        assert!((sys.pairs[0].u[1] - 0.15).abs() < 1e-12);
        assert!((sys.normal_weights[0] - 0.5).abs() < 1e-12);
        assert!(!check_uu_form(&sys, 1e-9));
    }

    #[test]
    fn recentering_moves_along_the_plank() {
        let plank = Polytope::plank(&Vector::from([0.0, 1.0]), 1.0, 2.0).unwrap();
        let sq = Polytope::axis_box(&Vector::from([-1.0, -1.0]), &Vector::from([1.0, 1.0])).unwrap();
        let h = max_inscribed_homothet(&sq, &plank).unwrap();
        assert!((h.lambda - 0.5).abs() < 1e-12);
        let r = recenter_homothet(&sq, &plank, &h, &Vector::from([3.0, 0.0])).unwrap();
        assert!(r.shift.distance(&Vector::from([3.0, 1.5])) < 1e-9, "{:?}", r.shift);
        assert_eq!(r.tight_indices, vec![0, 1]);
    }

    #[test]
    fn body_in_itself() {
        let sq = unit_square();
        let h = max_inscribed_homothet(&sq, &sq).unwrap();
        assert!((h.lambda - 1.0).abs() < 1e-12);
        assert!(h.shift.norm() < 1e-12);
        assert_eq!(h.tight_indices.len(), 4);
        let sys = extract_contact_pairs(&sq, &sq, &h, &Vector::zeros(2)).unwrap();
        sys.validate().unwrap();
    }

    #[test]
    fn incircle_of_triangle() {
        // equilateral triangle with inradius 1: facet normals at 90 + k*120 degrees, offset 1
        let hs: Vec<HalfSpace> = (0..3)
            .map(|k| HalfSpace::new(Vector::polar(std::f64::consts::FRAC_PI_2 + k as f64 * 2.0 * std::f64::consts::PI / 3.0), 1.0).unwrap())
            .collect();
        let tri = Polytope::new(2, hs, None).unwrap();
        let disk = Polytope::regular_polygon(64, 1.0, &Vector::zeros(2), 0.0).unwrap();
        let h = max_inscribed_homothet(&disk, &tri).unwrap();
        // an inscribed 64-gon has support in [cos(pi/64), 1], so lambda lies in [1, 1/cos(pi/64)]
        let upper = 1.0 / (std::f64::consts::PI / 64.0).cos();
        assert!(h.lambda >= 0.998 && h.lambda <= upper + 1e-12, "{}", h.lambda);
        let sys = extract_contact_pairs(&disk, &tri, &h, &h.shift).unwrap();
        assert_eq!(sys.pairs.len(), 3);
        for w in &sys.normal_weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-2);
        }
    }

    #[test]
    fn maximality() {
        let tri = Polytope::from_vertices_2d(&[[0.0, 0.0].into(), [4.0, 0.0].into(), [1.0, 3.0].into()]).unwrap();
        let k = Polytope::regular_polygon(5, 1.0, &Vector::zeros(2), 0.2).unwrap();
        let h = max_inscribed_homothet(&k, &tri).unwrap();
        let bigger = k.scale(h.lambda + 1e-4).unwrap().translate(&h.shift);
        let fits = bigger.vertices().unwrap().iter().all(|v| tri.contains_point(v, 0.0).0);
        assert!(!fits);
        let fitted = k.scale(h.lambda).unwrap().translate(&h.shift);
        assert!(fitted.vertices().unwrap().iter().all(|v| tri.contains_point(v, 1e-9).0));
    }

    #[test]
    fn unbounded_homothet() {
        let half = Polytope::new(2, vec![HalfSpace::new(Vector::from([1.0, 0.0]), 0.0).unwrap()], None).unwrap();
        assert!(matches!(max_inscribed_homothet(&unit_square(), &half), Err(Error::Unbounded(_))));
    }

    #[test]
    fn symmetric_condition_examples() {
        let uu = system(&[([1.0, 2.0], [1.0, 2.0]), ([-1.0, -2.0], [-1.0, -2.0])]);
        let uu2 = system(&[([0.3, -0.1], [0.3, -0.1])]);
        assert!(check_symmetric_condition(&uu, &uu2, 1e-12).holds);
        let a = system(&[([1.0, 0.0], [0.0, 1.0])]);
        let b = system(&[([0.0, 1.0], [1.0, 0.0])]);
        assert!(check_symmetric_condition(&a, &b, 1e-12).holds);
        let c = system(&[([0.0, 0.0], [1.0, 0.0])]);
        let chk = check_symmetric_condition(&a, &c, 1e-12);
        assert!(!chk.holds);
        assert_eq!(chk.worst_violation, 1.0);
        assert_eq!(chk.worst_pair, Some((0, 0)));
    }

    #[test]
    fn uu_form_after_alignment() {
        let sys = system(&[([0.5, 0.0], [1.0, 0.0]), ([-0.5, 0.0], [-1.0, 0.0])]);
        assert!(check_uu_form(&system(&[([1.0, 2.0], [1.0, 2.0])]), 1e-12));
        assert!(!check_uu_form(&sys, 1e-9));
        let aligned = sys.align_normals(1e-9).unwrap();
        assert!(check_uu_form(&aligned, 1e-12));
        assert!(aligned.full_weights.is_some());
    }

    #[test]
    fn w_hatw_form() {
        let mk = |u: [f64; 4], v: [f64; 4]| ContactSystem {
            pairs: vec![ContactPair { u: Vector::from(u), v: Vector::from(v) }],
            normal_weights: vec![1.0],
            full_weights: None,
            origin: Vector::zeros(4),
        };
        assert!(check_w_hatw_form(&mk([1.0, 2.0, 3.0, 4.0], [3.0, 4.0, 1.0, 2.0]), 1e-12).unwrap());
        assert!(!check_w_hatw_form(&mk([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0]), 1e-12).unwrap());
        let odd = system(&[([1.0, 0.0], [1.0, 0.0])]);
        let mut odd3 = odd.clone();
        odd3.origin = Vector::zeros(3);
        assert!(check_w_hatw_form(&odd3, 1e-9).is_err());
    }
}
