//! Translative coverings: K-inradius, relative width, and witness points
//! certifying that a proposed covering misses part of the body.

use serde::{Deserialize, Serialize};

use crate::contact::{
    check_symmetric_condition, extract_contact_pairs, max_inscribed_homothet, recenter_homothet, ContactSystem,
    InscribedHomothet,
};
use crate::error::{Error, Result};
use crate::geom::{check_dims, origin_in_hull, HullMembership, PairedVector, Polytope, Vector, DEFAULT_TOL};
use crate::select::{select_colourful, ColourClass, SelectionInstance, SelectionResult};

/// Cross-piece tolerance for `<u_i, v_j> = <u_j, v_i>`.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Largest grid accepted by [`verify_cover_sample`].
pub const MAX_SAMPLES: usize = 10_000_000;

/// A translated piece `C + shift` of a proposed covering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(rename = "C")]
    pub body: Polytope,
    pub shift: Vector,
    /// Frame origin for the contact pairs. Defaults to the shift of the maximal homothet.
    #[serde(rename = "o", default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vector>,
    /// Precomputed contact pairs, used instead of extracting them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contacts: Option<ContactSystem>,
}

impl Piece {
    pub fn new(body: Polytope, shift: Vector) -> Self {
        Piece { body, shift, origin: None, contacts: None }
    }

    pub fn with_origin(mut self, o: Vector) -> Self {
        self.origin = Some(o);
        self
    }

    pub fn placed(&self) -> Polytope {
        self.body.translate(&self.shift)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct CoveringInstance {
    #[serde(rename = "B")]
    pub body: Polytope,
    pub pieces: Vec<Piece>,
}

#[derive(Deserialize)]
struct RawInstance {
    #[serde(rename = "B")]
    body: Polytope,
    pieces: Vec<Piece>,
}

impl TryFrom<RawInstance> for CoveringInstance {
    type Error = Error;
    fn try_from(raw: RawInstance) -> Result<Self> {
        CoveringInstance::new(raw.body, raw.pieces)
    }
}

impl CoveringInstance {
    pub fn new(body: Polytope, pieces: Vec<Piece>) -> Result<Self> {
        let d = body.dim();
        for p in &pieces {
            if p.body.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.body.dim() });
            }
            check_dims(d, [&p.shift].into_iter().chain(&p.origin))?;
            if let Some(c) = &p.contacts {
                check_dims(d, [&c.origin])?;
            }
        }
        Ok(CoveringInstance { body, pieces })
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    /// Is `p` in some translated piece (margin `>= -tol`)?
    pub fn covers(&self, p: &Vector, tol: f64) -> bool {
        self.pieces.iter().any(|piece| piece.placed().contains_point(p, tol).0)
    }
}

/// `r_B(C)`: the largest `lambda` with `lambda B + x` inside `C` for some `x`.
pub fn k_inradius(b: &Polytope, c: &Polytope) -> Result<f64> {
    Ok(max_inscribed_homothet(b, c)?.lambda)
}

/// Width of the plank `p` divided by the width of `k` in the plank normal.
pub fn relative_width(k: &Polytope, p: &Polytope) -> Result<f64> {
    let Some((u, lo, hi)) = p.as_plank() else {
        return Err(Error::Argument("relative width needs a plank: two parallel half-spaces with opposite normals".into()));
    };
    check_dims(k.dim(), [&u])?;
    let w = k.width_in_direction(&u)?;
    if !(w > 0.0) {
        return Err(Error::Degeneracy("body has zero width in the plank normal".into()));
    }
    Ok((hi - lo) / w)
}

/// Maximal homothet of `b` in the piece and its contact pairs relative to the piece origin.
pub fn piece_contacts(b: &Polytope, piece: &Piece) -> Result<(InscribedHomothet, ContactSystem)> {
    let mut h = max_inscribed_homothet(b, &piece.body)?;
    let origin = match &piece.origin {
        Some(o) => {
            h = recenter_homothet(b, &piece.body, &h, o)?;
            o.clone()
        }
        None => h.shift.clone(),
    };
    let contacts = match &piece.contacts {
        Some(c) => {
            if c.origin != origin {
                return Err(Error::Precondition("embedded contacts use a different frame origin than the piece".into()));
            }
            c.clone()
        }
        None => extract_contact_pairs(b, &piece.body, &h, &origin)?,
    };
    contacts.validate()?;
    Ok((h, contacts))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub point: Vector,
    /// Membership margin in the covered body; `None` when the covered set is a finite sumset.
    #[serde(rename = "in_B_margin")]
    pub in_body_margin: Option<f64>,
    /// Distance-like margin outside each translated piece; positive means strictly outside.
    pub piece_margins: Vec<f64>,
    /// Pieces whose margin is within the tolerance of zero.
    pub boundary_grazing: Vec<bool>,
    /// Supporting-hyperplane margins from the selection inequality, one per piece.
    pub exclusion_margins: Vec<f64>,
    pub epsilon: Option<f64>,
    pub lambdas: Vec<f64>,
    /// Whether contact normals were rescaled to `|v| = |u|` before selecting.
    pub aligned_normals: bool,
    pub selection: SelectionResult,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessOptions {
    /// Overrides the default `(1/lambda - 1) / 2`.
    pub epsilon: Option<f64>,
    pub tol: f64,
    pub symmetry_tol: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { epsilon: None, tol: DEFAULT_TOL, symmetry_tol: SYMMETRY_TOL }
    }
}

pub fn construct_witness(inst: &CoveringInstance) -> Result<WitnessReport> {
    construct_witness_with(inst, &WitnessOptions::default())
}

/// A point of `B` outside every `C_i + x'_i`, when the K-inradii sum to less than 1
/// and the pieces carry symmetric contact systems with `(0,0)` certificates.
///
/// The result is audited against the half-space descriptions of `B` and of
/// every piece; an audit failure is returned as [`Error::AuditFailed`].
pub fn construct_witness_with(inst: &CoveringInstance, opts: &WitnessOptions) -> Result<WitnessReport> {
    let n = inst.pieces.len();
    if n == 0 {
        return Err(Error::Argument("covering instance has no pieces".into()));
    }
    let d = inst.dim();
    // work with 0 in the interior of B
    let center = if inst.body.contains_point(&Vector::zeros(d), 0.0).1 > opts.tol {
        Vector::zeros(d)
    } else {
        let vs = inst.body.vertices().ok_or_else(|| Error::Representation("covered body needs vertices".into()))?;
        Vector::sum(d, vs).scale(1.0 / vs.len() as f64)
    };
    let body = inst.body.translate(&-&center);

    let mut lambdas = Vec::with_capacity(n);
    let mut frames = Vec::with_capacity(n);
    let mut raw = Vec::with_capacity(n);
    for (i, piece) in inst.pieces.iter().enumerate() {
        let (h, sys) = piece_contacts(&body, piece).map_err(|e| tag_piece(i, e))?;
        lambdas.push(h.lambda);
        frames.push(h.shift);
        raw.push(sys);
    }
    let lambda: f64 = lambdas.iter().sum();
    if lambda >= 1.0 {
        return Err(Error::Refused(format!(
            "sum of K-inradii is {lambda} >= 1: the covering theorem gives no witness"
        )));
    }

    let (systems, aligned) = choose_systems(raw, opts)?;

    let epsilon = match opts.epsilon {
        Some(e) if e > 0.0 && (1.0 + e) * lambda < 1.0 => e,
        Some(e) => return Err(Error::Argument(format!("epsilon {e} must be positive with (1 + epsilon) lambda < 1"))),
        None if lambda > 0.0 => (1.0 / lambda - 1.0) / 2.0,
        None => 1.0,
    };
    let scale = 1.0 + epsilon;

    // frame where the maximal homothet of piece i is lambda_i B itself
    let local_origins: Vec<Vector> = systems.iter().zip(&frames).map(|(s, x)| &s.origin - x).collect();
    let local_shifts: Vec<Vector> =
        inst.pieces.iter().zip(&frames).map(|(p, x)| &(&p.shift - &center) + x).collect();
    let o = Vector::sum(d, &local_origins).scale(scale);
    let anchors_x: Vec<Vector> = local_shifts.iter().zip(&local_origins).map(|(x, oi)| &(x + oi) - &o).collect();

    let mut classes = Vec::with_capacity(n);
    for (i, sys) in systems.iter().enumerate() {
        let elements = sys.as_paired().iter().map(|w| w.scale(scale)).collect();
        let weights = sys.full_weights.clone().expect("checked by choose_systems");
        classes.push(ColourClass::with_certificate(elements, weights).map_err(|e| tag_piece(i, e))?);
    }
    let anchors = anchors_x.iter().map(|x| PairedVector { u: x.scale(2.0), v: Vector::zeros(d) }).collect();
    let selection = select_colourful(&SelectionInstance::new(classes, anchors)?)?;

    let u = &selection.w_sum.u;
    let exclusion_margins = systems
        .iter()
        .zip(&selection.chosen)
        .zip(&anchors_x)
        .map(|((sys, &c), x)| {
            let pair = &sys.pairs[c];
            (u - x).dot(&pair.v) - pair.u.dot(&pair.v)
        })
        .collect();
    let point = &(u + &o) + &center;

    let in_body = inst.body.contains_point(&point, opts.tol).1;
    let piece_margins: Vec<f64> = inst.pieces.iter().map(|p| -p.placed().contains_point(&point, 0.0).1).collect();
    if in_body < -opts.tol {
        return Err(Error::AuditFailed(format!("witness lies outside B (margin {in_body:e})")));
    }
    if let Some((k, m)) = piece_margins.iter().enumerate().find(|(_, m)| !(**m > 0.0)) {
        return Err(Error::AuditFailed(format!("witness is covered by piece {k} (margin {m:e})")));
    }
    Ok(WitnessReport {
        point,
        in_body_margin: Some(in_body),
        boundary_grazing: piece_margins.iter().map(|m| *m <= opts.tol).collect(),
        piece_margins,
        exclusion_margins,
        epsilon: Some(epsilon),
        lambdas,
        aligned_normals: aligned,
        selection,
    })
}

/// Raw contact systems if they already qualify, otherwise the systems with
/// normals aligned to their contact points.
fn choose_systems(raw: Vec<ContactSystem>, opts: &WitnessOptions) -> Result<(Vec<ContactSystem>, bool)> {
    let violation = |systems: &[ContactSystem]| -> Option<(usize, usize, usize, usize, f64)> {
        let mut worst: Option<(usize, usize, usize, usize, f64)> = None;
        for i in 0..systems.len() {
            for j in i + 1..systems.len() {
                let chk = check_symmetric_condition(&systems[i], &systems[j], opts.symmetry_tol);
                if !chk.holds && worst.is_none_or(|w| chk.worst_violation > w.4) {
                    let (a, b) = chk.worst_pair.unwrap_or((0, 0));
                    worst = Some((i, a, j, b, chk.worst_violation));
                }
            }
        }
        worst
    };
    let complete = |systems: &[ContactSystem]| systems.iter().position(|s| s.full_weights.is_none());

    let raw_missing = complete(&raw);
    let raw_violation = violation(&raw);
    if raw_missing.is_none() && raw_violation.is_none() {
        return Ok((raw, false));
    }
    let aligned: Option<Vec<ContactSystem>> = raw.iter().map(|s| s.align_normals(DEFAULT_TOL).ok()).collect();
    if let Some(aligned) = aligned {
        if complete(&aligned).is_none() && violation(&aligned).is_none() {
            return Ok((aligned, true));
        }
    }
    if let Some(i) = raw_missing {
        return Err(Error::Precondition(format!(
            "piece {i}: contact pairs do not contain (0,0) in their convex hull"
        )));
    }
    let (i, a, j, b, v) = raw_violation.expect("one of the checks failed");
    Err(Error::Precondition(format!(
        "symmetric condition fails between pair {a} of piece {i} and pair {b} of piece {j} (violation {v:e})"
    )))
}

fn tag_piece(i: usize, e: Error) -> Error {
    match e {
        Error::Precondition(m) => Error::Precondition(format!("piece {i}: {m}")),
        Error::Certificate(m) => Error::Certificate(format!("piece {i}: {m}")),
        Error::Unbounded(m) => Error::Unbounded(format!("piece {i}: {m}")),
        Error::Infeasible(m) => Error::Infeasible(format!("piece {i}: {m}")),
        other => other,
    }
}

/// One summand body `K` with the direction set `V` used to build `U`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumsetBody {
    #[serde(rename = "K")]
    pub body: Polytope,
    #[serde(rename = "V")]
    pub directions: Vec<Vector>,
}

/// `U = { h_K(v) / |v|^2 * v : v in V }`: feet of the perpendiculars from 0
/// to the supporting hyperplanes of `K` with normals in `V`.
pub fn projection_set(body: &Polytope, directions: &[Vector]) -> Result<Vec<Vector>> {
    directions
        .iter()
        .map(|v| {
            let n2 = v.norm_sq();
            if n2 == 0.0 {
                return Err(Error::Argument("direction vectors must be nonzero".into()));
            }
            Ok(v.scale(body.support_value(v)? / n2))
        })
        .collect()
}

/// A point `u = u_1 + ... + u_n` of the sumset `U_1 + ... + U_n` with
/// `u - x_k` outside the interior of every `K_k`.
pub fn sumset_witness(bodies: &[SumsetBody], shifts: &[Vector], tol: f64) -> Result<WitnessReport> {
    let n = bodies.len();
    if n == 0 || shifts.len() != n {
        return Err(Error::Argument("need equally many bodies and shifts (n >= 1)".into()));
    }
    let d = bodies[0].body.dim();
    check_dims(d, shifts)?;
    let mut sets = Vec::with_capacity(n);
    let mut classes = Vec::with_capacity(n);
    for (i, sb) in bodies.iter().enumerate() {
        if sb.body.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: sb.body.dim() });
        }
        if sb.directions.is_empty() {
            return Err(Error::Argument(format!("body {i}: direction set is empty")));
        }
        check_dims(d, &sb.directions)?;
        if sb.body.contains_point(&Vector::zeros(d), 0.0).1 <= 0.0 {
            return Err(Error::Precondition(format!("body {i}: 0 is not an interior point")));
        }
        let dirs: Vec<Vector> = sb.directions.clone();
        if dirs.iter().any(|v| v.norm() == 0.0) {
            return Err(Error::Argument(format!("body {i}: direction vectors must be nonzero")));
        }
        if let HullMembership::Outside { .. } = origin_in_hull(&dirs)? {
            return Err(Error::Precondition(format!("body {i}: 0 is not in the convex hull of the directions")));
        }
        let set = projection_set(&sb.body, &dirs)?;
        let elements = set.iter().map(|u| PairedVector::diagonal(u.clone())).collect();
        classes.push(ColourClass::new(elements).map_err(|e| tag_piece(i, e))?);
        sets.push(set);
    }
    let anchors = shifts.iter().map(|x| PairedVector::diagonal(x.clone())).collect();
    let selection = select_colourful(&SelectionInstance::new(classes, anchors)?)?;
    let u = selection.w_sum.u.clone();

    let chosen: Vec<&Vector> = selection.chosen.iter().zip(&sets).map(|(&c, set)| &set[c]).collect();
    let exclusion_margins: Vec<f64> =
        chosen.iter().zip(shifts).map(|(uk, x)| (&u - x).dot(uk) - uk.norm_sq()).collect();
    let piece_margins: Vec<f64> =
        bodies.iter().zip(shifts).map(|(sb, x)| -sb.body.translate(x).contains_point(&u, 0.0).1).collect();
    for (k, (e, uk)) in exclusion_margins.iter().zip(&chosen).enumerate() {
        if *e < -tol * 1f64.max(uk.norm_sq()) {
            return Err(Error::AuditFailed(format!("sumset point meets the interior of body {k} (margin {e:e})")));
        }
    }
    if let Some((k, m)) = piece_margins.iter().enumerate().find(|(_, m)| **m < -tol) {
        return Err(Error::AuditFailed(format!("sumset point is interior to body {k} (margin {m:e})")));
    }
    Ok(WitnessReport {
        point: u,
        in_body_margin: None,
        boundary_grazing: piece_margins.iter().map(|m| m.abs() <= tol).collect(),
        piece_margins,
        exclusion_margins,
        epsilon: None,
        lambdas: vec![],
        aligned_normals: false,
        selection,
    })
}

/// Witness against covering the regular simplex by negative homothets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexWitness {
    pub d: usize,
    pub lambdas: Vec<f64>,
    pub shifts: Vec<Vector>,
    /// Largest distance between a facet foot of `T` and the matching vertex of `-(1/d) T`.
    pub conv_u_residual: f64,
    pub witness: WitnessReport,
}

/// Feet of the perpendiculars from 0 to the facets of `t`, one per half-space.
pub fn facet_feet(t: &Polytope) -> Vec<Vector> {
    t.halfspaces().iter().map(|h| h.normal.scale(h.offset / h.normal.norm_sq())).collect()
}

/// A point of the regular simplex `T` (centroid 0, circumradius 1) outside the
/// interior of every `-lambda_i T + shift_i`, whenever `sum lambda_i < d`.
///
/// With `V` the outer facet normals of `-T`, the feet of `-lambda_i T` are
/// `lambda_i / d` times the vertices of `T`, so the sumset lies in
/// `(sum lambda_i / d) T`, inside `T`. Pieces with `lambda_i = 0` are single
/// points; they take no part in the selection and their margin is the
/// distance from the witness.
pub fn simplex_negative_homothet(d: usize, lambdas: &[f64], shifts: &[Vector], tol: f64) -> Result<SimplexWitness> {
    if !(2..=4).contains(&d) {
        return Err(Error::Capacity(format!("simplex demo supports d in 2..=4, got {d}")));
    }
    let n = lambdas.len();
    if n == 0 || shifts.len() != n {
        return Err(Error::Argument("need equally many ratios and shifts (n >= 1)".into()));
    }
    check_dims(d, shifts)?;
    if let Some(i) = lambdas.iter().position(|l| !(*l >= 0.0) || !l.is_finite()) {
        return Err(Error::Argument(format!("ratio {i} must be finite and nonnegative")));
    }
    let total: f64 = lambdas.iter().sum();
    if total >= d as f64 * (1.0 - 1e-12) {
        return Err(Error::Refused(format!("bound permits coverings: sum of ratios {total} reaches d = {d}")));
    }

    let t = Polytope::regular_simplex(d)?;
    let target = t.scale(-1.0 / d as f64)?;
    let conv_u_residual = facet_feet(&t)
        .iter()
        .zip(target.vertices().expect("simplex has vertices"))
        .map(|(p, q)| p.distance(q))
        .fold(0.0, f64::max);
    if conv_u_residual > 1e-9 {
        return Err(Error::AuditFailed(format!("facet feet differ from -(1/d) T by {conv_u_residual:e}")));
    }

    let active: Vec<usize> = (0..n).filter(|&i| lambdas[i] > 0.0).collect();
    if active.is_empty() {
        return Err(Error::Argument("at least one ratio must be positive".into()));
    }
    let mut bodies = Vec::with_capacity(active.len());
    for &i in &active {
        let body = t.scale(-lambdas[i])?;
        let directions = body.halfspaces().iter().map(|h| h.normal.clone()).collect();
        bodies.push(SumsetBody { body, directions });
    }
    let active_shifts: Vec<Vector> = active.iter().map(|&i| shifts[i].clone()).collect();
    let inner = sumset_witness(&bodies, &active_shifts, tol)?;

    let in_t = t.contains_point(&inner.point, tol).1;
    if in_t < -tol {
        return Err(Error::AuditFailed(format!("simplex witness lies outside T (margin {in_t:e})")));
    }
    let mut piece_margins = vec![0.0; n];
    let mut exclusion_margins = vec![0.0; n];
    let mut grazing = vec![false; n];
    for (slot, &i) in active.iter().enumerate() {
        piece_margins[i] = inner.piece_margins[slot];
        exclusion_margins[i] = inner.exclusion_margins[slot];
        grazing[i] = inner.boundary_grazing[slot];
    }
    for i in (0..n).filter(|i| lambdas[*i] == 0.0) {
        let dist = inner.point.distance(&shifts[i]);
        piece_margins[i] = dist;
        exclusion_margins[i] = dist;
        grazing[i] = dist <= tol;
    }
    let witness = WitnessReport {
        point: inner.point,
        in_body_margin: Some(in_t),
        piece_margins,
        boundary_grazing: grazing,
        exclusion_margins,
        epsilon: None,
        lambdas: lambdas.to_vec(),
        aligned_normals: false,
        selection: inner.selection,
    };
    Ok(SimplexWitness { d, lambdas: lambdas.to_vec(), shifts: shifts.to_vec(), conv_u_residual, witness })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageSample {
    pub grid_n: usize,
    pub samples_in_body: usize,
    pub covered: usize,
    /// `covered / samples_in_body`, or 0 when no sample falls in the body.
    pub fraction: f64,
    /// Lowest-index grid point of `B` outside every piece.
    pub first_uncovered: Option<Vector>,
}

/// Sample the cell centres of a `grid_n^d` grid over the bounding box of `B`
/// and count those of `B` lying in some translated piece.
pub fn verify_cover_sample(inst: &CoveringInstance, grid_n: usize) -> Result<CoverageSample> {
    let d = inst.dim();
    if grid_n == 0 {
        return Err(Error::Argument("grid_n must be positive".into()));
    }
    let total = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(grid_n)).filter(|t| *t <= MAX_SAMPLES);
    let Some(total) = total else {
        return Err(Error::Capacity(format!("grid of {grid_n}^{d} samples exceeds {MAX_SAMPLES}")));
    };
    let vs = inst.body.vertices().ok_or_else(|| Error::Representation("covered body needs vertices".into()))?;
    let lo: Vec<f64> = (0..d).map(|k| vs.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..d).map(|k| vs.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let placed: Vec<Polytope> = inst.pieces.iter().map(Piece::placed).collect();

    let mut in_body = 0;
    let mut covered = 0;
    let mut first_uncovered = None;
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let p = Vector::from(
            (0..d).map(|k| lo[k] + (idx[k] as f64 + 0.5) * (hi[k] - lo[k]) / grid_n as f64).collect::<Vec<_>>(),
        );
        if inst.body.contains_point(&p, 0.0).0 {
            in_body += 1;
            if placed.iter().any(|c| c.contains_point(&p, 0.0).0) {
                covered += 1;
            } else if first_uncovered.is_none() {
                first_uncovered = Some(p);
            }
        }
        // odometer, last coordinate fastest
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < grid_n {
                break;
            }
            idx[k] = 0;
        }
    }
    let fraction = if in_body == 0 { 0.0 } else { covered as f64 / in_body as f64 };
    Ok(CoverageSample { grid_n, samples_in_body: in_body, covered, fraction, first_uncovered })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(lo: [f64; 2], hi: [f64; 2]) -> Polytope {
        Polytope::axis_box(&Vector::from(lo), &Vector::from(hi)).unwrap()
    }

    fn disk_with(normals: &[Vector]) -> Polytope {
        let mut pts: Vec<Vector> = (0..64).map(|k| Vector::polar(k as f64 * std::f64::consts::PI / 32.0)).collect();
        for n in normals {
            pts.push(n.clone());
            pts.push(-n);
        }
        Polytope::from_vertices_2d(&pts).unwrap()
    }

    #[test]
    fn inradius_examples() {
        let sq = square([0.0, 0.0], [1.0, 1.0]);
        let plank = Polytope::plank(&Vector::from([1.0, 0.0]), 0.0, 0.3).unwrap();
        assert!((k_inradius(&sq, &plank).unwrap() - 0.3).abs() < 1e-12);
        assert!((k_inradius(&sq, &sq).unwrap() - 1.0).abs() < 1e-12);
        assert!((k_inradius(&sq, &square([0.0, 0.0], [2.0, 1.0])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relative_width_examples() {
        let sq = square([0.0, 0.0], [1.0, 1.0]);
        let plank = Polytope::plank(&Vector::from([1.0, 0.0]), 0.0, 0.3).unwrap();
        assert!((relative_width(&sq, &plank).unwrap() - 0.3).abs() < 1e-12);
        let disk = Polytope::regular_polygon(64, 0.5, &Vector::zeros(2), 0.0).unwrap();
        for angle in [0.0, 0.3, 1.1, 2.9] {
            let p = Polytope::plank(&Vector::polar(angle), -0.1, 0.4).unwrap();
            assert!((relative_width(&disk, &p).unwrap() - 0.5).abs() < 1e-3);
        }
        assert!(relative_width(&sq, &sq).is_err());
    }

    #[test]
    fn disk_and_three_planks() {
        let normals: Vec<Vector> = [0.0, 1.0, 2.2].iter().map(|a| Vector::polar(*a)).collect();
        let b = disk_with(&normals);
        let offsets = [0.3, -0.5, 0.1];
        let half_widths = [0.2, 0.3, 0.4];
        let pieces = normals
            .iter()
            .zip(offsets)
            .zip(half_widths)
            .map(|((n, c), h)| {
                let plank = Polytope::plank(n, -h, h).unwrap();
                Piece::new(plank, n.scale(c)).with_origin(Vector::zeros(2))
            })
            .collect();
        let inst = CoveringInstance::new(b, pieces).unwrap();
        let report = construct_witness(&inst).unwrap();
        assert!(report.in_body_margin.unwrap() >= 0.0);
        assert!(report.piece_margins.iter().all(|m| *m > 0.0));
        assert!(report.aligned_normals);
        assert!(!inst.covers(&report.point, 0.0));
        let lam: f64 = report.lambdas.iter().sum();
        assert!((lam - 0.9).abs() < 1e-9);
    }

    #[test]
    fn single_half_size_piece() {
        let b = square([0.0, 0.0], [1.0, 1.0]);
        let c = square([3.0, 3.0], [3.5, 3.5]);
        let inst = CoveringInstance::new(b.clone(), vec![Piece::new(c, Vector::from([-2.8, -3.1]))]).unwrap();
        let report = construct_witness(&inst).unwrap();
        assert!(b.contains_point(&report.point, 1e-9).0);
        assert!(report.piece_margins[0] > 0.0);
        assert_eq!(report.lambdas, vec![0.5]);
    }

    #[test]
    fn epsilon_override() {
        let b = square([-1.0, -1.0], [1.0, 1.0]);
        let c = square([0.0, 0.0], [1.0, 1.0]);
        let inst = CoveringInstance::new(b, vec![Piece::new(c, Vector::zeros(2))]).unwrap();
        let opts = WitnessOptions { epsilon: Some(0.5), ..Default::default() };
        assert_eq!(construct_witness_with(&inst, &opts).unwrap().epsilon, Some(0.5));
        let bad = WitnessOptions { epsilon: Some(1.0), ..Default::default() };
        assert!(matches!(construct_witness_with(&inst, &bad), Err(Error::Argument(_))));
    }

    #[test]
    fn tight_covering_is_refused() {
        let b = square([0.0, 0.0], [1.0, 1.0]);
        let inst = CoveringInstance::new(b.clone(), vec![Piece::new(b, Vector::zeros(2))]).unwrap();
        let err = construct_witness(&inst).unwrap_err();
        assert!(err.is_refusal(), "{err}");
    }

    #[test]
    fn sumset_square() {
        let k = square([-1.0, -1.0], [1.0, 1.0]);
        let dirs = vec![Vector::from([1.0, 0.0]), Vector::from([-1.0, 0.0]), Vector::from([0.0, 1.0]), Vector::from([0.0, -1.0])];
        assert_eq!(projection_set(&k, &dirs).unwrap(), dirs);
        for x in [[0.0, 0.0], [0.7, -0.2], [-3.0, 5.0]] {
            let x = Vector::from(x);
            let r = sumset_witness(&[SumsetBody { body: k.clone(), directions: dirs.clone() }], &[x.clone()], 1e-9).unwrap();
            assert!(dirs.contains(&r.point));
            assert!((&r.point - &x).dot(&r.point) >= 1.0 - 1e-12);
        }
        let zero = vec![Vector::from([0.0, 0.0])];
        assert!(matches!(projection_set(&k, &zero), Err(Error::Argument(_))));
    }

    #[test]
    fn simplex_demo_triangle() {
        let shifts = vec![Vector::from([0.1, 0.2]), Vector::from([-0.3, 0.0]), Vector::from([0.2, -0.4])];
        let w = simplex_negative_homothet(2, &[0.5, 0.5, 0.5], &shifts, 1e-9).unwrap();
        let t = Polytope::regular_simplex(2).unwrap();
        assert!(t.contains_point(&w.witness.point, 1e-9).0);
        for (l, x) in [0.5, 0.5, 0.5].iter().zip(&shifts) {
            let piece = t.scale(-l).unwrap().translate(x);
            assert!(piece.contains_point(&w.witness.point, 0.0).1 <= 1e-9);
        }
        assert!(w.conv_u_residual <= 1e-12);
    }

    #[test]
    fn simplex_demo_refuses_tight_ratios() {
        let shifts = vec![Vector::zeros(2); 3];
        let err = simplex_negative_homothet(2, &[2.0 / 3.0; 3], &shifts, 1e-9).unwrap_err();
        assert!(matches!(&err, Error::Refused(m) if m.starts_with("bound permits coverings")));
        assert!(matches!(simplex_negative_homothet(5, &[0.1], &[Vector::zeros(5)], 1e-9), Err(Error::Capacity(_))));
    }

    #[test]
    fn simplex_conv_u_in_three_dims() {
        let t = Polytope::regular_simplex(3).unwrap();
        let target = t.scale(-1.0 / 3.0).unwrap();
        for (p, q) in facet_feet(&t).iter().zip(target.vertices().unwrap()) {
            assert!(p.distance(q) <= 1e-9);
        }
    }

    #[test]
    fn simplex_zero_ratio_piece() {
        let shifts = vec![Vector::from([0.0, 0.1]), Vector::from([0.4, 0.4])];
        let w = simplex_negative_homothet(2, &[0.8, 0.0], &shifts, 1e-9).unwrap();
        assert!((w.witness.piece_margins[1] - w.witness.point.distance(&shifts[1])).abs() < 1e-15);
    }

    #[test]
    fn coverage_sampling() {
        let b = square([0.0, 0.0], [1.0, 1.0]);
        let full = CoveringInstance::new(b.clone(), vec![Piece::new(square([-1.0, -1.0], [2.0, 2.0]), Vector::zeros(2))]).unwrap();
        let s = verify_cover_sample(&full, 50).unwrap();
        assert_eq!(s.fraction, 1.0);
        assert!(s.first_uncovered.is_none());
        let empty = CoveringInstance::new(b.clone(), vec![]).unwrap();
        let s = verify_cover_sample(&empty, 10).unwrap();
        assert_eq!(s.fraction, 0.0);
        assert_eq!(s.first_uncovered, Some(Vector::from([0.05, 0.05])));
    }

    #[test]
    fn instance_json_round_trip() {
        let json = r#"{"B": {"dim": 2, "halfspaces": [{"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 1}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 1}]},
            "pieces": [{"C": {"dim": 2, "halfspaces": [{"a": [1, 0], "b": 0.2}, {"a": [-1, 0], "b": 0.2}]}, "shift": [0.5, 0]}]}"#;
        let inst: CoveringInstance = serde_json::from_str(json).unwrap();
        assert_eq!(inst.pieces.len(), 1);
        let back: CoveringInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
        let bad = json.replace("[0.5, 0]", "[0.5, 0, 1]");
        assert!(serde_json::from_str::<CoveringInstance>(&bad).is_err());
    }
}
