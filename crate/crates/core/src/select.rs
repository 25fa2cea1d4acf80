//! Colourful selection of paired vectors.
//!
//! Given colour classes `W_1, ..., W_n` of paired vectors `w = (u, v)`, each
//! with `(0,0)` in its convex hull, and anchors `z_k = (x_k, y_k)`, we pick one
//! `w_i` per class so that, with `w = sum w_i`,
//!
//! ```text
//! <w - z_k, hat(w_k)> >= <w_k, hat(w_k)>   for every k.
//! ```
//!
//! The choice is any single-coordinate local maximum of
//!
//! ```text
//! F = sum_{i != j} <u_i, v_j> - sum_i <x_i, v_i> - sum_i <u_i, y_i>.
//! ```
//!
//! At such a maximum no swap inside class `k` increases `F`; averaging those
//! swaps with the hull weights of `W_k` yields the inequality for `k`. So
//! coordinate ascent suffices, and global maximization is never needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{check_convex_weights, origin_in_hull, HullMembership, PairedVector, Vector, RECONSTRUCTION_TOL};

/// Margins below `-GUARANTEE_TOL` count as a violated guarantee.
pub const GUARANTEE_TOL: f64 = 1e-9;

/// Tolerance for unit-length preconditions.
pub const UNIT_TOL: f64 = 1e-9;

/// One colour class with its certificate that `(0,0)` is in the convex hull.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColourClass {
    elements: Vec<PairedVector>,
    hull_certificate: Vec<f64>,
}

impl ColourClass {
    /// Build a class, computing the hull certificate in `R^{2d}`.
    pub fn new(elements: Vec<PairedVector>) -> Result<Self> {
        let flat = Self::flatten(&elements)?;
        match origin_in_hull(&flat)? {
            HullMembership::Inside { weights } => Ok(Self { elements, hull_certificate: weights }),
            HullMembership::Outside { separator, margin } => Err(Error::Precondition(format!(
                "(0,0) is not in the convex hull of the class (separator {separator:?}, margin {margin:e})"
            ))),
        }
    }

    /// Build a class from precomputed convex weights, validating them.
    pub fn with_certificate(elements: Vec<PairedVector>, weights: Vec<f64>) -> Result<Self> {
        let flat = Self::flatten(&elements)?;
        check_convex_weights(&flat, &weights, RECONSTRUCTION_TOL).map_err(|e| Error::Precondition(e.to_string()))?;
        Ok(Self { elements, hull_certificate: weights })
    }

    fn flatten(elements: &[PairedVector]) -> Result<Vec<Vector>> {
        let Some(first) = elements.first() else {
            return Err(Error::Argument("colour class must be nonempty".into()));
        };
        let d = first.dim();
        elements
            .iter()
            .map(|w| {
                if w.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: w.dim() });
                }
                Ok(w.flatten())
            })
            .collect()
    }

    pub fn elements(&self) -> &[PairedVector] {
        &self.elements
    }

    pub fn certificate(&self) -> &[f64] {
        &self.hull_certificate
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Re-validate the stored certificate.
    pub fn check(&self) -> Result<()> {
        let flat = Self::flatten(&self.elements)?;
        check_convex_weights(&flat, &self.hull_certificate, RECONSTRUCTION_TOL)
    }

    /// Every element multiplied by `t > 0`; the certificate is unchanged.
    pub fn scaled(&self, t: f64) -> ColourClass {
        ColourClass {
            elements: self.elements.iter().map(|w| w.scale(t)).collect(),
            hull_certificate: self.hull_certificate.clone(),
        }
    }
}

/// Colour classes together with their anchors `z_k = (x_k, y_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceJson", into = "InstanceJson")]
pub struct SelectionInstance {
    classes: Vec<ColourClass>,
    anchors: Vec<PairedVector>,
}

#[derive(Clone, Serialize, Deserialize)]
struct AnchorJson {
    x: Vector,
    y: Vector,
}

#[derive(Clone, Serialize, Deserialize)]
struct InstanceJson {
    classes: Vec<Vec<PairedVector>>,
    anchors: Vec<AnchorJson>,
}

impl TryFrom<InstanceJson> for SelectionInstance {
    type Error = Error;
    fn try_from(raw: InstanceJson) -> Result<Self> {
        let classes = raw
            .classes
            .into_iter()
            .enumerate()
            .map(|(i, els)| ColourClass::new(els).map_err(|e| name_class(i, e)))
            .collect::<Result<Vec<_>>>()?;
        let anchors = raw.anchors.into_iter().map(|a| PairedVector::new(a.x, a.y)).collect::<Result<Vec<_>>>()?;
        SelectionInstance::new(classes, anchors)
    }
}

impl From<SelectionInstance> for InstanceJson {
    fn from(inst: SelectionInstance) -> Self {
        InstanceJson {
            classes: inst.classes.into_iter().map(|c| c.elements).collect(),
            anchors: inst.anchors.into_iter().map(|a| AnchorJson { x: a.u, y: a.v }).collect(),
        }
    }
}

fn name_class(i: usize, e: Error) -> Error {
    match e {
        Error::Precondition(m) | Error::Certificate(m) => Error::Precondition(format!("class {i}: {m}")),
        other => other,
    }
}

impl SelectionInstance {
    pub fn new(classes: Vec<ColourClass>, anchors: Vec<PairedVector>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Argument("selection needs at least one class".into()));
        }
        if classes.len() != anchors.len() {
            return Err(Error::Argument(format!("{} classes but {} anchors", classes.len(), anchors.len())));
        }
        let d = classes[0].dim();
        for c in &classes {
            if c.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: c.dim() });
            }
        }
        for a in &anchors {
            if a.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: a.dim() });
            }
        }
        Ok(Self { classes, anchors })
    }

    /// Classes with freshly computed certificates and the given anchors.
    pub fn from_elements(classes: Vec<Vec<PairedVector>>, anchors: Vec<PairedVector>) -> Result<Self> {
        let classes = classes
            .into_iter()
            .enumerate()
            .map(|(i, els)| ColourClass::new(els).map_err(|e| name_class(i, e)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(classes, anchors)
    }

    pub fn classes(&self) -> &[ColourClass] {
        &self.classes
    }

    pub fn anchors(&self) -> &[PairedVector] {
        &self.anchors
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.classes[0].dim()
    }

    fn check_choice(&self, choice: &[usize]) -> Result<()> {
        if choice.len() != self.len() {
            return Err(Error::Argument(format!("choice has {} entries for {} classes", choice.len(), self.len())));
        }
        for (i, (&c, class)) in choice.iter().zip(&self.classes).enumerate() {
            if c >= class.len() {
                return Err(Error::Argument(format!("choice {c} out of range for class {i}")));
            }
        }
        Ok(())
    }

    fn chosen<'a>(&'a self, choice: &'a [usize]) -> impl Iterator<Item = &'a PairedVector> + 'a {
        choice.iter().zip(&self.classes).map(|(&c, class)| &class.elements[c])
    }

    /// `w = sum_i w_i` for the given choice.
    pub fn sum(&self, choice: &[usize]) -> PairedVector {
        let d = self.dim();
        let mut u = Vector::zeros(d);
        let mut v = Vector::zeros(d);
        for w in self.chosen(choice) {
            u = &u + &w.u;
            v = &v + &w.v;
        }
        PairedVector { u, v }
    }

    /// The ascent objective, evaluated in `O(n d)` through
    /// `sum_{i != j} <u_i, v_j> = <sum u, sum v> - sum <u_i, v_i>`.
    ///
    /// Panics on an out-of-range choice; see [`SelectionInstance::try_objective`].
    pub fn objective(&self, choice: &[usize]) -> f64 {
        let total = self.sum(choice);
        let mut value = total.u.dot(&total.v);
        for (w, z) in self.chosen(choice).zip(&self.anchors) {
            value -= w.u.dot(&w.v) + z.u.dot(&w.v) + w.u.dot(&z.v);
        }
        value
    }

    pub fn try_objective(&self, choice: &[usize]) -> Result<f64> {
        self.check_choice(choice)?;
        Ok(self.objective(choice))
    }

    /// `margin_k = <w - z_k, hat(w_k)> - <w_k, hat(w_k)>` for each class.
    pub fn margins(&self, choice: &[usize]) -> Vec<f64> {
        let total = self.sum(choice);
        self.chosen(choice)
            .zip(&self.anchors)
            .map(|(wk, zk)| total.sub(zk).dot(&wk.hat()) - wk.dot(&wk.hat()))
            .collect()
    }

    /// Is `choice` a single-coordinate local maximum of the objective?
    pub fn is_local_max(&self, choice: &[usize]) -> bool {
        let current = self.objective(choice);
        let mut probe = choice.to_vec();
        for k in 0..self.len() {
            for e in 0..self.classes[k].len() {
                probe[k] = e;
                if self.objective(&probe) > current {
                    return false;
                }
            }
            probe[k] = choice[k];
        }
        true
    }
}

/// Outcome of a colourful selection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionResult {
    /// Element index chosen in each class.
    pub chosen: Vec<usize>,
    pub w_sum: PairedVector,
    pub margins: Vec<f64>,
    pub objective_value: f64,
    pub ascent_steps: usize,
}

/// Coordinate ascent with the sequence of objective values it visited.
#[derive(Clone, Debug, PartialEq)]
pub struct AscentTrace {
    pub choice: Vec<usize>,
    /// Objective at the start and after every accepted swap.
    pub values: Vec<f64>,
}

impl AscentTrace {
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }
}

/// Single-swap hill climbing on the objective.
///
/// Classes are scanned in index order; inside a class the largest strict
/// improvement wins, ties going to the lowest element index. Stops after a
/// full scan without improvement.
pub fn coordinate_ascent(instance: &SelectionInstance, start: &[usize]) -> Result<Vec<usize>> {
    coordinate_ascent_traced(instance, start).map(|t| t.choice)
}

pub fn coordinate_ascent_traced(instance: &SelectionInstance, start: &[usize]) -> Result<AscentTrace> {
    instance.check_choice(start)?;
    let mut choice = start.to_vec();
    let mut current = instance.objective(&choice);
    let mut values = vec![current];
    loop {
        let mut improved = false;
        for k in 0..instance.len() {
            let keep = choice[k];
            let mut best: Option<(usize, f64)> = None;
            for e in 0..instance.classes[k].len() {
                if e == keep {
                    continue;
                }
                choice[k] = e;
                let value = instance.objective(&choice);
                // strict comparison: the objective is a fixed function of the
                // choice, so strictly increasing values cannot revisit a state
                if value > best.map_or(current, |(_, b)| b) {
                    best = Some((e, value));
                }
            }
            match best {
                Some((e, value)) => {
                    choice[k] = e;
                    current = value;
                    values.push(value);
                    improved = true;
                }
                None => choice[k] = keep,
            }
        }
        if !improved {
            return Ok(AscentTrace { choice, values });
        }
    }
}

/// Run the ascent from index 0 in every class and certify the guarantee.
pub fn select_colourful(instance: &SelectionInstance) -> Result<SelectionResult> {
    for (i, class) in instance.classes.iter().enumerate() {
        class.check().map_err(|e| name_class(i, Error::Precondition(e.to_string())))?;
    }
    let trace = coordinate_ascent_traced(instance, &vec![0; instance.len()])?;
    let margins = instance.margins(&trace.choice);
    if let Some((k, m)) = margins.iter().enumerate().find(|(_, m)| **m < -GUARANTEE_TOL || !m.is_finite()) {
        return Err(Error::AuditFailed(format!("selection guarantee violated for class {k}: margin {m:e}")));
    }
    Ok(SelectionResult {
        w_sum: instance.sum(&trace.choice),
        objective_value: *trace.values.last().unwrap(),
        ascent_steps: trace.steps(),
        margins,
        chosen: trace.choice,
    })
}

/// Independent recomputation of the guarantee margins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuaranteeAudit {
    pub margins: Vec<f64>,
    pub worst: f64,
    pub holds: bool,
}

/// Recompute the margins of `result` from scratch, coordinate by coordinate.
pub fn verify_guarantee(instance: &SelectionInstance, result: &SelectionResult, tol: f64) -> Result<GuaranteeAudit> {
    instance.check_choice(&result.chosen)?;
    let d = instance.dim();
    let picked: Vec<&PairedVector> = instance.chosen(&result.chosen).collect();
    let mut u = vec![0.0; d];
    let mut v = vec![0.0; d];
    for w in &picked {
        for c in 0..d {
            u[c] += w.u[c];
            v[c] += w.v[c];
        }
    }
    let margins: Vec<f64> = picked
        .iter()
        .zip(&instance.anchors)
        .map(|(w, z)| {
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for c in 0..d {
                // <(u - x_k, v - y_k), (v_k, u_k)>
                lhs += (u[c] - z.u[c]) * w.v[c] + (v[c] - z.v[c]) * w.u[c];
                rhs += 2.0 * w.u[c] * w.v[c];
            }
            lhs - rhs
        })
        .collect();
    let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GuaranteeAudit { holds: worst >= -tol, worst, margins })
}

/// Result of the unit-vector reduction with radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KadetsSelection {
    /// `sum_i r_i u_i`
    pub point: Vector,
    pub chosen: Vec<Vector>,
    pub chosen_indices: Vec<usize>,
    /// `<point - o_k, u_k> - r_k`
    pub margins: Vec<f64>,
    pub selection: SelectionResult,
}

fn check_unit(v: &Vector, what: &str) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::Precondition(format!("{what} is not a unit vector (|u| = {n})")));
    }
    Ok(())
}

/// Pick `u_i` from each unit-vector set `U_i` (with `0` in its hull) so that
/// `u = sum r_i u_i` satisfies `<u - o_k, u_k> >= r_k` for every `k`.
pub fn select_kadets(dirs: &[Vec<Vector>], radii: &[f64], centers: &[Vector]) -> Result<KadetsSelection> {
    let n = dirs.len();
    if n == 0 || radii.len() != n || centers.len() != n {
        return Err(Error::Argument("need equally many direction sets, radii and centers (n >= 1)".into()));
    }
    let d = centers[0].dim();
    let mut classes = Vec::with_capacity(n);
    for (i, (set, &r)) in dirs.iter().zip(radii).enumerate() {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Precondition(format!("radius {i} must be positive")));
        }
        if set.is_empty() {
            return Err(Error::Argument(format!("direction set {i} is empty")));
        }
        for u in set {
            if u.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: u.dim() });
            }
            check_unit(u, &format!("direction in set {i}"))?;
        }
        if let HullMembership::Outside { .. } = origin_in_hull(set)? {
            return Err(Error::Precondition(format!("0 is not in the convex hull of direction set {i}")));
        }
        let elements = set.iter().map(|u| PairedVector::diagonal(u.scale(r))).collect();
        classes.push(ColourClass::new(elements).map_err(|e| name_class(i, e))?);
    }
    let anchors = centers
        .iter()
        .map(|o| if o.dim() == d { Ok(PairedVector::diagonal(o.clone())) } else { Err(Error::DimensionMismatch { expected: d, found: o.dim() }) })
        .collect::<Result<Vec<_>>>()?;
    let inst = SelectionInstance::new(classes, anchors)?;
    let selection = select_colourful(&inst)?;
    let chosen: Vec<Vector> = selection.chosen.iter().zip(dirs).map(|(&c, set)| set[c].clone()).collect();
    let point = selection.w_sum.u.clone();
    let margins = chosen
        .iter()
        .zip(centers)
        .zip(radii)
        .map(|((u, o), r)| (&point - o).dot(u) - r)
        .collect();
    Ok(KadetsSelection { point, chosen_indices: selection.chosen.clone(), chosen, margins, selection })
}

/// Result of the signed-sum reduction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BangSelection {
    pub signs: Vec<i8>,
    /// `sum_i eps_i w_i u_i`
    pub point: Vector,
    /// `|<point, u_k> - m_k| - w_k`
    pub margins: Vec<f64>,
    pub selection: SelectionResult,
}

/// Choose signs `eps_i` so that `u = sum eps_i w_i u_i` satisfies
/// `|<u, u_k> - m_k| >= w_k` for every `k`.
pub fn select_bang(units: &[Vector], widths: &[f64], offsets: &[f64]) -> Result<BangSelection> {
    let n = units.len();
    if n == 0 || widths.len() != n || offsets.len() != n {
        return Err(Error::Argument("need equally many unit vectors, widths and offsets (n >= 1)".into()));
    }
    let d = units[0].dim();
    let mut classes = Vec::with_capacity(n);
    let mut anchors = Vec::with_capacity(n);
    for (i, ((u, &w), &m)) in units.iter().zip(widths).zip(offsets).enumerate() {
        if u.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: u.dim() });
        }
        check_unit(u, &format!("vector {i}"))?;
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::Precondition(format!("width {i} must be positive")));
        }
        if !m.is_finite() {
            return Err(Error::Argument(format!("offset {i} is not finite")));
        }
        let plus = PairedVector::diagonal(u.scale(w));
        let minus = plus.scale(-1.0);
        classes.push(ColourClass::with_certificate(vec![plus, minus], vec![0.5, 0.5])?);
        anchors.push(PairedVector::diagonal(u.scale(m)));
    }
    let inst = SelectionInstance::new(classes, anchors)?;
    let selection = select_colourful(&inst)?;
    let signs: Vec<i8> = selection.chosen.iter().map(|&c| if c == 0 { 1 } else { -1 }).collect();
    let point = selection.w_sum.u.clone();
    let margins = units.iter().zip(widths).zip(offsets).map(|((u, w), m)| (point.dot(u) - m).abs() - w).collect();
    Ok(BangSelection { signs, point, margins, selection })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize) -> Vector {
        Vector::basis(d, i)
    }

    fn naive_objective(inst: &SelectionInstance, choice: &[usize]) -> f64 {
        let w: Vec<&PairedVector> = inst.chosen(choice).collect();
        let mut total = 0.0;
        for i in 0..w.len() {
            for j in 0..w.len() {
                if i != j {
                    total += w[i].u.dot(&w[j].v);
                }
            }
            total -= inst.anchors[i].u.dot(&w[i].v) + w[i].u.dot(&inst.anchors[i].v);
        }
        total
    }

    #[test]
    fn objective_single_class_has_no_cross_terms() {
        let w = PairedVector::new(Vector::from([1.0, 2.0]), Vector::from([-1.0, 0.5])).unwrap();
        let inst = SelectionInstance::from_elements(
            vec![vec![w.clone(), w.scale(-1.0)]],
            vec![PairedVector::new(Vector::from([3.0, 1.0]), Vector::from([0.0, 2.0])).unwrap()],
        )
        .unwrap();
        let expect = -(Vector::from([3.0, 1.0]).dot(&w.v)) - w.u.dot(&Vector::from([0.0, 2.0]));
        assert!((inst.objective(&[0]) - expect).abs() < 1e-15);
    }

    #[test]
    fn objective_equal_diagonal_elements() {
        // n (n - 1) |u|^2 with all z = 0
        let u = Vector::from([1.0, -2.0, 0.5]);
        let w = PairedVector::diagonal(u.clone());
        let n = 4;
        let inst = SelectionInstance::from_elements(
            vec![vec![w.clone(), w.scale(-1.0)]; n],
            vec![PairedVector::zeros(3); n],
        )
        .unwrap();
        assert!((inst.objective(&[0; 4]) - 12.0 * u.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn objective_matches_double_loop() {
        let p = |a: [f64; 2], b: [f64; 2]| PairedVector::new(Vector::from(a), Vector::from(b)).unwrap();
        let classes = vec![
            vec![p([0.3, -1.2], [0.7, 0.1]), p([-0.3, 1.2], [-0.7, -0.1])],
            vec![p([1.0, 0.5], [0.2, -0.4]), p([-2.0, -1.0], [-0.4, 0.8]), p([0.1, 0.3], [0.9, 0.0])],
            vec![p([0.0, 0.0], [0.0, 0.0])],
        ];
        let anchors = vec![p([0.5, 0.5], [-1.0, 2.0]), p([1.5, -0.5], [0.0, 0.3]), p([-0.2, 0.9], [0.4, 0.4])];
        let inst = SelectionInstance::from_elements(classes, anchors).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                let c = [a, b, 0];
                assert!((inst.objective(&c) - naive_objective(&inst, &c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singleton_classes_stay_put() {
        let inst = SelectionInstance::from_elements(vec![vec![PairedVector::zeros(2)]; 3], vec![PairedVector::zeros(2); 3]).unwrap();
        let trace = coordinate_ascent_traced(&inst, &[0, 0, 0]).unwrap();
        assert_eq!(trace.choice, vec![0, 0, 0]);
        assert_eq!(trace.steps(), 0);
    }

    #[test]
    fn bang_two_parallel_vectors_align() {
        // sign patterns: (+,+) and (-,-) give objective 2, mixed give -2
        let u = e(2, 0);
        let sel = select_bang(&[u.clone(), u.clone()], &[1.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(sel.signs[0], sel.signs[1]);
        assert_eq!(sel.selection.objective_value, 2.0);
    }

    #[test]
    fn colourful_single_class_zero_anchor_is_tight() {
        let w = PairedVector::diagonal(e(2, 0));
        let inst = SelectionInstance::from_elements(vec![vec![w.clone(), w.scale(-1.0)]], vec![PairedVector::zeros(2)]).unwrap();
        let res = select_colourful(&inst).unwrap();
        assert_eq!(res.margins, vec![0.0]);
        let audit = verify_guarantee(&inst, &res, GUARANTEE_TOL).unwrap();
        assert!(audit.holds);
        assert!((audit.margins[0] - res.margins[0]).abs() <= 1e-12);
    }

    #[test]
    fn kadets_small_cases() {
        let set = vec![e(2, 0), -e(2, 0)];
        let one = select_kadets(&[set.clone()], &[1.0], &[Vector::zeros(2)]).unwrap();
        assert_eq!(one.point.norm(), 1.0);
        assert_eq!(one.margins, vec![0.0]);
        let two = select_kadets(&[set.clone(), set], &[1.0, 1.0], &[Vector::zeros(2), Vector::zeros(2)]).unwrap();
        assert_eq!(two.point.norm(), 2.0);
        assert_eq!(two.margins, vec![1.0, 1.0]);
    }

    #[test]
    fn kadets_rejects_bad_sets() {
        let r = select_kadets(&[vec![e(2, 0), e(2, 1)]], &[1.0], &[Vector::zeros(2)]);
        assert!(matches!(r, Err(Error::Precondition(_))));
        let r = select_kadets(&[vec![e(2, 0).scale(2.0), -e(2, 0)]], &[1.0], &[Vector::zeros(2)]);
        assert!(matches!(r, Err(Error::Precondition(_))));
        let r = select_kadets(&[vec![e(2, 0), -e(2, 0)]], &[0.0], &[Vector::zeros(2)]);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn bang_small_cases() {
        let one = select_bang(&[e(2, 0)], &[1.0], &[0.0]).unwrap();
        assert_eq!(one.margins, vec![0.0]);
        let orth = select_bang(&[e(2, 0), e(2, 1)], &[1.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(orth.margins, vec![0.0, 0.0]);
        let three = select_bang(&[e(2, 0), e(2, 0), e(2, 0)], &[1.0; 3], &[0.0; 3]).unwrap();
        assert!(three.signs.iter().all(|&s| s == three.signs[0]));
        assert_eq!(three.margins, vec![2.0, 2.0, 2.0]);
        assert!(matches!(select_bang(&[Vector::from([0.5, 0.0])], &[1.0], &[0.0]), Err(Error::Precondition(_))));
    }

    #[test]
    fn invalid_certificate_names_class() {
        let w = PairedVector::diagonal(e(2, 0));
        let err = SelectionInstance::from_elements(
            vec![vec![w.clone(), w.scale(-1.0)], vec![w.clone()]],
            vec![PairedVector::zeros(2); 2],
        )
        .unwrap_err();
        assert!(matches!(&err, Error::Precondition(m) if m.starts_with("class 1")), "{err:?}");
        assert!(ColourClass::with_certificate(vec![w.clone(), w.scale(-1.0)], vec![0.9, 0.1]).is_err());
    }

    #[test]
    fn instance_json_schema() {
        let json = r#"{"classes":[[{"u":[1,0],"v":[1,0]},{"u":[-1,0],"v":[-1,0]}]],"anchors":[{"x":[0,0],"y":[0,0]}]}"#;
        let inst: SelectionInstance = serde_json::from_str(json).unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(inst.classes()[0].certificate(), &[0.5, 0.5]);
        let out = serde_json::to_string(&inst).unwrap();
        assert_eq!(serde_json::from_str::<SelectionInstance>(&out).unwrap(), inst);
        let bad = r#"{"classes":[[{"u":[1,0],"v":[1,0]}]],"anchors":[{"x":[0,0],"y":[0,0]}]}"#;
        assert!(serde_json::from_str::<SelectionInstance>(bad).is_err());
    }
}
