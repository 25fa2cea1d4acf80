//! Small dense linear-programming solver.
//!
//! Two-phase primal simplex on a dense tableau with Bland's rule. Once the
//! optimal basis is found, the primal point and the dual multipliers are
//! recomputed from the original data by solving with the basis matrix, so the
//! reported solution does not carry the tableau's accumulated rounding.
//!
//! Internally every variable is shifted or split to be nonnegative, finite
//! upper bounds become rows, `>=` rows are negated, and equalities become
//! two opposite inequalities.

use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 64;
pub const MAX_CONSTRAINTS: usize = 512;

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Variable bounds; either side may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }
    pub fn free() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }
    pub fn nonnegative() -> Self {
        Self::new(0.0, f64::INFINITY)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub row: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

/// `maximize <c, x>` subject to rows and bounds. Variables default to `x >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
    /// Dump tableaus to stderr while solving.
    pub verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    /// Primal point (empty unless optimal).
    pub x: Vec<f64>,
    pub value: f64,
    /// One multiplier per constraint: `>= 0` for `Le`, `<= 0` for `Ge`, free for `Eq`.
    pub dual: Vec<f64>,
    /// `c - A^T y`, one per variable; nonzero only at an active bound.
    pub reduced_costs: Vec<f64>,
    /// Basic columns of the internal standard form.
    pub basis: Vec<usize>,
}

/// Worst-case violations of the optimality conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KktResiduals {
    pub primal: f64,
    pub dual: f64,
    pub complementarity: f64,
    /// `|primal value - dual value|`
    pub duality_gap: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.complementarity).max(self.duality_gap)
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { objective, constraints: Vec::new(), bounds: vec![Bound::nonnegative(); n], verbose: false }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, row: Vec<f64>, rel: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint { row, rel, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, bound: Bound) -> &mut Self {
        self.bounds[var] = bound;
        self
    }

    pub fn set_bounds_all(&mut self, bound: Bound) -> &mut Self {
        self.bounds.iter_mut().for_each(|b| *b = bound);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::Argument("linear program has no variables".into()));
        }
        if n > MAX_VARIABLES || self.constraints.len() > MAX_CONSTRAINTS {
            return Err(Error::Capacity(format!(
                "{n} variables / {} constraints exceeds {MAX_VARIABLES} / {MAX_CONSTRAINTS}",
                self.constraints.len()
            )));
        }
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.bounds.len() });
        }
        for (j, c) in self.constraints.iter().enumerate() {
            if c.row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.row.len() });
            }
            if !c.rhs.is_finite() || c.row.iter().any(|a| !a.is_finite()) {
                return Err(Error::Argument(format!("constraint {j} has non-finite data")));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Argument("objective has non-finite data".into()));
        }
        for (i, b) in self.bounds.iter().enumerate() {
            if b.lower.is_nan() || b.upper.is_nan() || b.lower == f64::INFINITY || b.upper == f64::NEG_INFINITY {
                return Err(Error::Argument(format!("variable {i} has invalid bounds")));
            }
        }
        Ok(())
    }

    /// Solve the program. Infeasible and unbounded programs are reported
    /// through [`LpSolution::status`], not as errors.
    pub fn solve(&self) -> Result<LpSolution> {
        self.validate()?;
        let sf = StandardForm::build(self);
        let n = self.num_vars();
        let m_con = self.constraints.len();
        let failed = |status, value| LpSolution {
            status,
            x: Vec::new(),
            value,
            dual: vec![0.0; m_con],
            reduced_costs: vec![0.0; n],
            basis: Vec::new(),
        };
        // trivially infeasible bounds
        if self.bounds.iter().any(|b| b.lower > b.upper) {
            return Ok(failed(Status::Infeasible, f64::NAN));
        }
        let mut tab = Tableau::new(&sf, self.verbose);
        if !tab.phase_one()? {
            return Ok(failed(Status::Infeasible, f64::NAN));
        }
        if !tab.phase_two(&sf.cost)? {
            return Ok(failed(Status::Unbounded, f64::INFINITY));
        }
        let basis = tab.basis.clone();
        let (z, y_rows) = sf.refine(&basis)?;
        Ok(sf.recover(self, &z, &y_rows, basis))
    }
}

impl LpSolution {
    /// Dual objective `sum y_j b_j + sum r_i * (active bound of i)`.
    pub fn dual_value(&self, lp: &LinearProgram) -> f64 {
        let mut total: f64 = self.dual.iter().zip(&lp.constraints).map(|(y, c)| y * c.rhs).sum();
        for (r, b) in self.reduced_costs.iter().zip(&lp.bounds) {
            if r.abs() <= 1e-12 {
                continue;
            }
            total += if *r > 0.0 { r * b.upper } else { r * b.lower };
        }
        total
    }

    /// Optimality-condition residuals; only meaningful when optimal.
    pub fn kkt_residuals(&self, lp: &LinearProgram) -> KktResiduals {
        let mut primal = 0.0f64;
        let mut dual = 0.0f64;
        let mut comp = 0.0f64;
        for (c, y) in lp.constraints.iter().zip(&self.dual) {
            let ax: f64 = c.row.iter().zip(&self.x).map(|(a, x)| a * x).sum();
            let slack = c.rhs - ax;
            match c.rel {
                Relation::Le => {
                    primal = primal.max(-slack);
                    dual = dual.max(-y);
                }
                Relation::Ge => {
                    primal = primal.max(slack);
                    dual = dual.max(*y);
                }
                Relation::Eq => primal = primal.max(slack.abs()),
            }
            comp = comp.max((y * slack).abs());
        }
        for ((x, b), r) in self.x.iter().zip(&lp.bounds).zip(&self.reduced_costs) {
            primal = primal.max(b.lower - x).max(x - b.upper);
            if *r > 0.0 {
                if b.upper.is_infinite() {
                    dual = dual.max(*r);
                } else {
                    comp = comp.max(r * (b.upper - x));
                }
            } else if *r < 0.0 {
                if b.lower.is_infinite() {
                    dual = dual.max(-r);
                } else {
                    comp = comp.max(-r * (x - b.lower));
                }
            }
        }
        KktResiduals { primal, dual, complementarity: comp, duality_gap: (self.value - self.dual_value(lp)).abs() }
    }
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone, Debug)]
struct VarMap {
    offset: f64,
    cols: Vec<(usize, f64)>,
}

#[derive(Clone, Copy, Debug)]
enum RowOrigin {
    /// Original constraint, multiplied by `sign` to read as `<=`.
    Constraint { index: usize, sign: f64 },
    UpperBound,
}

/// `A z <= b, z >= 0`, maximize `cost . z`.
struct StandardForm {
    vars: Vec<VarMap>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    origin: Vec<RowOrigin>,
    cost: Vec<f64>,
    nz: usize,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut vars = Vec::with_capacity(lp.num_vars());
        let mut nz = 0;
        let mut upper_rows = Vec::new();
        for (i, b) in lp.bounds.iter().enumerate() {
            let map = if b.lower.is_finite() {
                if b.upper.is_finite() {
                    upper_rows.push((i, nz, b.upper - b.lower));
                }
                VarMap { offset: b.lower, cols: vec![(nz, 1.0)] }
            } else if b.upper.is_finite() {
                VarMap { offset: b.upper, cols: vec![(nz, -1.0)] }
            } else {
                nz += 1;
                VarMap { offset: 0.0, cols: vec![(nz - 1, 1.0), (nz, -1.0)] }
            };
            nz += 1;
            vars.push(map);
        }

        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut origin = Vec::new();
        let mut push_row = |coeffs: &[f64], b: f64, sign: f64, o: RowOrigin| {
            let mut row = vec![0.0; nz];
            let mut shift = 0.0;
            for (a, map) in coeffs.iter().zip(&vars) {
                shift += a * map.offset;
                for &(col, coef) in &map.cols {
                    row[col] += sign * a * coef;
                }
            }
            rows.push(row);
            rhs.push(sign * (b - shift));
            origin.push(o);
        };
        for (index, c) in lp.constraints.iter().enumerate() {
            let signs: &[f64] = match c.rel {
                Relation::Le => &[1.0],
                Relation::Ge => &[-1.0],
                Relation::Eq => &[1.0, -1.0],
            };
            for &sign in signs {
                push_row(&c.row, c.rhs, sign, RowOrigin::Constraint { index, sign });
            }
        }
        for (_, col, width) in upper_rows {
            let mut row = vec![0.0; nz];
            row[col] = 1.0;
            rows.push(row);
            rhs.push(width);
            origin.push(RowOrigin::UpperBound);
        }

        let mut cost = vec![0.0; nz];
        for (c, map) in lp.objective.iter().zip(&vars) {
            for &(col, coef) in &map.cols {
                cost[col] += c * coef;
            }
        }
        Self { vars, rows, rhs, origin, cost, nz }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Column `j` of `[A | I | -I_art]` in original row orientation.
    fn column(&self, j: usize, art_rows: &[usize]) -> Vec<f64> {
        let m = self.m();
        if j < self.nz {
            self.rows.iter().map(|r| r[j]).collect()
        } else if j < self.nz + m {
            let mut e = vec![0.0; m];
            e[j - self.nz] = 1.0;
            e
        } else {
            let mut e = vec![0.0; m];
            e[art_rows[j - self.nz - m]] = -1.0;
            e
        }
    }

    fn artificial_rows(&self) -> Vec<usize> {
        (0..self.m()).filter(|&r| self.rhs[r] < 0.0).collect()
    }

    /// Recompute basic values and row duals from the original data.
    fn refine(&self, basis: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = self.m();
        let art_rows = self.artificial_rows();
        let cols: Vec<Vec<f64>> = basis.iter().map(|&j| self.column(j, &art_rows)).collect();
        // B[r][k] = cols[k][r]
        let b_mat: Vec<Vec<f64>> = (0..m).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let xb = solve_dense(b_mat.clone(), self.rhs.clone())?;
        let cb: Vec<f64> = basis.iter().map(|&j| if j < self.nz { self.cost[j] } else { 0.0 }).collect();
        let bt: Vec<Vec<f64>> = cols.clone();
        let y = solve_dense(bt, cb)?;
        let mut z = vec![0.0; self.nz];
        for (k, &j) in basis.iter().enumerate() {
            if j < self.nz {
                z[j] = if xb[k] < 0.0 && xb[k] > -1e-9 { 0.0 } else { xb[k] };
            }
        }
        Ok((z, y))
    }

    fn recover(&self, lp: &LinearProgram, z: &[f64], y_rows: &[f64], basis: Vec<usize>) -> LpSolution {
        let x: Vec<f64> = self
            .vars
            .iter()
            .map(|map| map.offset + map.cols.iter().map(|&(c, coef)| coef * z[c]).sum::<f64>())
            .collect();
        let mut dual = vec![0.0; lp.constraints.len()];
        for (o, y) in self.origin.iter().zip(y_rows) {
            if let RowOrigin::Constraint { index, sign } = *o {
                dual[index] += sign * y;
            }
        }
        let reduced_costs = (0..lp.num_vars())
            .map(|i| {
                let ay: f64 = lp.constraints.iter().zip(&dual).map(|(c, y)| c.row[i] * y).sum();
                let r = lp.objective[i] - ay;
                if r.abs() <= 1e-13 {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        let value = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
        LpSolution { status: Status::Optimal, x, value, dual, reduced_costs, basis }
    }
}

/// Gaussian elimination with partial pivoting on a square system.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k].abs() <= 1e-12 * scale {
            return Err(Error::Degeneracy(format!("singular basis matrix at column {k} (pivot {:e})", a[p][k])));
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = ((k + 1)..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Ok(x)
}

struct Tableau {
    /// `m` rows of `ncols` coefficients followed by the right-hand side.
    t: Vec<Vec<f64>>,
    /// reduced costs `c_j - c_B B^{-1} A_j`
    obj: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
    first_art: usize,
    verbose: bool,
}

impl Tableau {
    fn new(sf: &StandardForm, verbose: bool) -> Self {
        let m = sf.m();
        let art_rows = sf.artificial_rows();
        let first_art = sf.nz + m;
        let ncols = first_art + art_rows.len();
        let mut t = vec![vec![0.0; ncols + 1]; m];
        let mut basis = vec![0; m];
        for r in 0..m {
            let neg = sf.rhs[r] < 0.0;
            let s = if neg { -1.0 } else { 1.0 };
            for j in 0..sf.nz {
                t[r][j] = s * sf.rows[r][j];
            }
            t[r][sf.nz + r] = s;
            t[r][ncols] = s * sf.rhs[r];
            basis[r] = sf.nz + r;
        }
        for (k, &r) in art_rows.iter().enumerate() {
            t[r][first_art + k] = 1.0;
            basis[r] = first_art + k;
        }
        Tableau { t, obj: vec![0.0; ncols], basis, ncols, first_art, verbose }
    }

    fn set_objective(&mut self, cost: &[f64]) {
        let c = |j: usize| cost.get(j).copied().unwrap_or(0.0);
        for j in 0..self.ncols {
            let cb: f64 = self.basis.iter().zip(&self.t).map(|(&b, row)| c(b) * row[j]).sum();
            self.obj[j] = c(j) - cb;
        }
    }

    fn objective_value(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.t)
            .map(|(&b, row)| cost.get(b).copied().unwrap_or(0.0) * row[self.ncols])
            .sum()
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[j];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[j] = 0.0;
            }
        }
        let f = self.obj[j];
        for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        self.obj[j] = 0.0;
        self.basis[r] = j;
    }

    /// Bland iterations; returns `false` on an unbounded ray.
    fn iterate(&mut self, allow_art: bool) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            if self.verbose {
                self.dump();
            }
            let limit = if allow_art { self.ncols } else { self.first_art };
            let Some(j) = (0..limit).find(|&j| self.obj[j] > COST_EPS) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.t.iter().enumerate() {
                let a = row[j];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = row[self.ncols] / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        let tie = (ratio - bratio).abs() <= 1e-12 * 1f64.max(bratio.abs());
                        if (tie && self.basis[r] < self.basis[br]) || (!tie && ratio < bratio) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, j),
            }
        }
        Err(Error::Degeneracy(format!("no convergence after {MAX_PIVOTS} pivots")))
    }

    /// Returns `false` when infeasible.
    fn phase_one(&mut self) -> Result<bool> {
        if self.first_art == self.ncols {
            return Ok(true);
        }
        let cost: Vec<f64> = (0..self.ncols).map(|j| if j >= self.first_art { -1.0 } else { 0.0 }).collect();
        self.set_objective(&cost);
        self.iterate(true)?;
        let scale = self.t.iter().fold(1.0f64, |m, row| m.max(row[self.ncols].abs()));
        if self.objective_value(&cost) < -1e-9 * scale {
            return Ok(false);
        }
        // drive remaining (zero-level) artificials out of the basis
        for r in 0..self.t.len() {
            if self.basis[r] < self.first_art {
                continue;
            }
            let j = (0..self.first_art)
                .filter(|&j| self.t[r][j].abs() > 1e-9)
                .max_by(|&a, &b| self.t[r][a].abs().total_cmp(&self.t[r][b].abs()));
            if let Some(j) = j {
                self.pivot(r, j);
            }
        }
        Ok(true)
    }

    /// Returns `false` when unbounded.
    fn phase_two(&mut self, cost: &[f64]) -> Result<bool> {
        self.set_objective(cost);
        self.iterate(false)
    }

    fn dump(&self) {
        eprintln!("basis {:?}", self.basis);
        for row in &self.t {
            eprintln!("  {:?}", row);
        }
        eprintln!("  obj {:?}", self.obj);
    }
}
