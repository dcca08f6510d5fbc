//! Dense two-phase revised simplex with an explicit basis inverse.
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots the solver
//! switches to Bland's rule until the objective moves again. The basis inverse
//! is updated by elementary row operations and rebuilt from scratch every
//! [`REFACTOR_EVERY`] pivots.

use super::{LinearProgram, LpSolution, Relation, Sense};
use crate::error::LpError;

pub const PIVOT_TOL: f64 = 1e-10;
pub const FEAS_TOL: f64 = 1e-8;
const OPT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_STREAK: usize = 50;

/// How an original variable is expressed through nonnegative standard columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = offset + s[col]`
    Shifted { col: usize, offset: f64 },
    /// `x = offset - s[col]`
    Mirrored { col: usize, offset: f64 },
    /// `x = s[pos] - s[neg]`
    Free { pos: usize, neg: usize },
}

struct StandardForm {
    /// Sparse columns of `A` in `Ax = b`.
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    rhs: Vec<f64>,
    /// Row multiplied by -1 to make `rhs >= 0`.
    flipped: Vec<bool>,
    /// Initial basic column per row (a slack or an artificial).
    initial_basis: Vec<usize>,
    is_artificial: Vec<bool>,
    var_map: Vec<VarMap>,
    /// Number of rows that came from the user's constraints; later rows encode upper bounds.
    user_rows: usize,
}

fn standardize(lp: &LinearProgram) -> Result<StandardForm, LpError> {
    let nv = lp.objective.len();
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cols: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut cost = Vec::new();
    let mut var_map = Vec::with_capacity(nv);
    // Finite upper bounds of shifted variables become extra `<=` rows.
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..nv {
        let (lo, hi) = lp.bounds[j];
        let c = sign * lp.objective[j];
        if !c.is_finite() || lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(LpError::Malformed(format!("variable {j} has bounds [{lo}, {hi}] or cost {c}")));
        }
        if lo.is_finite() {
            let col = cols.len();
            cols.push(Vec::new());
            cost.push(c);
            var_map.push(VarMap::Shifted { col, offset: lo });
            if hi.is_finite() {
                upper_rows.push((col, hi - lo));
            }
        } else if hi.is_finite() {
            let col = cols.len();
            cols.push(Vec::new());
            cost.push(-c);
            var_map.push(VarMap::Mirrored { col, offset: hi });
        } else {
            let pos = cols.len();
            cols.push(Vec::new());
            cols.push(Vec::new());
            cost.push(c);
            cost.push(-c);
            var_map.push(VarMap::Free { pos, neg: pos + 1 });
        }
    }

    let m = lp.constraints.len() + upper_rows.len();
    let mut rhs = vec![0.0; m];
    let mut relation = vec![Relation::Eq; m];
    for (i, row) in lp.constraints.iter().enumerate() {
        let mut b = row.rhs;
        if !b.is_finite() {
            return Err(LpError::Malformed(format!("row {i} has rhs {b}")));
        }
        for &(j, a) in &row.coeffs {
            if j >= nv || !a.is_finite() {
                return Err(LpError::Malformed(format!("row {i} references variable {j} with coefficient {a}")));
            }
            if a == 0.0 {
                continue;
            }
            match var_map[j] {
                VarMap::Shifted { col, offset } => {
                    cols[col].push((i, a));
                    b -= a * offset;
                }
                VarMap::Mirrored { col, offset } => {
                    cols[col].push((i, -a));
                    b -= a * offset;
                }
                VarMap::Free { pos, neg } => {
                    cols[pos].push((i, a));
                    cols[neg].push((i, -a));
                }
            }
        }
        rhs[i] = b;
        relation[i] = row.relation;
    }
    let user_rows = lp.constraints.len();
    for (k, &(col, ub)) in upper_rows.iter().enumerate() {
        let i = user_rows + k;
        cols[col].push((i, 1.0));
        rhs[i] = ub;
        relation[i] = Relation::Le;
    }
    // Merge duplicate entries within a column.
    for col in &mut cols {
        col.sort_by_key(|&(i, _)| i);
        col.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1;
                true
            } else {
                false
            }
        });
    }

    let mut flipped = vec![false; m];
    for i in 0..m {
        if rhs[i] < 0.0 {
            flipped[i] = true;
            rhs[i] = -rhs[i];
            relation[i] = match relation[i] {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }
    if flipped.iter().any(|&f| f) {
        for col in &mut cols {
            for (i, a) in col.iter_mut() {
                if flipped[*i] {
                    *a = -*a;
                }
            }
        }
    }

    let mut is_artificial = vec![false; cols.len()];
    let mut initial_basis = vec![usize::MAX; m];
    for i in 0..m {
        match relation[i] {
            Relation::Le => {
                initial_basis[i] = cols.len();
                cols.push(vec![(i, 1.0)]);
                cost.push(0.0);
                is_artificial.push(false);
            }
            Relation::Ge => {
                cols.push(vec![(i, -1.0)]);
                cost.push(0.0);
                is_artificial.push(false);
            }
            Relation::Eq => {}
        }
    }
    for i in 0..m {
        if initial_basis[i] == usize::MAX {
            initial_basis[i] = cols.len();
            cols.push(vec![(i, 1.0)]);
            cost.push(0.0);
            is_artificial.push(true);
        }
    }
    Ok(StandardForm { cols, cost, rhs, flipped, initial_basis, is_artificial, var_map, user_rows })
}

struct Tableau<'a> {
    sf: &'a StandardForm,
    m: usize,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    pivots_since_refactor: usize,
    iterations: usize,
    max_iterations: usize,
}

impl<'a> Tableau<'a> {
    fn new(sf: &'a StandardForm) -> Self {
        let m = sf.rhs.len();
        let mut binv = vec![vec![0.0; m]; m];
        for (i, row) in binv.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let mut in_basis = vec![false; sf.cols.len()];
        for &b in &sf.initial_basis {
            in_basis[b] = true;
        }
        let max_iterations = 50 * (m + sf.cols.len()) + 1000;
        Tableau {
            sf,
            m,
            basis: sf.initial_basis.clone(),
            in_basis,
            binv,
            xb: sf.rhs.clone(),
            pivots_since_refactor: 0,
            iterations: 0,
            max_iterations,
        }
    }

    /// `B^{-1} a_j`.
    fn column(&self, j: usize) -> Vec<f64> {
        let mut w = vec![0.0; self.m];
        for &(i, a) in &self.sf.cols[j] {
            for (r, wr) in w.iter_mut().enumerate() {
                *wr += self.binv[r][i] * a;
            }
        }
        w
    }

    /// Simplex multipliers `c_B B^{-1}`.
    fn multipliers(&self, cost: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (yi, bi) in y.iter_mut().zip(&self.binv[r]) {
                    *yi += cb * bi;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], y: &[f64]) -> f64 {
        cost[j] - self.sf.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>()
    }

    fn pivot(&mut self, row: usize, entering: usize, w: &[f64]) {
        let p = w[row];
        let prow: Vec<f64> = self.binv[row].iter().map(|v| v / p).collect();
        let xr = self.xb[row] / p;
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let f = w[r];
            if f != 0.0 {
                for (v, pv) in self.binv[r].iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                self.xb[r] -= f * xr;
                if self.xb[r].abs() < 1e-13 {
                    self.xb[r] = 0.0;
                }
            }
        }
        self.binv[row] = prow;
        self.xb[row] = xr;
        self.in_basis[self.basis[row]] = false;
        self.in_basis[entering] = true;
        self.basis[row] = entering;
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= REFACTOR_EVERY {
            self.refactor();
        }
    }

    /// Rebuilds `B^{-1}` by Gauss–Jordan elimination and recomputes `x_B`.
    fn refactor(&mut self) {
        let m = self.m;
        let mut a = vec![vec![0.0; 2 * m]; m];
        for (c, &b) in self.basis.iter().enumerate() {
            for &(i, v) in &self.sf.cols[b] {
                a[i][c] = v;
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[m + i] = 1.0;
        }
        for col in 0..m {
            let piv = (col..m).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
            if a[piv][col].abs() < 1e-14 {
                // Numerically singular; keep the updated inverse.
                self.pivots_since_refactor = 0;
                return;
            }
            a.swap(col, piv);
            let p = a[col][col];
            for v in a[col].iter_mut() {
                *v /= p;
            }
            for r in 0..m {
                if r != col && a[r][col] != 0.0 {
                    let f = a[r][col];
                    let (src, dst) = if r < col {
                        let (lo, hi) = a.split_at_mut(col);
                        (&hi[0], &mut lo[r])
                    } else {
                        let (lo, hi) = a.split_at_mut(r);
                        (&lo[col], &mut hi[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d -= f * s;
                    }
                }
            }
        }
        // Row `c` of the eliminated system corresponds to basis position `c`.
        for (r, row) in a.into_iter().enumerate() {
            self.binv[r] = row[m..].to_vec();
        }
        self.xb = (0..m).map(|r| (0..m).map(|i| self.binv[r][i] * self.sf.rhs[i]).sum::<f64>()).collect();
        for v in &mut self.xb {
            if *v < 0.0 && *v > -FEAS_TOL {
                *v = 0.0;
            }
        }
        self.pivots_since_refactor = 0;
    }

    /// Runs simplex iterations on `cost`; columns with `allowed[j] == false` never enter.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> Result<(), LpError> {
        let mut degenerate = 0usize;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(LpError::IterationLimit(self.iterations));
            }
            let bland = degenerate >= DEGENERATE_STREAK;
            let y = self.multipliers(cost);
            let mut entering = None;
            let mut best = -OPT_TOL;
            for j in 0..self.sf.cols.len() {
                if self.in_basis[j] || !allowed[j] {
                    continue;
                }
                let d = self.reduced_cost(j, cost, &y);
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = entering else { return Ok(()) };
            let w = self.column(q);
            let mut theta = f64::INFINITY;
            for r in 0..self.m {
                if w[r] > PIVOT_TOL {
                    theta = theta.min(self.xb[r].max(0.0) / w[r]);
                }
            }
            if !theta.is_finite() {
                return Err(LpError::Unbounded);
            }
            let mut leave = None;
            for r in 0..self.m {
                if w[r] > PIVOT_TOL && self.xb[r].max(0.0) / w[r] <= theta + 1e-12 {
                    leave = match leave {
                        None => Some(r),
                        Some(l) if bland => Some(if self.basis[r] < self.basis[l] { r } else { l }),
                        Some(l) => Some(if w[r] > w[l] { r } else { l }),
                    };
                }
            }
            let row = leave.expect("a ratio-test row exists when theta is finite");
            if theta * w[row] <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, q, &w);
            self.iterations += 1;
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let sf = standardize(lp)?;
    let ncols = sf.cols.len();
    let mut t = Tableau::new(&sf);

    if sf.is_artificial.iter().any(|&a| a) {
        let phase1: Vec<f64> = sf.is_artificial.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
        t.optimize(&phase1, &vec![true; ncols])?;
        t.refactor();
        let infeas: f64 = t.basis.iter().zip(&t.xb).filter(|(&b, _)| sf.is_artificial[b]).map(|(_, &v)| v).sum();
        let scale = 1.0 + sf.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if infeas > FEAS_TOL * scale {
            return Err(LpError::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..t.m {
            if !sf.is_artificial[t.basis[r]] {
                continue;
            }
            let candidate = (0..ncols).filter(|&j| !sf.is_artificial[j] && !t.in_basis[j]).find_map(|j| {
                let w = t.column(j);
                (w[r].abs() > 1e-9).then_some((j, w))
            });
            if let Some((j, w)) = candidate {
                t.pivot(r, j, &w);
            }
        }
    }

    let allowed: Vec<bool> = sf.is_artificial.iter().map(|&a| !a).collect();
    t.optimize(&sf.cost, &allowed)?;
    t.refactor();

    let mut s = vec![0.0; ncols];
    for (r, &b) in t.basis.iter().enumerate() {
        s[b] = t.xb[r].max(0.0);
    }
    let x: Vec<f64> = sf
        .var_map
        .iter()
        .map(|vm| match *vm {
            VarMap::Shifted { col, offset } => offset + s[col],
            VarMap::Mirrored { col, offset } => offset - s[col],
            VarMap::Free { pos, neg } => s[pos] - s[neg],
        })
        .collect();
    let value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let y = t.multipliers(&sf.cost);
    let duals: Vec<f64> = (0..sf.user_rows)
        .map(|i| {
            let v = if sf.flipped[i] { -y[i] } else { y[i] };
            sign * v
        })
        .collect();
    Ok(LpSolution { x, value, duals, iterations: t.iterations })
}
