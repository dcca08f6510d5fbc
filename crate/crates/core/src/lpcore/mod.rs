//! A small dense LP solver and a cutting-plane driver for LPs whose
//! constraints are generated lazily by a separation oracle.

mod lp_format;
mod simplex;

use std::collections::HashSet;
use std::hash::Hash;

use crate::error::{Error, LpError, Result};

pub use simplex::{FEAS_TOL, PIVOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// `(lower, upper)` per variable; infinite values mean unbounded.
    pub bounds: Vec<(f64, f64)>,
    pub names: Vec<String>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self { sense, objective: Vec::new(), constraints: Vec::new(), bounds: Vec::new(), names: Vec::new() }
    }

    /// Adds a variable with the given objective coefficient and bounds, `x >= 0` by default.
    pub fn add_var(&mut self, cost: f64, bounds: (f64, f64)) -> usize {
        self.add_named_var(format!("x{}", self.objective.len()), cost, bounds)
    }

    pub fn add_named_var(&mut self, name: impl Into<String>, cost: f64, bounds: (f64, f64)) -> usize {
        self.objective.push(cost);
        self.bounds.push(bounds);
        self.names.push(name.into());
        self.objective.len() - 1
    }

    pub fn add_nonneg_vars(&mut self, costs: &[f64]) -> Vec<usize> {
        costs.iter().map(|&c| self.add_var(c, (0.0, f64::INFINITY))).collect()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// CPLEX LP text rendering, for debugging.
    pub fn to_lp_format(&self) -> String {
        lp_format::render(self)
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Shadow price of each constraint: the rate of change of the optimal
    /// value per unit increase of its right-hand side.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

/// Solves `lp` to optimality with the dense revised simplex.
pub fn solve_lp(lp: &LinearProgram) -> std::result::Result<LpSolution, LpError> {
    if lp.bounds.len() != lp.objective.len() {
        return Err(LpError::Malformed("bounds and objective lengths differ".into()));
    }
    simplex::solve(lp)
}

/// A generated constraint together with the object that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut<T> {
    pub constraint: Constraint,
    pub tag: T,
}

/// Every constraint added by a cutting-plane run, in insertion order, with
/// unique tags.
#[derive(Debug, Clone)]
pub struct CutPool<T> {
    cuts: Vec<Cut<T>>,
    seen: HashSet<T>,
}

impl<T: Clone + Eq + Hash> CutPool<T> {
    pub fn new() -> Self {
        Self { cuts: Vec::new(), seen: HashSet::new() }
    }

    /// Adds the cut unless its tag is already present.
    pub fn insert(&mut self, cut: Cut<T>) -> bool {
        if !self.seen.insert(cut.tag.clone()) {
            return false;
        }
        self.cuts.push(cut);
        true
    }

    pub fn contains(&self, tag: &T) -> bool {
        self.seen.contains(tag)
    }

    pub fn cuts(&self) -> &[Cut<T>] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

impl<T: Clone + Eq + Hash> Default for CutPool<T> {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneOutcome<T> {
    /// Optimal master point (feasible for every generated constraint).
    pub point: Vec<f64>,
    pub value: f64,
    /// Shadow prices of the pooled cuts in pool order.
    pub cut_duals: Vec<f64>,
    pub pool: CutPool<T>,
    pub rounds: usize,
}

/// Kelley cutting planes: solve the master, ask `separator` for violated
/// constraints, add them, repeat until none are returned.
///
/// `master` holds the structural rows; `seeds` are tagged rows added before
/// the first solve. The separator must only return constraints violated by
/// more than `1e-7` at the point it is given.
pub fn cutting_plane<T, F>(master: LinearProgram, seeds: Vec<Cut<T>>, mut separator: F, max_rounds: usize) -> Result<CuttingPlaneOutcome<T>>
where
    T: Clone + Eq + Hash,
    F: FnMut(&[f64]) -> Result<Vec<Cut<T>>>,
{
    let structural = master.constraints.len();
    let mut lp = master;
    let mut pool = CutPool::new();
    for cut in seeds {
        let row = cut.constraint.clone();
        if pool.insert(cut) {
            lp.constraints.push(row);
        }
    }
    let mut last_value = f64::NAN;
    for round in 1..=max_rounds {
        let sol = solve_lp(&lp)?;
        last_value = sol.value;
        let violated = separator(&sol.x)?;
        let mut added = 0;
        for cut in violated {
            let row = cut.constraint.clone();
            if pool.insert(cut) {
                lp.constraints.push(row);
                added += 1;
            }
        }
        if added == 0 {
            let cut_duals = sol.duals[structural..].to_vec();
            return Ok(CuttingPlaneOutcome { point: sol.x, value: sol.value, cut_duals, pool, rounds: round });
        }
        log::trace!("cutting-plane round {round}: value {} (+{added} cuts)", sol.value);
    }
    Err(Error::CuttingPlaneLimit { rounds: max_rounds, value: last_value, cuts: pool.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn max_single_bound() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var(1.0, (0.0, INF));
        lp.add_constraint(vec![(x, 1.0)], Relation::Le, 3.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.x[0] - 3.0).abs() < 1e-12);
        assert!((s.value - 3.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_covering_row() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let v = lp.add_nonneg_vars(&[1.0, 1.0]);
        lp.add_constraint(vec![(v[0], 1.0), (v[1], 1.0)], Relation::Ge, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var(1.0, (0.0, INF));
        lp.add_constraint(vec![(x, 1.0)], Relation::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap_err(), LpError::Infeasible);

        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var(1.0, (0.0, INF));
        lp.add_constraint(vec![(x, 1.0)], Relation::Ge, 1.0);
        assert_eq!(solve_lp(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn bounds_equalities_and_free_variables() {
        // min x - y  s.t. x + y = 4, x in [1, 3], y free, y <= 2.5
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var(1.0, (1.0, 3.0));
        let y = lp.add_var(-1.0, (-INF, INF));
        lp.add_constraint(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 4.0);
        lp.add_constraint(vec![(y, 1.0)], Relation::Le, 2.5);
        let s = solve_lp(&lp).unwrap();
        assert!((s.x[0] - 1.5).abs() < 1e-9, "{:?}", s.x);
        assert!((s.x[1] - 2.5).abs() < 1e-9);
        assert!((s.value + 1.0).abs() < 1e-9);
        // Raising the y cap by one moves x down by one: value falls by 2.
        assert!((s.duals[1] + 2.0).abs() < 1e-9, "{:?}", s.duals);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under textbook Dantzig pricing without safeguards.
        let mut lp = LinearProgram::new(Sense::Minimize);
        let v = lp.add_nonneg_vars(&[-0.75, 150.0, -0.02, 6.0]);
        lp.add_constraint(vec![(v[0], 0.25), (v[1], -60.0), (v[2], -0.04), (v[3], 9.0)], Relation::Le, 0.0);
        lp.add_constraint(vec![(v[0], 0.5), (v[1], -90.0), (v[2], -0.02), (v[3], 3.0)], Relation::Le, 0.0);
        lp.add_constraint(vec![(v[2], 1.0)], Relation::Le, 1.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.value + 0.05).abs() < 1e-9, "{}", s.value);
    }

    #[test]
    fn cutting_plane_with_everything_present_takes_one_round() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let v = lp.add_nonneg_vars(&[1.0, 1.0]);
        lp.add_constraint(vec![(v[0], 1.0), (v[1], 2.0)], Relation::Le, 4.0);
        lp.add_constraint(vec![(v[0], 3.0), (v[1], 1.0)], Relation::Le, 6.0);
        let out = cutting_plane::<u32, _>(lp, Vec::new(), |_| Ok(Vec::new()), 10).unwrap();
        assert_eq!(out.rounds, 1);
        assert!((out.value - 2.8).abs() < 1e-9);
    }

    #[test]
    fn cutting_plane_adds_violated_rows() {
        // max x + y over the unit disk's circumscribed polygon, generated lazily.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let v = lp.add_nonneg_vars(&[1.0, 1.0]);
        lp.add_constraint(vec![(v[0], 1.0)], Relation::Le, 10.0);
        lp.add_constraint(vec![(v[1], 1.0)], Relation::Le, 10.0);
        let angles: Vec<f64> = (0..=16).map(|k| k as f64 * std::f64::consts::FRAC_PI_2 / 16.0).collect();
        let out = cutting_plane(
            lp,
            Vec::new(),
            |x| {
                Ok(angles
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.cos() * x[0] + a.sin() * x[1] > 1.0 + 1e-7)
                    .map(|(k, a)| Cut {
                        constraint: Constraint { coeffs: vec![(0, a.cos()), (1, a.sin())], relation: Relation::Le, rhs: 1.0 },
                        tag: k,
                    })
                    .collect())
            },
            100,
        )
        .unwrap();
        assert!(out.rounds > 1);
        assert!((out.value - 2f64.sqrt()).abs() < 1e-9, "{}", out.value);
        for a in &angles {
            assert!(a.cos() * out.point[0] + a.sin() * out.point[1] <= 1.0 + 1e-7);
        }
    }

    #[test]
    fn cutting_plane_cap() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var(1.0, (0.0, 10.0));
        let mut k = 0u32;
        let err = cutting_plane(
            lp,
            Vec::new(),
            |_| {
                k += 1;
                Ok(vec![Cut { constraint: Constraint { coeffs: vec![(x, 1.0)], relation: Relation::Le, rhs: 10.0 - k as f64 * 0.1 }, tag: k }])
            },
            5,
        )
        .unwrap_err();
        assert!(matches!(err, Error::CuttingPlaneLimit { rounds: 5, .. }));
    }
}
