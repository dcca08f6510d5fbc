//! Universal stochastic set cover and its relatives: the configuration LP,
//! randomized and frequency rounding, greedy multicover, non-metric facility
//! location (set cover with connection costs) and sample average approximation.

mod conf_lp;
mod greedy;
mod rounding;
mod saa;
mod vertex_cover;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{ElementSet, Evaluator, Instance};

pub use conf_lp::{normalize_columns, separation_sc, solve_conf_lp, Violation, SEPARATION_TOL};
pub use greedy::{greedy_multicover, harmonic, Certificate, GreedyOutcome};
pub use rounding::{randomized_bound, round_frequency, round_randomized, samples_per_set, Rounded, RETRY_CAP};
pub use saa::{saa_sample_count, saa_solve, Inner, SaaOutcome, SampleCount, SAA_DEFAULT_EPSILON, SAA_SAMPLE_CAP};
pub use vertex_cover::{GraphEdge, VertexCoverGraph};

/// Per (element, set) connection cost `d(u, S)`, stored as `d[u][s]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionCosts {
    pub d: Vec<Vec<f64>>,
}

impl ConnectionCosts {
    pub fn new(d: Vec<Vec<f64>>) -> Self {
        Self { d }
    }

    pub fn get(&self, u: usize, s: usize) -> f64 {
        self.d[u][s]
    }

    pub fn validate_for(&self, inst: &Instance) -> Result<()> {
        if self.d.len() != inst.n() {
            return Err(invalid(format!("connection costs have {} rows, expected {}", self.d.len(), inst.n())));
        }
        for (u, row) in self.d.iter().enumerate() {
            if row.len() != inst.m() {
                return Err(invalid(format!("connection row {u} has {} entries, expected {}", row.len(), inst.m())));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(invalid(format!("connection cost {v} for element {u} is not a finite nonnegative number")));
            }
        }
        Ok(())
    }
}

/// One configuration-LP column: set `set` serves exactly the elements `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub set: usize,
    pub b: ElementSet,
    pub y: f64,
}

#[derive(Debug, Clone)]
pub struct FractionalCover {
    pub columns: Vec<Column>,
    /// Element duals `α_u` of the final master.
    pub duals: Vec<f64>,
    /// Set duals `z_S` (all zero outside multicover mode).
    pub set_duals: Vec<f64>,
    /// `Σ c(S)·y·g(B)` plus connection terms over the columns.
    pub value: f64,
    /// Objective of the final master (dual) program.
    pub dual_value: f64,
    pub rounds: usize,
    pub cuts: usize,
}

#[derive(Serialize)]
struct ColumnFile<'a> {
    set: &'a str,
    #[serde(rename = "B")]
    b: Vec<usize>,
    y: f64,
}

#[derive(Serialize)]
struct FractionalFile<'a> {
    value: f64,
    columns: Vec<ColumnFile<'a>>,
    duals: &'a [f64],
}

impl FractionalCover {
    /// Covering mass `Σ_{B∋u} y` per element.
    pub fn coverage(&self, n: usize) -> Vec<f64> {
        let mut mass = vec![0.0; n];
        for col in &self.columns {
            for u in col.b.iter() {
                mass[u] += col.y;
            }
        }
        mass
    }

    pub fn to_json(&self, inst: &Instance) -> Result<String> {
        let file = FractionalFile {
            value: self.value,
            columns: self
                .columns
                .iter()
                .map(|c| ColumnFile { set: &inst.set(c.set).id, b: c.b.to_vec(), y: c.y })
                .collect(),
            duals: &self.duals,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

/// Cost of serving `b` from set `s`: `c(S)·g(B) + Σ_{u∈B} d(u,S)·g({u})`.
pub fn column_cost(inst: &Instance, eval: &Evaluator<'_>, conn: Option<&ConnectionCosts>, s: usize, b: &ElementSet) -> f64 {
    let mut cost = inst.set(s).cost * eval.g(b);
    if let Some(conn) = conn {
        cost += b.iter().map(|u| conn.get(u, s) * eval.g(&ElementSet::singleton(u))).sum::<f64>();
    }
    cost
}

/// A universal mapping: element `u` goes to the sets `assignment[u]` (indices
/// into the instance's set list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub assignment: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MappingFile {
    assignment: serde_json::Map<String, serde_json::Value>,
}

impl Mapping {
    pub fn single(sets: Vec<usize>) -> Self {
        Self { assignment: sets.into_iter().map(|s| vec![s]).collect() }
    }

    /// Elements assigned to each set.
    pub fn preimages(&self, m: usize) -> Vec<ElementSet> {
        let mut pre = vec![ElementSet::new(); m];
        for (u, sets) in self.assignment.iter().enumerate() {
            for &s in sets {
                pre[s].insert(u);
            }
        }
        pre
    }

    /// Checks that every element gets `r(u)` distinct sets that contain it.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.assignment.len() != inst.n() {
            let u = self.assignment.len().min(inst.n());
            return Err(Error::Infeasible(format!("element {u} is not assigned")));
        }
        for (u, sets) in self.assignment.iter().enumerate() {
            let r = inst.requirement(u) as usize;
            let mut distinct = sets.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < r {
                return Err(Error::Infeasible(format!(
                    "element {u} is assigned {} distinct set(s) but requires {r}",
                    distinct.len()
                )));
            }
            if distinct.len() != sets.len() || sets.len() != r {
                return Err(invalid(format!("element {u} must be assigned exactly {r} distinct sets")));
            }
            for &s in sets {
                if s >= inst.m() {
                    return Err(invalid(format!("element {u} is assigned to unknown set index {s}")));
                }
                if !inst.set(s).elements.contains(u) {
                    return Err(Error::Infeasible(format!("element {u} is not contained in set {}", inst.set(s).id)));
                }
            }
        }
        Ok(())
    }

    /// Exact expected cost `Σ_S c(S)·g(φ⁻¹(S))` plus connection terms.
    pub fn expected_cost(&self, inst: &Instance, eval: &Evaluator<'_>, conn: Option<&ConnectionCosts>) -> Result<f64> {
        self.validate(inst)?;
        Ok(self
            .preimages(inst.m())
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(s, b)| column_cost(inst, eval, conn, s, b))
            .sum())
    }

    pub fn to_json(&self, inst: &Instance) -> String {
        let assignment = self
            .assignment
            .iter()
            .enumerate()
            .map(|(u, sets)| {
                let ids: Vec<String> = sets.iter().map(|&s| inst.set(s).id.clone()).collect();
                (u.to_string(), ids.into())
            })
            .collect();
        serde_json::to_string_pretty(&MappingFile { assignment }).expect("mapping serializes")
    }

    /// Parses a mapping file. Elements absent from the file get an empty
    /// assignment, which `validate` reports.
    pub fn from_json(text: &str, inst: &Instance) -> Result<Self> {
        let file: MappingFile = serde_json::from_str(text)?;
        let mut assignment = vec![Vec::new(); inst.n()];
        for (key, ids) in file.assignment {
            let ids: Vec<String> = serde_json::from_value(ids)?;
            let u: usize = key.parse().map_err(|_| invalid(format!("element key {key:?} is not an integer")))?;
            if u >= inst.n() {
                return Err(invalid(format!("element {u} is outside the universe of size {}", inst.n())));
            }
            assignment[u] = ids
                .iter()
                .map(|id| inst.set_index(id).ok_or_else(|| invalid(format!("unknown set id {id:?}"))))
                .collect::<Result<_>>()?;
        }
        Ok(Self { assignment })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Distribution;

    #[test]
    fn union_semantics() {
        let inst = Instance::from_sets(2, vec![(1.0, vec![0, 1])], None).unwrap();
        let dist = Distribution::scenarios([(0.5, vec![0]), (0.5, vec![1])]).unwrap();
        let ev = dist.evaluator().unwrap();
        let phi = Mapping::single(vec![0, 0]);
        assert!((phi.expected_cost(&inst, &ev, None).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_set_cost() {
        let inst = Instance::from_sets(1, vec![(2.0, vec![0])], None).unwrap();
        let dist = Distribution::scenarios([(0.5, vec![0]), (0.5, vec![])]).unwrap();
        let ev = dist.evaluator().unwrap();
        assert!((Mapping::single(vec![0]).expected_cost(&inst, &ev, None).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_and_missing_element() {
        let inst = Instance::from_sets(2, vec![(1.0, vec![0]), (1.0, vec![0, 1])], None).unwrap();
        let phi = Mapping::single(vec![0, 1]);
        let back = Mapping::from_json(&phi.to_json(&inst), &inst).unwrap();
        assert_eq!(back, phi);
        let partial = Mapping::from_json(r#"{"assignment": {"0": ["S0"]}}"#, &inst).unwrap();
        let err = partial.validate(&inst).unwrap_err();
        assert!(matches!(err, Error::Infeasible(ref m) if m.contains("element 1")), "{err}");
    }
}
