use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ElementSet;
use crate::error::{invalid, Error, Result};

/// A covering object: a set of elements bought at `cost` whenever it is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSet {
    pub id: String,
    pub cost: f64,
    pub elements: ElementSet,
}

/// Universe `{0..n-1}`, weighted covering sets and per-element coverage
/// requirements (all 1 for plain set cover).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    sets: Vec<CoverSet>,
    requirements: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    sets: Vec<CoverSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    requirements: Option<Vec<u32>>,
}

impl Instance {
    /// Validates structure (ids in range, unique set ids, finite nonnegative
    /// costs, positive requirements). Coverage feasibility is checked
    /// separately by [`Instance::check_feasible`].
    pub fn new(n: usize, sets: Vec<CoverSet>, requirements: Option<Vec<u32>>) -> Result<Self> {
        let requirements = requirements.unwrap_or_else(|| vec![1; n]);
        if requirements.len() != n {
            return Err(invalid(format!(
                "requirements has length {} but n = {}",
                requirements.len(),
                n
            )));
        }
        if let Some(u) = requirements.iter().position(|&r| r == 0) {
            return Err(invalid(format!("requirement of element {u} must be positive")));
        }
        let mut seen = HashSet::new();
        for s in &sets {
            if !seen.insert(s.id.as_str()) {
                return Err(invalid(format!("duplicate set id {:?}", s.id)));
            }
            if !(s.cost.is_finite() && s.cost >= 0.0) {
                return Err(invalid(format!("set {:?} has invalid cost {}", s.id, s.cost)));
            }
            if s.elements.bound() > n {
                return Err(invalid(format!(
                    "set {:?} contains element {} outside the universe of size {}",
                    s.id,
                    s.elements.bound() - 1,
                    n
                )));
            }
        }
        Ok(Self { n, sets, requirements })
    }

    /// Builds an instance with generated ids `S0, S1, ..`.
    pub fn from_sets(n: usize, sets: Vec<(f64, Vec<usize>)>, requirements: Option<Vec<u32>>) -> Result<Self> {
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(i, (cost, elems))| CoverSet {
                id: format!("S{i}"),
                cost,
                elements: elems.into_iter().collect(),
            })
            .collect();
        Self::new(n, sets, requirements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[CoverSet] {
        &self.sets
    }

    pub fn set(&self, idx: usize) -> &CoverSet {
        &self.sets[idx]
    }

    pub fn requirements(&self) -> &[u32] {
        &self.requirements
    }

    pub fn requirement(&self, u: usize) -> u32 {
        self.requirements[u]
    }

    pub fn is_multicover(&self) -> bool {
        self.requirements.iter().any(|&r| r > 1)
    }

    pub fn set_index(&self, id: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.id == id)
    }

    /// Indices of the sets containing `u`, in id order.
    pub fn sets_containing(&self, u: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&i| self.sets[i].elements.contains(u)).collect()
    }

    pub fn frequency(&self, u: usize) -> usize {
        self.sets.iter().filter(|s| s.elements.contains(u)).count()
    }

    pub fn max_frequency(&self) -> usize {
        (0..self.n).map(|u| self.frequency(u)).max().unwrap_or(0)
    }

    pub fn max_cost(&self) -> f64 {
        self.sets.iter().map(|s| s.cost).fold(0.0, f64::max)
    }

    /// Every element must lie in at least `r(u)` distinct sets.
    pub fn check_feasible(&self) -> Result<()> {
        for u in 0..self.n {
            let f = self.frequency(u);
            if f < self.requirements[u] as usize {
                return Err(Error::Infeasible(format!(
                    "element {u} lies in {f} sets but must be covered {} times",
                    self.requirements[u]
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        Self::new(file.n, file.sets, file.requirements)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            n: self.n,
            sets: self.sets.clone(),
            requirements: if self.is_multicover() { Some(self.requirements.clone()) } else { None },
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }
}
