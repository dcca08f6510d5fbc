//! Universal stochastic edge cover, solved exactly by reduction to a
//! deterministic weighted edge cover.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{CoverSet, Distribution, ElementSet, Evaluator, Instance};
use crate::multicut::Edge;

/// Largest vertex count accepted by [`solve_edge_cover_exact`].
pub const EXACT_MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub vertices: usize,
    pub edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    nodes: usize,
    edges: Vec<Edge>,
}

impl GraphInstance {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        for (id, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices || e.u == e.v {
                return Err(invalid(format!("edge {id} ({}, {}) must join two distinct vertices of the graph", e.u, e.v)));
            }
            if !(e.cost.is_finite() && e.cost >= 0.0) {
                return Err(invalid(format!("edge {id} has invalid cost {}", e.cost)));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn check_coverable(&self) -> Result<()> {
        let mut deg = vec![0usize; self.vertices];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        match deg.iter().position(|&d| d == 0) {
            Some(v) => Err(Error::Infeasible(format!("vertex {v} has no incident edge"))),
            None => Ok(()),
        }
    }

    /// Vertices as elements, edges as two-element sets `E0, E1, ..`.
    pub fn to_set_cover(&self) -> Result<Instance> {
        let sets = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| CoverSet { id: format!("E{id}"), cost: e.cost, elements: [e.u, e.v].into_iter().collect() })
            .collect();
        Instance::new(self.vertices, sets, None)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::new(file.nodes, file.edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile { nodes: self.vertices, edges: self.edges.clone() }).expect("graph serializes")
    }
}

/// Where an edge of the reduced graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Original edge serving both endpoints.
    Both(usize),
    /// Original edge serving only the given endpoint (an edge to the gadget).
    Single { edge: usize, vertex: usize },
    Gadget,
}

#[derive(Debug, Clone)]
pub struct Reduced {
    /// Original vertices, then gadget vertices `a = n` and `b = n + 1`.
    pub graph: GraphInstance,
    pub origin: Vec<Origin>,
}

/// Deterministic instance whose minimum edge cover has the universal
/// optimum's cost: edge `uv` costs `c·g({u,v})`, every vertex `v` gets an
/// edge to gadget vertex `a` costing the cheapest `c_e·g({v})` over incident
/// `e`, and `a`, `b` are joined at cost 0. Parallel edges keep the cheapest.
pub fn reduce_edge_cover(g: &GraphInstance, dist: &Distribution) -> Result<Reduced> {
    g.check_coverable()?;
    dist.validate_for(g.vertices)?;
    let eval = dist.evaluator()?;
    let n = g.vertices;
    let (a, b) = (n, n + 1);
    let mut edges = Vec::new();
    let mut origin = Vec::new();

    let mut best_pair: std::collections::BTreeMap<(usize, usize), usize> = std::collections::BTreeMap::new();
    for (id, e) in g.edges.iter().enumerate() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        let keep = best_pair.get(&key).map_or(true, |&old| e.cost < g.edges[old].cost);
        if keep {
            best_pair.insert(key, id);
        }
    }
    for (&(u, v), &id) in &best_pair {
        edges.push(Edge { u, v, cost: g.edges[id].cost * eval.g(&[u, v].into_iter().collect()) });
        origin.push(Origin::Both(id));
    }
    for vtx in 0..n {
        let single = ElementSet::singleton(vtx);
        let gv = eval.g(&single);
        let cheapest = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.u == vtx || e.v == vtx)
            .min_by(|(i, x), (j, y)| x.cost.total_cmp(&y.cost).then(i.cmp(j)))
            .map(|(i, _)| i)
            .expect("coverable");
        edges.push(Edge { u: vtx, v: a, cost: g.edges[cheapest].cost * gv });
        origin.push(Origin::Single { edge: cheapest, vertex: vtx });
    }
    edges.push(Edge { u: a, v: b, cost: 0.0 });
    origin.push(Origin::Gadget);
    Ok(Reduced { graph: GraphInstance { vertices: n + 2, edges }, origin })
}

/// Minimum-cost edge cover by dynamic programming over covered-vertex sets:
/// the lowest uncovered vertex must take one of its edges.
pub fn solve_edge_cover_exact(g: &GraphInstance) -> Result<(Vec<usize>, f64)> {
    if g.vertices > EXACT_MAX_VERTICES {
        return Err(Error::TooLarge { size: g.vertices as f64, cap: EXACT_MAX_VERTICES as f64 });
    }
    g.check_coverable()?;
    let n = g.vertices;
    let full = (1usize << n) - 1;
    let mut incident = vec![Vec::new(); n];
    for (id, e) in g.edges.iter().enumerate() {
        incident[e.u].push(id);
        incident[e.v].push(id);
    }
    // best[mask]: cheapest cover of the complement of `mask`.
    let mut best = vec![f64::INFINITY; full + 1];
    let mut choice = vec![usize::MAX; full + 1];
    best[full] = 0.0;
    for mask in (0..full).rev() {
        let low = (!mask).trailing_zeros() as usize;
        for &id in &incident[low] {
            let e = &g.edges[id];
            let next = mask | (1 << e.u) | (1 << e.v);
            let cost = e.cost + best[next];
            if cost < best[mask] - 1e-15 {
                best[mask] = cost;
                choice[mask] = id;
            }
        }
    }
    let mut picked = Vec::new();
    let mut mask = 0usize;
    while mask != full {
        let id = choice[mask];
        picked.push(id);
        mask |= (1 << g.edges[id].u) | (1 << g.edges[id].v);
    }
    picked.sort_unstable();
    picked.dedup();
    Ok((picked, best[0]))
}

/// Vertex to covering edge (original edge ids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCoverMapping {
    pub assignment: Vec<usize>,
}

impl EdgeCoverMapping {
    pub fn validate(&self, g: &GraphInstance) -> Result<()> {
        if self.assignment.len() != g.vertices {
            let v = self.assignment.len().min(g.vertices);
            return Err(Error::Infeasible(format!("vertex {v} is not assigned")));
        }
        for (v, &id) in self.assignment.iter().enumerate() {
            let e = g.edges.get(id).ok_or_else(|| invalid(format!("vertex {v} is assigned to unknown edge {id}")))?;
            if e.u != v && e.v != v {
                return Err(Error::Infeasible(format!("vertex {v} is not an endpoint of edge ({}, {})", e.u, e.v)));
            }
        }
        Ok(())
    }

    /// `Σ_e c_e·g(φ⁻¹(e))`.
    pub fn expected_cost(&self, g: &GraphInstance, eval: &Evaluator<'_>) -> Result<f64> {
        self.validate(g)?;
        let mut pre = vec![ElementSet::new(); g.edges.len()];
        for (v, &id) in self.assignment.iter().enumerate() {
            pre[id].insert(v);
        }
        Ok(pre.iter().enumerate().map(|(id, b)| g.edges[id].cost * eval.g(b)).sum())
    }

    pub fn to_json(&self, g: &GraphInstance) -> String {
        let assignment: serde_json::Map<String, serde_json::Value> = self
            .assignment
            .iter()
            .enumerate()
            .map(|(v, &id)| (v.to_string(), serde_json::json!([g.edges[id].u, g.edges[id].v])))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "assignment": assignment })).expect("mapping serializes")
    }

    /// Parses `{"assignment": {"v": [u, w]}}`; among parallel edges the
    /// cheapest (then lowest id) is taken.
    pub fn from_json(text: &str, g: &GraphInstance) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            assignment: std::collections::HashMap<String, [usize; 2]>,
        }
        let file: File = serde_json::from_str(text)?;
        let mut assignment = Vec::with_capacity(g.vertices);
        for v in 0..g.vertices {
            let [x, y] = *file.assignment.get(&v.to_string()).ok_or_else(|| Error::Infeasible(format!("vertex {v} is not assigned")))?;
            let id = g
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| (e.u, e.v) == (x, y) || (e.u, e.v) == (y, x))
                .min_by(|(i, a), (j, b)| a.cost.total_cmp(&b.cost).then(i.cmp(j)))
                .map(|(i, _)| i)
                .ok_or_else(|| invalid(format!("({x}, {y}) is not an edge of the graph")))?;
            assignment.push(id);
        }
        Ok(Self { assignment })
    }
}

#[derive(Debug, Clone)]
pub struct EdgeCoverSolution {
    pub mapping: EdgeCoverMapping,
    pub cost: f64,
    /// Optimum of the reduced deterministic instance.
    pub reduced_cost: f64,
}

/// Optimal universal edge cover: reduce, solve the deterministic instance
/// exactly, and read the mapping off the chosen edges (a vertex takes the
/// lowest-id chosen edge serving both endpoints, else its gadget edge).
pub fn universal_edge_cover(g: &GraphInstance, dist: &Distribution) -> Result<EdgeCoverSolution> {
    let reduced = reduce_edge_cover(g, dist)?;
    let (chosen, reduced_cost) = solve_edge_cover_exact(&reduced.graph)?;
    let mut assignment = vec![usize::MAX; g.vertices];
    for &id in &chosen {
        if let Origin::Both(e) = reduced.origin[id] {
            for v in [g.edges[e].u, g.edges[e].v] {
                if assignment[v] == usize::MAX {
                    assignment[v] = e;
                }
            }
        }
    }
    for &id in &chosen {
        if let Origin::Single { edge, vertex } = reduced.origin[id] {
            if assignment[vertex] == usize::MAX {
                assignment[vertex] = edge;
            }
        }
    }
    let mapping = EdgeCoverMapping { assignment };
    let cost = mapping.expected_cost(g, &dist.evaluator()?)?;
    Ok(EdgeCoverSolution { mapping, cost, reduced_cost })
}
