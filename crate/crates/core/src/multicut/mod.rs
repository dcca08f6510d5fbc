//! Universal stochastic multicut on trees with independently activated
//! terminal pairs: the rent-or-buy LP and its rounding.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lpcore::{solve_lp, LinearProgram, Relation, Sense};
use crate::model::{Distribution, ElementSet};

const TIGHT_TOL: f64 = 1e-9;

const NOT_A_TREE: &str = "multicut on general graphs needs a Räcke tree decomposition, which is not implemented";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub s: usize,
    pub t: usize,
    pub p: f64,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    nodes: usize,
    edges: Vec<Edge>,
    pairs: Vec<Pair>,
}

/// A tree with edge costs and terminal pairs ("clients").
#[derive(Debug, Clone, PartialEq)]
pub struct McTreeInstance {
    nodes: usize,
    edges: Vec<Edge>,
    pairs: Vec<Pair>,
    /// `(parent, edge id)` per node when rooted at node 0.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    paths: Vec<Vec<usize>>,
}

impl McTreeInstance {
    pub fn new(nodes: usize, edges: Vec<Edge>, pairs: Vec<Pair>) -> Result<Self> {
        if nodes == 0 {
            return Err(invalid("a tree needs at least one node"));
        }
        if edges.len() != nodes - 1 {
            return Err(invalid(format!("a tree on {nodes} nodes has {} edges, got {}; {NOT_A_TREE}", nodes - 1, edges.len())));
        }
        let mut adj = vec![Vec::new(); nodes];
        for (id, e) in edges.iter().enumerate() {
            if e.u >= nodes || e.v >= nodes || e.u == e.v {
                return Err(invalid(format!("edge {id} ({}, {}) is not a valid tree edge", e.u, e.v)));
            }
            if !(e.cost.is_finite() && e.cost >= 0.0) {
                return Err(invalid(format!("edge {id} has invalid cost {}", e.cost)));
            }
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        let mut parent = vec![None; nodes];
        let mut depth = vec![usize::MAX; nodes];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &(y, id) in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, id));
                    queue.push_back(y);
                }
            }
        }
        if let Some(x) = depth.iter().position(|&d| d == usize::MAX) {
            return Err(invalid(format!("graph is not a tree: node {x} is unreachable from node 0; {NOT_A_TREE}")));
        }
        for (c, pr) in pairs.iter().enumerate() {
            if pr.s >= nodes || pr.t >= nodes || pr.s == pr.t {
                return Err(invalid(format!("pair {c} ({}, {}) needs two distinct nodes of the tree", pr.s, pr.t)));
            }
            if !(0.0..=1.0).contains(&pr.p) {
                return Err(invalid(format!("pair {c} has activation probability {} outside [0, 1]", pr.p)));
            }
        }
        let mut inst = Self { nodes, edges, pairs, parent, depth, paths: Vec::new() };
        inst.paths = (0..inst.pairs.len()).map(|c| inst.compute_path(inst.pairs[c].s, inst.pairs[c].t)).collect();
        Ok(inst)
    }

    fn compute_path(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, id) = self.parent[a].expect("non-root");
                up.push(id);
                a = p;
            } else {
                let (p, id) = self.parent[b].expect("non-root");
                down.push(id);
                b = p;
            }
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// Highest node of the path between the terminals of pair `c`.
    fn apex(&self, c: usize) -> usize {
        let (mut a, mut b) = (self.pairs[c].s, self.pairs[c].t);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a].unwrap().0;
            } else {
                b = self.parent[b].unwrap().0;
            }
        }
        a
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Edge ids of the unique path of pair `c`.
    pub fn path(&self, c: usize) -> &[usize] {
        &self.paths[c]
    }

    pub fn distribution(&self) -> Result<Distribution> {
        Distribution::independent(self.pairs.iter().map(|p| p.p).collect())
    }

    /// Lowest-cost edge of the path of `c`, lowest id on ties.
    pub fn cheapest_path_edge(&self, c: usize) -> usize {
        *self.paths[c]
            .iter()
            .min_by(|&&a, &&b| self.edges[a].cost.total_cmp(&self.edges[b].cost).then(a.cmp(&b)))
            .expect("paths are nonempty")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile = serde_json::from_str(text)?;
        Self::new(file.nodes, file.edges, file.pairs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TreeFile { nodes: self.nodes, edges: self.edges.clone(), pairs: self.pairs.clone() })
            .expect("instance serializes")
    }
}

/// `φ(c)`: the edges charged to client `c`; must meet its path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McMapping {
    pub cuts: Vec<Vec<usize>>,
}

impl McMapping {
    pub fn validate(&self, inst: &McTreeInstance) -> Result<()> {
        if self.cuts.len() != inst.pairs.len() {
            let c = self.cuts.len().min(inst.pairs.len());
            return Err(Error::Infeasible(format!("pair {c} has no cut")));
        }
        for (c, cut) in self.cuts.iter().enumerate() {
            if let Some(&e) = cut.iter().find(|&&e| e >= inst.edges.len()) {
                return Err(invalid(format!("pair {c} uses unknown edge {e}")));
            }
            if !cut.iter().any(|e| inst.paths[c].contains(e)) {
                return Err(Error::Infeasible(format!("pair {c} ({}, {}) is not separated by its cut", inst.pairs[c].s, inst.pairs[c].t)));
            }
        }
        Ok(())
    }

    /// `Σ_e c_e·g({c : e ∈ φ(c)})`.
    pub fn expected_cost(&self, inst: &McTreeInstance) -> Result<f64> {
        self.validate(inst)?;
        let dist = inst.distribution()?;
        let eval = dist.evaluator()?;
        let mut users = vec![ElementSet::new(); inst.edges.len()];
        for (c, cut) in self.cuts.iter().enumerate() {
            for &e in cut {
                users[e].insert(c);
            }
        }
        Ok(users.iter().enumerate().map(|(e, b)| inst.edges[e].cost * eval.g(b)).sum())
    }

    pub fn to_json(&self, inst: &McTreeInstance) -> String {
        let cuts: serde_json::Map<String, serde_json::Value> = self
            .cuts
            .iter()
            .enumerate()
            .map(|(c, cut)| {
                let ends: Vec<[usize; 2]> = cut.iter().map(|&e| [inst.edges[e].u, inst.edges[e].v]).collect();
                (c.to_string(), serde_json::to_value(ends).expect("edge list"))
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "cuts": cuts })).expect("mapping serializes")
    }

    pub fn from_json(text: &str, inst: &McTreeInstance) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            cuts: std::collections::HashMap<String, Vec<[usize; 2]>>,
        }
        let file: File = serde_json::from_str(text)?;
        let mut cuts = Vec::with_capacity(inst.pairs.len());
        for c in 0..inst.pairs.len() {
            let ends = file.cuts.get(&c.to_string()).ok_or_else(|| Error::Infeasible(format!("pair {c} has no cut")))?;
            let ids = ends
                .iter()
                .map(|&[u, v]| {
                    inst.edges
                        .iter()
                        .position(|e| (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u))
                        .ok_or_else(|| invalid(format!("({u}, {v}) is not an edge of the tree")))
                })
                .collect::<Result<Vec<_>>>()?;
            cuts.push(ids);
        }
        Ok(Self { cuts })
    }
}

/// Optimal buy fractions `x[e]` and rent fractions `xbar[c][e]`.
#[derive(Debug, Clone)]
pub struct McFractional {
    pub x: Vec<f64>,
    pub xbar: Vec<Vec<f64>>,
    pub value: f64,
}

/// Minimizes `Σ_e c_e·x^e + Σ_e c_e Σ_c p_c·x̄_c^e` subject to
/// `Σ_{e∈P_c} (x^e + x̄_c^e) ≥ 1` for every pair.
pub fn solve_lp_mc_tree(inst: &McTreeInstance) -> Result<McFractional> {
    let m = inst.edges.len();
    let k = inst.pairs.len();
    let inf = f64::INFINITY;
    let mut lp = LinearProgram::new(Sense::Minimize);
    let buy: Vec<usize> = (0..m).map(|e| lp.add_named_var(format!("buy_{e}"), inst.edges[e].cost, (0.0, inf))).collect();
    let mut rent = vec![vec![None; m]; k];
    for c in 0..k {
        for &e in &inst.paths[c] {
            rent[c][e] = Some(lp.add_named_var(format!("rent_{c}_{e}"), inst.edges[e].cost * inst.pairs[c].p, (0.0, inf)));
        }
        let coeffs = inst.paths[c].iter().flat_map(|&e| [(buy[e], 1.0), (rent[c][e].unwrap(), 1.0)]).collect();
        lp.add_constraint(coeffs, Relation::Ge, 1.0);
    }
    let sol = solve_lp(&lp)?;
    Ok(McFractional {
        x: buy.iter().map(|&j| sol.x[j].max(0.0)).collect(),
        xbar: rent.iter().map(|row| row.iter().map(|j| j.map_or(0.0, |j| sol.x[j].max(0.0))).collect()).collect(),
        value: sol.value,
    })
}

/// Optimum of the classical multicut LP on the tree for the pairs `clients`.
pub fn multicut_lp_value(inst: &McTreeInstance, clients: &[usize]) -> Result<f64> {
    if clients.is_empty() {
        return Ok(0.0);
    }
    let mut lp = LinearProgram::new(Sense::Minimize);
    let vars = lp.add_nonneg_vars(&inst.edges.iter().map(|e| e.cost).collect::<Vec<_>>());
    for &c in clients {
        lp.add_constraint(inst.paths[c].iter().map(|&e| (vars[e], 1.0)).collect(), Relation::Ge, 1.0);
    }
    Ok(solve_lp(&lp)?.value)
}

/// Primal-dual multicut on a tree for the pairs `clients`: visit nodes by
/// decreasing depth, raise the dual of each uncut pair whose path peaks there
/// until an edge goes tight, then drop redundant tight edges in reverse order.
/// Returns edge ids in increasing order.
pub fn gvy_tree_multicut(inst: &McTreeInstance, clients: &[usize]) -> Vec<usize> {
    let m = inst.edges.len();
    let mut residual: Vec<f64> = inst.edges.iter().map(|e| e.cost).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut in_cut = vec![false; m];
    let cut_by = |c: usize, in_cut: &[bool]| inst.paths[c].iter().any(|&e| in_cut[e]);

    let mut by_node: Vec<Vec<usize>> = vec![Vec::new(); inst.nodes];
    for &c in clients {
        by_node[inst.apex(c)].push(c);
    }
    let mut order: Vec<usize> = (0..inst.nodes).collect();
    order.sort_by(|&a, &b| inst.depth[b].cmp(&inst.depth[a]).then(a.cmp(&b)));
    for v in order {
        for &c in &by_node[v] {
            if cut_by(c, &in_cut) {
                continue;
            }
            let raise = inst.paths[c].iter().map(|&e| residual[e]).fold(f64::INFINITY, f64::min);
            let mut tight: Vec<usize> = Vec::new();
            for &e in &inst.paths[c] {
                residual[e] -= raise;
                if residual[e] <= TIGHT_TOL && !in_cut[e] {
                    tight.push(e);
                }
            }
            tight.sort_unstable();
            for e in tight {
                in_cut[e] = true;
                chosen.push(e);
            }
        }
    }
    for &e in chosen.iter().rev() {
        in_cut[e] = false;
        if clients.iter().any(|&c| !cut_by(c, &in_cut)) {
            in_cut[e] = true;
        }
    }
    (0..m).filter(|&e| in_cut[e]).collect()
}

/// Big side: bought mass on the path `Σ_{e∈P_c} x^e ≥ 2/3`; everyone else
/// is on the small side.
pub fn split_pairs(inst: &McTreeInstance, frac: &McFractional) -> (Vec<usize>, Vec<usize>) {
    (0..inst.pairs.len()).partition(|&c| inst.paths[c].iter().map(|&e| frac.x[e]).sum::<f64>() >= 2.0 / 3.0 - 1e-9)
}

/// Rounds an LP solution: big-side pairs share a primal-dual multicut (each
/// gets every bought edge on its path), small-side pairs rent their cheapest
/// path edge.
pub fn round_mc_tree(inst: &McTreeInstance, frac: &McFractional) -> McMapping {
    let (big, _) = split_pairs(inst, frac);
    let bought = gvy_tree_multicut(inst, &big);
    let cuts = (0..inst.pairs.len())
        .map(|c| {
            if big.contains(&c) {
                bought.iter().copied().filter(|e| inst.paths[c].contains(e)).collect()
            } else {
                vec![inst.cheapest_path_edge(c)]
            }
        })
        .collect();
    McMapping { cuts }
}

/// LP solve followed by [`round_mc_tree`].
pub fn solve_mc_tree(inst: &McTreeInstance) -> Result<(McMapping, McFractional)> {
    let frac = solve_lp_mc_tree(inst)?;
    Ok((round_mc_tree(inst, &frac), frac))
}
