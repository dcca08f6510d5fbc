//! Seeded random instances for tests, benchmarks and the demo.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::edgecover::GraphInstance;
use crate::error::Result;
use crate::facility::FlInstance;
use crate::model::{CoverSet, Distribution, ElementSet, Instance, Scenario};
use crate::multicut::{Edge, McTreeInstance, Pair};
use crate::setcover::{GraphEdge, VertexCoverGraph};

fn cost(rng: &mut impl Rng) -> f64 {
    (rng.gen_range(0.5..5.0f64) * 100.0).round() / 100.0
}

/// `m` random sets over `n` elements with requirements up to `max_req`;
/// every element is patched into enough sets to be coverable.
pub fn set_cover(rng: &mut impl Rng, n: usize, m: usize, max_req: u32) -> Result<Instance> {
    let m = m.max(max_req as usize).max(1);
    let mut members: Vec<ElementSet> = (0..m).map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect()).collect();
    let reqs: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=max_req.max(1))).collect();
    for u in 0..n {
        let mut missing: Vec<usize> = (0..m).filter(|&s| !members[s].contains(u)).collect();
        missing.shuffle(rng);
        let have = m - missing.len();
        for &s in missing.iter().take((reqs[u] as usize).saturating_sub(have)) {
            members[s].insert(u);
        }
    }
    let sets = members
        .into_iter()
        .enumerate()
        .map(|(i, elements)| CoverSet { id: format!("S{i}"), cost: cost(rng), elements })
        .collect();
    Instance::new(n, sets, (max_req > 1).then_some(reqs))
}

/// Up to `k` scenarios with random supports and weights.
pub fn scenarios(rng: &mut impl Rng, n: usize, k: usize) -> Result<Distribution> {
    let k = k.max(1);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let list = weights
        .into_iter()
        .map(|w| Scenario { prob: w / total, elements: (0..n).filter(|_| rng.gen_bool(0.4)).collect() })
        .collect();
    Distribution::scenario(list)
}

pub fn independent(rng: &mut impl Rng, n: usize) -> Result<Distribution> {
    Distribution::independent((0..n).map(|_| (rng.gen::<f64>() * 1000.0).round() / 1000.0).collect())
}

/// Random simple graph on `vertices` vertices with at most `max_edges`
/// edges (more if needed so that no vertex is isolated).
pub fn graph(rng: &mut impl Rng, vertices: usize, max_edges: usize) -> Result<GraphInstance> {
    let mut all: Vec<(usize, usize)> = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    let take = rng.gen_range(1..=max_edges.max(1)).min(all.len());
    let mut chosen: Vec<(usize, usize)> = all[..take].to_vec();
    for v in 0..vertices {
        if !chosen.iter().any(|&(a, b)| a == v || b == v) {
            let mut w = rng.gen_range(0..vertices - 1);
            if w >= v {
                w += 1;
            }
            chosen.push((v.min(w), v.max(w)));
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    GraphInstance::new(vertices, chosen.into_iter().map(|(u, v)| Edge { u, v, cost: cost(rng) }).collect())
}

/// Clients and facilities at random points of a 10×10 square, Euclidean
/// distances, random opening costs and activation probabilities.
pub fn metric_facility(rng: &mut impl Rng, clients: usize, facilities: usize) -> Result<FlInstance> {
    let mut point = || (rng.gen_range(0.0..10.0f64), rng.gen_range(0.0..10.0f64));
    let cs: Vec<(f64, f64)> = (0..clients).map(|_| point()).collect();
    let fs: Vec<(f64, f64)> = (0..facilities.max(1)).map(|_| point()).collect();
    let dist = cs.iter().map(|c| fs.iter().map(|f| (c.0 - f.0).hypot(c.1 - f.1)).collect()).collect();
    let open = (0..fs.len()).map(|_| rng.gen_range(0.0..10.0)).collect();
    let probs = (0..clients).map(|_| rng.gen::<f64>()).collect();
    FlInstance::new(probs, open, dist, true)
}

/// Random recursive tree (node `i` hangs below a uniform earlier node) with
/// `pairs` random terminal pairs.
pub fn tree(rng: &mut impl Rng, nodes: usize, pairs: usize) -> Result<McTreeInstance> {
    let nodes = nodes.max(2);
    let edges = (1..nodes).map(|v| Edge { u: rng.gen_range(0..v), v, cost: cost(rng) }).collect();
    let pairs = (0..pairs)
        .map(|_| {
            let s = rng.gen_range(0..nodes);
            let mut t = rng.gen_range(0..nodes - 1);
            if t >= s {
                t += 1;
            }
            Pair { s, t, p: rng.gen::<f64>() }
        })
        .collect();
    McTreeInstance::new(nodes, edges, pairs)
}

/// Random vertex cover graph with up to `max_edges` edges and integer
/// vertex costs in `1..=4`.
pub fn vertex_cover_graph(rng: &mut impl Rng, nodes: usize, max_edges: usize) -> VertexCoverGraph {
    let nodes = nodes.max(2);
    let mut all: Vec<(usize, usize)> = (0..nodes).flat_map(|u| (u + 1..nodes).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    let take = rng.gen_range(1..=max_edges.max(1)).min(all.len());
    let mut edges: Vec<(usize, usize)> = all[..take].to_vec();
    edges.sort_unstable();
    VertexCoverGraph {
        nodes,
        edges: edges.into_iter().map(|(u, v)| GraphEdge { u, v }).collect(),
        node_costs: Some((0..nodes).map(|_| rng.gen_range(1..=4) as f64).collect()),
    }
}
