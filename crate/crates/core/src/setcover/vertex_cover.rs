use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{CoverSet, ElementSet, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
}

/// Vertex cover input: edges are the requests, vertices the sets. Vertex
/// costs default to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCoverGraph {
    pub nodes: usize,
    pub edges: Vec<GraphEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_costs: Option<Vec<f64>>,
}

impl VertexCoverGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    /// Lowers to set cover: element `i` is edge `i`, set `V{v}` holds the
    /// edges incident to `v`. Every element has frequency 2.
    pub fn to_instance(&self) -> Result<Instance> {
        let costs = match &self.node_costs {
            Some(c) if c.len() != self.nodes => {
                return Err(invalid(format!("node_costs has {} entries for {} nodes", c.len(), self.nodes)));
            }
            Some(c) => c.clone(),
            None => vec![1.0; self.nodes],
        };
        let mut members = vec![ElementSet::new(); self.nodes];
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.nodes || e.v >= self.nodes || e.u == e.v {
                return Err(invalid(format!("edge {i} ({}, {}) must join two distinct vertices", e.u, e.v)));
            }
            members[e.u].insert(i);
            members[e.v].insert(i);
        }
        let sets = members
            .into_iter()
            .zip(costs)
            .enumerate()
            .map(|(v, (elements, cost))| CoverSet { id: format!("V{v}"), cost, elements })
            .collect();
        Instance::new(self.edges.len(), sets, None)
    }
}
