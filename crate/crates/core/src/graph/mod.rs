//! Graph feature machinery: coin-coin co-mention graph with PageRank, the
//! pump-user affiliation matrix, user-user projection with top-k
//! sparsification and connected components, and linear total-correlation
//! embeddings.

mod affiliation;
mod components;
mod corex;
mod pagerank;

pub use affiliation::{coin_coin_graph, pump_user_matrix, AffiliationMatrix};
pub use components::{
    component_activity_features, user_user_components, ComponentAssignment, UnionFind,
};
pub use corex::{gaussian_tc, linear_corex, CorexModel, CorexOptions};
pub use pagerank::{pagerank, PagerankOptions};

use std::collections::BTreeMap;

/// Undirected weighted graph over string node ids. No self-loops, positive
/// weights, at most one edge per unordered pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedGraph {
    nodes: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    /// Accumulate weight onto the undirected edge (u, v). Self-loops and
    /// non-positive increments are ignored.
    pub fn add_edge_weight(&mut self, u: &str, v: &str, weight: f64) {
        if u == v || weight <= 0.0 {
            return;
        }
        let a = self.add_node(u);
        let b = self.add_node(v);
        let key = (a.min(b), a.max(b));
        *self.edges.entry(key).or_insert(0.0) += weight;
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|s| s.as_str())
    }

    pub fn node_id(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.edges
            .iter()
            .map(move |(&(a, b), &w)| (self.nodes[a].as_str(), self.nodes[b].as_str(), w))
    }

    pub(crate) fn edges_by_index(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.edges.iter().map(|(&k, &w)| (k, w))
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.nodes.len()];
        for (&(a, b), &w) in &self.edges {
            deg[a] += w;
            deg[b] += w;
        }
        deg
    }
}
