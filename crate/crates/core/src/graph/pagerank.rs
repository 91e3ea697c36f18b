use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PagerankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PagerankOptions {
    fn default() -> Self {
        PagerankOptions {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

/// Power iteration on the weight-normalized transition matrix with uniform
/// teleport. Isolated nodes keep teleport-only mass; the final vector is
/// renormalized so scores sum to one.
pub fn pagerank(graph: &WeightedGraph, opts: &PagerankOptions) -> Result<BTreeMap<String, f64>> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyInput("pagerank on empty graph".into()));
    }
    let deg = graph.degrees();
    let edges: Vec<((usize, usize), f64)> = graph.edges_by_index().collect();

    let teleport = (1.0 - opts.damping) / n as f64;
    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut converged = false;
    let mut residual = f64::INFINITY;

    for _ in 0..opts.max_iter {
        next.iter_mut().for_each(|v| *v = teleport);
        for &((a, b), w) in &edges {
            next[b] += opts.damping * rank[a] * w / deg[a];
            next[a] += opts.damping * rank[b] * w / deg[b];
        }
        residual = rank
            .iter()
            .zip(&next)
            .map(|(old, new)| (old - new).abs())
            .sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < opts.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iters: opts.max_iter,
            residual,
        });
    }

    let total: f64 = rank.iter().sum();
    Ok(graph
        .nodes()
        .enumerate()
        .map(|(i, id)| (id.to_string(), rank[i] / total))
        .collect())
}
