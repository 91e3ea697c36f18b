use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Tweet;
use crate::pump::PumpAttempt;

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// User-to-component assignment after sparsification and the min-size filter.
/// Component ids are 1-based, ordered by decreasing size.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentAssignment {
    pub coin: String,
    pub assignment: BTreeMap<String, usize>,
    /// Size per component, indexed by id - 1.
    pub sizes: Vec<usize>,
}

impl ComponentAssignment {
    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentConfig {
    pub window_secs: i64,
    pub top_k: usize,
    pub min_size: usize,
}

impl Default for ComponentConfig {
    fn default() -> Self {
        ComponentConfig {
            window_secs: 6 * 3600,
            top_k: 2,
            min_size: 25,
        }
    }
}

/// User-user projection of the coin's pump-user bipartite graph: edge weight
/// is the number of attempts in which both users tweeted the coin. The
/// projection keeps each user's top-k heaviest edges (union over endpoints),
/// takes connected components, drops those below min_size, and ids the rest
/// by decreasing size.
pub fn user_user_components(
    coin: &str,
    attempts: &[PumpAttempt],
    tweets: &[Tweet],
    config: &ComponentConfig,
) -> ComponentAssignment {
    // Per attempt of this coin, the set of users active in its window.
    let mut participant_sets: Vec<BTreeSet<&str>> = Vec::new();
    for attempt in attempts.iter().filter(|a| a.coin == coin) {
        let lo = attempt.anchor_time - config.window_secs;
        let hi = attempt.anchor_time;
        let users: BTreeSet<&str> = tweets
            .iter()
            .filter(|t| {
                t.timestamp >= lo && t.timestamp <= hi && t.cashtags.contains(coin)
            })
            .map(|t| t.user_id.as_str())
            .collect();
        if users.len() > 1 {
            participant_sets.push(users);
        }
    }

    let mut users: Vec<&str> = participant_sets
        .iter()
        .flat_map(|s| s.iter().copied())
        .collect();
    users.sort_unstable();
    users.dedup();
    let index: BTreeMap<&str, usize> = users.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    // Co-attempt counts per unordered user pair.
    let mut weights: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for set in &participant_sets {
        let ids: Vec<usize> = set.iter().map(|u| index[u]).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let key = (a.min(b), a.max(b));
                *weights.entry(key).or_insert(0) += 1;
            }
        }
    }

    let kept = sparsify_top_k(users.len(), &weights, config.top_k);

    let mut uf = UnionFind::new(users.len());
    for &(a, b) in &kept {
        uf.union(a, b);
    }

    // Components over users that have at least one kept edge.
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let endpoints: BTreeSet<usize> = kept.iter().flat_map(|&(a, b)| [a, b]).collect();
    for u in endpoints {
        members.entry(uf.find(u)).or_default().push(u);
    }

    let mut components: Vec<Vec<usize>> = members
        .into_values()
        .filter(|m| m.len() >= config.min_size)
        .collect();
    // Decreasing size; ties broken by smallest member for determinism.
    components.sort_by_key(|m| (std::cmp::Reverse(m.len()), m[0]));

    let mut assignment = BTreeMap::new();
    let mut sizes = Vec::with_capacity(components.len());
    for (id0, member_ids) in components.iter().enumerate() {
        sizes.push(member_ids.len());
        for &u in member_ids {
            assignment.insert(users[u].to_string(), id0 + 1);
        }
    }
    ComponentAssignment {
        coin: coin.to_string(),
        assignment,
        sizes,
    }
}

/// Keep the union over users of each user's top-k heaviest incident edges.
/// Ties break toward the lower neighbor index.
fn sparsify_top_k(
    n_users: usize,
    weights: &BTreeMap<(usize, usize), u32>,
    top_k: usize,
) -> BTreeSet<(usize, usize)> {
    let mut incident: Vec<Vec<(u32, usize, usize)>> = vec![Vec::new(); n_users];
    for (&(a, b), &w) in weights {
        incident[a].push((w, b, a));
        incident[b].push((w, a, b));
    }
    let mut kept = BTreeSet::new();
    for (u, edges) in incident.iter_mut().enumerate() {
        edges.sort_by_key(|&(w, neighbor, _)| (std::cmp::Reverse(w), neighbor));
        for &(_, neighbor, _) in edges.iter().take(top_k) {
            kept.insert((u.min(neighbor), u.max(neighbor)));
        }
    }
    kept
}

/// Per-component count of distinct assigned users tweeting the coin inside
/// [t - w, t]. Unassigned users are ignored.
pub fn component_activity_features(
    assignment: &ComponentAssignment,
    tweets: &[Tweet],
    coin: &str,
    window: (i64, i64),
) -> Vec<f64> {
    let mut active: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); assignment.component_count()];
    for tweet in tweets {
        if tweet.timestamp < window.0 || tweet.timestamp > window.1 {
            continue;
        }
        if !tweet.cashtags.contains(coin) {
            continue;
        }
        if let Some(&component) = assignment.assignment.get(&tweet.user_id) {
            active[component - 1].insert(tweet.user_id.as_str());
        }
    }
    active.iter().map(|s| s.len() as f64).collect()
}
