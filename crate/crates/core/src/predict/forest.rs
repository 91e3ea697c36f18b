use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestHyper {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features considered per split; defaults to ceil(sqrt(F)).
    pub features_per_split: Option<usize>,
}

impl Default for ForestHyper {
    fn default() -> Self {
        ForestHyper {
            n_trees: 200,
            max_depth: None,
            min_leaf: 2,
            features_per_split: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        p_pos: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { p_pos } => return *p_pos,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

/// Bagged Gini-split decision trees; probabilities are the mean of leaf
/// class frequencies across trees. Deterministic per seed: tree i draws its
/// bootstrap and feature subsets from a stream derived as hash(seed, i).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<Tree>,
    pub n_features: usize,
    pub hyper: ForestHyper,
    pub seed: u64,
}

struct TreeBuilder<'a> {
    rows: &'a [Vec<f64>],
    labels: &'a [bool],
    hyper: &'a ForestHyper,
    features_per_split: usize,
    nodes: Vec<Node>,
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

impl TreeBuilder<'_> {
    fn grow(&mut self, samples: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let pos = samples.iter().filter(|&&i| self.labels[i]).count();
        let total = samples.len();
        let depth_capped = self.hyper.max_depth.is_some_and(|d| depth >= d);
        if pos == 0 || pos == total || total < 2 * self.hyper.min_leaf || depth_capped {
            return self.leaf(pos, total);
        }

        let n_features = self.rows[0].len();
        let mut candidates: Vec<usize> = (0..n_features).collect();
        for k in 0..self.features_per_split.min(n_features) {
            let j = rng.gen_range(k..n_features);
            candidates.swap(k, j);
        }
        let mut subset: Vec<usize> = candidates[..self.features_per_split.min(n_features)].to_vec();
        subset.sort_unstable();

        let parent = gini(pos, total);
        let mut best: Option<(f64, usize, f64)> = None; // (impurity drop, feature, threshold)
        for &feature in &subset {
            let mut values: Vec<(f64, bool)> = samples
                .iter()
                .map(|&i| (self.rows[i][feature], self.labels[i]))
                .collect();
            values.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));
            let mut left_pos = 0usize;
            let mut left_total = 0usize;
            for w in 0..values.len() - 1 {
                left_total += 1;
                if values[w].1 {
                    left_pos += 1;
                }
                if values[w].0 == values[w + 1].0 {
                    continue;
                }
                let right_total = total - left_total;
                if left_total < self.hyper.min_leaf || right_total < self.hyper.min_leaf {
                    continue;
                }
                let right_pos = pos - left_pos;
                let weighted = (left_total as f64 * gini(left_pos, left_total)
                    + right_total as f64 * gini(right_pos, right_total))
                    / total as f64;
                let drop = parent - weighted;
                if drop > 1e-12 && best.is_none_or(|(b, _, _)| drop > b) {
                    let threshold = 0.5 * (values[w].0 + values[w + 1].0);
                    best = Some((drop, feature, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            return self.leaf(pos, total);
        };
        let (left_samples, right_samples): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| self.rows[i][feature] <= threshold);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { p_pos: 0.0 }); // placeholder
        let left = self.grow(left_samples, depth + 1, rng);
        let right = self.grow(right_samples, depth + 1, rng);
        self.nodes[at] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        at
    }

    fn leaf(&mut self, pos: usize, total: usize) -> usize {
        self.nodes.push(Node::Leaf {
            p_pos: pos as f64 / total.max(1) as f64,
        });
        self.nodes.len() - 1
    }
}

/// Train a bagged forest on dense rows with boolean labels (true = positive).
pub fn train_forest(
    rows: &[Vec<f64>],
    labels: &[bool],
    hyper: &ForestHyper,
    seed_value: u64,
) -> Result<ForestModel> {
    if rows.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: rows.len(),
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("forest training set".into()));
    }
    let n_features = rows[0].len();
    if n_features == 0 || rows.iter().any(|r| r.len() != n_features) {
        return Err(Error::DimensionMismatch {
            expected: n_features,
            actual: 0,
        });
    }
    let pos = labels.iter().filter(|&&l| l).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::DegenerateLabels(
            "forest training requires both classes".into(),
        ));
    }
    let features_per_split = hyper
        .features_per_split
        .unwrap_or_else(|| (n_features as f64).sqrt().ceil() as usize)
        .clamp(1, n_features);

    let n = rows.len();
    let mut trees = Vec::with_capacity(hyper.n_trees);
    for i in 0..hyper.n_trees {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed_value, &format!("tree-{i}")));
        let samples: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut builder = TreeBuilder {
            rows,
            labels,
            hyper,
            features_per_split,
            nodes: Vec::new(),
        };
        let root = builder.grow(samples, 0, &mut rng);
        debug_assert_eq!(root, 0);
        trees.push(Tree {
            nodes: builder.nodes,
        });
    }
    Ok(ForestModel {
        trees,
        n_features,
        hyper: *hyper,
        seed: seed_value,
    })
}

impl ForestModel {
    /// Probability of the positive class: mean of leaf frequencies.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                actual: x.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        Ok(sum / self.trees.len() as f64)
    }
}
