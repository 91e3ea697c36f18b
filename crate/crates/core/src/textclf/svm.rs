use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::PumpLabel;
use crate::error::{Error, Result};

use super::tfidf::SparseVec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    pub l2_lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            l2_lambda: 1e-4,
            epochs: 20,
            seed: 0,
        }
    }
}

/// Linear SVM trained by SGD on the regularized hinge loss
/// (1/n) sum max(0, 1 - y(w.x + b)) + lambda ||w||^2 with step 1/(lambda t).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2_lambda: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Objective recorded at the end of each epoch.
    pub epoch_objectives: Vec<f64>,
}

pub fn hinge_objective(w: &[f64], b: f64, lambda: f64, x: &[SparseVec], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| (1.0 - yi * (xi.dot_dense(w) + b)).max(0.0))
        .sum();
    let reg: f64 = lambda * w.iter().map(|v| v * v).sum::<f64>();
    hinge / n + reg
}

/// Train on sparse rows with labels in {+1, -1}. Deterministic per seed:
/// epoch order is the only randomness, drawn from a counter-based generator.
pub fn train_svm(x: &[SparseVec], y: &[f64], dim: usize, cfg: &SvmConfig) -> Result<LinearSvm> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput("svm training set".into()));
    }
    let pos = y.iter().filter(|&&v| v > 0.0).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::DegenerateLabels(
            "svm training requires both classes".into(),
        ));
    }
    for row in x {
        if let Some(max) = row.max_index() {
            if max >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: max + 1,
                });
            }
        }
    }

    let lambda = cfg.l2_lambda;
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut t: u64 = 1;
    let mut epoch_objectives = Vec::with_capacity(cfg.epochs);

    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = 1.0 / (lambda * t as f64);
            let margin = y[i] * (x[i].dot_dense(&w) + b);
            let shrink = 1.0 - 2.0 * lambda * eta;
            for v in &mut w {
                *v *= shrink;
            }
            if margin < 1.0 {
                for &(col, val) in &x[i].0 {
                    w[col] += eta * y[i] * val;
                }
                b += eta * y[i];
            }
            t += 1;
        }
        epoch_objectives.push(hinge_objective(&w, b, lambda, x, y));
    }

    Ok(LinearSvm {
        weights: w,
        bias: b,
        l2_lambda: lambda,
        epochs: cfg.epochs,
        seed: cfg.seed,
        epoch_objectives,
    })
}

impl LinearSvm {
    /// Signed margin w.x + b; label is pump when the margin is >= 0.
    pub fn predict(&self, x: &SparseVec) -> Result<(PumpLabel, f64)> {
        if let Some(max) = x.max_index() {
            if max >= self.weights.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.weights.len(),
                    actual: max + 1,
                });
            }
        }
        let margin = x.dot_dense(&self.weights) + self.bias;
        let label = if margin >= 0.0 {
            PumpLabel::Pump
        } else {
            PumpLabel::NotPump
        };
        Ok((label, margin))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(dim: usize, col: usize) -> SparseVec {
        let _ = dim;
        SparseVec(vec![(col, 1.0)])
    }

    #[test]
    fn separable_two_points_reach_zero_loss() {
        let x = vec![unit(2, 0), unit(2, 1)];
        let y = vec![1.0, -1.0];
        let svm = train_svm(&x, &y, 2, &SvmConfig::default()).unwrap();
        let (l0, _) = svm.predict(&x[0]).unwrap();
        let (l1, _) = svm.predict(&x[1]).unwrap();
        assert_eq!(l0, PumpLabel::Pump);
        assert_eq!(l1, PumpLabel::NotPump);
    }

    #[test]
    fn deterministic_same_seed() {
        let x = vec![unit(2, 0), unit(2, 1), SparseVec(vec![(0, 0.3), (1, 0.9)])];
        let y = vec![1.0, -1.0, -1.0];
        let a = train_svm(&x, &y, 2, &SvmConfig::default()).unwrap();
        let b = train_svm(&x, &y, 2, &SvmConfig::default()).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
    }

    #[test]
    fn single_class_rejected() {
        let x = vec![unit(2, 0), unit(2, 1)];
        let y = vec![1.0, 1.0];
        assert!(matches!(
            train_svm(&x, &y, 2, &SvmConfig::default()),
            Err(Error::DegenerateLabels(_))
        ));
    }

    #[test]
    fn bias_only_margins() {
        let svm = LinearSvm {
            weights: vec![0.0, 0.0],
            bias: 1.0,
            l2_lambda: 1e-4,
            epochs: 0,
            seed: 0,
            epoch_objectives: vec![],
        };
        let zero = SparseVec::default();
        assert_eq!(svm.predict(&zero).unwrap(), (PumpLabel::Pump, 1.0));
        let svm_neg = LinearSvm { bias: -1.0, ..svm };
        assert_eq!(svm_neg.predict(&zero).unwrap(), (PumpLabel::NotPump, -1.0));
    }

    #[test]
    fn margin_is_dot_product() {
        let svm = LinearSvm {
            weights: vec![1.0, 0.0],
            bias: 0.0,
            l2_lambda: 1e-4,
            epochs: 0,
            seed: 0,
            epoch_objectives: vec![],
        };
        let x = SparseVec(vec![(0, 0.6), (1, 0.8)]);
        let (label, margin) = svm.predict(&x).unwrap();
        assert_eq!(label, PumpLabel::Pump);
        assert!((margin - 0.6).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let svm = LinearSvm {
            weights: vec![1.0],
            bias: 0.0,
            l2_lambda: 1e-4,
            epochs: 0,
            seed: 0,
            epoch_objectives: vec![],
        };
        let x = SparseVec(vec![(3, 1.0)]);
        assert!(matches!(
            svm.predict(&x),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
