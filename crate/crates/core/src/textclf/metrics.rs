use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::PumpLabel;
use crate::error::{Error, Result};

/// Confusion-matrix metrics with pump as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierMetrics {
    pub base_rate: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn evaluate(preds: &[PumpLabel], labels: &[PumpLabel]) -> Result<ClassifierMetrics> {
    if preds.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: preds.len(),
        });
    }
    if preds.is_empty() {
        return Err(Error::EmptyInput("evaluation set".into()));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0usize, 0usize, 0usize, 0usize);
    for (p, l) in preds.iter().zip(labels) {
        match (p, l) {
            (PumpLabel::Pump, PumpLabel::Pump) => tp += 1,
            (PumpLabel::Pump, PumpLabel::NotPump) => fp += 1,
            (PumpLabel::NotPump, PumpLabel::Pump) => fn_ += 1,
            (PumpLabel::NotPump, PumpLabel::NotPump) => tn += 1,
        }
    }
    let total = preds.len() as f64;
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fn_ > 0 {
        tp as f64 / (tp + fn_) as f64
    } else {
        0.0
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(ClassifierMetrics {
        base_rate: (tp + fn_) as f64 / total,
        accuracy: (tp + tn) as f64 / total,
        precision,
        recall,
        f1,
    })
}

/// Add-one smoothed class-conditional ratio for a containment count pair:
/// P(w|pump) / P(w|not_pump) with P(w|c) = (count_c + 1) / (n_c + 2).
pub fn smoothed_ratio(in_pump: usize, n_pump: usize, in_not: usize, n_not: usize) -> f64 {
    let p_pump = (in_pump as f64 + 1.0) / (n_pump as f64 + 2.0);
    let p_not = (in_not as f64 + 1.0) / (n_not as f64 + 2.0);
    p_pump / p_not
}

/// The R_w diagnostic over tokenized labeled messages: for every token, the
/// smoothed ratio of containing-message probabilities between the classes,
/// plus its total containing-message count.
pub fn word_ratio(
    docs: &[(Vec<String>, PumpLabel)],
) -> Result<BTreeMap<String, (f64, usize)>> {
    let n_pump = docs.iter().filter(|(_, l)| *l == PumpLabel::Pump).count();
    let n_not = docs.len() - n_pump;
    if n_pump == 0 || n_not == 0 {
        return Err(Error::DegenerateLabels(
            "word ratio requires both classes".into(),
        ));
    }
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (tokens, label) in docs {
        let unique: BTreeSet<&String> = tokens.iter().collect();
        for token in unique {
            let entry = counts.entry(token.clone()).or_insert((0, 0));
            match label {
                PumpLabel::Pump => entry.0 += 1,
                PumpLabel::NotPump => entry.1 += 1,
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|(token, (in_pump, in_not))| {
            let ratio = smoothed_ratio(in_pump, n_pump, in_not, n_not);
            (token, (ratio, in_pump + in_not))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(pattern: &[(usize, PumpLabel)]) -> Vec<PumpLabel> {
        pattern
            .iter()
            .flat_map(|&(n, l)| std::iter::repeat(l).take(n))
            .collect()
    }

    #[test]
    fn confusion_matrix_hand_values() {
        // TP=9, FP=1, FN=1, TN=9.
        let preds = labels(&[
            (9, PumpLabel::Pump),
            (1, PumpLabel::Pump),
            (1, PumpLabel::NotPump),
            (9, PumpLabel::NotPump),
        ]);
        let truth = labels(&[
            (9, PumpLabel::Pump),
            (1, PumpLabel::NotPump),
            (1, PumpLabel::Pump),
            (9, PumpLabel::NotPump),
        ]);
        let m = evaluate(&preds, &truth).unwrap();
        assert_eq!(m.accuracy, 0.9);
        assert_eq!(m.precision, 0.9);
        assert_eq!(m.recall, 0.9);
        assert!((m.f1 - 0.9).abs() < 1e-12);
        assert_eq!(m.base_rate, 0.5);
    }

    #[test]
    fn perfect_predictions() {
        let truth = labels(&[(3, PumpLabel::Pump), (2, PumpLabel::NotPump)]);
        let m = evaluate(&truth, &truth).unwrap();
        assert_eq!(
            (m.accuracy, m.precision, m.recall, m.f1),
            (1.0, 1.0, 1.0, 1.0)
        );
        assert_eq!(m.base_rate, 0.6);
    }

    #[test]
    fn length_mismatch_and_empty_rejected() {
        assert!(evaluate(&[PumpLabel::Pump], &[]).is_err());
        assert!(evaluate(&[], &[]).is_err());
    }

    #[test]
    fn permutation_invariant() {
        let preds = labels(&[(2, PumpLabel::Pump), (3, PumpLabel::NotPump)]);
        let truth = labels(&[(1, PumpLabel::Pump), (4, PumpLabel::NotPump)]);
        let a = evaluate(&preds, &truth).unwrap();
        let perm: Vec<usize> = vec![4, 2, 0, 3, 1];
        let preds_p: Vec<_> = perm.iter().map(|&i| preds[i]).collect();
        let truth_p: Vec<_> = perm.iter().map(|&i| truth[i]).collect();
        let b = evaluate(&preds_p, &truth_p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn word_ratio_hand_values() {
        // w in 4/8 pump and 1/8 not-pump: R = (5/10)/(2/10) = 2.5.
        let mut docs = Vec::new();
        for i in 0..8 {
            let tokens = if i < 4 { vec!["w".to_string()] } else { vec!["z".to_string()] };
            docs.push((tokens, PumpLabel::Pump));
        }
        for i in 0..8 {
            let tokens = if i < 1 { vec!["w".to_string()] } else { vec!["z".to_string()] };
            docs.push((tokens, PumpLabel::NotPump));
        }
        let ratios = word_ratio(&docs).unwrap();
        let (r, freq) = ratios["w"];
        assert!((r - 2.5).abs() < 1e-12);
        assert_eq!(freq, 5);
    }

    #[test]
    fn word_ratio_extreme_and_absent() {
        // Present in all 8 pump, none of 8 not-pump: (9/10)/(1/10) = 9.
        assert!((smoothed_ratio(8, 8, 0, 8) - 9.0).abs() < 1e-12);
        // Absent from both equal-size classes: ratio 1 by smoothing symmetry.
        assert_eq!(smoothed_ratio(0, 8, 0, 8), 1.0);
    }

    #[test]
    fn word_ratio_antisymmetric_under_class_swap() {
        let r = smoothed_ratio(4, 8, 1, 8);
        let swapped = smoothed_ratio(1, 8, 4, 8);
        assert!((r * swapped - 1.0).abs() < 1e-12);
    }

    #[test]
    fn word_ratio_needs_both_classes() {
        let docs = vec![(vec!["w".to_string()], PumpLabel::Pump)];
        assert!(word_ratio(&docs).is_err());
    }
}
