use crate::error::{Error, Result};
use crate::features::FeatureVariant;
use crate::seed;

use super::dataset::Dataset;
use super::forest::{train_forest, ForestHyper};

/// Chronological walk-forward scoring: every test row is scored by a forest
/// trained only on strictly earlier rows, then absorbed into the training
/// set. Exactly |test| models are trained. Temporal ordering is asserted at
/// every step.
pub fn walk_forward(
    dataset: &Dataset,
    variant: FeatureVariant,
    hyper: &ForestHyper,
    seed_value: u64,
) -> Result<Vec<(usize, f64)>> {
    let n = dataset.rows.len();
    let d = dataset.split_index;
    if d == 0 || d >= n {
        return Err(Error::EmptyInput(format!(
            "walk-forward needs non-empty train and test (n={n}, d={d})"
        )));
    }
    let features: Vec<Vec<f64>> = dataset
        .rows
        .iter()
        .map(|r| r.flatten(variant))
        .collect();
    let labels = dataset.labels();

    let mut out = Vec::with_capacity(n - d);
    for i in d..n {
        if dataset.rows[i - 1].timestamp >= dataset.rows[i].timestamp {
            return Err(Error::Invariant(format!(
                "temporal leakage: training row at {} not strictly earlier than test row at {}",
                dataset.rows[i - 1].timestamp, dataset.rows[i].timestamp
            )));
        }
        let model = train_forest(
            &features[..i],
            &labels[..i],
            hyper,
            seed::derive(seed_value, &format!("wf-{}-{i}", dataset.coin)),
        )?;
        let prob = model.predict_proba(&features[i])?;
        out.push((i, prob));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureRow;
    use crate::predict::auc::roc_auc;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row(t: i64, label: bool, features: Vec<f64>) -> FeatureRow {
        FeatureRow {
            coin: "XCO".into(),
            timestamp: t,
            label: Some(label),
            economic: features,
            target: None,
            twitter: vec![0.0, 0.0, 0.0],
            pagerank: 0.0,
            components: vec![],
            corex: None,
        }
    }

    fn dataset_from(rows: Vec<FeatureRow>) -> Dataset {
        let split_index = 3 * rows.len() / 4;
        Dataset {
            coin: "XCO".into(),
            rows,
            split_index,
        }
    }

    fn small_hyper() -> ForestHyper {
        ForestHyper {
            n_trees: 30,
            ..ForestHyper::default()
        }
    }

    #[test]
    fn retrain_count_equals_test_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<FeatureRow> = (0..16)
            .map(|i| {
                let label = i % 2 == 0;
                row(
                    i64::from(i) * 3600,
                    label,
                    vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)],
                )
            })
            .collect();
        let ds = dataset_from(rows);
        let probs = walk_forward(&ds, FeatureVariant::Both, &small_hyper(), 7).unwrap();
        assert_eq!(probs.len(), 4);
        assert_eq!(probs[0].0, 12);
    }

    #[test]
    fn planted_label_copy_gives_auc_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<FeatureRow> = (0..40)
            .map(|i| {
                let label = rng.gen_bool(0.5);
                row(
                    i64::from(i) * 3600,
                    label,
                    vec![f64::from(u8::from(label)), rng.gen_range(0.0..1.0)],
                )
            })
            .collect();
        let ds = dataset_from(rows);
        let probs = walk_forward(&ds, FeatureVariant::Both, &small_hyper(), 7).unwrap();
        let scores: Vec<f64> = probs.iter().map(|&(_, p)| p).collect();
        let labels: Vec<bool> = probs.iter().map(|&(i, _)| ds.rows[i].label.unwrap()).collect();
        let auc = roc_auc(&scores, &labels).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn pure_noise_auc_near_half() {
        let mut aucs = Vec::new();
        for seed_value in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed_value);
            let rows: Vec<FeatureRow> = (0..120)
                .map(|i| {
                    row(
                        i64::from(i) * 3600,
                        rng.gen_bool(0.5),
                        (0..4).map(|_| rng.gen_range(0.0..1.0)).collect(),
                    )
                })
                .collect();
            let ds = dataset_from(rows);
            let probs =
                walk_forward(&ds, FeatureVariant::Both, &small_hyper(), seed_value).unwrap();
            let scores: Vec<f64> = probs.iter().map(|&(_, p)| p).collect();
            let labels: Vec<bool> =
                probs.iter().map(|&(i, _)| ds.rows[i].label.unwrap()).collect();
            aucs.push(roc_auc(&scores, &labels).unwrap());
        }
        let mean = aucs.iter().sum::<f64>() / aucs.len() as f64;
        assert!((0.35..=0.65).contains(&mean), "mean noise AUC {mean}");
    }

    #[test]
    fn equal_timestamps_rejected() {
        let rows: Vec<FeatureRow> = (0..8)
            .map(|i| row(i64::from(i / 2) * 3600, i % 2 == 0, vec![f64::from(i)]))
            .collect();
        let ds = dataset_from(rows);
        let err = walk_forward(&ds, FeatureVariant::Both, &small_hyper(), 7).unwrap_err();
        assert!(err.to_string().contains("temporal leakage"), "{err}");
    }

    #[test]
    fn deterministic_per_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<FeatureRow> = (0..20)
            .map(|i| {
                row(
                    i64::from(i) * 3600,
                    i % 2 == 0,
                    vec![rng.gen_range(0.0..1.0)],
                )
            })
            .collect();
        let ds = dataset_from(rows);
        let a = walk_forward(&ds, FeatureVariant::Both, &small_hyper(), 9).unwrap();
        let b = walk_forward(&ds, FeatureVariant::Both, &small_hyper(), 9).unwrap();
        assert_eq!(a, b);
    }
}
