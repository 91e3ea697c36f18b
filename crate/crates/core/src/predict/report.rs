use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::features::FeatureVariant;

use super::auc::roc_auc;
use super::dataset::TaskDatasets;
use super::forest::ForestHyper;
use super::walkforward::walk_forward;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinResult {
    pub coin: String,
    pub n_train: usize,
    pub n_test: usize,
    pub auc: f64,
}

/// Per-variant evaluation: AUC per coin, macro mean and standard deviation
/// over all coins and over the top-20 coins by dollar volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub variant: FeatureVariant,
    pub coins: Vec<CoinResult>,
    pub macro_mean: f64,
    pub macro_std: f64,
    pub top20_mean: f64,
    pub top20_std: f64,
    /// Coins that could not be scored under this variant, with reasons.
    pub skipped: Vec<(String, String)>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Walk-forward evaluation of every dataset under one feature variant.
/// `volume_rank` maps coin to mean dollar volume for the top-20 cut.
pub fn evaluate_variant(
    datasets: &TaskDatasets,
    variant: FeatureVariant,
    hyper: &ForestHyper,
    volume_rank: &BTreeMap<String, f64>,
    seed_value: u64,
) -> Result<EvalReport> {
    let mut coins = Vec::new();
    let mut skipped = Vec::new();
    for (coin, dataset) in &datasets.datasets {
        let probs = match walk_forward(dataset, variant, hyper, seed_value) {
            Ok(p) => p,
            Err(e) => {
                skipped.push((coin.clone(), e.to_string()));
                continue;
            }
        };
        let scores: Vec<f64> = probs.iter().map(|&(_, p)| p).collect();
        let labels: Vec<bool> = probs
            .iter()
            .map(|&(i, _)| dataset.rows[i].label.unwrap_or(false))
            .collect();
        match roc_auc(&scores, &labels) {
            Ok(auc) => coins.push(CoinResult {
                coin: coin.clone(),
                n_train: dataset.split_index,
                n_test: dataset.rows.len() - dataset.split_index,
                auc,
            }),
            Err(e) => skipped.push((coin.clone(), format!("single-class test: {e}"))),
        }
    }

    let all: Vec<f64> = coins.iter().map(|c| c.auc).collect();
    let (macro_mean, macro_std) = mean_std(&all);

    let mut by_volume: Vec<&CoinResult> = coins.iter().collect();
    by_volume.sort_by(|a, b| {
        let va = volume_rank.get(&a.coin).copied().unwrap_or(0.0);
        let vb = volume_rank.get(&b.coin).copied().unwrap_or(0.0);
        vb.partial_cmp(&va).unwrap().then(a.coin.cmp(&b.coin))
    });
    let top: Vec<f64> = by_volume.iter().take(20).map(|c| c.auc).collect();
    let (top20_mean, top20_std) = mean_std(&top);

    Ok(EvalReport {
        variant,
        coins,
        macro_mean,
        macro_std,
        top20_mean,
        top20_std,
        skipped,
    })
}

/// Evaluate several variants on the same datasets.
pub fn feature_ablation(
    datasets: &TaskDatasets,
    variants: &[FeatureVariant],
    hyper: &ForestHyper,
    volume_rank: &BTreeMap<String, f64>,
    seed_value: u64,
) -> Result<Vec<EvalReport>> {
    variants
        .iter()
        .map(|&v| evaluate_variant(datasets, v, hyper, volume_rank, seed_value))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub w: usize,
    pub macro_auc: Option<f64>,
    pub error: Option<String>,
}

/// Re-run the pipeline per window length and tabulate macro AUC. Failures are
/// recorded per w so a partial table still comes out.
pub fn window_sweep(
    w_range: impl IntoIterator<Item = usize>,
    mut build_and_eval: impl FnMut(usize) -> Result<f64>,
) -> (Vec<SweepRow>, Option<usize>) {
    let mut rows = Vec::new();
    for w in w_range {
        match build_and_eval(w) {
            Ok(auc) => rows.push(SweepRow {
                w,
                macro_auc: Some(auc),
                error: None,
            }),
            Err(e) => rows.push(SweepRow {
                w,
                macro_auc: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let argmax = rows
        .iter()
        .filter_map(|r| r.macro_auc.map(|a| (r.w, a)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
        .map(|(w, _)| w);
    (rows, argmax)
}
