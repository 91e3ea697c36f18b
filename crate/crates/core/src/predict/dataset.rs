use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CoinSeries, Tweet};
use crate::error::{Error, Result};
use crate::features::{
    assemble_row, FeatureConfig, FeatureRow, FeatureSources, FeatureVariant, SentimentLexicon,
};
use crate::graph::{ComponentAssignment, CorexModel};
use crate::pump::{evaluate_success, PumpAttempt, TargetRule};
use crate::seed;

const HOUR: i64 = 3600;

/// Per-coin chronological dataset with a 75/25 train/test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub coin: String,
    /// Sorted by timestamp, timestamps distinct.
    pub rows: Vec<FeatureRow>,
    /// First test row index: floor(3n/4), which puts at least 25% in test.
    pub split_index: usize,
}

impl Dataset {
    pub fn train(&self) -> &[FeatureRow] {
        &self.rows[..self.split_index]
    }

    pub fn test(&self) -> &[FeatureRow] {
        &self.rows[self.split_index..]
    }

    pub fn labels(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.label.unwrap_or(false)).collect()
    }

    fn validate(&self, variant: FeatureVariant) -> Result<()> {
        let len = self.rows[0].flatten(variant).len();
        for row in &self.rows {
            if row.flatten(variant).len() != len {
                return Err(Error::Invariant(format!(
                    "inconsistent feature layout for {} at {}",
                    row.coin, row.timestamp
                )));
            }
        }
        Ok(())
    }
}

/// Datasets per coin plus the exclusions, each with its reason.
#[derive(Debug, Clone, Default)]
pub struct TaskDatasets {
    pub datasets: BTreeMap<String, Dataset>,
    pub excluded: Vec<(String, String)>,
    /// Attempt rows dropped because a feature family was not computable.
    pub dropped_rows: usize,
}

/// Immutable inputs for dataset construction.
pub struct PredictSources<'a> {
    /// Raw five-minute market series, for success evaluation.
    pub market: &'a BTreeMap<String, CoinSeries>,
    /// Hourly-resampled series, for feature lookback.
    pub hourly: &'a BTreeMap<String, CoinSeries>,
    pub tweets: &'a [Tweet],
    pub lexicon: &'a SentimentLexicon,
    pub components: &'a BTreeMap<String, ComponentAssignment>,
    pub corex: Option<&'a CorexModel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig {
    pub features: FeatureConfig,
    /// Task I: minimum computable positives per coin.
    pub min_attempts: usize,
    /// Task II: minimum positives in the training prefix.
    pub min_train_positives: usize,
    /// Task II success definition.
    pub success_threshold: f64,
    pub success_window_hours: u32,
    pub target_rule: TargetRule,
}

impl TaskConfig {
    pub fn task1() -> Self {
        TaskConfig {
            features: FeatureConfig::task1_default(),
            min_attempts: 8,
            min_train_positives: 5,
            success_threshold: 1.0,
            success_window_hours: 6,
            target_rule: TargetRule::First,
        }
    }

    pub fn task2() -> Self {
        TaskConfig {
            features: FeatureConfig::task2_default(),
            ..TaskConfig::task1()
        }
    }
}

fn group_by_coin(attempts: &[PumpAttempt]) -> BTreeMap<&str, Vec<&PumpAttempt>> {
    let mut out: BTreeMap<&str, Vec<&PumpAttempt>> = BTreeMap::new();
    for attempt in attempts {
        out.entry(attempt.coin.as_str()).or_default().push(attempt);
    }
    out
}

fn feature_sources<'a>(
    coin: &str,
    hourly: &'a CoinSeries,
    sources: &'a PredictSources,
) -> FeatureSources<'a> {
    FeatureSources {
        hourly,
        tweets: sources.tweets,
        lexicon: sources.lexicon,
        components: sources.components.get(coin),
        corex: sources.corex,
    }
}

/// Draw feature-computable negative timestamps uniformly over the coin's
/// extent, rejecting collisions and uncomputable rows. Deterministic per rng.
#[allow(clippy::too_many_arguments)]
fn sample_negatives(
    coin: &str,
    count: usize,
    hourly: &CoinSeries,
    srcs: &FeatureSources,
    config: &FeatureConfig,
    rng: &mut ChaCha8Rng,
    used: &mut BTreeSet<i64>,
    zero_target_width: Option<usize>,
) -> Result<Vec<FeatureRow>> {
    let lo = hourly.first_timestamp().unwrap() + (config.w_econ as i64 + 1) * HOUR;
    let hi = hourly.last_timestamp().unwrap();
    if lo > hi {
        return Err(Error::MarketGap(format!(
            "{coin}: extent too short for {}h lookback",
            config.w_econ
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    let budget = 300 * count.max(1);
    while out.len() < count && tries < budget {
        tries += 1;
        let t = rng.gen_range(lo..=hi);
        if !used.insert(t) {
            continue;
        }
        match assemble_row(coin, t, Some(false), None, srcs, config) {
            Ok(mut row) => {
                if let Some(w) = zero_target_width {
                    row.target = Some(vec![0.0; w]);
                }
                out.push(row);
            }
            Err(_) => {
                used.remove(&t);
            }
        }
    }
    if out.len() < count {
        return Err(Error::MarketGap(format!(
            "{coin}: sampled only {} of {count} computable negatives",
            out.len()
        )));
    }
    Ok(out)
}

fn finish_dataset(
    coin: &str,
    mut rows: Vec<FeatureRow>,
    min_train_positives: Option<usize>,
) -> std::result::Result<Dataset, String> {
    rows.sort_by_key(|r| r.timestamp);
    let n = rows.len();
    let split_index = 3 * n / 4;
    if split_index == 0 || split_index == n {
        return Err(format!("too few rows ({n}) for a 75/25 split"));
    }
    let train_pos = rows[..split_index]
        .iter()
        .filter(|r| r.label == Some(true))
        .count();
    if train_pos == 0 || train_pos == split_index {
        return Err("single-class training prefix".into());
    }
    if let Some(min) = min_train_positives {
        if train_pos < min {
            return Err(format!("{train_pos} train positives, need {min}"));
        }
    }
    let dataset = Dataset {
        coin: coin.to_string(),
        rows,
        split_index,
    };
    dataset
        .validate(FeatureVariant::Both)
        .map_err(|e| e.to_string())?;
    Ok(dataset)
}

/// Task I: positives are attempt anchors, negatives an equal number of random
/// feature-computable timestamps. Coins without enough computable positives
/// are excluded with a reason.
pub fn build_task1(
    attempts: &[PumpAttempt],
    sources: &PredictSources,
    config: &TaskConfig,
    seed_value: u64,
) -> TaskDatasets {
    let mut out = TaskDatasets::default();
    for (coin, coin_attempts) in group_by_coin(attempts) {
        let Some(hourly) = sources.hourly.get(coin) else {
            out.excluded.push((coin.into(), "no market data".into()));
            continue;
        };
        let srcs = feature_sources(coin, hourly, sources);
        let mut rows = Vec::new();
        for attempt in &coin_attempts {
            match assemble_row(
                coin,
                attempt.anchor_time,
                Some(true),
                None,
                &srcs,
                &config.features,
            ) {
                Ok(row) => rows.push(row),
                Err(_) => out.dropped_rows += 1,
            }
        }
        if rows.len() < config.min_attempts {
            out.excluded.push((
                coin.into(),
                format!(
                    "{} computable positives, need {}",
                    rows.len(),
                    config.min_attempts
                ),
            ));
            continue;
        }
        let mut used: BTreeSet<i64> = rows.iter().map(|r| r.timestamp).collect();
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed::derive(seed_value, &format!("task1-neg-{coin}")));
        match sample_negatives(
            coin,
            rows.len(),
            hourly,
            &srcs,
            &config.features,
            &mut rng,
            &mut used,
            None,
        ) {
            Ok(negatives) => rows.extend(negatives),
            Err(e) => {
                out.excluded.push((coin.into(), e.to_string()));
                continue;
            }
        }
        match finish_dataset(coin, rows, None) {
            Ok(dataset) => {
                out.datasets.insert(coin.to_string(), dataset);
            }
            Err(reason) => out.excluded.push((coin.into(), reason)),
        }
    }
    out
}

/// Task II: positives are attempts that met their target within the success
/// window; negatives are the unsuccessful attempts plus Task-I-style random
/// timestamps. Attempt rows carry the target family; random rows carry a
/// zero target block so the layout stays fixed. Coins with fewer than
/// `min_train_positives` successful attempts in the training prefix are
/// excluded.
pub fn build_task2(
    attempts: &[PumpAttempt],
    sources: &PredictSources,
    config: &TaskConfig,
    seed_value: u64,
) -> TaskDatasets {
    let mut out = TaskDatasets::default();
    for (coin, coin_attempts) in group_by_coin(attempts) {
        let (Some(hourly), Some(raw)) = (sources.hourly.get(coin), sources.market.get(coin))
        else {
            out.excluded.push((coin.into(), "no market data".into()));
            continue;
        };
        let srcs = feature_sources(coin, hourly, sources);
        let mut rows = Vec::new();
        let mut computable_attempts = 0usize;
        for attempt in &coin_attempts {
            let verdict = match evaluate_success(
                attempt,
                raw,
                config.success_threshold,
                config.success_window_hours,
                config.target_rule,
            ) {
                Ok(v) => v,
                Err(_) => {
                    out.dropped_rows += 1;
                    continue;
                }
            };
            let target = attempt.target(config.target_rule);
            match assemble_row(
                coin,
                attempt.anchor_time,
                Some(verdict.success),
                target,
                &srcs,
                &config.features,
            ) {
                Ok(row) => {
                    computable_attempts += 1;
                    rows.push(row);
                }
                Err(_) => out.dropped_rows += 1,
            }
        }
        if computable_attempts == 0 {
            out.excluded
                .push((coin.into(), "no evaluable attempts".into()));
            continue;
        }
        let mut used: BTreeSet<i64> = rows.iter().map(|r| r.timestamp).collect();
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed::derive(seed_value, &format!("task2-neg-{coin}")));
        match sample_negatives(
            coin,
            computable_attempts,
            hourly,
            &srcs,
            &config.features,
            &mut rng,
            &mut used,
            Some(config.features.w_econ),
        ) {
            Ok(negatives) => rows.extend(negatives),
            Err(e) => {
                out.excluded.push((coin.into(), e.to_string()));
                continue;
            }
        }
        match finish_dataset(coin, rows, Some(config.min_train_positives)) {
            Ok(dataset) => {
                out.datasets.insert(coin.to_string(), dataset);
            }
            Err(reason) => out.excluded.push((coin.into(), reason)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{resample_hourly, MarketPoint};

    fn flat_series(coin: &str, hours: i64, price: f64) -> CoinSeries {
        CoinSeries {
            coin: coin.into(),
            points: (0..=hours * 12)
                .map(|k| MarketPoint {
                    timestamp: k * 300,
                    price_btc: price,
                    price_usd: price * 10_000.0,
                    volume: 50.0,
                    market_cap: 1000.0,
                })
                .collect(),
        }
    }

    fn spiked_series(coin: &str, hours: i64, spikes: &[(i64, f64)]) -> CoinSeries {
        let mut series = flat_series(coin, hours, 1.0e-4);
        for point in &mut series.points {
            for &(anchor, peak) in spikes {
                if point.timestamp > anchor && point.timestamp <= anchor + HOUR {
                    point.price_btc = peak;
                    point.price_usd = peak * 10_000.0;
                }
            }
        }
        series
    }

    fn attempt(coin: &str, anchor: i64, target: f64) -> PumpAttempt {
        PumpAttempt {
            coin: coin.into(),
            anchor_time: anchor,
            message_ids: vec![],
            buy_price: None,
            target_prices: vec![target],
            stop_loss: None,
            channel_ids: BTreeSet::new(),
        }
    }

    fn fixture(n_attempts: usize) -> (Vec<PumpAttempt>, BTreeMap<String, CoinSeries>) {
        // Sub-1 prices so targets are compared in BTC units.
        let hours = 400;
        let attempts: Vec<PumpAttempt> = (0..n_attempts)
            .map(|i| attempt("XCO", (30 + 8 * i as i64) * HOUR, 1.5e-4))
            .collect();
        let spikes: Vec<(i64, f64)> = attempts
            .iter()
            .enumerate()
            .map(|(i, a)| (a.anchor_time, if i % 2 == 0 { 2.0e-4 } else { 1.2e-4 }))
            .collect();
        let series = spiked_series("XCO", hours, &spikes);
        let mut market = BTreeMap::new();
        market.insert("XCO".to_string(), series);
        (attempts, market)
    }

    #[test]
    fn task1_equal_positive_negative_counts() {
        let (attempts, market) = fixture(12);
        let hourly: BTreeMap<String, CoinSeries> = market
            .iter()
            .map(|(k, v)| (k.clone(), resample_hourly(v).unwrap()))
            .collect();
        let lexicon = SentimentLexicon::builtin();
        let components = BTreeMap::new();
        let sources = PredictSources {
            market: &market,
            hourly: &hourly,
            tweets: &[],
            lexicon: &lexicon,
            components: &components,
            corex: None,
        };
        let config = TaskConfig {
            features: FeatureConfig { w_econ: 4, w_tw: 4 },
            ..TaskConfig::task1()
        };
        let built = build_task1(&attempts, &sources, &config, 7);
        assert!(built.excluded.is_empty(), "{:?}", built.excluded);
        let ds = &built.datasets["XCO"];
        assert_eq!(ds.rows.len(), 24);
        let positives = ds.rows.iter().filter(|r| r.label == Some(true)).count();
        assert_eq!(positives, 12);
        assert_eq!(ds.split_index, 18);
        // Strictly increasing timestamps.
        for pair in ds.rows.windows(2) {
            assert!(pair[0].timestamp < pair[1].timestamp);
        }
        // Determinism.
        let again = build_task1(&attempts, &sources, &config, 7);
        assert_eq!(built.datasets["XCO"].rows, again.datasets["XCO"].rows);
    }

    #[test]
    fn task1_excludes_thin_coins() {
        let (attempts, market) = fixture(4);
        let hourly: BTreeMap<String, CoinSeries> = market
            .iter()
            .map(|(k, v)| (k.clone(), resample_hourly(v).unwrap()))
            .collect();
        let lexicon = SentimentLexicon::builtin();
        let components = BTreeMap::new();
        let sources = PredictSources {
            market: &market,
            hourly: &hourly,
            tweets: &[],
            lexicon: &lexicon,
            components: &components,
            corex: None,
        };
        let config = TaskConfig {
            features: FeatureConfig { w_econ: 4, w_tw: 4 },
            ..TaskConfig::task1()
        };
        let built = build_task1(&attempts, &sources, &config, 7);
        assert!(built.datasets.is_empty());
        assert!(built.excluded[0].1.contains("need 8"), "{:?}", built.excluded);
    }

    #[test]
    fn task2_labels_follow_success_and_layout_fixed() {
        let (attempts, market) = fixture(16);
        let hourly: BTreeMap<String, CoinSeries> = market
            .iter()
            .map(|(k, v)| (k.clone(), resample_hourly(v).unwrap()))
            .collect();
        let lexicon = SentimentLexicon::builtin();
        let components = BTreeMap::new();
        let sources = PredictSources {
            market: &market,
            hourly: &hourly,
            tweets: &[],
            lexicon: &lexicon,
            components: &components,
            corex: None,
        };
        let config = TaskConfig {
            features: FeatureConfig { w_econ: 4, w_tw: 4 },
            ..TaskConfig::task2()
        };
        let built = build_task2(&attempts, &sources, &config, 7);
        assert!(built.excluded.is_empty(), "{:?}", built.excluded);
        let ds = &built.datasets["XCO"];
        // 16 attempts (8 success) + 16 random negatives.
        assert_eq!(ds.rows.len(), 32);
        let positives = ds.rows.iter().filter(|r| r.label == Some(true)).count();
        assert_eq!(positives, 8);
        // Every row carries a target block of the same width.
        for row in &ds.rows {
            assert_eq!(row.target.as_ref().map(Vec::len), Some(4));
        }
    }

    #[test]
    fn task2_excludes_all_failed_coins() {
        // No spikes: every attempt fails, so zero positives.
        let attempts: Vec<PumpAttempt> = (0..8)
            .map(|i| attempt("XCO", (30 + 10 * i as i64) * HOUR, 1.5e-4))
            .collect();
        let market: BTreeMap<String, CoinSeries> =
            [("XCO".to_string(), flat_series("XCO", 200, 1.0e-4))].into();
        let hourly: BTreeMap<String, CoinSeries> = market
            .iter()
            .map(|(k, v)| (k.clone(), resample_hourly(v).unwrap()))
            .collect();
        let lexicon = SentimentLexicon::builtin();
        let components = BTreeMap::new();
        let sources = PredictSources {
            market: &market,
            hourly: &hourly,
            tweets: &[],
            lexicon: &lexicon,
            components: &components,
            corex: None,
        };
        let config = TaskConfig {
            features: FeatureConfig { w_econ: 4, w_tw: 4 },
            ..TaskConfig::task2()
        };
        let built = build_task2(&attempts, &sources, &config, 7);
        assert!(built.datasets.is_empty());
        assert_eq!(built.excluded[0].1, "single-class training prefix");
    }
}
