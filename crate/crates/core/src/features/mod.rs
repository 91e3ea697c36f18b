//! Per-(coin, timestamp) feature assembly: economic levels and percentage
//! changes, target-price distances, Twitter statistics with lexicon
//! sentiment, PageRank, CorEx embeddings, and component activity.

mod sentiment;

pub use sentiment::{sentiment_score, SentimentLexicon};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{CoinSeries, Tweet};
use crate::error::{Error, Result};
use crate::graph::{
    coin_coin_graph, component_activity_features, pagerank, ComponentAssignment, CorexModel,
    PagerankOptions,
};

const HOUR: i64 = 3600;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Hours of economic lookback (levels and changes per quantity).
    pub w_econ: usize,
    /// Hours of Twitter lookback (stats, graphs, embeddings).
    pub w_tw: usize,
}

impl FeatureConfig {
    pub fn task1_default() -> Self {
        FeatureConfig { w_econ: 15, w_tw: 15 }
    }

    pub fn task2_default() -> Self {
        FeatureConfig { w_econ: 7, w_tw: 15 }
    }
}

/// Assembled features for one (coin, timestamp) sample. Families are kept
/// separate so ablations can select them; `flatten` produces the training
/// vector with a layout that is a pure function of the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub coin: String,
    pub timestamp: i64,
    pub label: Option<bool>,
    /// Per quantity (price_btc, volume, market_cap): w levels then w changes.
    pub economic: Vec<f64>,
    /// (x - price_h)/x for h in 1..=w, present only for attempt rows.
    pub target: Option<Vec<f64>>,
    /// tweet count, unique users, mean sentiment.
    pub twitter: Vec<f64>,
    pub pagerank: f64,
    /// Distinct active users per retained component.
    pub components: Vec<f64>,
    /// Mean CorEx embedding of users active in the window.
    pub corex: Option<Vec<f64>>,
}

/// Which feature families feed the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureVariant {
    Twitter,
    Economic,
    Both,
}

impl FeatureVariant {
    pub fn tag(&self) -> &'static str {
        match self {
            FeatureVariant::Twitter => "twitter",
            FeatureVariant::Economic => "economic",
            FeatureVariant::Both => "both",
        }
    }
}

impl FeatureRow {
    /// Dense vector for the given variant. Twitter covers the social families
    /// (stats, pagerank, components, corex); economic covers market levels,
    /// changes, and target distances.
    pub fn flatten(&self, variant: FeatureVariant) -> Vec<f64> {
        let mut out = Vec::new();
        if matches!(variant, FeatureVariant::Economic | FeatureVariant::Both) {
            out.extend_from_slice(&self.economic);
            if let Some(t) = &self.target {
                out.extend_from_slice(t);
            }
        }
        if matches!(variant, FeatureVariant::Twitter | FeatureVariant::Both) {
            out.extend_from_slice(&self.twitter);
            out.push(self.pagerank);
            out.extend_from_slice(&self.components);
            if let Some(c) = &self.corex {
                out.extend_from_slice(c);
            }
        }
        out
    }

    pub fn assert_finite(&self) -> Result<()> {
        let all = self.flatten(FeatureVariant::Both);
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant(format!(
                "non-finite feature for {} at {}",
                self.coin, self.timestamp
            )));
        }
        Ok(())
    }
}

/// Expected flattened length for a configuration: levels+changes per three
/// quantities, optional target block, the three Twitter stats, pagerank, one
/// entry per component, and an optional k-width embedding.
pub fn layout_len(
    config: &FeatureConfig,
    with_target: bool,
    n_components: usize,
    corex_k: Option<usize>,
    variant: FeatureVariant,
) -> usize {
    let mut len = 0;
    if matches!(variant, FeatureVariant::Economic | FeatureVariant::Both) {
        len += 6 * config.w_econ;
        if with_target {
            len += config.w_econ;
        }
    }
    if matches!(variant, FeatureVariant::Twitter | FeatureVariant::Both) {
        len += 3 + 1 + n_components + corex_k.unwrap_or(0);
    }
    len
}

/// Chronological percentage change from an earlier to a later value.
pub fn pct_change(x_prev: f64, x_next: f64) -> Result<f64> {
    if x_prev <= 0.0 {
        return Err(Error::Invariant(format!("nonpositive base {x_prev}")));
    }
    Ok((x_next - x_prev) / x_prev)
}

fn hourly_value(hourly: &CoinSeries, t: i64, hours_back: usize) -> Result<f64> {
    let hour = t.div_euclid(HOUR) * HOUR - hours_back as i64 * HOUR;
    match hourly
        .points
        .binary_search_by_key(&hour, |p| p.timestamp)
    {
        Ok(i) => Ok(i as f64),
        Err(_) => Err(Error::MarketGap(format!(
            "{} missing hour t-{hours_back}h ({hour})",
            hourly.coin
        ))),
    }
}

fn hourly_point(hourly: &CoinSeries, t: i64, hours_back: usize) -> Result<&crate::corpus::MarketPoint> {
    let idx = hourly_value(hourly, t, hours_back)? as usize;
    Ok(&hourly.points[idx])
}

/// Economic family: for each of price_btc, volume, market_cap, the levels at
/// t-1h..t-wh followed by the chronological changes between consecutive
/// hours (w of them, ending with the t-1h to t-0h change).
pub fn economic_features(hourly: &CoinSeries, t: i64, w_econ: usize) -> Result<Vec<f64>> {
    let mut points = Vec::with_capacity(w_econ + 1);
    for h in 0..=w_econ {
        points.push(hourly_point(hourly, t, h)?);
    }
    let mut out = Vec::with_capacity(6 * w_econ);
    for quantity in [
        |p: &crate::corpus::MarketPoint| p.price_btc,
        |p: &crate::corpus::MarketPoint| p.volume,
        |p: &crate::corpus::MarketPoint| p.market_cap,
    ] {
        for h in 1..=w_econ {
            out.push(quantity(points[h]));
        }
        for h in 1..=w_econ {
            out.push(pct_change(quantity(points[h]), quantity(points[h - 1]))?);
        }
    }
    Ok(out)
}

/// Target family: (x - price_h)/x for h in 1..=w. Prices are read in BTC for
/// sub-1 targets, USD otherwise, matching the success evaluator's unit rule.
pub fn target_features(
    target: f64,
    hourly: &CoinSeries,
    anchor: i64,
    w_econ: usize,
) -> Result<Vec<f64>> {
    if target <= 0.0 {
        return Err(Error::Invariant(format!("nonpositive target {target}")));
    }
    let mut out = Vec::with_capacity(w_econ);
    for h in 1..=w_econ {
        let p = hourly_point(hourly, anchor, h)?;
        let price = if target < 1.0 { p.price_btc } else { p.price_usd };
        out.push((target - price) / target);
    }
    Ok(out)
}

/// Tweet count, unique users, and mean sentiment for the coin over the closed
/// window [t - w, t].
pub fn twitter_stats(
    tweets: &[Tweet],
    coin: &str,
    window: (i64, i64),
    lexicon: &SentimentLexicon,
) -> (f64, f64, f64) {
    let mut count = 0usize;
    let mut users = std::collections::BTreeSet::new();
    let mut sentiment_sum = 0.0;
    for tweet in tweets {
        if tweet.timestamp < window.0 || tweet.timestamp > window.1 {
            continue;
        }
        if !tweet.cashtags.contains(coin) {
            continue;
        }
        count += 1;
        users.insert(tweet.user_id.as_str());
        sentiment_sum += sentiment_score(&tweet.text, lexicon);
    }
    let mean = if count > 0 {
        sentiment_sum / count as f64
    } else {
        0.0
    };
    (count as f64, users.len() as f64, mean)
}

/// Immutable inputs shared by row assembly.
pub struct FeatureSources<'a> {
    pub hourly: &'a CoinSeries,
    pub tweets: &'a [Tweet],
    pub lexicon: &'a SentimentLexicon,
    pub components: Option<&'a ComponentAssignment>,
    pub corex: Option<&'a CorexModel>,
}

/// Assemble one row. The target family appears only when `attempt_target` is
/// given (success-prediction rows); component and embedding widths follow the
/// supplied models so the layout is fixed per dataset.
pub fn assemble_row(
    coin: &str,
    t: i64,
    label: Option<bool>,
    attempt_target: Option<f64>,
    sources: &FeatureSources,
    config: &FeatureConfig,
) -> Result<FeatureRow> {
    let economic = economic_features(sources.hourly, t, config.w_econ)
        .map_err(|e| Error::MarketGap(format!("economic family: {e}")))?;
    let target = match attempt_target {
        Some(x) => Some(
            target_features(x, sources.hourly, t, config.w_econ)
                .map_err(|e| Error::MarketGap(format!("target family: {e}")))?,
        ),
        None => None,
    };
    let window = (t - config.w_tw as i64 * HOUR, t);
    let (count, uniq, mean_sentiment) =
        twitter_stats(sources.tweets, coin, window, sources.lexicon);

    let graph = coin_coin_graph(sources.tweets, window);
    let pagerank_score = if graph.node_index(coin).is_some() {
        pagerank(&graph, &PagerankOptions::default())?
            .get(coin)
            .copied()
            .unwrap_or(0.0)
    } else {
        0.0
    };

    let components = match sources.components {
        Some(assignment) => {
            component_activity_features(assignment, sources.tweets, coin, window)
        }
        None => Vec::new(),
    };

    let corex = sources.corex.map(|model| {
        let index: BTreeMap<&str, usize> = model
            .column_labels
            .iter()
            .enumerate()
            .map(|(i, u)| (u.as_str(), i))
            .collect();
        let mut active = std::collections::BTreeSet::new();
        for tweet in sources.tweets {
            if tweet.timestamp >= window.0
                && tweet.timestamp <= window.1
                && tweet.cashtags.contains(coin)
            {
                if let Some(&row) = index.get(tweet.user_id.as_str()) {
                    active.insert(row);
                }
            }
        }
        let mut mean = vec![0.0; model.k];
        if !active.is_empty() {
            for &row in &active {
                for (j, v) in model.weights[row].iter().enumerate() {
                    mean[j] += v;
                }
            }
            for v in &mut mean {
                *v /= active.len() as f64;
            }
        }
        mean
    });

    let row = FeatureRow {
        coin: coin.to_string(),
        timestamp: t,
        label,
        economic,
        target,
        twitter: vec![count, uniq, mean_sentiment],
        pagerank: pagerank_score,
        components,
        corex,
    };
    row.assert_finite()?;
    Ok(row)
}
