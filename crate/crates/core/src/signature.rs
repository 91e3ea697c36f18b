//! Aggregated pump signatures: minmax-normalized price and tweet-volume
//! segments centered on pump anchors, averaged and compared against
//! uniformly random center timestamps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CoinSeries, Tweet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Price,
    TweetVolume,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Pump,
    Random,
}

/// One normalized window around a center timestamp. Offsets are signed
/// minutes, symmetric around zero, stepping at the series granularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub coin: String,
    pub center: i64,
    pub offsets: Vec<i64>,
    pub values: Vec<f64>,
}

/// Pointwise mean of segments sharing an offset grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateCurve {
    pub kind: SegmentKind,
    pub baseline: Baseline,
    pub offsets: Vec<i64>,
    pub mean_values: Vec<f64>,
    pub n: usize,
}

/// Minmax to [0, 1]; constant input maps to all zeros so dead segments stay
/// visible and bounded.
pub fn minmax_normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max - min).is_normal() {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - min) / (max - min)).collect()
}

fn offset_grid(half_window_secs: i64, step_secs: i64) -> Vec<i64> {
    let steps = half_window_secs / step_secs;
    (-steps..=steps).map(|k| k * step_secs / 60).collect()
}

/// Extract a price segment by last-observation-carried-forward sampling on
/// the step grid. The series must cover the full window.
pub fn extract_price_segment(
    series: &CoinSeries,
    center: i64,
    half_window_secs: i64,
    step_secs: i64,
) -> Result<Segment> {
    let from = center - half_window_secs;
    let to = center + half_window_secs;
    if !series.covers(from, to) {
        return Err(Error::SegmentGap {
            coin: series.coin.clone(),
            from,
            to,
        });
    }
    let offsets = offset_grid(half_window_secs, step_secs);
    let raw: Vec<f64> = offsets
        .iter()
        .map(|&minutes| {
            let t = center + minutes * 60;
            series
                .at_or_before(t)
                .map(|p| p.price_btc)
                .expect("covered window")
        })
        .collect();
    Ok(Segment {
        coin: series.coin.clone(),
        center,
        offsets,
        values: minmax_normalize(&raw),
    })
}

/// Extract a tweet-volume segment: per grid point, the count of the coin's
/// tweets in the half-open bucket centered there, then minmax-normalized.
pub fn extract_tweet_segment(
    coin: &str,
    tweets: &[Tweet],
    center: i64,
    half_window_secs: i64,
    step_secs: i64,
) -> Segment {
    let offsets = offset_grid(half_window_secs, step_secs);
    let raw: Vec<f64> = offsets
        .iter()
        .map(|&minutes| {
            let t = center + minutes * 60;
            let lo = t - step_secs / 2;
            let hi = t + step_secs / 2;
            tweets
                .iter()
                .filter(|tw| {
                    tw.cashtags.contains(coin) && tw.timestamp >= lo && tw.timestamp < hi
                })
                .count() as f64
        })
        .collect();
    Segment {
        coin: coin.to_string(),
        center,
        offsets,
        values: minmax_normalize(&raw),
    }
}

/// Pointwise arithmetic mean over segments with identical offset grids.
pub fn aggregate(
    segments: &[Segment],
    kind: SegmentKind,
    baseline: Baseline,
) -> Result<AggregateCurve> {
    let first = segments
        .first()
        .ok_or_else(|| Error::EmptyInput("no segments to aggregate".into()))?;
    for seg in segments {
        if seg.offsets != first.offsets {
            return Err(Error::OffsetMismatch);
        }
    }
    let n = segments.len();
    let mut mean = vec![0.0; first.offsets.len()];
    for seg in segments {
        for (m, v) in mean.iter_mut().zip(&seg.values) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    Ok(AggregateCurve {
        kind,
        baseline,
        offsets: first.offsets.clone(),
        mean_values: mean,
        n,
    })
}

/// Uniformly random center timestamps that admit a full segment inside the
/// extent. Deterministic per seed.
pub fn random_baseline(
    count: usize,
    extent: (i64, i64),
    half_window_secs: i64,
    seed: u64,
) -> Result<Vec<i64>> {
    let lo = extent.0 + half_window_secs;
    let hi = extent.1 - half_window_secs;
    if count == 0 {
        return Err(Error::EmptyInput("random baseline count".into()));
    }
    if lo > hi {
        return Err(Error::ExtentTooSmall {
            need: 2 * half_window_secs,
            have: extent.1 - extent.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| rng.gen_range(lo..=hi)).collect())
}
