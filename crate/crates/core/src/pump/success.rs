use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::CoinSeries;
use crate::error::{Error, Result};

use super::{PumpAttempt, SuccessVerdict};

/// Which extracted target drives success. The first (lowest) target is the
/// conservative default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetRule {
    First,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceUnit {
    Btc,
    Usd,
}

/// Relative slack on the threshold comparison so decimal thresholds like 0.9
/// keep the boundary inclusive despite binary rounding.
const THRESHOLD_EPS: f64 = 1e-9;

/// Success iff the peak price in (anchor, anchor + window] reaches
/// threshold_pct of the target. Sub-1 targets (satoshi-style) are compared in
/// BTC units, others in USD; the unit is recorded in the verdict.
pub fn evaluate_success(
    attempt: &PumpAttempt,
    series: &CoinSeries,
    threshold_pct: f64,
    window_hours: u32,
    rule: TargetRule,
) -> Result<SuccessVerdict> {
    let target = attempt.target(rule).ok_or(Error::UnpricedAttempt {
        coin: attempt.coin.clone(),
        anchor: attempt.anchor_time,
    })?;
    let window = i64::from(window_hours) * 3600;
    let from = attempt.anchor_time;
    let to = attempt.anchor_time + window;
    if !series.covers(from, to) {
        return Err(Error::MarketGap(format!(
            "{} not covered on [{from}, {to}]",
            attempt.coin
        )));
    }
    let unit = if target < 1.0 {
        PriceUnit::Btc
    } else {
        PriceUnit::Usd
    };
    let mut peak: Option<(f64, i64)> = None;
    for p in &series.points {
        if p.timestamp <= from || p.timestamp > to {
            continue;
        }
        let price = match unit {
            PriceUnit::Btc => p.price_btc,
            PriceUnit::Usd => p.price_usd,
        };
        // Strict > keeps the earliest timestamp among ties.
        if peak.is_none_or(|(best, _)| price > best) {
            peak = Some((price, p.timestamp));
        }
    }
    let (peak_price, peak_time) = peak.ok_or_else(|| {
        Error::MarketGap(format!(
            "{} has no observations in ({from}, {to}]",
            attempt.coin
        ))
    })?;
    let bar = threshold_pct * target;
    let success = peak_price >= bar - THRESHOLD_EPS * bar.abs();
    Ok(SuccessVerdict {
        coin: attempt.coin.clone(),
        anchor_time: attempt.anchor_time,
        threshold_pct,
        window_hours,
        target,
        success,
        peak_price,
        peak_time,
        unit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub threshold_pct: f64,
    pub window_hours: u32,
    pub evaluable: usize,
    pub successes: usize,
    pub unpriced: usize,
    pub market_gap: usize,
}

impl GridCell {
    /// Success ratio, absent when no attempt was evaluable in this cell.
    pub fn ratio(&self) -> Option<f64> {
        (self.evaluable > 0).then(|| self.successes as f64 / self.evaluable as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuccessGrid {
    pub cells: Vec<GridCell>,
}

impl SuccessGrid {
    pub fn cell(&self, threshold_pct: f64, window_hours: u32) -> Option<&GridCell> {
        self.cells
            .iter()
            .find(|c| c.threshold_pct == threshold_pct && c.window_hours == window_hours)
    }
}

/// Success ratio per (threshold, window) cell. Unpriced attempts and market
/// gaps are counted separately rather than folded into the denominator.
pub fn success_ratio_grid(
    attempts: &[PumpAttempt],
    market: &BTreeMap<String, CoinSeries>,
    thresholds: &[f64],
    windows: &[u32],
    rule: TargetRule,
) -> Result<SuccessGrid> {
    if attempts.is_empty() {
        return Err(Error::EmptyInput("no attempts for success grid".into()));
    }
    let mut cells = Vec::with_capacity(thresholds.len() * windows.len());
    for &threshold in thresholds {
        for &window in windows {
            let mut cell = GridCell {
                threshold_pct: threshold,
                window_hours: window,
                evaluable: 0,
                successes: 0,
                unpriced: 0,
                market_gap: 0,
            };
            for attempt in attempts {
                let Some(series) = market.get(&attempt.coin) else {
                    cell.market_gap += 1;
                    continue;
                };
                match evaluate_success(attempt, series, threshold, window, rule) {
                    Ok(verdict) => {
                        cell.evaluable += 1;
                        if verdict.success {
                            cell.successes += 1;
                        }
                    }
                    Err(Error::UnpricedAttempt { .. }) => cell.unpriced += 1,
                    Err(Error::MarketGap(_)) => cell.market_gap += 1,
                    Err(other) => return Err(other),
                }
            }
            cells.push(cell);
        }
    }
    Ok(SuccessGrid { cells })
}
