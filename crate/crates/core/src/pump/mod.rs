//! Pump-attempt extraction: coin mentions, rule-based buy/target price
//! parsing, 3-hour anchored aggregation, and success evaluation against
//! market data.

mod attempts;
mod mentions;
mod prices;
mod success;

pub use attempts::{build_attempts, AttemptBuildStats, AttemptConfig};
pub use mentions::extract_mentions;
pub use prices::{parse_prices, ParsedPrices};
pub use success::{
    evaluate_success, success_ratio_grid, GridCell, PriceUnit, SuccessGrid, TargetRule,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// A (coin, timestamp) pump attempt with its member messages and parsed
/// prices. The anchor is the earliest member's timestamp; targets are strictly
/// increasing; the buy price sits below every target when both are present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpAttempt {
    pub coin: String,
    pub anchor_time: i64,
    /// Indices into the message list the attempt was built from.
    pub message_ids: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buy_price: Option<f64>,
    pub target_prices: Vec<f64>,
    /// Parsed and stored, never evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_loss: Option<f64>,
    pub channel_ids: BTreeSet<String>,
}

impl PumpAttempt {
    /// Target price driving success evaluation under the given rule.
    pub fn target(&self, rule: TargetRule) -> Option<f64> {
        match rule {
            TargetRule::First => self.target_prices.first().copied(),
            TargetRule::Max => self.target_prices.last().copied(),
        }
    }
}

/// Outcome of checking one attempt against market data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessVerdict {
    pub coin: String,
    pub anchor_time: i64,
    pub threshold_pct: f64,
    pub window_hours: u32,
    pub target: f64,
    pub success: bool,
    pub peak_price: f64,
    pub peak_time: i64,
    pub unit: PriceUnit,
}
