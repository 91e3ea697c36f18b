use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// One market observation. All timestamps in this crate are integer UTC seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketPoint {
    pub timestamp: i64,
    pub price_btc: f64,
    pub price_usd: f64,
    pub volume: f64,
    pub market_cap: f64,
}

/// Per-coin market series, strictly increasing in time. Base granularity is
/// five minutes but gaps are permitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinSeries {
    pub coin: String,
    pub points: Vec<MarketPoint>,
}

impl CoinSeries {
    pub fn first_timestamp(&self) -> Option<i64> {
        self.points.first().map(|p| p.timestamp)
    }

    pub fn last_timestamp(&self) -> Option<i64> {
        self.points.last().map(|p| p.timestamp)
    }

    /// Last observation at or before `t`, if any.
    pub fn at_or_before(&self, t: i64) -> Option<&MarketPoint> {
        match self.points.binary_search_by_key(&t, |p| p.timestamp) {
            Ok(i) => Some(&self.points[i]),
            Err(0) => None,
            Err(i) => Some(&self.points[i - 1]),
        }
    }

    /// True when observations exist at or before `from` and at or after `to`.
    pub fn covers(&self, from: i64, to: i64) -> bool {
        match (self.first_timestamp(), self.last_timestamp()) {
            (Some(first), Some(last)) => first <= from && last >= to,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpLabel {
    Pump,
    NotPump,
}

/// A channel message, optionally carrying a human or predicted pump label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialMessage {
    pub channel_id: String,
    pub timestamp: i64,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<PumpLabel>,
}

/// A microblog post with its cashtag mentions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub tweet_id: String,
    pub user_id: String,
    pub timestamp: i64,
    pub text: String,
    pub cashtags: BTreeSet<String>,
}

/// The set of known coin symbols plus aliases (e.g. `bitcoin=BTC`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoinRegistry {
    symbols: BTreeSet<String>,
    aliases: BTreeMap<String, String>,
}

impl CoinRegistry {
    pub fn new(
        symbols: impl IntoIterator<Item = String>,
        aliases: impl IntoIterator<Item = (String, String)>,
    ) -> crate::error::Result<Self> {
        let symbols: BTreeSet<String> = symbols.into_iter().map(|s| s.to_uppercase()).collect();
        let mut reg = CoinRegistry {
            symbols,
            aliases: BTreeMap::new(),
        };
        for (alias, symbol) in aliases {
            let symbol = symbol.to_uppercase();
            if !reg.symbols.contains(&symbol) {
                return Err(crate::error::Error::Invariant(format!(
                    "alias {alias} maps to unknown symbol {symbol}"
                )));
            }
            reg.aliases.insert(alias.to_lowercase(), symbol);
        }
        Ok(reg)
    }

    pub fn from_symbols<S: AsRef<str>>(symbols: impl IntoIterator<Item = S>) -> Self {
        CoinRegistry {
            symbols: symbols
                .into_iter()
                .map(|s| s.as_ref().to_uppercase())
                .collect(),
            aliases: BTreeMap::new(),
        }
    }

    /// Canonical symbol for a token, matching symbols and aliases
    /// case-insensitively. Returns `None` for unknown tokens.
    pub fn resolve(&self, token: &str) -> Option<&str> {
        let upper = token.to_uppercase();
        if let Some(sym) = self.symbols.get(&upper) {
            return Some(sym);
        }
        self.aliases.get(&token.to_lowercase()).map(|s| s.as_str())
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.as_str())
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.symbols.contains(&symbol.to_uppercase())
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccountState {
    Active,
    Suspended,
}

/// Account status as supplied by the file-backed provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccountStatus {
    pub user_id: String,
    pub status: AccountState,
    pub botometer_score: Option<f64>,
}
