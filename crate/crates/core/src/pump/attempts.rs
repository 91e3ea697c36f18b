use std::collections::BTreeMap;

use crate::corpus::{CoinRegistry, PumpLabel, SocialMessage};

use super::mentions::extract_mentions;
use super::prices::parse_prices;
use super::PumpAttempt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttemptConfig {
    /// Messages mentioning more than this many coins are dropped as listicles.
    pub max_coins: usize,
    /// A message joins the current attempt iff its timestamp is within this
    /// window of the anchor.
    pub merge_window_secs: i64,
}

impl Default for AttemptConfig {
    fn default() -> Self {
        AttemptConfig {
            max_coins: 3,
            merge_window_secs: 3 * 3600,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AttemptBuildStats {
    pub pump_messages: usize,
    pub dropped_many_coins: usize,
    pub dropped_no_mention: usize,
    /// Attempts whose later members parsed prices that disagree with the
    /// adopted (earliest parseable) member.
    pub price_disagreements: usize,
}

/// Group pump-labeled messages into per-coin attempts with an anchored merge
/// window: a message joins the open attempt iff it falls within the window of
/// the anchor, otherwise it starts a new attempt anchored at itself. Prices
/// come from the earliest member that parses; targets at or below the buy are
/// dropped to keep the attempt invariant.
pub fn build_attempts(
    messages: &[SocialMessage],
    registry: &CoinRegistry,
    config: &AttemptConfig,
) -> (Vec<PumpAttempt>, AttemptBuildStats) {
    let mut stats = AttemptBuildStats::default();
    // coin -> [(message index, timestamp)]
    let mut per_coin: BTreeMap<String, Vec<(usize, i64)>> = BTreeMap::new();

    for (idx, msg) in messages.iter().enumerate() {
        if msg.label != Some(PumpLabel::Pump) {
            continue;
        }
        stats.pump_messages += 1;
        let mentions = extract_mentions(msg, registry);
        if mentions.is_empty() {
            stats.dropped_no_mention += 1;
            continue;
        }
        if mentions.len() > config.max_coins {
            stats.dropped_many_coins += 1;
            continue;
        }
        for coin in mentions {
            per_coin.entry(coin).or_default().push((idx, msg.timestamp));
        }
    }

    let mut attempts = Vec::new();
    for (coin, mut members) in per_coin {
        members.sort_by_key(|&(idx, ts)| (ts, idx));
        let mut open: Option<PumpAttempt> = None;
        for (idx, ts) in members {
            let start_new = match &open {
                Some(attempt) => ts > attempt.anchor_time + config.merge_window_secs,
                None => true,
            };
            if start_new {
                if let Some(done) = open.take() {
                    attempts.push(done);
                }
                open = Some(PumpAttempt {
                    coin: coin.clone(),
                    anchor_time: ts,
                    message_ids: vec![idx],
                    buy_price: None,
                    target_prices: Vec::new(),
                    stop_loss: None,
                    channel_ids: Default::default(),
                });
            } else {
                open.as_mut().unwrap().message_ids.push(idx);
            }
        }
        if let Some(done) = open.take() {
            attempts.push(done);
        }
    }

    for attempt in &mut attempts {
        let mut adopted = false;
        for &idx in &attempt.message_ids {
            attempt
                .channel_ids
                .insert(messages[idx].channel_id.clone());
            let parsed = parse_prices(&messages[idx].text);
            if parsed.buy.is_none() && parsed.targets.is_empty() {
                continue;
            }
            if !adopted {
                adopted = true;
                attempt.buy_price = parsed.buy;
                attempt.stop_loss = parsed.stop_loss;
                attempt.target_prices = match parsed.buy {
                    Some(buy) => parsed.targets.into_iter().filter(|&t| t > buy).collect(),
                    None => parsed.targets,
                };
            } else if parsed.buy != attempt.buy_price || parsed.targets != attempt.target_prices {
                stats.price_disagreements += 1;
            }
        }
    }

    attempts.sort_by(|a, b| (&a.coin, a.anchor_time).cmp(&(&b.coin, b.anchor_time)));
    (attempts, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HOUR: i64 = 3600;

    fn pump_msg(text: &str, ts: i64) -> SocialMessage {
        SocialMessage {
            channel_id: "ch1".into(),
            timestamp: ts,
            text: text.into(),
            label: Some(PumpLabel::Pump),
        }
    }

    fn registry() -> CoinRegistry {
        CoinRegistry::from_symbols(["XCO", "YCO", "A", "B", "C", "D", "E", "F"])
    }

    #[test]
    fn anchored_window_grouping() {
        // Hours 0, 2, 2.5, 6: attempts anchored at 0 (members 0, 2, 2.5) and 6.
        let msgs: Vec<SocialMessage> = [0.0, 2.0, 2.5, 6.0]
            .iter()
            .map(|h| pump_msg("pump $XCO", (h * HOUR as f64) as i64))
            .collect();
        let (attempts, _) = build_attempts(&msgs, &registry(), &AttemptConfig::default());
        assert_eq!(attempts.len(), 2);
        assert_eq!(attempts[0].anchor_time, 0);
        assert_eq!(attempts[0].message_ids, vec![0, 1, 2]);
        assert_eq!(attempts[1].anchor_time, 6 * HOUR);
    }

    #[test]
    fn single_message_single_attempt() {
        let msgs = vec![pump_msg("buy $XCO now", 42)];
        let (attempts, _) = build_attempts(&msgs, &registry(), &AttemptConfig::default());
        assert_eq!(attempts.len(), 1);
        assert_eq!(attempts[0].anchor_time, 42);
    }

    #[test]
    fn many_coins_dropped() {
        let msgs = vec![pump_msg("$A $B $C $D $E $F all going up", 0)];
        let (attempts, stats) = build_attempts(&msgs, &registry(), &AttemptConfig::default());
        assert!(attempts.is_empty());
        assert_eq!(stats.dropped_many_coins, 1);
    }

    #[test]
    fn prices_from_earliest_parseable_member() {
        let msgs = vec![
            pump_msg("$XCO forming up nicely", 0),
            pump_msg("$XCO buy 100 sat sell 150 sat", HOUR),
            pump_msg("$XCO buy 110 sat sell 160 sat", 2 * HOUR),
        ];
        let (attempts, stats) = build_attempts(&msgs, &registry(), &AttemptConfig::default());
        assert_eq!(attempts.len(), 1);
        assert_eq!(attempts[0].buy_price, Some(1.0e-6));
        assert_eq!(attempts[0].target_prices, vec![1.5e-6]);
        assert_eq!(stats.price_disagreements, 1);
    }

    #[test]
    fn targets_below_buy_dropped() {
        let msgs = vec![pump_msg("$XCO buy 0.005 target 0.004 target 0.008", 0)];
        let (attempts, _) = build_attempts(&msgs, &registry(), &AttemptConfig::default());
        assert_eq!(attempts[0].target_prices, vec![0.008]);
    }

    #[test]
    fn boundary_exactly_three_hours_joins() {
        let msgs = vec![pump_msg("$XCO go", 0), pump_msg("$XCO go", 3 * HOUR)];
        let (attempts, _) = build_attempts(&msgs, &registry(), &AttemptConfig::default());
        assert_eq!(attempts.len(), 1);
    }

    #[test]
    fn non_pump_messages_ignored() {
        let mut msg = pump_msg("$XCO buy 100 sat", 0);
        msg.label = Some(PumpLabel::NotPump);
        let (attempts, _) = build_attempts(&[msg], &registry(), &AttemptConfig::default());
        assert!(attempts.is_empty());
    }

    proptest! {
        /// No member of a later attempt lies within [anchor, anchor + window]
        /// of the previous attempt for the same coin, and each message joins
        /// at most one attempt per coin.
        #[test]
        fn anchored_window_invariant(raw_ts in proptest::collection::vec(0i64..200 * HOUR, 1..60)) {
            let msgs: Vec<SocialMessage> =
                raw_ts.iter().map(|&ts| pump_msg("pump $XCO", ts)).collect();
            let config = AttemptConfig::default();
            let (attempts, _) = build_attempts(&msgs, &registry(), &config);
            let mut seen = std::collections::BTreeSet::new();
            for pair in attempts.windows(2) {
                for &idx in &pair[1].message_ids {
                    prop_assert!(
                        msgs[idx].timestamp > pair[0].anchor_time + config.merge_window_secs
                    );
                }
            }
            for attempt in &attempts {
                prop_assert_eq!(attempt.anchor_time,
                    attempt.message_ids.iter().map(|&i| msgs[i].timestamp).min().unwrap());
                for &idx in &attempt.message_ids {
                    prop_assert!(seen.insert(idx), "message in two attempts");
                }
            }
            let member_total: usize = attempts.iter().map(|a| a.message_ids.len()).sum();
            prop_assert_eq!(member_total, msgs.len());
        }
    }
}
