use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Tweet;
use crate::pump::PumpAttempt;

use super::WeightedGraph;

/// Sparse attempts-by-users count matrix B of the pump-user bipartite
/// network: B[i][j] = tweets by user j mentioning attempt i's coin inside the
/// pre-anchor window.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AffiliationMatrix {
    /// Row labels: (coin, anchor) per attempt, in input order.
    pub attempts: Vec<(String, i64)>,
    /// Column labels: user ids, sorted. Only users with at least one nonzero
    /// entry become columns.
    pub users: Vec<String>,
    /// (row, col) -> count, sparse.
    pub entries: BTreeMap<(usize, usize), u32>,
    pub window_secs: i64,
}

impl AffiliationMatrix {
    pub fn rows(&self) -> usize {
        self.attempts.len()
    }

    pub fn cols(&self) -> usize {
        self.users.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries.get(&(row, col)).copied().unwrap_or(0)
    }

    /// Weighted degree of each user: its column sum, the number of times the
    /// user participated in pump windows.
    pub fn user_degrees(&self) -> BTreeMap<String, f64> {
        let mut deg: BTreeMap<String, f64> =
            self.users.iter().map(|u| (u.clone(), 0.0)).collect();
        for (&(_, col), &count) in &self.entries {
            *deg.get_mut(&self.users[col]).unwrap() += f64::from(count);
        }
        deg
    }

    /// Dense column-major expansion: one Vec per user over attempt samples.
    pub fn dense_columns(&self) -> Vec<Vec<f64>> {
        let mut cols = vec![vec![0.0; self.rows()]; self.cols()];
        for (&(row, col), &count) in &self.entries {
            cols[col][row] = f64::from(count);
        }
        cols
    }
}

/// Build B over all attempts: entry (i, j) counts tweets by user j whose
/// cashtags include coin c_i with timestamp in [t_i - w, t_i], both ends
/// closed.
pub fn pump_user_matrix(
    attempts: &[PumpAttempt],
    tweets: &[Tweet],
    window_secs: i64,
) -> AffiliationMatrix {
    let mut raw: BTreeMap<(usize, String), u32> = BTreeMap::new();
    for (row, attempt) in attempts.iter().enumerate() {
        let lo = attempt.anchor_time - window_secs;
        let hi = attempt.anchor_time;
        for tweet in tweets {
            if tweet.timestamp >= lo
                && tweet.timestamp <= hi
                && tweet.cashtags.contains(&attempt.coin)
            {
                *raw.entry((row, tweet.user_id.clone())).or_insert(0) += 1;
            }
        }
    }
    let mut users: Vec<String> = raw.keys().map(|(_, u)| u.clone()).collect();
    users.sort();
    users.dedup();
    let user_index: BTreeMap<&String, usize> =
        users.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let entries = raw
        .into_iter()
        .map(|((row, user), count)| ((row, user_index[&user]), count))
        .collect();
    AffiliationMatrix {
        attempts: attempts
            .iter()
            .map(|a| (a.coin.clone(), a.anchor_time))
            .collect(),
        users,
        entries,
        window_secs,
    }
}

/// Coin-coin co-mention graph over tweets in [t - w, t]: edge weight is the
/// per-user min of the two coins' mention counts, summed over users.
pub fn coin_coin_graph(tweets: &[Tweet], window: (i64, i64)) -> WeightedGraph {
    // user -> coin -> mention count within the window
    let mut mentions: BTreeMap<&str, BTreeMap<&str, u32>> = BTreeMap::new();
    for tweet in tweets {
        if tweet.timestamp < window.0 || tweet.timestamp > window.1 {
            continue;
        }
        let per_user = mentions.entry(&tweet.user_id).or_default();
        for coin in &tweet.cashtags {
            *per_user.entry(coin).or_insert(0) += 1;
        }
    }
    let mut graph = WeightedGraph::new();
    for per_user in mentions.values() {
        let coins: Vec<(&str, u32)> = per_user.iter().map(|(&c, &n)| (c, n)).collect();
        for (i, &(c1, n1)) in coins.iter().enumerate() {
            graph.add_node(c1);
            for &(c2, n2) in &coins[i + 1..] {
                graph.add_edge_weight(c1, c2, f64::from(n1.min(n2)));
            }
        }
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    const HOUR: i64 = 3600;

    fn tweet(user: &str, ts: i64, coins: &[&str]) -> Tweet {
        Tweet {
            tweet_id: format!("{user}-{ts}"),
            user_id: user.into(),
            timestamp: ts,
            text: coins.iter().map(|c| format!("${c}")).collect::<Vec<_>>().join(" "),
            cashtags: coins.iter().map(|c| c.to_string()).collect(),
        }
    }

    fn attempt(coin: &str, anchor: i64) -> PumpAttempt {
        PumpAttempt {
            coin: coin.into(),
            anchor_time: anchor,
            message_ids: vec![],
            buy_price: None,
            target_prices: vec![],
            stop_loss: None,
            channel_ids: BTreeSet::new(),
        }
    }

    #[test]
    fn counts_tweets_in_window() {
        let attempts = vec![attempt("XCO", 10 * HOUR)];
        let tweets = vec![
            tweet("u1", 5 * HOUR, &["XCO"]),
            tweet("u1", 9 * HOUR, &["XCO"]),
            tweet("u1", 11 * HOUR, &["XCO"]), // after anchor
            tweet("u2", 9 * HOUR, &["OTHER"]),
        ];
        let m = pump_user_matrix(&attempts, &tweets, 6 * HOUR);
        assert_eq!(m.users, vec!["u1".to_string()]);
        assert_eq!(m.get(0, 0), 2);
    }

    #[test]
    fn closed_lower_bound() {
        let attempts = vec![attempt("XCO", 10 * HOUR)];
        let tweets = vec![tweet("u1", 4 * HOUR, &["XCO"])]; // exactly t - w
        let m = pump_user_matrix(&attempts, &tweets, 6 * HOUR);
        assert_eq!(m.get(0, 0), 1);
    }

    #[test]
    fn matrix_matches_brute_force_fixture() {
        let attempts = vec![
            attempt("A", 10 * HOUR),
            attempt("B", 12 * HOUR),
            attempt("A", 30 * HOUR),
        ];
        let users = ["u1", "u2", "u3", "u4"];
        let mut tweets = Vec::new();
        for (i, u) in users.iter().enumerate() {
            for k in 0..(i + 1) {
                tweets.push(tweet(u, (5 + k as i64) * HOUR, &["A"]));
                tweets.push(tweet(u, (8 + k as i64) * HOUR, &["B"]));
            }
        }
        let w = 6 * HOUR;
        let m = pump_user_matrix(&attempts, &tweets, w);
        for (row, a) in attempts.iter().enumerate() {
            for (col, u) in m.users.iter().enumerate() {
                let expect = tweets
                    .iter()
                    .filter(|t| {
                        t.user_id == *u
                            && t.cashtags.contains(&a.coin)
                            && t.timestamp >= a.anchor_time - w
                            && t.timestamp <= a.anchor_time
                    })
                    .count() as u32;
                assert_eq!(m.get(row, col), expect, "row {row} col {col}");
            }
        }
    }

    #[test]
    fn coin_graph_single_co_mention() {
        let tweets = vec![tweet("u1", 0, &["BTC"]), tweet("u1", 10, &["ETH"])];
        let g = coin_coin_graph(&tweets, (0, HOUR));
        let (_, _, w) = g.edges().next().unwrap();
        assert_eq!(w, 1.0);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn coin_graph_no_co_mention_is_edgeless() {
        let tweets = vec![tweet("u1", 0, &["BTC"]), tweet("u2", 10, &["ETH"])];
        let g = coin_coin_graph(&tweets, (0, HOUR));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn coin_graph_min_pairing() {
        // Two users each co-mention (BTC, ETH) twice: weight 2 + 2 = 4.
        let mut tweets = Vec::new();
        for u in ["u1", "u2"] {
            for k in 0..2 {
                tweets.push(tweet(u, k * 60, &["BTC", "ETH"]));
            }
        }
        let g = coin_coin_graph(&tweets, (0, HOUR));
        let (_, _, w) = g.edges().next().unwrap();
        assert_eq!(w, 4.0);
    }

    proptest! {
        /// Sparse matrix equals the brute-force double loop on random fixtures.
        #[test]
        fn matrix_equals_brute_force(
            tweet_specs in proptest::collection::vec(
                (0usize..4, 0i64..40 * HOUR, 0usize..3), 0..80),
            anchors in proptest::collection::vec((0usize..3, 6i64..40), 1..6),
        ) {
            let coins = ["A", "B", "C"];
            let tweets: Vec<Tweet> = tweet_specs
                .iter()
                .enumerate()
                .map(|(i, &(u, ts, c))| {
                    let mut t = tweet(&format!("u{u}"), ts, &[coins[c]]);
                    t.tweet_id = format!("t{i}");
                    t
                })
                .collect();
            let attempts: Vec<PumpAttempt> = anchors
                .iter()
                .map(|&(c, h)| attempt(coins[c], h * HOUR))
                .collect();
            let w = 6 * HOUR;
            let m = pump_user_matrix(&attempts, &tweets, w);
            for (row, a) in attempts.iter().enumerate() {
                for (col, u) in m.users.iter().enumerate() {
                    let expect = tweets
                        .iter()
                        .filter(|t| {
                            t.user_id == *u
                                && t.cashtags.contains(&a.coin)
                                && t.timestamp >= a.anchor_time - w
                                && t.timestamp <= a.anchor_time
                        })
                        .count() as u32;
                    prop_assert_eq!(m.get(row, col), expect);
                }
            }
        }
    }
}
