use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::types::{
    AccountState, AccountStatus, CoinRegistry, CoinSeries, MarketPoint, SocialMessage, Tweet,
};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Deserialize)]
struct MarketRow {
    timestamp: i64,
    coin: String,
    price_btc: f64,
    price_usd: f64,
    volume: f64,
    market_cap: f64,
}

/// Load the market CSV (`timestamp,coin,price_btc,price_usd,volume,market_cap`)
/// into one sorted series per coin. Duplicate (coin, timestamp) rows are hard
/// errors: surfacing data corruption beats guessing.
pub fn load_market(path: impl AsRef<Path>) -> Result<BTreeMap<String, CoinSeries>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));

    // (timestamp, point) per coin, with the 1-based data line for error reporting.
    let mut rows: BTreeMap<String, Vec<(usize, MarketPoint)>> = BTreeMap::new();
    for (i, record) in reader.deserialize::<MarketRow>().enumerate() {
        let line = i + 2; // header is line 1
        let row = record.map_err(|e| parse_err(path, line, e.to_string()))?;
        let coin = row.coin.to_uppercase();
        for (name, v) in [
            ("price_btc", row.price_btc),
            ("price_usd", row.price_usd),
            ("volume", row.volume),
            ("market_cap", row.market_cap),
        ] {
            if !v.is_finite() {
                return Err(parse_err(path, line, format!("{name} is not finite")));
            }
            if v < 0.0 {
                return Err(parse_err(path, line, format!("negative {name}: {v}")));
            }
        }
        rows.entry(coin).or_default().push((
            line,
            MarketPoint {
                timestamp: row.timestamp,
                price_btc: row.price_btc,
                price_usd: row.price_usd,
                volume: row.volume,
                market_cap: row.market_cap,
            },
        ));
    }

    let mut out = BTreeMap::new();
    for (coin, mut points) in rows {
        points.sort_by_key(|(_, p)| p.timestamp);
        for w in points.windows(2) {
            if w[0].1.timestamp == w[1].1.timestamp {
                return Err(Error::DuplicateObservation {
                    path: path.to_path_buf(),
                    line: w[1].0,
                    coin,
                    timestamp: w[1].1.timestamp,
                });
            }
        }
        out.insert(
            coin.clone(),
            CoinSeries {
                coin,
                points: points.into_iter().map(|(_, p)| p).collect(),
            },
        );
    }
    Ok(out)
}

pub fn save_market(path: impl AsRef<Path>, market: &BTreeMap<String, CoinSeries>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["timestamp", "coin", "price_btc", "price_usd", "volume", "market_cap"])
        .map_err(|e| parse_err(path, 1, e.to_string()))?;
    for series in market.values() {
        for p in &series.points {
            w.write_record([
                p.timestamp.to_string(),
                series.coin.clone(),
                p.price_btc.to_string(),
                p.price_usd.to_string(),
                p.volume.to_string(),
                p.market_cap.to_string(),
            ])
            .map_err(|e| parse_err(path, 1, e.to_string()))?;
        }
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

/// Load channel messages from JSONL. Labeled records must have non-blank text.
pub fn load_messages(path: impl AsRef<Path>) -> Result<Vec<SocialMessage>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let msg: SocialMessage =
            serde_json::from_str(&line).map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        if msg.label.is_some() && msg.text.trim().is_empty() {
            return Err(parse_err(path, i + 1, "labeled record with blank text"));
        }
        out.push(msg);
    }
    Ok(out)
}

pub fn save_messages(path: impl AsRef<Path>, messages: &[SocialMessage]) -> Result<()> {
    write_jsonl(path.as_ref(), messages)
}

/// Load tweets from JSONL. When a registry is supplied, cashtags must resolve.
pub fn load_tweets(path: impl AsRef<Path>, registry: Option<&CoinRegistry>) -> Result<Vec<Tweet>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let tweet: Tweet =
            serde_json::from_str(&line).map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        if let Some(reg) = registry {
            for tag in &tweet.cashtags {
                if !reg.contains(tag) {
                    return Err(parse_err(path, i + 1, format!("unknown cashtag {tag}")));
                }
            }
        }
        out.push(tweet);
    }
    Ok(out)
}

pub fn save_tweets(path: impl AsRef<Path>, tweets: &[Tweet]) -> Result<()> {
    write_jsonl(path.as_ref(), tweets)
}

fn write_jsonl<T: serde::Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut file = File::create(path).map_err(|e| io_err(path, e))?;
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| parse_err(path, 0, e.to_string()))?;
        writeln!(file, "{line}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Load account statuses from CSV (`user_id,status,botometer_score`; score may
/// be blank). Scores outside [0, 1] are rejected.
pub fn load_statuses(path: impl AsRef<Path>) -> Result<BTreeMap<String, AccountStatus>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut out = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_err(path, line, e.to_string()))?;
        if record.len() < 2 {
            return Err(parse_err(path, line, "missing required field"));
        }
        let user_id = record[0].to_string();
        let status = match &record[1] {
            "active" => AccountState::Active,
            "suspended" => AccountState::Suspended,
            other => return Err(parse_err(path, line, format!("unknown status {other:?}"))),
        };
        let score = match record.get(2).map(str::trim) {
            None | Some("") => None,
            Some(raw) => {
                let v: f64 = raw
                    .parse()
                    .map_err(|e| parse_err(path, line, format!("bad botometer_score: {e}")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(parse_err(path, line, format!("score out of range: {v}")));
                }
                Some(v)
            }
        };
        out.insert(
            user_id.clone(),
            AccountStatus {
                user_id,
                status,
                botometer_score: score,
            },
        );
    }
    Ok(out)
}

pub fn save_statuses(
    path: impl AsRef<Path>,
    statuses: &BTreeMap<String, AccountStatus>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["user_id", "status", "botometer_score"])
        .map_err(|e| parse_err(path, 1, e.to_string()))?;
    for s in statuses.values() {
        let status = match s.status {
            AccountState::Active => "active",
            AccountState::Suspended => "suspended",
        };
        let score = s.botometer_score.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([s.user_id.as_str(), status, score.as_str()])
            .map_err(|e| parse_err(path, 1, e.to_string()))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

/// Load the coin registry: one symbol per line plus optional `alias=symbol`
/// lines. `#` starts a comment.
pub fn load_registry(path: impl AsRef<Path>) -> Result<CoinRegistry> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut symbols = Vec::new();
    let mut aliases = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((alias, symbol)) = line.split_once('=') {
            aliases.push((alias.trim().to_string(), symbol.trim().to_string()));
        } else {
            symbols.push(line.to_string());
        }
        let _ = i;
    }
    if symbols.is_empty() {
        return Err(Error::EmptyInput(format!(
            "registry {} has no symbols",
            path.display()
        )));
    }
    CoinRegistry::new(symbols, aliases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn market_two_rows_one_coin() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "m.csv",
            "timestamp,coin,price_btc,price_usd,volume,market_cap\n\
             0,BTC,1.0,10000,5,100\n\
             300,BTC,1.0,10100,6,101\n",
        );
        let market = load_market(&p).unwrap();
        assert_eq!(market["BTC"].points.len(), 2);
        assert_eq!(market["BTC"].points[1].timestamp, 300);
    }

    #[test]
    fn market_duplicate_timestamp_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "m.csv",
            "timestamp,coin,price_btc,price_usd,volume,market_cap\n\
             0,BTC,1.0,10000,5,100\n\
             0,BTC,2.0,20000,5,100\n",
        );
        let err = load_market(&p).unwrap_err();
        assert!(err.to_string().contains("duplicate observation"), "{err}");
    }

    #[test]
    fn market_header_only_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "m.csv",
            "timestamp,coin,price_btc,price_usd,volume,market_cap\n",
        );
        assert!(load_market(&p).unwrap().is_empty());
    }

    #[test]
    fn market_negative_value_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "m.csv",
            "timestamp,coin,price_btc,price_usd,volume,market_cap\n0,BTC,-1.0,1,1,1\n",
        );
        let err = load_market(&p).unwrap_err();
        assert!(err.to_string().contains("negative"), "{err}");
    }

    #[test]
    fn tweets_parse_cashtags() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "t.jsonl",
            r#"{"tweet_id":"1","user_id":"u1","timestamp":5,"text":"go $BTC","cashtags":["BTC"]}"#,
        );
        let tweets = load_tweets(&p, None).unwrap();
        assert_eq!(tweets.len(), 1);
        assert!(tweets[0].cashtags.contains("BTC"));
    }

    #[test]
    fn statuses_score_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(&dir, "s.csv", "user_id,status,botometer_score\nu1,active,1.2\n");
        let err = load_statuses(&p).unwrap_err();
        assert!(err.to_string().contains("score out of range"), "{err}");
    }

    #[test]
    fn statuses_blank_score_is_none() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "s.csv",
            "user_id,status,botometer_score\nu1,suspended,\n",
        );
        let statuses = load_statuses(&p).unwrap();
        assert_eq!(statuses["u1"].botometer_score, None);
        assert_eq!(statuses["u1"].status, AccountState::Suspended);
    }

    #[test]
    fn empty_files_load_empty() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(&dir, "e.jsonl", "");
        assert!(load_messages(&p).unwrap().is_empty());
        assert!(load_tweets(&p, None).unwrap().is_empty());
    }

    #[test]
    fn messages_label_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            &dir,
            "msg.jsonl",
            "{\"channel_id\":\"c1\",\"timestamp\":10,\"text\":\"BUY now\",\"label\":\"pump\"}\n\
             {\"channel_id\":\"c1\",\"timestamp\":11,\"text\":\"weather\"}\n",
        );
        let msgs = load_messages(&p).unwrap();
        assert_eq!(msgs[0].label, Some(super::super::PumpLabel::Pump));
        assert_eq!(msgs[1].label, None);
    }

    #[test]
    fn registry_file_with_aliases() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(&dir, "reg.txt", "BTC\nETH\n# comment\nbitcoin=BTC\n");
        let reg = load_registry(&p).unwrap();
        assert_eq!(reg.resolve("bitcoin"), Some("BTC"));
        assert_eq!(reg.len(), 2);
    }
}
