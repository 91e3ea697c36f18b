use serde::{Deserialize, Serialize};

use crate::textclf::raw_tokens;

const SATOSHI: f64 = 1e-8;

/// Prices extracted from a pump message. Unparseable fields are absent, never
/// guessed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParsedPrices {
    pub buy: Option<f64>,
    /// Deduplicated, ascending.
    pub targets: Vec<f64>,
    pub stop_loss: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Cue {
    Buy,
    Target,
    Stop,
}

fn cue_of(token: &str) -> Option<Cue> {
    match token {
        "buy" | "bid" | "entry" | "cp" => Some(Cue::Buy),
        "target" | "tg" | "sell" => Some(Cue::Target),
        "stop" | "stoploss" | "sl" => Some(Cue::Stop),
        _ => {
            // t1..t9 are direct target cues.
            let bytes = token.as_bytes();
            if bytes.len() == 2 && bytes[0] == b't' && (b'1'..=b'9').contains(&bytes[1]) {
                Some(Cue::Target)
            } else {
                None
            }
        }
    }
}

fn parse_number(token: &str) -> Option<f64> {
    let body = token.strip_prefix('$').unwrap_or(token);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
        return None;
    }
    let v: f64 = body.parse().ok()?;
    v.is_finite().then_some(v)
}

fn is_sat_marker(token: &str) -> bool {
    matches!(token, "sat" | "sats" | "satoshi" | "satoshis")
}

/// Rule-based buy / target / stop price extraction.
///
/// A cue token arms the matching slot; the next number fills it, converted
/// from satoshi when followed by a sat marker. Small integers 1..9 right after
/// a target cue are treated as target indices ("TARGET 2: 0.006") when another
/// number follows. Targets come out deduplicated and ascending.
pub fn parse_prices(text: &str) -> ParsedPrices {
    let tokens = raw_tokens(text);
    let mut out = ParsedPrices::default();
    let mut pending: Option<Cue> = None;

    let mut i = 0;
    while i < tokens.len() {
        let token = tokens[i].as_str();
        if let Some(cue) = cue_of(token) {
            pending = Some(cue);
            i += 1;
            continue;
        }
        if let Some(value) = parse_number(token) {
            if let Some(cue) = pending {
                let is_index = cue == Cue::Target
                    && value.fract() == 0.0
                    && (1.0..=9.0).contains(&value)
                    && tokens.get(i + 1).is_some_and(|t| parse_number(t).is_some());
                if is_index {
                    i += 1;
                    continue;
                }
                let sat = tokens.get(i + 1).is_some_and(|t| is_sat_marker(t));
                let price = if sat { value * SATOSHI } else { value };
                if price >= 0.0 {
                    match cue {
                        Cue::Buy => {
                            if out.buy.is_none() {
                                out.buy = Some(price);
                            }
                        }
                        Cue::Target => out.targets.push(price),
                        Cue::Stop => {
                            if out.stop_loss.is_none() {
                                out.stop_loss = Some(price);
                            }
                        }
                    }
                }
                pending = None;
                if sat {
                    i += 1;
                }
            }
        }
        i += 1;
    }

    out.targets
        .sort_by(|a, b| a.partial_cmp(b).expect("finite targets"));
    out.targets.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buy_and_indexed_targets() {
        let p = parse_prices("BUY: 0.0000045 TARGET 1: 0.0000050 TARGET 2: 0.0000060");
        assert_eq!(p.buy, Some(4.5e-6));
        assert_eq!(p.targets, vec![5.0e-6, 6.0e-6]);
    }

    #[test]
    fn satoshi_conversion_and_order() {
        let p = parse_prices("sell at 120 sat, buy 100 sat");
        assert_eq!(p.buy, Some(1.00e-6));
        assert_eq!(p.targets, vec![1.20e-6]);
    }

    #[test]
    fn no_cues_no_prices() {
        let p = parse_prices("great coin, DYOR");
        assert_eq!(p, ParsedPrices::default());
    }

    #[test]
    fn t_numbered_cues() {
        let p = parse_prices("entry 0.004 t1 0.005 t2 0.007 t3 0.006");
        assert_eq!(p.buy, Some(0.004));
        assert_eq!(p.targets, vec![0.005, 0.006, 0.007]);
    }

    #[test]
    fn targets_deduplicated_ascending() {
        let p = parse_prices("target 0.5 target 0.3 target 0.5");
        assert_eq!(p.targets, vec![0.3, 0.5]);
    }

    #[test]
    fn stop_loss_parsed_and_stored() {
        let p = parse_prices("buy 100 sat sell 150 sat stop 80 sat");
        assert_eq!(p.stop_loss, Some(8.0e-7));
    }

    #[test]
    fn first_buy_wins() {
        let p = parse_prices("buy 0.004 later buy 0.009");
        assert_eq!(p.buy, Some(0.004));
    }

    #[test]
    fn number_without_cue_ignored() {
        let p = parse_prices("we saw 300 percent gains");
        assert_eq!(p, ParsedPrices::default());
    }

    #[test]
    fn cp_is_a_buy_cue() {
        let p = parse_prices("CP: 0.0021");
        assert_eq!(p.buy, Some(0.0021));
    }
}
