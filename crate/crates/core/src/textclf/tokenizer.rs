use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::corpus::CoinRegistry;

use super::porter;

/// Tokenizer settings. Placeholders are uppercase so normal (lowercased)
/// tokenization can never produce them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub stem: bool,
    pub coin_placeholder: String,
    pub number_token: String,
    pub ngram_range: (usize, usize),
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            stem: true,
            coin_placeholder: "OOV".to_string(),
            number_token: "NUM".to_string(),
            ngram_range: (1, 2),
        }
    }
}

fn token_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\$?[\p{Alphabetic}\p{Nd}]+(?:\.\p{Nd}+)?").unwrap())
}

fn is_numeric(token: &str) -> bool {
    !token.is_empty()
        && token.bytes().all(|b| b.is_ascii_digit() || b == b'.')
        && token.bytes().any(|b| b.is_ascii_digit())
}

/// Lowercase, split on punctuation, collapse every coin mention (registry
/// symbol, alias, or `$cashtag`) into the coin placeholder and every numeric
/// literal into the number token, then Porter-stem the rest.
pub fn tokenize(text: &str, registry: &CoinRegistry, config: &TokenizerConfig) -> Vec<String> {
    let lower = text.to_lowercase();
    let mut out = Vec::new();
    for m in token_regex().find_iter(&lower) {
        let raw = m.as_str();
        let (is_cashtag, body) = match raw.strip_prefix('$') {
            Some(rest) => (true, rest),
            None => (false, raw),
        };
        if is_numeric(body) {
            out.push(config.number_token.clone());
        } else if is_cashtag || registry.resolve(body).is_some() {
            out.push(config.coin_placeholder.clone());
        } else if config.stem {
            out.push(porter::stem(body));
        } else {
            out.push(body.to_string());
        }
    }
    out
}

/// The raw lowercase tokens of a text, with no replacement or stemming.
/// Used by mention extraction and sentiment scoring.
pub fn raw_tokens(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    token_regex()
        .find_iter(&lower)
        .map(|m| m.as_str().to_string())
        .collect()
}
