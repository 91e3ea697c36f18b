use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::textclf::raw_tokens;

/// Valence lexicon with negation and booster rules. Valences live in [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    pub valences: BTreeMap<String, f64>,
    pub negations: Vec<String>,
    pub boosters: BTreeMap<String, f64>,
}

/// Squash constant: score = s / sqrt(s^2 + ALPHA).
const ALPHA: f64 = 15.0;

/// How far back a negation or booster reaches, in tokens.
const SCOPE: usize = 2;

/// Sum token valences, flipping under a preceding negation within two tokens
/// and scaling by preceding boosters, then squash into [-1, 1].
pub fn sentiment_score(text: &str, lexicon: &SentimentLexicon) -> f64 {
    let tokens = raw_tokens(text);
    let mut sum = 0.0;
    for (i, token) in tokens.iter().enumerate() {
        let Some(&valence) = lexicon.valences.get(token.as_str()) else {
            continue;
        };
        let mut v = valence;
        let start = i.saturating_sub(SCOPE);
        for prior in &tokens[start..i] {
            if let Some(&mult) = lexicon.boosters.get(prior.as_str()) {
                v *= mult;
            }
        }
        if tokens[start..i]
            .iter()
            .any(|t| lexicon.negations.iter().any(|n| n == t))
        {
            v = -v;
        }
        sum += v;
    }
    if sum == 0.0 {
        return 0.0;
    }
    sum / (sum * sum + ALPHA).sqrt()
}

impl SentimentLexicon {
    /// Negate every valence; used by the antisymmetry property test.
    pub fn negated(&self) -> Self {
        SentimentLexicon {
            valences: self
                .valences
                .iter()
                .map(|(k, v)| (k.clone(), -v))
                .collect(),
            negations: self.negations.clone(),
            boosters: self.boosters.clone(),
        }
    }

    /// Built-in finance/slang lexicon.
    pub fn builtin() -> Self {
        let positive: &[(&str, f64)] = &[
            ("accumulate", 0.3), ("advance", 0.4), ("amazing", 0.8), ("ath", 0.5),
            ("awesome", 0.8), ("beautiful", 0.6), ("best", 0.7), ("bless", 0.5),
            ("bonus", 0.5), ("boom", 0.6), ("booming", 0.7), ("breakout", 0.6),
            ("bull", 0.6), ("bullish", 0.7), ("bullrun", 0.7), ("buy", 0.3),
            ("cheap", 0.3), ("confident", 0.5), ("cool", 0.3), ("diamond", 0.6),
            ("easy", 0.3), ("epic", 0.7), ("excellent", 0.8), ("excited", 0.6),
            ("explode", 0.6), ("explosive", 0.6), ("fantastic", 0.8), ("fire", 0.5),
            ("fly", 0.5), ("flying", 0.5), ("fortune", 0.6), ("free", 0.3),
            ("gain", 0.6), ("gains", 0.6), ("gem", 0.7), ("giveaway", 0.4),
            ("glorious", 0.7), ("golden", 0.6), ("good", 0.5), ("great", 0.7),
            ("green", 0.4), ("growing", 0.5), ("growth", 0.5), ("guaranteed", 0.5),
            ("happy", 0.6), ("hodl", 0.4), ("hold", 0.2), ("hot", 0.5),
            ("incredible", 0.8), ("jackpot", 0.8), ("lambo", 0.8), ("legit", 0.5),
            ("like", 0.4), ("love", 0.6), ("lucky", 0.5), ("millionaire", 0.7),
            ("moon", 0.9), ("mooning", 0.9), ("moonshot", 0.8), ("nice", 0.4),
            ("opportunity", 0.5), ("optimistic", 0.5), ("oversold", 0.3),
            ("parabolic", 0.6), ("perfect", 0.8), ("pop", 0.4), ("potential", 0.4),
            ("profit", 0.7), ("profits", 0.7), ("promising", 0.6), ("pump", 0.6),
            ("pumping", 0.7), ("rally", 0.6), ("reward", 0.5), ("rich", 0.6),
            ("rip", 0.4), ("ripping", 0.5), ("rise", 0.4), ("rising", 0.4),
            ("roar", 0.5), ("rocket", 0.8), ("safe", 0.4), ("secure", 0.4),
            ("skyrocket", 0.8), ("smash", 0.4), ("soar", 0.7), ("soaring", 0.7),
            ("solid", 0.4), ("spike", 0.4), ("strength", 0.5), ("strong", 0.5),
            ("success", 0.6), ("successful", 0.6), ("surge", 0.6), ("surging", 0.6),
            ("top", 0.4), ("treasure", 0.6), ("trust", 0.4), ("trusted", 0.5),
            ("undervalued", 0.5), ("up", 0.3), ("upside", 0.4), ("uptrend", 0.5),
            ("win", 0.6), ("winner", 0.7), ("winning", 0.6), ("wow", 0.5),
        ];
        let negative: &[(&str, f64)] = &[
            ("afraid", -0.5), ("angry", -0.6), ("avoid", -0.5), ("awful", -0.8),
            ("bad", -0.5), ("banned", -0.6), ("bear", -0.5), ("bearish", -0.6),
            ("bleed", -0.5), ("bleeding", -0.6), ("blood", -0.5), ("broke", -0.5),
            ("bubble", -0.5), ("burn", -0.4), ("burned", -0.5), ("bust", -0.6),
            ("collapse", -0.8), ("correction", -0.3), ("crash", -0.8),
            ("crashed", -0.8), ("crashing", -0.8), ("danger", -0.6),
            ("dangerous", -0.6), ("dead", -0.6), ("decline", -0.4),
            ("delisted", -0.7), ("dip", -0.2), ("disaster", -0.8), ("doubt", -0.3),
            ("down", -0.3), ("downtrend", -0.5), ("drop", -0.4), ("dropping", -0.4),
            ("dump", -0.6), ("dumped", -0.6), ("dumping", -0.6), ("dying", -0.6),
            ("exploit", -0.6), ("fail", -0.6), ("failed", -0.6), ("failure", -0.6),
            ("fake", -0.7), ("fall", -0.4), ("falling", -0.4), ("fear", -0.5),
            ("fraud", -0.9), ("fud", -0.5), ("garbage", -0.7), ("hack", -0.7),
            ("hacked", -0.8), ("hate", -0.7), ("horrible", -0.8), ("illegal", -0.6),
            ("investigation", -0.4), ("lawsuit", -0.5), ("liquidated", -0.7),
            ("liquidation", -0.6), ("lose", -0.5), ("loser", -0.6), ("losing", -0.5),
            ("loss", -0.6), ("losses", -0.6), ("lost", -0.5), ("mania", -0.3),
            ("manipulated", -0.6), ("manipulation", -0.6), ("overbought", -0.3),
            ("overvalued", -0.4), ("pain", -0.5), ("panic", -0.7), ("plummet", -0.7),
            ("plunge", -0.7), ("ponzi", -0.9), ("poor", -0.4), ("problem", -0.4),
            ("red", -0.4), ("rekt", -0.8), ("risk", -0.3), ("risky", -0.4),
            ("rug", -0.8), ("rugged", -0.8), ("rugpull", -0.9), ("sad", -0.5),
            ("scam", -0.9), ("scammer", -0.9), ("scared", -0.5), ("sell", -0.3),
            ("selling", -0.3), ("selloff", -0.6), ("shady", -0.6), ("shit", -0.7),
            ("shitcoin", -0.8), ("sketchy", -0.6), ("slump", -0.5), ("stolen", -0.8),
            ("suspicious", -0.5), ("tank", -0.6), ("tanking", -0.6),
            ("terrible", -0.8), ("trash", -0.7), ("ugly", -0.5), ("warning", -0.4),
            ("weak", -0.4), ("weakness", -0.4), ("worried", -0.4), ("worry", -0.4),
            ("worst", -0.8), ("worthless", -0.8),
        ];
        let boosters: &[(&str, f64)] = &[
            ("absolutely", 1.4), ("bit", 0.9), ("completely", 1.35), ("damn", 1.2),
            ("extremely", 1.5), ("highly", 1.3), ("hugely", 1.35),
            ("incredibly", 1.45), ("insanely", 1.5), ("kinda", 0.85),
            ("little", 0.9), ("marginally", 0.8), ("massively", 1.4), ("mega", 1.4),
            ("mildly", 0.85), ("really", 1.25), ("slightly", 0.8), ("so", 1.15),
            ("somewhat", 0.85), ("sorta", 0.85), ("super", 1.4), ("totally", 1.3),
            ("truly", 1.25), ("ultra", 1.4), ("very", 1.3),
        ];
        let negations = [
            "not", "no", "never", "none", "dont", "doesnt", "didnt", "isnt",
            "wasnt", "wont", "cant", "cannot", "aint", "without", "neither",
            "nor", "hardly",
        ];
        SentimentLexicon {
            valences: positive
                .iter()
                .chain(negative)
                .map(|&(w, v)| (w.to_string(), v))
                .collect(),
            negations: negations.iter().map(|s| s.to_string()).collect(),
            boosters: boosters.iter().map(|&(w, m)| (w.to_string(), m)).collect(),
        }
    }
}
