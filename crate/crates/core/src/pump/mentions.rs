use std::collections::BTreeSet;

use crate::corpus::{CoinRegistry, SocialMessage};
use crate::textclf::raw_tokens;

/// Coins mentioned in a message: registry symbols, aliases, and `$cashtags`,
/// matched case-insensitively on token boundaries.
pub fn extract_mentions(message: &SocialMessage, registry: &CoinRegistry) -> BTreeSet<String> {
    mentions_in_text(&message.text, registry)
}

pub(crate) fn mentions_in_text(text: &str, registry: &CoinRegistry) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for token in raw_tokens(text) {
        let body = token.strip_prefix('$').unwrap_or(&token);
        if let Some(symbol) = registry.resolve(body) {
            out.insert(symbol.to_string());
        }
    }
    out
}
