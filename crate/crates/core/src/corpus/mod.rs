//! Domain data model and file ingestion: market series, channel messages,
//! microblog posts, the coin registry, and account-status records.

mod load;
mod resample;
mod types;

pub use load::{
    load_market, load_messages, load_registry, load_statuses, load_tweets, save_market,
    save_messages, save_statuses, save_tweets,
};
pub use resample::{resample_hourly, stale_hours};
pub use types::{
    AccountState, AccountStatus, CoinRegistry, CoinSeries, MarketPoint, PumpLabel, SocialMessage,
    Tweet,
};
