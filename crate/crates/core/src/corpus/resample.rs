use crate::error::{Error, Result};

use super::types::{CoinSeries, MarketPoint};

const HOUR: i64 = 3600;

/// Resample a series to hour boundaries by last-observation-carried-forward.
///
/// The output has one point per hour boundary from the first boundary at or
/// after the first observation through the first boundary at or after the
/// last. LOCF never fabricates prices; hours before the first observation are
/// absent.
pub fn resample_hourly(series: &CoinSeries) -> Result<CoinSeries> {
    if series.points.is_empty() {
        return Err(Error::EmptyInput(format!("series for {}", series.coin)));
    }
    let first = series.points.first().unwrap().timestamp;
    let last = series.points.last().unwrap().timestamp;
    let start = first.div_euclid(HOUR) * HOUR + if first.rem_euclid(HOUR) == 0 { 0 } else { HOUR };
    let end = last.div_euclid(HOUR) * HOUR + if last.rem_euclid(HOUR) == 0 { 0 } else { HOUR };

    let mut points = Vec::with_capacity(((end - start) / HOUR + 1) as usize);
    let mut hour = start;
    while hour <= end {
        let obs = series
            .at_or_before(hour)
            .expect("hour >= first observation");
        points.push(MarketPoint {
            timestamp: hour,
            ..*obs
        });
        hour += HOUR;
    }
    Ok(CoinSeries {
        coin: series.coin.clone(),
        points,
    })
}

/// Hours of the resampled series whose carried observation is older than
/// `max_age_secs` — the staleness flags surfaced by ingest reports.
pub fn stale_hours(original: &CoinSeries, hourly: &CoinSeries, max_age_secs: i64) -> Vec<i64> {
    hourly
        .points
        .iter()
        .filter_map(|p| {
            let src = original.at_or_before(p.timestamp)?;
            (p.timestamp - src.timestamp > max_age_secs).then_some(p.timestamp)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(points: &[(i64, f64)]) -> CoinSeries {
        CoinSeries {
            coin: "X".into(),
            points: points
                .iter()
                .map(|&(timestamp, price)| MarketPoint {
                    timestamp,
                    price_btc: price,
                    price_usd: price,
                    volume: 1.0,
                    market_cap: 1.0,
                })
                .collect(),
        }
    }

    #[test]
    fn exact_hour_boundaries() {
        let hourly = resample_hourly(&series(&[(0, 10.0), (3600, 20.0)])).unwrap();
        let got: Vec<(i64, f64)> = hourly.points.iter().map(|p| (p.timestamp, p.price_btc)).collect();
        assert_eq!(got, vec![(0, 10.0), (3600, 20.0)]);
    }

    #[test]
    fn carried_forward_value() {
        let hourly = resample_hourly(&series(&[(0, 10.0), (300, 12.0)])).unwrap();
        let got: Vec<(i64, f64)> = hourly.points.iter().map(|p| (p.timestamp, p.price_btc)).collect();
        assert_eq!(got, vec![(0, 10.0), (3600, 12.0)]);
    }

    #[test]
    fn single_point() {
        let hourly = resample_hourly(&series(&[(0, 10.0)])).unwrap();
        assert_eq!(hourly.points.len(), 1);
        assert_eq!(hourly.points[0].timestamp, 0);
    }

    #[test]
    fn hours_before_first_observation_absent() {
        let hourly = resample_hourly(&series(&[(100, 5.0), (7200, 6.0)])).unwrap();
        assert_eq!(hourly.points[0].timestamp, 3600);
        assert_eq!(hourly.points[0].price_btc, 5.0);
    }

    #[test]
    fn idempotent_on_hourly_series() {
        let hourly = resample_hourly(&series(&[(0, 1.0), (3600, 2.0), (7200, 3.0)])).unwrap();
        let again = resample_hourly(&hourly).unwrap();
        assert_eq!(hourly, again);
    }

    #[test]
    fn stale_flagging() {
        // Observation at t=0 only; hour 8*3600 carries a value 8 hours old.
        let orig = series(&[(0, 1.0), (10 * 3600, 2.0)]);
        let hourly = resample_hourly(&orig).unwrap();
        let stale = stale_hours(&orig, &hourly, 6 * 3600);
        assert_eq!(stale, vec![7 * 3600, 8 * 3600, 9 * 3600]);
    }
}
