use chrono::{DateTime, Datelike, Duration, NaiveDate, TimeZone, Utc};

use super::{Horizon, SeriesError, TimeSeries};

/// Start of the calendar bucket containing `t` (UTC day, ISO week starting
/// Monday, calendar month).
fn bucket_start(t: DateTime<Utc>, horizon: Horizon) -> NaiveDate {
    let date = t.date_naive();
    match horizon {
        Horizon::Hourly | Horizon::Daily => date,
        Horizon::Weekly => date - Duration::days(date.weekday().num_days_from_monday() as i64),
        Horizon::Monthly => date.with_day(1).expect("day 1 exists"),
    }
}

/// Aggregate `s` to a coarser calendar horizon by arithmetic mean.
///
/// Only defined values contribute. Resampling to the series' own horizon
/// returns it unchanged; a finer target is an error.
pub fn resample(s: &TimeSeries, target: Horizon) -> Result<TimeSeries, SeriesError> {
    let from = s.step();
    if target < from {
        return Err(SeriesError::FinerTarget { from, to: target });
    }
    if target == from {
        return Ok(s.clone());
    }
    if s.defined_len() == 0 {
        return Err(SeriesError::EmptySeries);
    }

    let mut buckets: Vec<(NaiveDate, f64, usize)> = Vec::new();
    let mut t = s.first_defined_time();
    for (i, &v) in s.defined().iter().enumerate() {
        if i > 0 {
            t = from.advance(t, 1);
        }
        let key = bucket_start(t, target);
        match buckets.last_mut() {
            Some((k, sum, count)) if *k == key => {
                *sum += v;
                *count += 1;
            }
            _ => buckets.push((key, v, 1)),
        }
    }

    let start = Utc.from_utc_datetime(&buckets[0].0.and_hms_opt(0, 0, 0).expect("midnight"));
    let values = buckets
        .iter()
        .map(|&(_, sum, count)| sum / count as f64)
        .collect();
    let mut meta = s.meta().clone();
    meta.horizon = target;
    Ok(TimeSeries::from_parts(start, 0, values, meta))
}
