//! Rolling z-score anomaly flags.
//!
//! The baseline window covers the `n` points strictly before `t`, so a large
//! anomaly cannot inflate its own mean and deviation.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::rolling::{window_mean, window_std};
use crate::series::{SeriesError, TimeSeries};

pub const DEFAULT_ANOMALY_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyFlag {
    pub timestamp: DateTime<Utc>,
    pub zone: String,
    pub series_label: String,
    pub zscore: f64,
    pub threshold: f64,
}

/// Flag every `t ≥ n` with `|y_t − mean(y_{t−n..t})| > k·sd(y_{t−n..t})`.
/// Windows with zero deviation never flag.
pub fn flag_anomalies(
    s: &TimeSeries,
    window: usize,
    threshold: f64,
) -> Result<Vec<AnomalyFlag>, SeriesError> {
    if window < 2 {
        return Err(SeriesError::WindowTooSmall { window, min: 2 });
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(SeriesError::BadParameter {
            name: "threshold",
            value: threshold,
        });
    }
    let v = s.defined();
    if v.len() <= window {
        return Err(SeriesError::TooShort {
            needed: window + 1,
            got: v.len(),
        });
    }
    let offset = s.undefined_len();
    let label = s.meta().series_label();
    let mut flags = Vec::new();
    for t in window..v.len() {
        let w = &v[t - window..t];
        let mean = window_mean(w);
        let sd = window_std(w, mean);
        if sd > 0.0 {
            let z = (v[t] - mean) / sd;
            if z.abs() > threshold {
                flags.push(AnomalyFlag {
                    timestamp: s.timestamp(offset + t),
                    zone: s.meta().zone.clone(),
                    series_label: label.clone(),
                    zscore: z,
                    threshold,
                });
            }
        }
    }
    Ok(flags)
}

/// `timestamp,zone,series_label,zscore,threshold`, one line per flag.
pub fn render_anomalies(flags: &[AnomalyFlag]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut write = |rec: [String; 5]| w.write_record(rec).expect("writing to memory");
    write(["timestamp", "zone", "series_label", "zscore", "threshold"].map(String::from));
    for f in flags {
        write([
            f.timestamp.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            f.zone.clone(),
            f.series_label.clone(),
            f.zscore.to_string(),
            f.threshold.to_string(),
        ]);
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}
