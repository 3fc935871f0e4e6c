//! Wide CSV of a series and its rolling companions for external plotting.

use std::path::Path;

use crate::rolling::{ewma, moving_average, moving_std};
use crate::series::TimeSeries;

use super::ReportError;

pub const PLOT_HEADER: [&str; 5] = ["time", "value", "ma", "ewma", "mstd"];

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// `time,value,ma,ewma,mstd`; undefined entries are empty fields.
pub fn render_plot_series(
    s: &TimeSeries,
    window: usize,
    alpha: f64,
) -> Result<String, ReportError> {
    let ma = moving_average(s, window)?.to_options();
    let sd = moving_std(s, window)?.to_options();
    let ew = ewma(s, alpha)?.to_options();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| ReportError::Io(std::io::Error::other(e));
    w.write_record(PLOT_HEADER).map_err(io)?;
    for (i, v) in s.iter().enumerate() {
        w.write_record([
            s.timestamp(i).format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            cell(v),
            cell(ma[i]),
            cell(ew[i]),
            cell(sd[i]),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ReportError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn export_plot_series(
    s: &TimeSeries,
    window: usize,
    alpha: f64,
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    std::fs::write(path, render_plot_series(s, window, alpha)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{gen_ar1, make_series, Horizon, SeriesMeta};
    use chrono::{TimeZone, Utc};

    fn parse(text: &str) -> Vec<Vec<String>> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), PLOT_HEADER);
        r.records()
            .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn constant_series() {
        let start = Utc.with_ymd_and_hms(2016, 1, 1, 0, 0, 0).unwrap();
        let s = make_series(&[7.5; 6], SeriesMeta::synthetic(), start, Horizon::Daily).unwrap();
        let rows = parse(&render_plot_series(&s, 3, 0.2).unwrap());
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0], vec!["2016-01-01T00:00:00Z", "7.5", "", "7.5", ""]);
        assert_eq!(rows[1][2], "");
        assert_eq!(
            rows[2],
            vec!["2016-01-03T00:00:00Z", "7.5", "7.5", "7.5", "0"]
        );
    }

    #[test]
    fn matches_rolling_ops() {
        let s = gen_ar1(80, 1.0, 0.6, 1.0, 17).unwrap();
        let rows = parse(&render_plot_series(&s, 10, 0.1).unwrap());
        let ma = moving_average(&s, 10).unwrap().to_options();
        let sd = moving_std(&s, 10).unwrap().to_options();
        let ew = ewma(&s, 0.1).unwrap().to_options();
        let read = |c: &str| {
            if c.is_empty() {
                None
            } else {
                Some(c.parse::<f64>().unwrap())
            }
        };
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(read(&row[1]), s.get(i));
            assert_eq!(read(&row[2]), ma[i]);
            assert_eq!(read(&row[3]), ew[i]);
            assert_eq!(read(&row[4]), sd[i]);
        }
        assert_eq!(rows.iter().filter(|r| r[2].is_empty()).count(), 9);
    }
}
