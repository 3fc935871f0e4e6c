//! Stationarizing transformations: log, removal of MA / EWMA / log-MA, and
//! first or second differencing.

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::rolling::{check_alpha, ewma_values, rolling_means};
use crate::series::{SeriesError, TimeSeries};

/// One transformation applied before a unit-root test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TransformKind {
    Identity,
    Log,
    RemoveMA(usize),
    RemoveEWMA(f64),
    RemoveLogMA(usize),
    Diff(u8),
}

impl TransformKind {
    /// The seven report rows in table order.
    pub fn report_defaults(window: usize, alpha: f64) -> Vec<TransformKind> {
        vec![
            TransformKind::Identity,
            TransformKind::Log,
            TransformKind::RemoveMA(window),
            TransformKind::RemoveEWMA(alpha),
            TransformKind::Diff(1),
            TransformKind::Diff(2),
            TransformKind::RemoveLogMA(window),
        ]
    }

    /// Row-label prefix, e.g. "Removed Exp WMA".
    pub fn label(&self) -> &'static str {
        match self {
            TransformKind::Identity => "",
            TransformKind::Log => "Log",
            TransformKind::RemoveMA(_) => "Removed MA",
            TransformKind::RemoveEWMA(_) => "Removed Exp WMA",
            TransformKind::RemoveLogMA(_) => "Removed Log MA",
            TransformKind::Diff(1) => "First Diff",
            TransformKind::Diff(_) => "Second Diff",
        }
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        match *self {
            TransformKind::RemoveMA(n) | TransformKind::RemoveLogMA(n) if n < 1 => {
                Err(SeriesError::WindowTooSmall { window: n, min: 1 })
            }
            TransformKind::RemoveEWMA(alpha) => check_alpha(alpha),
            TransformKind::Diff(order) if !(1..=2).contains(&order) => {
                Err(SeriesError::BadParameter {
                    name: "order",
                    value: order as f64,
                })
            }
            _ => Ok(()),
        }
    }

    /// Bare name without parameters, as accepted by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            TransformKind::Identity => "identity",
            TransformKind::Log => "log",
            TransformKind::RemoveMA(_) => "remove-ma",
            TransformKind::RemoveEWMA(_) => "remove-ewma",
            TransformKind::RemoveLogMA(_) => "remove-log-ma",
            TransformKind::Diff(1) => "diff1",
            TransformKind::Diff(_) => "diff2",
        }
    }

    /// Parse a CLI name, filling window/alpha parameters from the arguments.
    pub fn parse_with(name: &str, window: usize, alpha: f64) -> Result<Self, String> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "identity" | "raw" => TransformKind::Identity,
            "log" => TransformKind::Log,
            "remove-ma" => TransformKind::RemoveMA(window),
            "remove-ewma" => TransformKind::RemoveEWMA(alpha),
            "remove-log-ma" => TransformKind::RemoveLogMA(window),
            "diff1" => TransformKind::Diff(1),
            "diff2" => TransformKind::Diff(2),
            _ => {
                return Err(format!(
                    "unknown transform '{name}' (expected identity, log, remove-ma, remove-ewma, remove-log-ma, diff1, diff2)"
                ))
            }
        };
        Ok(kind)
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformKind::RemoveMA(n) | TransformKind::RemoveLogMA(n) => {
                write!(f, "{}({n})", self.name())
            }
            TransformKind::RemoveEWMA(a) => write!(f, "{}({a})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for TransformKind {
    type Err = String;

    /// Accepts `name` or `name(param)`, e.g. `remove-ma(30)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, param) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| format!("malformed transform '{s}'"))?;
                (name, Some(inner))
            }
            None => (s, None),
        };
        let window = match param {
            Some(p) if name.contains("ma") && !name.contains("ewma") => {
                p.parse().map_err(|_| format!("bad window in '{s}'"))?
            }
            _ => crate::rolling::DEFAULT_WINDOW,
        };
        let alpha = match param {
            Some(p) if name.contains("ewma") => {
                p.parse().map_err(|_| format!("bad alpha in '{s}'"))?
            }
            _ => crate::rolling::DEFAULT_EWMA_ALPHA,
        };
        Self::parse_with(name, window, alpha)
    }
}

/// How the log transform treats values at or below zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogPolicy {
    /// Any non-positive value is an error.
    #[default]
    Strict,
    /// Keep only the longest all-positive suffix.
    DropNonpositive,
}

/// Result of a log transform together with how many leading points were cut.
#[derive(Debug, Clone, PartialEq)]
pub struct LogOutput {
    pub series: TimeSeries,
    pub dropped: usize,
}

fn require_full(s: &TimeSeries) -> Result<(), SeriesError> {
    if s.defined_len() == 0 {
        Err(SeriesError::EmptySeries)
    } else {
        Ok(())
    }
}

/// Positive suffix of the defined values under `policy`, plus the number of
/// defined points dropped in front of it.
fn positive_part(s: &TimeSeries, policy: LogPolicy) -> Result<(&[f64], usize), SeriesError> {
    require_full(s)?;
    let y = s.defined();
    let last_bad = y.iter().rposition(|&v| v <= 0.0);
    match (last_bad, policy) {
        (None, _) => Ok((y, 0)),
        (Some(i), LogPolicy::Strict) => {
            let index = y.iter().position(|&v| v <= 0.0).unwrap_or(i);
            Err(SeriesError::NonpositiveValue {
                index: s.undefined_len() + index,
                value: y[index],
            })
        }
        (Some(i), LogPolicy::DropNonpositive) => {
            if i + 1 == y.len() {
                Err(SeriesError::EmptySeries)
            } else {
                Ok((&y[i + 1..], i + 1))
            }
        }
    }
}

/// Natural logarithm of every defined value.
pub fn log_transform(s: &TimeSeries, policy: LogPolicy) -> Result<LogOutput, SeriesError> {
    let (y, dropped) = positive_part(s, policy)?;
    let logged: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let series = if dropped == 0 {
        s.derive(0, logged, TransformKind::Log.label())
    } else {
        warn!(
            "log transform of {} dropped {dropped} leading points up to the last non-positive value",
            s.meta().series_label()
        );
        s.defined_tail(logged, TransformKind::Log.label())
    };
    Ok(LogOutput { series, dropped })
}

/// `y_t - MA_t(n)`; the first `n - 1` outputs are undefined.
pub fn remove_ma(s: &TimeSeries, n: usize) -> Result<TimeSeries, SeriesError> {
    let ma = crate::rolling::moving_average(s, n)?;
    let y = s.defined();
    let out = ma
        .defined()
        .iter()
        .zip(&y[n - 1..])
        .map(|(m, v)| v - m)
        .collect();
    Ok(s.derive(n - 1, out, TransformKind::RemoveMA(n).label()))
}

/// `y_t - EWMA_t(alpha)`; the first output is exactly zero.
pub fn remove_ewma(s: &TimeSeries, alpha: f64) -> Result<TimeSeries, SeriesError> {
    check_alpha(alpha)?;
    require_full(s)?;
    let y = s.defined();
    let out = ewma_values(y, alpha)
        .iter()
        .zip(y)
        .map(|(e, v)| v - e)
        .collect();
    Ok(s.derive(0, out, TransformKind::RemoveEWMA(alpha).label()))
}

/// `log(y_t) - log(MA_t(n))` with the MA taken over the original values.
pub fn remove_log_ma(
    s: &TimeSeries,
    n: usize,
    policy: LogPolicy,
) -> Result<TimeSeries, SeriesError> {
    if n < 1 {
        return Err(SeriesError::WindowTooSmall { window: n, min: 1 });
    }
    let (y, dropped) = positive_part(s, policy)?;
    if n > y.len() {
        return Err(SeriesError::WindowTooLarge {
            window: n,
            len: y.len(),
        });
    }
    let out: Vec<f64> = rolling_means(y, n)
        .iter()
        .zip(&y[n - 1..])
        .map(|(m, v)| v.ln() - m.ln())
        .collect();
    let label = TransformKind::RemoveLogMA(n).label();
    if dropped == 0 {
        Ok(s.derive(n - 1, out, label))
    } else {
        warn!(
            "log-MA transform of {} dropped {dropped} leading points up to the last non-positive value",
            s.meta().series_label()
        );
        let tail = s.defined_tail(y.to_vec(), "");
        Ok(tail.derive(n - 1, out, label))
    }
}

/// First (`order = 1`) or second (`order = 2`) difference.
pub fn difference(s: &TimeSeries, order: u8) -> Result<TimeSeries, SeriesError> {
    TransformKind::Diff(order).validate()?;
    let order = order as usize;
    if s.defined_len() <= order {
        return Err(SeriesError::TooShort {
            needed: order + 1,
            got: s.defined_len(),
        });
    }
    let mut out = s.defined().to_vec();
    for _ in 0..order {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let label = TransformKind::Diff(order as u8).label();
    Ok(s.derive(order, out, label))
}

/// Apply `kind`, using the strict log policy.
pub fn apply(s: &TimeSeries, kind: TransformKind) -> Result<TimeSeries, SeriesError> {
    apply_with_policy(s, kind, LogPolicy::Strict)
}

pub fn apply_with_policy(
    s: &TimeSeries,
    kind: TransformKind,
    policy: LogPolicy,
) -> Result<TimeSeries, SeriesError> {
    kind.validate()?;
    match kind {
        TransformKind::Identity => Ok(s.clone()),
        TransformKind::Log => log_transform(s, policy).map(|o| o.series),
        TransformKind::RemoveMA(n) => remove_ma(s, n),
        TransformKind::RemoveEWMA(alpha) => remove_ewma(s, alpha),
        TransformKind::RemoveLogMA(n) => remove_log_ma(s, n, policy),
        TransformKind::Diff(order) => difference(s, order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rolling::{ewma, moving_average};
    use crate::series::{gen_ar1, make_series, synthetic_start, Horizon, SeriesMeta};
    use std::f64::consts::E;

    fn series(v: &[f64]) -> TimeSeries {
        make_series(
            v,
            SeriesMeta::synthetic(),
            synthetic_start(),
            Horizon::Daily,
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn log_examples() {
        let out = log_transform(&series(&[1.0, E, E * E]), LogPolicy::Strict).unwrap();
        let y = out.series.defined();
        assert!(close(y[0], 0.0, 1e-15) && close(y[1], 1.0, 1e-15) && close(y[2], 2.0, 1e-15));
        assert_eq!(out.dropped, 0);

        let neg = series(&[-5.0, 1.0, 2.0]);
        assert_eq!(
            log_transform(&neg, LogPolicy::Strict),
            Err(SeriesError::NonpositiveValue {
                index: 0,
                value: -5.0
            })
        );
        let out = log_transform(&neg, LogPolicy::DropNonpositive).unwrap();
        assert_eq!(out.dropped, 1);
        assert_eq!(out.series.defined(), &[0.0, 2f64.ln()]);
        assert_eq!(out.series.start_time(), neg.timestamp(1));

        assert_eq!(
            log_transform(&series(&[1.0, 0.0]), LogPolicy::DropNonpositive),
            Err(SeriesError::EmptySeries)
        );
    }

    #[test]
    fn remove_ma_examples() {
        let c = remove_ma(&series(&[4.2; 10]), 3).unwrap();
        assert!(c.defined().iter().all(|&v| v == 0.0));
        let r = remove_ma(&series(&[1.0, 2.0, 3.0, 4.0]), 2).unwrap();
        assert_eq!(r.to_options(), vec![None, Some(0.5), Some(0.5), Some(0.5)]);
        assert_eq!(r.meta().series_label(), "Removed MA RT Price");
        assert!(matches!(
            remove_ma(&series(&[1.0]), 2),
            Err(SeriesError::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn remove_ma_matches_composition() {
        let s = gen_ar1(60, 2.0, 0.6, 1.0, 5).unwrap();
        let y = s.defined();
        let r = remove_ma(&s, 10).unwrap();
        for t in 9..60 {
            let ma = y[t - 9..=t].iter().sum::<f64>() / 10.0;
            assert!(close(r.get(t).unwrap(), y[t] - ma, 1e-12));
        }
    }

    #[test]
    fn remove_ewma_examples() {
        let s = gen_ar1(80, 1.0, 0.5, 1.0, 6).unwrap();
        let r = remove_ewma(&s, 0.3).unwrap();
        assert_eq!(r.get(0), Some(0.0));
        let z = remove_ewma(&s, 1.0).unwrap();
        assert!(z.defined().iter().all(|&v| v == 0.0));

        let y = s.defined();
        let mut state = y[0];
        for (t, (&yt, &rt)) in y.iter().zip(r.defined()).enumerate() {
            if t > 0 {
                state = 0.3 * yt + 0.7 * state;
            }
            assert!(close(rt, yt - state, 1e-12));
        }
    }

    #[test]
    fn remove_log_ma_examples() {
        let c = remove_log_ma(&series(&[3.0; 8]), 4, LogPolicy::Strict).unwrap();
        assert!(c.defined().iter().all(|&v| v == 0.0));

        let g = remove_log_ma(&series(&[1.0, 2.0, 4.0, 8.0]), 2, LogPolicy::Strict).unwrap();
        assert_eq!(g.get(0), None);
        assert!(close(g.get(1).unwrap(), 2f64.ln() - 1.5f64.ln(), 1e-15));

        let s = gen_ar1(120, 10.0, 0.5, 1.0, 17).unwrap();
        let y = s.defined();
        let r = remove_log_ma(&s, 6, LogPolicy::Strict).unwrap();
        for t in 5..120 {
            let ma = y[t - 5..=t].iter().sum::<f64>() / 6.0;
            assert!(close(r.get(t).unwrap(), y[t].ln() - ma.ln(), 1e-12));
        }

        assert!(matches!(
            remove_log_ma(&series(&[1.0, -1.0, 2.0]), 2, LogPolicy::Strict),
            Err(SeriesError::NonpositiveValue { index: 1, .. })
        ));
        let dropped = remove_log_ma(
            &series(&[1.0, -1.0, 2.0, 4.0]),
            2,
            LogPolicy::DropNonpositive,
        )
        .unwrap();
        assert_eq!(dropped.len(), 2);
        assert!(close(dropped.get(1).unwrap(), 4f64.ln() - 3f64.ln(), 1e-15));
    }

    #[test]
    fn difference_examples() {
        let s = series(&[3.0, 5.0, 7.0, 9.0]);
        assert_eq!(
            difference(&s, 1).unwrap().to_options(),
            vec![None, Some(2.0), Some(2.0), Some(2.0)]
        );
        assert_eq!(
            difference(&s, 2).unwrap().to_options(),
            vec![None, None, Some(0.0), Some(0.0)]
        );
        assert!(matches!(
            difference(&series(&[1.0]), 1),
            Err(SeriesError::TooShort { .. })
        ));
        assert!(matches!(
            difference(&s, 3),
            Err(SeriesError::BadParameter { .. })
        ));
    }

    #[test]
    fn difference_of_noisy_trend_has_mean_beta() {
        let s = crate::series::gen_trend(10_000, 1.0, -0.3, 1.0, 3).unwrap();
        let d = difference(&s, 1).unwrap();
        let mean = d.defined().iter().sum::<f64>() / d.defined_len() as f64;
        assert!((mean + 0.3).abs() < 3.0 * 2f64.sqrt() / 100.0);
    }

    #[test]
    fn apply_dispatch() {
        let s = series(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(apply(&s, TransformKind::Identity).unwrap(), s);
        assert_eq!(
            apply(&s, TransformKind::RemoveMA(2)).unwrap(),
            remove_ma(&s, 2).unwrap()
        );
        let d = series(&[3.0, 5.0, 7.0, 9.0]);
        assert_eq!(
            apply(&d, TransformKind::Diff(1)).unwrap(),
            difference(&d, 1).unwrap()
        );
        assert_eq!(
            apply(&d, TransformKind::Diff(2))
                .unwrap()
                .meta()
                .series_label(),
            "Second Diff RT Price"
        );
    }

    #[test]
    fn chained_transforms_keep_prefix_only() {
        let s = gen_ar1(100, 20.0, 0.5, 1.0, 2).unwrap();
        let a = apply(&s, TransformKind::RemoveMA(5)).unwrap();
        let b = apply(&a, TransformKind::Diff(2)).unwrap();
        assert_eq!(b.undefined_len(), 6);
        assert_eq!(b.len(), 100);
        let e = ewma(&b, 0.5).unwrap();
        assert_eq!(e.undefined_len(), 6);
        let m = moving_average(&b, 3).unwrap();
        assert_eq!(m.undefined_len(), 8);
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            "diff1".parse::<TransformKind>().unwrap(),
            TransformKind::Diff(1)
        );
        assert_eq!(
            "remove-ma(12)".parse::<TransformKind>().unwrap(),
            TransformKind::RemoveMA(12)
        );
        assert_eq!(
            "remove-ewma(0.2)".parse::<TransformKind>().unwrap(),
            TransformKind::RemoveEWMA(0.2)
        );
        assert_eq!(
            "remove-log-ma".parse::<TransformKind>().unwrap(),
            TransformKind::RemoveLogMA(30)
        );
        assert!("boxcox".parse::<TransformKind>().is_err());
        for k in TransformKind::report_defaults(30, 0.05) {
            assert_eq!(k.to_string().parse::<TransformKind>().unwrap(), k);
        }
    }
}
