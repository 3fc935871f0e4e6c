//! Uniformly sampled series with an explicit undefined warm-up prefix.
//!
//! Rolling windows and differencing have no output for their first few
//! points. Rather than encoding those as NaN, a [`TimeSeries`] stores the
//! length of the undefined prefix separately from the defined values, so an
//! undefined entry can never appear in the interior of a series.

mod resample;
mod synth;

pub use resample::resample;
#[cfg(test)]
pub(crate) use synth::synthetic_start;
pub use synth::{gen_ar1, gen_random_walk, gen_trend, NormalStream, SYNTHETIC_START};

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Duration, Months, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by series construction, rolling statistics and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series is empty")]
    EmptySeries,
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("undefined value at interior index {index}")]
    InteriorUndefined { index: usize },
    #[error("cannot resample {from} data to the finer horizon {to}")]
    FinerTarget { from: Horizon, to: Horizon },
    #[error("length {n} is below the minimum of {min}")]
    BadLength { n: usize, min: usize },
    #[error("invalid parameter {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("window {window} exceeds defined length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("window {window} is too small (minimum {min})")]
    WindowTooSmall { window: usize, min: usize },
    #[error("smoothing factor {0} outside (0, 1]")]
    BadAlpha(f64),
    #[error("non-positive value {value} at index {index}")]
    NonpositiveValue { index: usize, value: f64 },
    #[error("series too short: need {needed} defined values, got {got}")]
    TooShort { needed: usize, got: usize },
}

/// Sampling interval of a series; ordered from finest to coarsest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Horizon {
    Hourly,
    Daily,
    Weekly,
    Monthly,
}

impl Horizon {
    pub const ALL: [Horizon; 4] = [
        Horizon::Hourly,
        Horizon::Daily,
        Horizon::Weekly,
        Horizon::Monthly,
    ];

    /// Timestamp `steps` sampling intervals after `t`.
    ///
    /// Monthly steps are calendar months, so the day of month is clamped
    /// where needed (Jan 31 + 1 month = Feb 28/29).
    pub fn advance(self, t: DateTime<Utc>, steps: usize) -> DateTime<Utc> {
        match self {
            Horizon::Hourly => t + Duration::hours(steps as i64),
            Horizon::Daily => t + Duration::days(steps as i64),
            Horizon::Weekly => t + Duration::weeks(steps as i64),
            Horizon::Monthly => t
                .checked_add_months(Months::new(steps as u32))
                .expect("timestamp overflow while advancing months"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Horizon::Hourly => "hourly",
            Horizon::Daily => "daily",
            Horizon::Weekly => "weekly",
            Horizon::Monthly => "monthly",
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Horizon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Horizon::ALL
            .into_iter()
            .find(|h| h.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown horizon '{s}' (expected hourly, daily, weekly or monthly)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variable {
    Demand,
    Price,
}

impl Variable {
    pub const ALL: [Variable; 2] = [Variable::Demand, Variable::Price];

    pub fn as_str(self) -> &'static str {
        match self {
            Variable::Demand => "Demand",
            Variable::Price => "Price",
        }
    }
}

impl FromStr for Variable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "demand" => Ok(Variable::Demand),
            "price" => Ok(Variable::Price),
            _ => Err(format!("unknown variable '{s}' (expected demand or price)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Market {
    DayAhead,
    RealTime,
}

impl Market {
    pub const ALL: [Market; 2] = [Market::DayAhead, Market::RealTime];

    /// Short code used in report labels ("DA" / "RT").
    pub fn code(self) -> &'static str {
        match self {
            Market::DayAhead => "DA",
            Market::RealTime => "RT",
        }
    }
}

impl FromStr for Market {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "da" | "day-ahead" | "dayahead" => Ok(Market::DayAhead),
            "rt" | "real-time" | "realtime" => Ok(Market::RealTime),
            _ => Err(format!("unknown market '{s}' (expected da or rt)")),
        }
    }
}

/// Descriptive metadata carried alongside every series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub zone: String,
    pub variable: Variable,
    pub market: Market,
    pub horizon: Horizon,
    /// Applied transforms, oldest first; empty for raw data.
    pub transform_label: String,
}

impl SeriesMeta {
    pub fn new(
        zone: impl Into<String>,
        variable: Variable,
        market: Market,
        horizon: Horizon,
    ) -> Self {
        Self {
            zone: zone.into(),
            variable,
            market,
            horizon,
            transform_label: String::new(),
        }
    }

    /// Metadata used by the synthetic generators.
    pub fn synthetic() -> Self {
        Self::new(
            "synthetic",
            Variable::Price,
            Market::RealTime,
            Horizon::Daily,
        )
    }

    /// Copy with `label` appended to the transform chain.
    pub fn with_transform(&self, label: &str) -> Self {
        let mut meta = self.clone();
        if !label.is_empty() {
            if !meta.transform_label.is_empty() {
                meta.transform_label.push(' ');
            }
            meta.transform_label.push_str(label);
        }
        meta
    }

    /// Row label in the style "Removed MA RT Price".
    pub fn series_label(&self) -> String {
        let base = format!("{} {}", self.market.code(), self.variable.as_str());
        if self.transform_label.is_empty() {
            base
        } else {
            format!("{} {}", self.transform_label, base)
        }
    }
}

/// A uniformly sampled real-valued series.
///
/// Invariants: at least one entry (defined or not); undefined entries form a
/// leading prefix; all defined values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: DateTime<Utc>,
    undefined: usize,
    values: Vec<f64>,
    meta: SeriesMeta,
}

/// Build a fully defined series; `meta.horizon` is set to `step`.
pub fn make_series(
    values: &[f64],
    meta: SeriesMeta,
    start: DateTime<Utc>,
    step: Horizon,
) -> Result<TimeSeries, SeriesError> {
    if values.is_empty() {
        return Err(SeriesError::EmptySeries);
    }
    check_finite(values)?;
    let meta = SeriesMeta {
        horizon: step,
        ..meta
    };
    Ok(TimeSeries {
        start,
        undefined: 0,
        values: values.to_vec(),
        meta,
    })
}

/// Return the defined suffix of `s`, moving the start time forward.
pub fn drop_undefined_prefix(s: &TimeSeries) -> Result<TimeSeries, SeriesError> {
    if s.values.is_empty() {
        return Err(SeriesError::EmptySeries);
    }
    Ok(TimeSeries {
        start: s.first_defined_time(),
        undefined: 0,
        values: s.values.clone(),
        meta: s.meta.clone(),
    })
}

fn check_finite(values: &[f64]) -> Result<(), SeriesError> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(SeriesError::NonFinite { index }),
        None => Ok(()),
    }
}

impl TimeSeries {
    /// Build from per-entry optional values. `None` entries must form a
    /// leading prefix.
    pub fn from_options(
        values: &[Option<f64>],
        meta: SeriesMeta,
        start: DateTime<Utc>,
        step: Horizon,
    ) -> Result<Self, SeriesError> {
        if values.is_empty() {
            return Err(SeriesError::EmptySeries);
        }
        let undefined = values.iter().take_while(|v| v.is_none()).count();
        let mut defined = Vec::with_capacity(values.len() - undefined);
        for (index, v) in values.iter().enumerate().skip(undefined) {
            match v {
                Some(x) if x.is_finite() => defined.push(*x),
                Some(_) => return Err(SeriesError::NonFinite { index }),
                None => return Err(SeriesError::InteriorUndefined { index }),
            }
        }
        Ok(Self {
            start,
            undefined,
            values: defined,
            meta: SeriesMeta {
                horizon: step,
                ..meta
            },
        })
    }

    /// Internal constructor for derived series. Callers guarantee finiteness
    /// and a non-zero total length.
    pub(crate) fn from_parts(
        start: DateTime<Utc>,
        undefined: usize,
        values: Vec<f64>,
        meta: SeriesMeta,
    ) -> Self {
        debug_assert!(undefined + values.len() > 0);
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self {
            start,
            undefined,
            values,
            meta,
        }
    }

    pub fn start_time(&self) -> DateTime<Utc> {
        self.start
    }

    pub fn step(&self) -> Horizon {
        self.meta.horizon
    }

    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    /// Total number of entries including the undefined prefix.
    pub fn len(&self) -> usize {
        self.undefined + self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn defined_len(&self) -> usize {
        self.values.len()
    }

    pub fn undefined_len(&self) -> usize {
        self.undefined
    }

    pub fn is_fully_defined(&self) -> bool {
        self.undefined == 0
    }

    /// The defined suffix.
    pub fn defined(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        index
            .checked_sub(self.undefined)
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        std::iter::repeat_n(None, self.undefined).chain(self.values.iter().map(|v| Some(*v)))
    }

    pub fn to_options(&self) -> Vec<Option<f64>> {
        self.iter().collect()
    }

    /// Timestamp of entry `index`.
    pub fn timestamp(&self, index: usize) -> DateTime<Utc> {
        self.step().advance(self.start, index)
    }

    /// Timestamps of every entry, prefix included.
    pub fn timestamps(&self) -> Vec<DateTime<Utc>> {
        match self.step() {
            Horizon::Monthly => (0..self.len()).map(|i| self.timestamp(i)).collect(),
            step => {
                let mut out = Vec::with_capacity(self.len());
                let mut t = self.start;
                for _ in 0..self.len() {
                    out.push(t);
                    t = step.advance(t, 1);
                }
                out
            }
        }
    }

    pub fn first_defined_time(&self) -> DateTime<Utc> {
        self.timestamp(self.undefined)
    }

    /// Same sample positions with replacement metadata.
    pub fn with_meta(mut self, meta: SeriesMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Derived series sharing this series' timeline, with `extra` more
    /// undefined entries at the front and `label` appended to the transform
    /// chain. `values.len()` must equal `defined_len() - extra`.
    pub(crate) fn derive(&self, extra: usize, values: Vec<f64>, label: &str) -> Self {
        debug_assert_eq!(values.len() + extra, self.values.len());
        Self::from_parts(
            self.start,
            self.undefined + extra,
            values,
            self.meta.with_transform(label),
        )
    }

    /// Fully defined series holding the last `values.len()` positions of the
    /// defined suffix.
    pub(crate) fn defined_tail(&self, values: Vec<f64>, label: &str) -> Self {
        let skipped = self.undefined + self.values.len() - values.len();
        Self::from_parts(
            self.timestamp(skipped),
            0,
            values,
            self.meta.with_transform(label),
        )
    }
}
