//! Trailing-window moving average, moving standard deviation and EWMA.
//!
//! Windows cover the current point and the `n - 1` points before it. The
//! first `n - 1` outputs of MA and Mstd are undefined; EWMA is defined
//! everywhere.

use serde::{Deserialize, Serialize};

use crate::series::{SeriesError, TimeSeries};

/// Default window for report runs.
pub const DEFAULT_WINDOW: usize = 30;
/// Default EWMA smoothing factor for report runs.
pub const DEFAULT_EWMA_ALPHA: f64 = 0.05;

/// Window length and EWMA smoothing factor used together by reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RollingConfig {
    pub window: usize,
    pub alpha: f64,
}

impl Default for RollingConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            alpha: DEFAULT_EWMA_ALPHA,
        }
    }
}

impl RollingConfig {
    pub fn new(window: usize, alpha: f64) -> Result<Self, SeriesError> {
        let cfg = Self { window, alpha };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.window < 2 {
            return Err(SeriesError::WindowTooSmall {
                window: self.window,
                min: 2,
            });
        }
        check_alpha(self.alpha)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), SeriesError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(SeriesError::BadAlpha(alpha))
    }
}

fn check_window(s: &TimeSeries, n: usize, min: usize) -> Result<(), SeriesError> {
    if n < min {
        return Err(SeriesError::WindowTooSmall { window: n, min });
    }
    if n > s.defined_len() {
        return Err(SeriesError::WindowTooLarge {
            window: n,
            len: s.defined_len(),
        });
    }
    Ok(())
}

/// Mean of a window, shifted by its first element and clamped to the window
/// range so constant windows return their value exactly.
pub(crate) fn window_mean(w: &[f64]) -> f64 {
    let pivot = w[0];
    let (mut lo, mut hi) = (pivot, pivot);
    let mut acc = 0.0;
    for &v in w {
        acc += v - pivot;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (pivot + acc / w.len() as f64).clamp(lo, hi)
}

/// Sample standard deviation (n - 1 denominator) around `mean`.
pub(crate) fn window_std(w: &[f64], mean: f64) -> f64 {
    let ss: f64 = w.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (w.len() - 1) as f64).sqrt()
}

/// Trailing means over the defined values; one output per full window.
pub(crate) fn rolling_means(values: &[f64], n: usize) -> Vec<f64> {
    values.windows(n).map(window_mean).collect()
}

pub(crate) fn rolling_stds(values: &[f64], n: usize) -> Vec<f64> {
    values
        .windows(n)
        .map(|w| window_std(w, window_mean(w)))
        .collect()
}

pub(crate) fn ewma_values(values: &[f64], alpha: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut state = match values.first() {
        Some(&v) => v,
        None => return out,
    };
    out.push(state);
    for &y in &values[1..] {
        // The convex combination can drift an ulp outside [y, state].
        let next = alpha * y + (1.0 - alpha) * state;
        state = next.clamp(y.min(state), y.max(state));
        out.push(state);
    }
    out
}

/// Moving average over the trailing `n` points.
pub fn moving_average(s: &TimeSeries, n: usize) -> Result<TimeSeries, SeriesError> {
    check_window(s, n, 1)?;
    Ok(s.derive(n - 1, rolling_means(s.defined(), n), "MA"))
}

/// Moving sample standard deviation over the trailing `n` points.
pub fn moving_std(s: &TimeSeries, n: usize) -> Result<TimeSeries, SeriesError> {
    check_window(s, n, 2)?;
    Ok(s.derive(n - 1, rolling_stds(s.defined(), n), "Mstd"))
}

/// Exponentially weighted moving average, seeded with the first value.
pub fn ewma(s: &TimeSeries, alpha: f64) -> Result<TimeSeries, SeriesError> {
    check_alpha(alpha)?;
    if s.defined_len() == 0 {
        return Err(SeriesError::EmptySeries);
    }
    Ok(s.derive(0, ewma_values(s.defined(), alpha), "EWMA"))
}
