//! Stationarity analysis for electricity-market time series.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: the [`TimeSeries`] container, calendar resampling and seeded
//!   synthetic generators (deterministic trend, AR(1), random walk).
//! - [`rolling`]: trailing moving average, moving standard deviation and EWMA.
//! - [`transforms`]: log, remove-MA, remove-EWMA, remove-log-MA and
//!   differencing.
//! - [`linreg`]: Householder-QR least squares with standard errors.
//! - [`adf`]: Dickey-Fuller / augmented Dickey-Fuller tests with AIC lag
//!   selection and MacKinnon critical values and p-values.
//! - [`dataset`]: zone/market CSV ingestion and synthetic fixtures.
//! - [`report`]: the batch zone × market × variable × transform pipeline,
//!   report rendering, plot exports and the rolling z-score anomaly flagger.

pub mod adf;
pub mod dataset;
pub mod linreg;
pub mod report;
pub mod rolling;
pub mod series;
pub mod transforms;

pub use adf::{adf_test, df_test, AdfConfig, AdfError, AdfResult, Verdict};
pub use linreg::{ols_fit, DesignMatrix, LinregError, OlsFit};
pub use series::{Horizon, Market, SeriesError, SeriesMeta, TimeSeries, Variable};
pub use transforms::{LogPolicy, TransformKind};
