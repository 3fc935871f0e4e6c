//! Batch pipeline: every zone × market × variable × transform through the
//! ADF test, collected into one table per zone.

mod anomaly;
mod emit;
mod plot;

pub use anomaly::{flag_anomalies, render_anomalies, AnomalyFlag, DEFAULT_ANOMALY_THRESHOLD};
pub use emit::{emit, render, ReportFormat};
pub use plot::{export_plot_series, render_plot_series, PLOT_HEADER};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adf::{adf_test, verdict, AdfConfig, AdfError, Verdict};
use crate::dataset::{extract_series, DatasetError, ZoneDataset};
use crate::series::{drop_undefined_prefix, resample, Horizon, Market, SeriesError, Variable};
use crate::transforms::{apply_with_policy, LogPolicy, TransformKind};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("dataset has no zones")]
    EmptyDataset,
    #[error(transparent)]
    Config(#[from] AdfError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One ADF result line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub zone: String,
    pub series_label: String,
    pub statistic: f64,
    pub pvalue: f64,
    pub lags_used: usize,
    pub nobs: usize,
    pub cv1: f64,
    pub cv5: f64,
    pub cv10: f64,
    pub verdict: Verdict,
}

/// A grid cell that could not be tested, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub zone: String,
    pub series_label: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportTable {
    pub zone: String,
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<SkippedRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub horizon: Horizon,
    pub transforms: Vec<TransformKind>,
    pub adf: AdfConfig,
    pub log_policy: LogPolicy,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            horizon: Horizon::Daily,
            transforms: TransformKind::report_defaults(
                crate::rolling::DEFAULT_WINDOW,
                crate::rolling::DEFAULT_EWMA_ALPHA,
            ),
            adf: AdfConfig::default(),
            log_policy: LogPolicy::Strict,
        }
    }
}

/// Market × variable order within each transform block.
pub const SERIES_ORDER: [(Market, Variable); 4] = [
    (Market::DayAhead, Variable::Demand),
    (Market::RealTime, Variable::Demand),
    (Market::DayAhead, Variable::Price),
    (Market::RealTime, Variable::Price),
];

fn cell_label(market: Market, variable: Variable, kind: TransformKind) -> String {
    let base = format!("{} {}", market.code(), variable.as_str());
    match kind.label() {
        "" => base,
        t => format!("{t} {base}"),
    }
}

fn run_cell(
    d: &ZoneDataset,
    zone: &str,
    market: Market,
    variable: Variable,
    kind: TransformKind,
    opts: &ReportOptions,
) -> Result<ReportRow, String> {
    let hourly = extract_series(d, zone, variable, market).map_err(|e| e.to_string())?;
    let resampled = resample(&hourly, opts.horizon).map_err(|e| e.to_string())?;
    let transformed =
        apply_with_policy(&resampled, kind, opts.log_policy).map_err(|e| e.to_string())?;
    let series = drop_undefined_prefix(&transformed).map_err(|e| e.to_string())?;
    let r = adf_test(&series, &opts.adf).map_err(|e| e.to_string())?;
    Ok(ReportRow {
        zone: zone.to_string(),
        series_label: cell_label(market, variable, kind),
        statistic: r.statistic,
        pvalue: r.pvalue,
        lags_used: r.lags_used,
        nobs: r.nobs,
        cv1: r.critical.cv1,
        cv5: r.critical.cv5,
        cv10: r.critical.cv10,
        verdict: verdict(&r, opts.adf.significance),
    })
}

/// Run the full grid with default options apart from horizon, transforms and
/// test configuration.
pub fn run_report(
    d: &ZoneDataset,
    horizon: Horizon,
    transforms: &[TransformKind],
    cfg: &AdfConfig,
) -> Result<Vec<ReportTable>, ReportError> {
    run_report_with(
        d,
        &ReportOptions {
            horizon,
            transforms: transforms.to_vec(),
            adf: *cfg,
            log_policy: LogPolicy::Strict,
        },
    )
}

/// Tables in [`ZoneDataset::zone_names`] order; rows within a zone ordered
/// by transform, then [`SERIES_ORDER`]. Per-series failures become
/// [`SkippedRow`]s. Runs on the current rayon pool; output does not depend
/// on its size.
pub fn run_report_with(
    d: &ZoneDataset,
    opts: &ReportOptions,
) -> Result<Vec<ReportTable>, ReportError> {
    if d.is_empty() {
        return Err(ReportError::EmptyDataset);
    }
    opts.adf.validate()?;
    for kind in &opts.transforms {
        kind.validate()?;
    }

    let zones = d.zone_names();
    let grid: Vec<(usize, TransformKind, Market, Variable)> = zones
        .iter()
        .enumerate()
        .flat_map(|(zi, _)| {
            opts.transforms
                .iter()
                .flat_map(move |&kind| SERIES_ORDER.iter().map(move |&(m, v)| (zi, kind, m, v)))
        })
        .collect();

    let outcomes: Vec<(usize, Result<ReportRow, SkippedRow>)> = grid
        .par_iter()
        .map(|&(zi, kind, market, variable)| {
            let zone = zones[zi];
            let out = run_cell(d, zone, market, variable, kind, opts).map_err(|reason| {
                log::warn!(
                    "{zone} / {}: skipped: {reason}",
                    cell_label(market, variable, kind)
                );
                SkippedRow {
                    zone: zone.to_string(),
                    series_label: cell_label(market, variable, kind),
                    reason,
                }
            });
            (zi, out)
        })
        .collect();

    let mut tables: Vec<ReportTable> = zones
        .iter()
        .map(|z| ReportTable {
            zone: z.to_string(),
            ..ReportTable::default()
        })
        .collect();
    for (zi, out) in outcomes {
        match out {
            Ok(row) => tables[zi].rows.push(row),
            Err(skip) => tables[zi].skipped.push(skip),
        }
    }
    Ok(tables)
}
