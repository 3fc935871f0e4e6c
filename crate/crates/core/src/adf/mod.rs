//! Dickey-Fuller and augmented Dickey-Fuller unit-root tests.
//!
//! The test regression is
//!
//! ```text
//! Δy_t = α₀ + γ·y_{t-1} + θ_1·Δy_{t-1} + … + θ_p·Δy_{t-p} + ε_t
//! ```
//!
//! with H₀: γ = 0 (unit root) against H₁: γ < 0. The statistic is the t-ratio
//! of γ̂, compared with MacKinnon's constant-only response surfaces.
//!
//! Automatic lag selection fits every `p = 0..=maxlag` on the common sample
//! left after dropping the first `maxlag + 1` observations, picks the AIC
//! minimiser, then refits that lag on its own maximal sample. All candidates
//! share one design, so a single QR of `[y_{t-1}, 1, Δy_{t-1}, …, Δy_{t-maxlag}]`
//! yields every candidate's RSS from the tail of `Qᵀ·Δy`.

mod mackinnon;

pub use mackinnon::{
    mackinnon_crit, mackinnon_pvalue, CriticalValues, SignificanceLevel, MIN_CRIT_NOBS,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linreg::{adf_rows, build_adf_design, ols_fit, HouseholderQr, LinregError, OlsFit};
use crate::series::TimeSeries;

/// Minimum defined length accepted by any test.
pub const MIN_SERIES_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdfError {
    #[error("series too short: need {needed} defined values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),
    #[error("residual sum of squares is zero; AIC is undefined")]
    ZeroRss,
    #[error("{nobs} observations is below the {min} needed for critical values")]
    TooFewObs { nobs: usize, min: usize },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Linreg(LinregError),
}

impl From<LinregError> for AdfError {
    fn from(e: LinregError) -> Self {
        match e {
            LinregError::RankDeficient { rank, cols } => {
                AdfError::DegenerateSeries(format!("test regression has rank {rank} < {cols}"))
            }
            LinregError::TooShort { needed, got, .. } => AdfError::TooShort { needed, got },
            other => AdfError::Linreg(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Autolag {
    /// Minimise AIC over `0..=maxlag`.
    Aic,
    Fixed(usize),
}

/// Information criterion used for lag selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AicVariant {
    /// `m·ln(RSS/m) + 2k`, the Gaussian-likelihood AIC up to a constant.
    #[default]
    Standard,
    /// `−2·ln(RSS/m) + 2k`. Has no sample-size factor and rewards larger
    /// residual variance; kept for reproducing that formula, not for real use.
    LogMse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdfConfig {
    /// `None` uses [`default_maxlag`].
    pub maxlag: Option<usize>,
    pub autolag: Autolag,
    pub aic_variant: AicVariant,
    /// Significance level for [`verdict`].
    pub significance: f64,
}

impl Default for AdfConfig {
    fn default() -> Self {
        Self {
            maxlag: None,
            autolag: Autolag::Aic,
            aic_variant: AicVariant::Standard,
            significance: 0.05,
        }
    }
}

impl AdfConfig {
    pub fn fixed(p: usize) -> Self {
        Self {
            autolag: Autolag::Fixed(p),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), AdfError> {
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return Err(AdfError::BadConfig(format!(
                "significance {} outside (0, 1)",
                self.significance
            )));
        }
        if let (Autolag::Fixed(p), Some(maxlag)) = (self.autolag, self.maxlag) {
            if p > maxlag {
                return Err(AdfError::BadConfig(format!(
                    "fixed lag {p} exceeds maxlag {maxlag}"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of a unit-root test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejections {
    pub at_1pct: bool,
    pub at_5pct: bool,
    pub at_10pct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    /// t-ratio of γ̂.
    pub statistic: f64,
    pub pvalue: f64,
    pub lags_used: usize,
    /// Rows in the final regression: defined length − lags_used − 1.
    pub nobs: usize,
    pub critical: CriticalValues,
    /// `(lag, AIC)` for every candidate evaluated on the common sample.
    pub aic_trace: Vec<(usize, f64)>,
    pub reject_at: Rejections,
}

impl AdfResult {
    pub fn rejects(&self, level: SignificanceLevel) -> bool {
        self.statistic < self.critical.at(level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stationary,
    NonStationary,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stationary => "Stationary",
            Verdict::NonStationary => "NonStationary",
        }
    }
}

/// Stationary iff the unit-root null is rejected: `pvalue < alpha`.
pub fn verdict(r: &AdfResult, alpha: f64) -> Verdict {
    if r.pvalue < alpha {
        Verdict::Stationary
    } else {
        Verdict::NonStationary
    }
}

/// `ceil(12·(n/100)^¼)`.
pub fn default_maxlag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).ceil() as usize
}

/// Largest maxlag whose common sample still has `maxlag + 5` rows and enough
/// rows for the critical-value surface.
fn max_feasible_lag(n: usize) -> Option<usize> {
    (0..=n / 2).rev().find(|&l| feasible(n, l))
}

fn feasible(n: usize, maxlag: usize) -> bool {
    n >= MIN_SERIES_LEN && n >= maxlag + 1 + (maxlag + 5).max(MIN_CRIT_NOBS)
}

fn needed_len(maxlag: usize) -> usize {
    (maxlag + 1 + (maxlag + 5).max(MIN_CRIT_NOBS)).max(MIN_SERIES_LEN)
}

/// Information criterion from a residual sum of squares.
pub fn aic_value(rss: f64, nobs: usize, k: usize, variant: AicVariant) -> Result<f64, AdfError> {
    if rss <= 0.0 {
        return Err(AdfError::ZeroRss);
    }
    let m = nobs as f64;
    let mse = rss / m;
    Ok(match variant {
        AicVariant::Standard => m * mse.ln() + 2.0 * k as f64,
        AicVariant::LogMse => -2.0 * mse.ln() + 2.0 * k as f64,
    })
}

/// AIC of a fit; `k` counts every regressor including the constant.
pub fn aic(fit: &OlsFit, variant: AicVariant) -> Result<f64, AdfError> {
    aic_value(fit.rss, fit.nobs, fit.num_params(), variant)
}

/// Plain Dickey-Fuller test: ADF with zero lagged differences.
pub fn df_test(s: &TimeSeries) -> Result<AdfResult, AdfError> {
    adf_test(s, &AdfConfig::fixed(0))
}

/// Augmented Dickey-Fuller test with a constant and no trend.
pub fn adf_test(s: &TimeSeries, cfg: &AdfConfig) -> Result<AdfResult, AdfError> {
    cfg.validate()?;
    let y = s.defined();
    let n = y.len();

    let (lag, aic_trace) = match cfg.autolag {
        Autolag::Fixed(p) => {
            if !feasible(n, p) {
                return Err(AdfError::TooShort {
                    needed: needed_len(p),
                    got: n,
                });
            }
            (p, Vec::new())
        }
        Autolag::Aic => {
            let maxlag = match cfg.maxlag {
                Some(l) => {
                    if !feasible(n, l) {
                        return Err(AdfError::TooShort {
                            needed: needed_len(l),
                            got: n,
                        });
                    }
                    l
                }
                None => {
                    let cap = max_feasible_lag(n).ok_or(AdfError::TooShort {
                        needed: needed_len(0),
                        got: n,
                    })?;
                    default_maxlag(n).min(cap)
                }
            };
            select_lag(y, maxlag, cfg.aic_variant)?
        }
    };

    let (design, targets) = build_adf_design(s, lag)?;
    let fit = ols_fit(&design, &targets)?;
    let statistic = fit.tstat[0];
    if fit.rss <= 0.0 || !statistic.is_finite() {
        return Err(AdfError::DegenerateSeries(
            "test regression fits exactly".into(),
        ));
    }
    let mut aic_trace = aic_trace;
    if aic_trace.is_empty() {
        if let Ok(a) = aic(&fit, cfg.aic_variant) {
            aic_trace.push((lag, a));
        }
    }

    let critical = CriticalValues::for_nobs(fit.nobs)?;
    let reject_at = Rejections {
        at_1pct: statistic < critical.cv1,
        at_5pct: statistic < critical.cv5,
        at_10pct: statistic < critical.cv10,
    };
    Ok(AdfResult {
        statistic,
        pvalue: mackinnon_pvalue(statistic),
        lags_used: lag,
        nobs: fit.nobs,
        critical,
        aic_trace,
        reject_at,
    })
}

/// AIC-minimising lag over `0..=maxlag` on the common sample.
fn select_lag(
    y: &[f64],
    maxlag: usize,
    variant: AicVariant,
) -> Result<(usize, Vec<(usize, f64)>), AdfError> {
    let (row_major, targets) = adf_rows(y, maxlag, maxlag + 1);
    let m = targets.len();
    let k = maxlag + 2;
    // Reorder to [y_{t-1}, const, Δy_{t-1}, …] so candidate p is the leading
    // p + 2 columns.
    let mut order = Vec::with_capacity(k);
    order.push(0);
    order.push(k - 1);
    order.extend(1..=maxlag);
    let mut col_major = Vec::with_capacity(m * k);
    for &j in &order {
        col_major.extend((0..m).map(|i| row_major[i * k + j]));
    }

    let qr = HouseholderQr::new(m, k, col_major);
    let rank = qr.rank();
    if rank < k {
        return Err(AdfError::DegenerateSeries(format!(
            "lag-selection regression has rank {rank} < {k}"
        )));
    }
    let qty = qr.qt_mul(&targets);

    // Tail sums of squares: rss_k = Σ_{i ≥ k} (Qᵀy)_i².
    let mut tail = vec![0.0; m + 1];
    for i in (0..m).rev() {
        tail[i] = tail[i + 1] + qty[i] * qty[i];
    }

    let mut trace = Vec::with_capacity(maxlag + 1);
    let mut best: Option<(usize, f64)> = None;
    for p in 0..=maxlag {
        let value = aic_value(tail[p + 2], m, p + 2, variant)?;
        trace.push((p, value));
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((p, value));
        }
    }
    let (lag, _) = best.expect("at least one candidate");
    Ok((lag, trace))
}
