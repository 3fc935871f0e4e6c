//! Ordinary least squares via Householder QR, plus the ADF design builder.
//!
//! Standard errors come from the triangular factor: with `X = QR`,
//! `(XᵀX)⁻¹ = R⁻¹R⁻ᵀ`, so the normal equations are never formed.

mod qr;

pub(crate) use qr::HouseholderQr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinregError {
    #[error("design is rank deficient: rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("need more rows than columns: {rows} rows, {cols} columns")]
    TooFewRows { rows: usize, cols: usize },
    #[error("non-finite entry in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("series too short for {lags} lags: need {needed} defined values, got {got}")]
    TooShort {
        lags: usize,
        needed: usize,
        got: usize,
    },
}

/// Dense regressor matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    col_names: Vec<String>,
}

impl DesignMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        data: Vec<f64>,
        col_names: Vec<String>,
    ) -> Result<Self, LinregError> {
        if cols == 0 || rows < cols {
            return Err(LinregError::TooFewRows { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinregError::ShapeMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if col_names.len() != cols {
            return Err(LinregError::ShapeMismatch {
                expected: cols,
                got: col_names.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinregError::NonFinite {
                what: "design",
                index,
            });
        }
        Ok(Self {
            rows,
            cols,
            data,
            col_names,
        })
    }

    /// Build from named columns of equal length.
    pub fn from_columns(columns: Vec<(String, Vec<f64>)>) -> Result<Self, LinregError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.1.len());
        if let Some(bad) = columns.iter().find(|c| c.1.len() != rows) {
            return Err(LinregError::ShapeMismatch {
                expected: rows,
                got: bad.1.len(),
            });
        }
        let mut data = vec![0.0; rows * cols];
        for (j, (_, col)) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                data[i * cols + j] = v;
            }
        }
        let names = columns.into_iter().map(|c| c.0).collect();
        Self::new(rows, cols, data, names)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Column-major copy of the leading `p` columns in the given order.
    pub(crate) fn column_major(&self, order: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows * order.len());
        for &j in order {
            out.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        out
    }

    pub fn mul_vec(&self, beta: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(beta).map(|(x, b)| x * b).sum())
            .collect()
    }
}

/// Least-squares fit with classical (homoskedastic) standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub coef: Vec<f64>,
    pub stderr: Vec<f64>,
    pub tstat: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    /// `rss / (nobs - k)`.
    pub sigma2: f64,
    pub nobs: usize,
    pub df_resid: usize,
    pub rank: usize,
}

impl OlsFit {
    pub fn num_params(&self) -> usize {
        self.coef.len()
    }
}

/// Minimise `‖y − Xβ‖²`.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<OlsFit, LinregError> {
    let (m, k) = (x.rows, x.cols);
    if y.len() != m {
        return Err(LinregError::ShapeMismatch {
            expected: m,
            got: y.len(),
        });
    }
    if m <= k {
        return Err(LinregError::TooFewRows { rows: m, cols: k });
    }
    if let Some(index) = y.iter().position(|v| !v.is_finite()) {
        return Err(LinregError::NonFinite {
            what: "response",
            index,
        });
    }

    let order: Vec<usize> = (0..k).collect();
    let qr = HouseholderQr::new(m, k, x.column_major(&order));
    let rank = qr.rank();
    if rank < k {
        return Err(LinregError::RankDeficient { rank, cols: k });
    }

    let qty = qr.qt_mul(y);
    let coef = qr.solve_upper(&qty, k);
    let fitted = x.mul_vec(&coef);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let df_resid = m - k;
    let sigma2 = rss / df_resid as f64;
    let stderr: Vec<f64> = qr
        .inverse_gram_diag(k)
        .into_iter()
        .map(|d| (sigma2 * d).sqrt())
        .collect();
    let tstat = coef
        .iter()
        .zip(&stderr)
        .map(|(c, s)| if *s > 0.0 { c / s } else { f64::NAN })
        .collect();

    Ok(OlsFit {
        coef,
        stderr,
        tstat,
        residuals,
        rss,
        sigma2,
        nobs: m,
        df_resid,
        rank,
    })
}

/// Column names of the ADF design with `p` lagged differences.
pub(crate) fn adf_column_names(p: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(p + 2);
    names.push("y_lag1".to_string());
    names.extend((1..=p).map(|j| format!("dy_lag{j}")));
    names.push("const".to_string());
    names
}

/// ADF regression rows for observations `first..y.len()` (0-based), with
/// columns `[y_{t-1}, Δy_{t-1}, …, Δy_{t-p}, 1]`. Requires `first > p`.
pub(crate) fn adf_rows(y: &[f64], p: usize, first: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(first > p);
    let k = p + 2;
    let m = y.len() - first;
    let mut data = Vec::with_capacity(m * k);
    let mut targets = Vec::with_capacity(m);
    for t in first..y.len() {
        targets.push(y[t] - y[t - 1]);
        data.push(y[t - 1]);
        for j in 1..=p {
            data.push(y[t - j] - y[t - j - 1]);
        }
        data.push(1.0);
    }
    (data, targets)
}

/// Design and targets for `Δy_t = γ y_{t-1} + Σ θ_j Δy_{t-j} + α₀ + ε_t`
/// over the defined values of `s`.
///
/// There are `N − p − 1` rows and `p + 2` columns; `p = 0` gives the plain
/// Dickey-Fuller regression.
pub fn build_adf_design(s: &TimeSeries, p: usize) -> Result<(DesignMatrix, Vec<f64>), LinregError> {
    let y = s.defined();
    let n = y.len();
    // Need m = n - p - 1 > k = p + 2.
    let needed = 2 * p + 4;
    if n < needed {
        return Err(LinregError::TooShort {
            lags: p,
            needed,
            got: n,
        });
    }
    let (data, targets) = adf_rows(y, p, p + 1);
    let design = DesignMatrix::new(targets.len(), p + 2, data, adf_column_names(p))?;
    Ok((design, targets))
}
