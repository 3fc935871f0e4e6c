//! MacKinnon response surfaces for the constant-only Dickey-Fuller τ
//! statistic (one integrated variable).
//!
//! Critical values: MacKinnon (2010), "Critical Values for Cointegration
//! Tests", Queen's Economics Department Working Paper 1227, Table 2, case
//! `τ_c`, N = 1. Each level is `b0 + b1/T + b2/T² + b3/T³`.
//!
//! p-values: MacKinnon (1994), "Approximate Asymptotic Distribution Functions
//! for Unit-Root and Cointegration Tests", JBES 12(2), Table 3 / 4, case
//! `τ_c`, N = 1: `p = Φ(γ0 + γ1 τ + γ2 τ² [+ γ3 τ³])` with separate fits
//! below and above `τ* = −1.61`, saturating outside `[τ_min, τ_max]`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::AdfError;

/// Smallest effective sample for which the critical-value surface is used.
pub const MIN_CRIT_NOBS: usize = 20;

const CRIT_1PCT: [f64; 4] = [-3.43035, -6.5393, -16.786, -79.433];
const CRIT_5PCT: [f64; 4] = [-2.86154, -2.8903, -4.234, -40.040];
const CRIT_10PCT: [f64; 4] = [-2.56677, -1.5384, -2.809, 0.0];

const TAU_MAX: f64 = 2.74;
const TAU_MIN: f64 = -18.83;
const TAU_STAR: f64 = -1.61;
const SMALL_P: [f64; 3] = [2.1659, 1.4412, 3.8269e-2];
const LARGE_P: [f64; 4] = [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignificanceLevel {
    OnePct,
    FivePct,
    TenPct,
}

impl SignificanceLevel {
    pub const ALL: [SignificanceLevel; 3] = [
        SignificanceLevel::OnePct,
        SignificanceLevel::FivePct,
        SignificanceLevel::TenPct,
    ];

    pub fn fraction(self) -> f64 {
        match self {
            SignificanceLevel::OnePct => 0.01,
            SignificanceLevel::FivePct => 0.05,
            SignificanceLevel::TenPct => 0.10,
        }
    }

    fn coefficients(self) -> &'static [f64; 4] {
        match self {
            SignificanceLevel::OnePct => &CRIT_1PCT,
            SignificanceLevel::FivePct => &CRIT_5PCT,
            SignificanceLevel::TenPct => &CRIT_10PCT,
        }
    }
}

/// Test-statistic thresholds at 1%, 5% and 10%.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub cv1: f64,
    pub cv5: f64,
    pub cv10: f64,
}

impl CriticalValues {
    pub fn for_nobs(nobs: usize) -> Result<Self, AdfError> {
        Ok(Self {
            cv1: mackinnon_crit(SignificanceLevel::OnePct, nobs)?,
            cv5: mackinnon_crit(SignificanceLevel::FivePct, nobs)?,
            cv10: mackinnon_crit(SignificanceLevel::TenPct, nobs)?,
        })
    }

    pub fn at(&self, level: SignificanceLevel) -> f64 {
        match level {
            SignificanceLevel::OnePct => self.cv1,
            SignificanceLevel::FivePct => self.cv5,
            SignificanceLevel::TenPct => self.cv10,
        }
    }
}

/// Finite-sample critical value for `nobs` regression observations.
pub fn mackinnon_crit(level: SignificanceLevel, nobs: usize) -> Result<f64, AdfError> {
    if nobs < MIN_CRIT_NOBS {
        return Err(AdfError::TooFewObs {
            nobs,
            min: MIN_CRIT_NOBS,
        });
    }
    let inv = 1.0 / nobs as f64;
    let [b0, b1, b2, b3] = *level.coefficients();
    Ok(b0 + inv * (b1 + inv * (b2 + inv * b3)))
}

fn polyval(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Approximate p-value of a constant-only DF τ statistic.
pub fn mackinnon_pvalue(tau: f64) -> f64 {
    if tau.is_nan() {
        return f64::NAN;
    }
    if tau > TAU_MAX {
        return 1.0;
    }
    if tau < TAU_MIN {
        return 0.0;
    }
    let z = if tau <= TAU_STAR {
        polyval(&SMALL_P, tau)
    } else {
        polyval(&LARGE_P, tau)
    };
    Normal::standard().cdf(z).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crit_ordering_and_sample_size_direction() {
        for nobs in [20usize, 25, 50, 100, 500, 1771, 10_000] {
            let cv = CriticalValues::for_nobs(nobs).unwrap();
            assert!(
                cv.cv1 < cv.cv5 && cv.cv5 < cv.cv10 && cv.cv10 < 0.0,
                "{nobs}: {cv:?}"
            );
        }
        // Smaller samples push every threshold further from zero.
        for level in SignificanceLevel::ALL {
            let mut prev = mackinnon_crit(level, 20).unwrap();
            for nobs in 21..3000 {
                let cur = mackinnon_crit(level, nobs).unwrap();
                assert!(cur > prev);
                prev = cur;
            }
        }
    }

    #[test]
    fn crit_rejects_tiny_samples() {
        assert_eq!(
            mackinnon_crit(SignificanceLevel::FivePct, 19),
            Err(AdfError::TooFewObs { nobs: 19, min: 20 })
        );
    }

    #[test]
    fn pvalue_saturates() {
        assert_eq!(mackinnon_pvalue(5.0), 1.0);
        assert_eq!(mackinnon_pvalue(-40.0), 0.0);
        assert!(mackinnon_pvalue(-15.7) < 1e-20);
        assert!(mackinnon_pvalue(-15.7) > 0.0);
    }

    #[test]
    fn pvalue_near_five_percent_at_asymptotic_cv() {
        let p = mackinnon_pvalue(-2.86154);
        assert!((p - 0.05).abs() < 0.003, "{p}");
        let p = mackinnon_pvalue(-3.43035);
        assert!((p - 0.01).abs() < 0.002, "{p}");
    }

    #[test]
    fn pvalue_monotone_on_grid() {
        let mut prev = 0.0;
        for i in 0..1000 {
            let tau = -20.0 + 24.0 * i as f64 / 999.0;
            let p = mackinnon_pvalue(tau);
            assert!((0.0..=1.0).contains(&p));
            assert!(p >= prev, "tau {tau}: {p} < {prev}");
            prev = p;
        }
    }
}
