//! Seeded generators for the three textbook series families: deterministic
//! trend, AR(1) and random walk (with drift).
//!
//! Randomness comes from [`NormalStream`]: a ChaCha8 keystream seeded with
//! `seed_from_u64`, mapped to uniforms with 53-bit precision and to normals
//! with the Box-Muller transform. Every step is specified, so fixtures can be
//! regenerated bit-for-bit in any language with a ChaCha8 implementation.

use chrono::{DateTime, TimeZone, Utc};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{make_series, SeriesError, SeriesMeta, TimeSeries};

/// Start timestamp assigned to generated series.
pub const SYNTHETIC_START: i64 = 1_577_836_800; // 2020-01-01T00:00:00Z

pub(crate) fn synthetic_start() -> DateTime<Utc> {
    Utc.timestamp_opt(SYNTHETIC_START, 0).unwrap()
}

/// Deterministic standard-normal stream.
///
/// Draws come in Box-Muller pairs `(r·cos θ, r·sin θ)` with
/// `r = sqrt(-2 ln(1 - u1))`, `θ = 2π·u2`, where each `u` is
/// `(next_u64 >> 11) · 2^-53`.
#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Next N(0, 1) draw.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

fn check_params(
    n: usize,
    noise_sd: f64,
    others: &[(&'static str, f64)],
) -> Result<(), SeriesError> {
    if n < 2 {
        return Err(SeriesError::BadLength { n, min: 2 });
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(SeriesError::BadParameter {
            name: "noise_sd",
            value: noise_sd,
        });
    }
    for &(name, value) in others {
        if !value.is_finite() {
            return Err(SeriesError::BadParameter { name, value });
        }
    }
    Ok(())
}

/// `y_t = alpha0 + beta·t + ε_t` for `t = 1..=n`.
pub fn gen_trend(
    n: usize,
    alpha0: f64,
    beta: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<TimeSeries, SeriesError> {
    check_params(n, noise_sd, &[("alpha0", alpha0), ("beta", beta)])?;
    let mut noise = NormalStream::new(seed);
    let values: Vec<f64> = (1..=n)
        .map(|t| alpha0 + beta * t as f64 + noise_sd * noise.next_normal())
        .collect();
    finish(values)
}

/// `y_t = alpha0 + phi·y_{t-1} + ε_t`, started at the stationary mean
/// `alpha0 / (1 - phi)` when `|phi| < 1` and at zero otherwise.
pub fn gen_ar1(
    n: usize,
    alpha0: f64,
    phi: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<TimeSeries, SeriesError> {
    check_params(n, noise_sd, &[("alpha0", alpha0), ("phi", phi)])?;
    let mut noise = NormalStream::new(seed);
    let mut values = Vec::with_capacity(n);
    let mut y = if phi.abs() < 1.0 {
        alpha0 / (1.0 - phi)
    } else {
        0.0
    };
    values.push(y);
    for _ in 1..n {
        y = alpha0 + phi * y + noise_sd * noise.next_normal();
        values.push(y);
    }
    finish(values)
}

/// Random walk with drift; identical to `gen_ar1` with `phi = 1`.
pub fn gen_random_walk(
    n: usize,
    drift: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<TimeSeries, SeriesError> {
    gen_ar1(n, drift, 1.0, noise_sd, seed)
}

fn finish(values: Vec<f64>) -> Result<TimeSeries, SeriesError> {
    let meta = SeriesMeta::synthetic();
    let step = meta.horizon;
    make_series(&values, meta, synthetic_start(), step)
}
