//! Goodness of fit for the Poisson-process assumption.
//!
//! If positions follow a Poisson process with cumulative intensity `Λ`, the
//! increments `Λ(t_i) − Λ(t_{i−1})` are iid unit exponential. The fitted
//! `Λ̂` is plugged in and the increments are compared with the unit
//! exponential by a one-sample Kolmogorov–Smirnov test.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationKind};
use crate::inference::{FittedModel, RecordSequence};

/// Printed with every report: the p-value ignores that `Λ̂` was estimated
/// from the same records.
pub const ESTIMATED_PARAMETER_CAVEAT: &str =
    "KS p-value uses the classical Kolmogorov distribution; parameters were estimated from the same records, so it is anti-conservative";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    /// `u_i = Λ̂(t_i) − Λ̂(t_{i−1})`, `i = 1..m`, `t_0 = 0`.
    #[default]
    Rescaling,
    /// `u_i = α̂·ln(t_i / t_{i−1})`, `i = 2..m`. Offered for sensitivity checks.
    LogRatio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub transform: Transform,
    pub transform_values: Vec<f64>,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub n: usize,
    pub caveat: String,
}

pub fn exponential_transform(records: &RecordSequence, fitted: &FittedModel) -> Result<Vec<f64>> {
    transform_values(records, fitted, Transform::Rescaling)
}

pub fn transform_values(records: &RecordSequence, fitted: &FittedModel, transform: Transform) -> Result<Vec<f64>> {
    let positions = records.positions();
    if positions.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: positions.len(),
        });
    }
    if positions.len() != fitted.m() || records.last() != Some(fitted.r_m()) {
        return Err(Error::Validation {
            kind: ValidationKind::Mismatch,
            index: positions.len().min(fitted.m()).saturating_sub(1),
            detail: format!(
                "fit used m={} records ending at {}, got {} records ending at {:?}",
                fitted.m(),
                fitted.r_m(),
                positions.len(),
                records.last()
            ),
        });
    }
    let rate = fitted.rate();
    match transform {
        Transform::Rescaling => {
            let mut previous = 0.0;
            positions
                .iter()
                .map(|&t| {
                    let current = rate.cumulative_intensity(t)?;
                    let u = current - previous;
                    previous = current;
                    Ok(u)
                })
                .collect()
        }
        Transform::LogRatio => Ok(positions
            .windows(2)
            .map(|w| rate.alpha() * (w[1] / w[0]).ln())
            .collect()),
    }
}

/// Sup-distance between the empirical CDF of `sample` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        // Ties form one jump.
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let f = cdf(sorted[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    d
}

/// Survival function of the limiting Kolmogorov distribution, `P(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // Small-x series converges quickly here.
        let v = -PI * PI / (8.0 * x * x);
        let mut cdf = 0.0;
        for j in 0..20 {
            let odd = (2 * j + 1) as f64;
            cdf += (v * odd * odd).exp();
        }
        (1.0 - (2.0 * PI).sqrt() / x * cdf).clamp(0.0, 1.0)
    } else {
        let mut sf = 0.0;
        let mut sign = 1.0;
        for j in 1..=100 {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * x * x).exp();
            sf += sign * term;
            if term < 1e-18 {
                break;
            }
            sign = -sign;
        }
        (2.0 * sf).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value for a KS distance `d` at effective sample size `n`,
/// with the `(√n + 0.12 + 0.11/√n)` finite-sample correction.
pub fn ks_p_value(d: f64, n: f64) -> f64 {
    let root = n.sqrt();
    kolmogorov_sf((root + 0.12 + 0.11 / root) * d)
}

/// One-sample KS test of `u` against the unit exponential. Returns
/// `(statistic, p_value)`.
pub fn ks_exponential_test(u: &[f64]) -> Result<(f64, f64)> {
    if u.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: u.len() });
    }
    if let Some(bad) = u.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::domain(format!("exponential KS test needs positive values, got {bad}")));
    }
    let d = ks_statistic(u, |x| -(-x).exp_m1());
    Ok((d, ks_p_value(d, u.len() as f64)))
}

/// Two-sample KS test. Returns `(statistic, p_value)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok((d, ks_p_value(d, n * m / (n + m))))
}

pub fn gof_report(records: &RecordSequence, fitted: &FittedModel, transform: Transform) -> Result<GofReport> {
    let values = transform_values(records, fitted, transform)?;
    let (ks_statistic, p_value) = ks_exponential_test(&values)?;
    Ok(GofReport {
        transform,
        n: values.len(),
        transform_values: values,
        ks_statistic,
        p_value,
        caveat: ESTIMATED_PARAMETER_CAVEAT.to_string(),
    })
}
