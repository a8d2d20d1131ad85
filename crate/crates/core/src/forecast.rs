//! Predictive distribution of a future corrosion position.
//!
//! Given the first `m` positions and a rate, the position `T_s` of the s-th
//! corrosion (`s > m`) has density
//!
//! ```text
//! f(y) = [Λ(y) − Λ(r_m)]^(s−m−1) / Γ(s−m) · λ(y) · exp(−(Λ(y) − Λ(r_m))),  y > r_m
//! ```
//!
//! Equivalently `Λ(T_s) − Λ(r_m)` is unit-scale gamma with shape `s − m`.
//! Means, quantiles and intervals are all computed in that transformed
//! coordinate. Predictions plug in the point estimates and ignore their
//! sampling uncertainty.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{fit_mle, FittedModel, RecordSequence};
use crate::model::{pow_pos, PowerLawRate};
use crate::numerics::{
    expectation_semi_infinite, find_root_bracketed, gamma_cdf, gamma_quantile, log_gamma, QuadratureResult,
    Tolerances,
};

/// Which future corrosion to predict, and from what.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionQuery {
    rate: PowerLawRate,
    m: usize,
    r_m: f64,
    s: usize,
    base: f64,
    log_gamma_steps: f64,
}

impl PredictionQuery {
    /// Predict record `s` from a fit on the first `fitted.m()` records.
    pub fn from_fit(fitted: &FittedModel, s: usize) -> Result<Self> {
        Self::new(fitted.rate(), fitted.m(), fitted.r_m(), s)
    }

    /// Predict record `s` given that record `m` sits at `r_m`, for any rate.
    pub fn new(rate: PowerLawRate, m: usize, r_m: f64, s: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!("need m >= 2 observed records, got {m}")));
        }
        if s <= m {
            return Err(Error::domain(format!("target index s={s} must exceed m={m}")));
        }
        if !(r_m > 0.0) || !r_m.is_finite() {
            return Err(Error::domain(format!("last record must be positive, got {r_m}")));
        }
        let steps = (s - m) as f64;
        Ok(Self {
            rate,
            m,
            r_m,
            s,
            base: rate.cumulative_intensity(r_m)?,
            log_gamma_steps: log_gamma(steps)?,
        })
    }

    pub fn rate(&self) -> PowerLawRate {
        self.rate
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r_m(&self) -> f64 {
        self.r_m
    }

    /// Gamma shape `s − m` of the transformed predictive law.
    pub fn steps(&self) -> f64 {
        (self.s - self.m) as f64
    }

    fn position_at(&self, excess: f64) -> f64 {
        pow_pos((self.base + excess) / self.rate.beta(), 1.0 / self.rate.alpha())
    }

    /// Predictive density of `T_s` at `y`; zero for `y <= r_m`.
    pub fn conditional_density(&self, y: f64) -> f64 {
        if !(y > self.r_m) || !y.is_finite() {
            return 0.0;
        }
        let excess = self.rate.beta() * pow_pos(y, self.rate.alpha()) - self.base;
        let lambda = self.rate.alpha() * self.rate.beta() * pow_pos(y, self.rate.alpha() - 1.0);
        let k = self.steps();
        let log_kernel = if k == 1.0 {
            0.0
        } else if excess <= 0.0 {
            return 0.0;
        } else {
            (k - 1.0) * excess.ln() - self.log_gamma_steps
        };
        (log_kernel - excess).exp() * lambda
    }

    /// `P(T_s <= y)`.
    pub fn predictive_cdf(&self, y: f64) -> f64 {
        if !(y > self.r_m) {
            return 0.0;
        }
        let excess = (self.rate.beta() * pow_pos(y, self.rate.alpha()) - self.base).max(0.0);
        gamma_cdf(self.steps(), excess).unwrap_or(f64::NAN)
    }

    /// `E[T_s | first m records]` with quadrature diagnostics.
    pub fn mean_with_diagnostics(&self, tol: &Tolerances) -> Result<QuadratureResult> {
        expectation_semi_infinite(|w| self.position_at(w), self.steps(), tol)
    }

    pub fn predict_mean(&self) -> Result<f64> {
        Ok(self.mean_with_diagnostics(&Tolerances::DEFAULT)?.value)
    }

    /// `p`-quantile of `T_s`: `Λ⁻¹(Λ(r_m) + G⁻¹(p))` with `G` the unit gamma
    /// CDF of shape `s − m`.
    pub fn predict_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("quantile level must lie in (0, 1), got {p}")));
        }
        let excess = if self.steps() == 1.0 {
            -(-p).ln_1p()
        } else {
            gamma_quantile(self.steps(), p)?
        };
        Ok(self.position_at(excess))
    }

    /// Same quantile by bracketed root finding on [`predictive_cdf`](Self::predictive_cdf).
    pub fn predict_quantile_by_root(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("quantile level must lie in (0, 1), got {p}")));
        }
        let mut hi = self.r_m * 2.0;
        while self.predictive_cdf(hi) < p {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Numeric {
                    routine: "predict_quantile_by_root",
                    detail: "could not bracket the quantile".into(),
                });
            }
        }
        find_root_bracketed(|y| self.predictive_cdf(y) - p, self.r_m, hi, &Tolerances::DEFAULT)
    }

    /// Equal-tail interval between the `(1−level)/2` and `(1+level)/2` quantiles.
    pub fn prediction_interval(&self, level: f64) -> Result<(f64, f64)> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::domain(format!("interval level must lie in (0, 1), got {level}")));
        }
        let tail = 0.5 * (1.0 - level);
        Ok((self.predict_quantile(tail)?, self.predict_quantile(1.0 - tail)?))
    }

    pub fn predict(&self, level: f64) -> Result<PredictionResult> {
        let (interval_low, interval_high) = self.prediction_interval(level)?;
        Ok(PredictionResult {
            mean: self.predict_mean()?,
            median: self.predict_quantile(0.5)?,
            interval_low,
            interval_high,
            level,
            s: self.s,
            m: self.m,
            r_m: self.r_m,
        })
    }

    /// Density evaluated on `n_points` evenly spaced values in `[y_min, y_max]`.
    pub fn density_curve(&self, y_min: f64, y_max: f64, n_points: usize) -> Result<Vec<(f64, f64)>> {
        if !(y_min >= self.r_m) || !(y_max > y_min) || !y_max.is_finite() {
            return Err(Error::domain(format!(
                "density grid needs r_m <= y_min < y_max, got [{y_min}, {y_max}] with r_m = {}",
                self.r_m
            )));
        }
        if n_points < 2 {
            return Err(Error::domain("density grid needs at least 2 points"));
        }
        let step = (y_max - y_min) / (n_points - 1) as f64;
        Ok((0..n_points)
            .map(|i| {
                let y = if i + 1 == n_points { y_max } else { y_min + step * i as f64 };
                (y, self.conditional_density(y))
            })
            .collect())
    }
}

/// Point and interval predictions for one future corrosion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionResult {
    pub mean: f64,
    pub median: f64,
    pub interval_low: f64,
    pub interval_high: f64,
    pub level: f64,
    pub s: usize,
    pub m: usize,
    pub r_m: f64,
}

/// One step of a one-ahead backtest: fit on the first `k` records, predict record `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BacktestRow {
    pub k: usize,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub predicted_next: f64,
    pub observed_next: f64,
}

pub fn backtest(records: &RecordSequence) -> Result<Vec<BacktestRow>> {
    let m = records.len();
    if m < 3 {
        return Err(Error::InsufficientData { needed: 3, got: m });
    }
    let positions = records.positions();
    (2..m)
        .into_par_iter()
        .map(|k| {
            let fit = fit_mle(&records.prefix(k))?;
            let query = PredictionQuery::from_fit(&fit, k + 1)?;
            Ok(BacktestRow {
                k,
                alpha_hat: fit.alpha(),
                beta_hat: fit.beta(),
                predicted_next: query.predict_mean()?,
                observed_next: positions[k],
            })
        })
        .collect()
}
