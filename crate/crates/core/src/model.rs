//! Power-law intensity family.
//!
//! The cumulative intensity is `Λ(t) = β·t^α` and the intensity its
//! derivative `λ(t) = α·β·t^(α−1)`. Positions `t` are kilometres from the
//! pipeline origin, so `β` carries units of km^(−α): two β values are only
//! comparable when their α agree.
//!
//! Some presentations of this model write the intensity as `β·t^(α−1)`
//! without the leading α; that form describes a different β. The fitted
//! estimators and every prediction in this crate use the `Λ(t) = β·t^α`
//! convention. [`RateConvention`] is kept only for plotting either form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::RecordSequence;

/// `t^α` as `exp(α·ln t)` with an explicit zero branch.
#[inline]
pub(crate) fn pow_pos(t: f64, alpha: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        (alpha * t.ln()).exp()
    }
}

fn check_position(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("position must be a finite value >= 0, got {t}")));
    }
    Ok(())
}

/// Power-law rate with shape `alpha` and scale `beta`, both positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawRate {
    alpha: f64,
    beta: f64,
}

impl PowerLawRate {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive and finite, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive and finite, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `λ(t) = α·β·t^(α−1)`. Diverges at `t = 0` when `α < 1`, which is reported
    /// as a domain error.
    pub fn intensity_at(&self, t: f64) -> Result<f64> {
        check_position(t)?;
        if t == 0.0 {
            return if self.alpha > 1.0 {
                Ok(0.0)
            } else if self.alpha == 1.0 {
                Ok(self.beta)
            } else {
                Err(Error::domain("intensity diverges at t = 0 when alpha < 1"))
            };
        }
        Ok(self.alpha * self.beta * pow_pos(t, self.alpha - 1.0))
    }

    /// `Λ(t) = β·t^α`, the expected number of corrosions in `[0, t]`.
    pub fn cumulative_intensity(&self, t: f64) -> Result<f64> {
        check_position(t)?;
        Ok(self.beta * pow_pos(t, self.alpha))
    }

    /// `Λ⁻¹(w) = (w/β)^(1/α)`.
    pub fn inverse_cumulative_intensity(&self, w: f64) -> Result<f64> {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::domain(format!(
                "cumulative intensity must be a finite value >= 0, got {w}"
            )));
        }
        Ok(pow_pos(w / self.beta, 1.0 / self.alpha))
    }

    /// `R(t) = exp(−Λ(t))`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        Ok((-self.cumulative_intensity(t)?).exp())
    }

    /// `f(t) = λ(t)·R(t)`, the density of the first corrosion position.
    pub fn event_density(&self, t: f64) -> Result<f64> {
        Ok(self.intensity_at(t)? * self.survival(t)?)
    }

    /// Exact log-likelihood of observing `records` as the first m event
    /// positions: `m·ln(αβ) + (α−1)·Σ ln r_i − β·r_m^α`.
    pub fn log_likelihood(&self, records: &RecordSequence) -> Result<f64> {
        let positions = records.positions();
        let m = positions.len() as f64;
        let last = *positions
            .last()
            .ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
        let sum_ln: f64 = positions.iter().map(|r| r.ln()).sum();
        Ok(m * (self.alpha * self.beta).ln() + (self.alpha - 1.0) * sum_ln
            - self.beta * pow_pos(last, self.alpha))
    }
}

/// Which parametrization of the intensity a plot should draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateConvention {
    /// `λ(t) = α·β·t^(α−1)`, consistent with `Λ(t) = β·t^α` and the fits.
    #[default]
    Standard,
    /// `λ(t) = β·t^(α−1)`, the form often plotted.
    Unscaled,
}

impl RateConvention {
    pub fn intensity(self, rate: &PowerLawRate, t: f64) -> Result<f64> {
        let lambda = rate.intensity_at(t)?;
        Ok(match self {
            RateConvention::Standard => lambda,
            RateConvention::Unscaled => lambda / rate.alpha,
        })
    }
}
