//! Maximum-likelihood fitting of the power-law rate from observed records.
//!
//! For the first `m` positions `r_1 < … < r_m` the likelihood has a closed
//! form maximum:
//!
//! ```text
//! α̂ = m / Σ_{i<m} ln(r_m / r_i)        β̂ = m / r_m^α̂
//! ```
//!
//! so that `Λ̂(r_m) = m` holds exactly for every fit.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result, ValidationKind};
use crate::model::PowerLawRate;

/// One rejected position in a candidate record sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationIssue {
    /// Zero-based index into the input.
    pub index: usize,
    pub kind: ValidationKind,
    pub value: f64,
}

/// Every problem found in a candidate sequence, not only the first.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn offending_indices(&self) -> Vec<usize> {
        self.issues.iter().map(|i| i.index).collect()
    }
}

/// Corrosion positions (km) along one pipeline, strictly increasing and
/// positive. Ties are rejected rather than merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordSequence {
    positions: Vec<f64>,
    pipeline_id: Option<String>,
}

impl RecordSequence {
    /// Lists all offending indices without building a sequence.
    pub fn validate(positions: &[f64]) -> ValidationReport {
        let mut issues = Vec::new();
        for (index, &value) in positions.iter().enumerate() {
            let kind = if !value.is_finite() {
                Some(ValidationKind::NonFinite)
            } else if value <= 0.0 {
                Some(ValidationKind::NonPositive)
            } else if index > 0 && value == positions[index - 1] {
                Some(ValidationKind::Duplicate)
            } else if index > 0 && value < positions[index - 1] {
                Some(ValidationKind::NotIncreasing)
            } else {
                None
            };
            if let Some(kind) = kind {
                issues.push(ValidationIssue { index, kind, value });
            }
        }
        ValidationReport { issues }
    }

    pub fn new(positions: Vec<f64>) -> Result<Self> {
        let report = Self::validate(&positions);
        if let Some(first) = report.issues.first() {
            let detail = match first.kind {
                ValidationKind::Duplicate | ValidationKind::NotIncreasing => format!(
                    "value {} follows {}; offending indices {:?}",
                    first.value,
                    positions[first.index - 1],
                    report.offending_indices()
                ),
                _ => format!("value {}; offending indices {:?}", first.value, report.offending_indices()),
            };
            return Err(Error::Validation {
                kind: first.kind,
                index: first.index,
                detail,
            });
        }
        Ok(Self {
            positions,
            pipeline_id: None,
        })
    }

    pub fn with_pipeline_id(mut self, id: impl Into<String>) -> Self {
        self.pipeline_id = Some(id.into());
        self
    }

    pub fn pipeline_id(&self) -> Option<&str> {
        self.pipeline_id.as_deref()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.positions.last().copied()
    }

    /// The first `k` records (a prefix is always a valid sequence).
    pub fn prefix(&self, k: usize) -> RecordSequence {
        RecordSequence {
            positions: self.positions[..k.min(self.positions.len())].to_vec(),
            pipeline_id: self.pipeline_id.clone(),
        }
    }
}

/// A maximum-likelihood fit on the first `m` records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FittedModel {
    rate: PowerLawRate,
    m: usize,
    r_m: f64,
    loglik: f64,
}

impl FittedModel {
    pub fn rate(&self) -> PowerLawRate {
        self.rate
    }

    pub fn alpha(&self) -> f64 {
        self.rate.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.rate.beta()
    }

    /// Number of records the fit used.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest record used in the fit.
    pub fn r_m(&self) -> f64 {
        self.r_m
    }

    pub fn loglik(&self) -> f64 {
        self.loglik
    }
}

pub fn fit_mle(records: &RecordSequence) -> Result<FittedModel> {
    let positions = records.positions();
    let m = positions.len();
    if m < 2 {
        return Err(Error::InsufficientData { needed: 2, got: m });
    }
    let r_m = positions[m - 1];
    // Σ ln(r_m / r_i) instead of m·ln r_m − Σ ln r_i; near-tied records
    // would otherwise cancel.
    let log_gap_sum: f64 = positions[..m - 1].iter().map(|&r| (r_m / r).ln()).sum();
    if !(log_gap_sum > 0.0) {
        return Err(Error::Numeric {
            routine: "fit_mle",
            detail: format!("degenerate log-spacing sum {log_gap_sum}"),
        });
    }
    let alpha = m as f64 / log_gap_sum;
    let beta = ((m as f64).ln() - alpha * r_m.ln()).exp();
    let rate = PowerLawRate::new(alpha, beta).map_err(|_| Error::Numeric {
        routine: "fit_mle",
        detail: format!("estimate outside floating-point range (alpha = {alpha}, beta = {beta})"),
    })?;
    let loglik = rate.log_likelihood(records)?;
    Ok(FittedModel { rate, m, r_m, loglik })
}

/// `fit_mle` on every prefix of length `2..=m`; element `j` is the fit on the
/// first `j + 2` records. Prefixes are fitted in parallel.
pub fn sequential_fits(records: &RecordSequence) -> Result<Vec<FittedModel>> {
    let m = records.len();
    if m < 2 {
        return Err(Error::InsufficientData { needed: 2, got: m });
    }
    (2..=m)
        .into_par_iter()
        .map(|k| fit_mle(&records.prefix(k)))
        .collect()
}
