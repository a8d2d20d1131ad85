//! JSON report schema (`schema_version: 1`).
//!
//! Every command emits one [`AnalysisReport`]; sections that do not apply
//! are omitted. All numbers are decimal strings (see [`super::format`]).

use serde::{Deserialize, Serialize};

use super::format::{decimal, decimal_opt, decimal_vec};
use crate::diagnostics::{GofReport, Transform};
use crate::forecast::{BacktestRow, PredictionResult};
use crate::inference::{FittedModel, RecordSequence};

pub const SCHEMA_VERSION: u32 = 1;

pub const BETA_UNITS_WARNING: &str =
    "beta is in km^-alpha; compare beta between pipelines only when their alpha values agree";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<InputDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction: Option<PredictionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gof: Option<GofSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backtest: Option<Vec<BacktestSection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PlotSection>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input_digest: None,
            fit: None,
            prediction: None,
            gof: None,
            backtest: None,
            simulation: None,
            plot: None,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline_id: Option<String>,
    pub records: usize,
    /// Records used after the holdout was removed.
    pub used: usize,
    #[serde(with = "decimal")]
    pub min_km: f64,
    #[serde(with = "decimal")]
    pub max_km: f64,
}

impl InputDigest {
    pub fn new(records: &RecordSequence, used: usize) -> Self {
        let p = records.positions();
        Self {
            pipeline_id: records.pipeline_id().map(str::to_string),
            records: p.len(),
            used,
            min_km: p[0],
            max_km: p[p.len() - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSection {
    #[serde(with = "decimal")]
    pub alpha: f64,
    #[serde(with = "decimal")]
    pub beta: f64,
    #[serde(with = "decimal")]
    pub loglik: f64,
    pub m: usize,
    #[serde(with = "decimal")]
    pub r_m: f64,
}

impl From<&FittedModel> for FitSection {
    fn from(f: &FittedModel) -> Self {
        Self {
            alpha: f.alpha(),
            beta: f.beta(),
            loglik: f.loglik(),
            m: f.m(),
            r_m: f.r_m(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSection {
    pub s: usize,
    pub m: usize,
    #[serde(with = "decimal")]
    pub r_m: f64,
    #[serde(with = "decimal")]
    pub mean: f64,
    #[serde(with = "decimal")]
    pub median: f64,
    #[serde(with = "decimal")]
    pub level: f64,
    #[serde(with = "decimal")]
    pub interval_low: f64,
    #[serde(with = "decimal")]
    pub interval_high: f64,
    /// Held-out position `s`, when it was in the input.
    #[serde(default, with = "decimal_opt", skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
}

impl PredictionSection {
    pub fn new(p: &PredictionResult, observed: Option<f64>) -> Self {
        Self {
            s: p.s,
            m: p.m,
            r_m: p.r_m,
            mean: p.mean,
            median: p.median,
            level: p.level,
            interval_low: p.interval_low,
            interval_high: p.interval_high,
            observed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofSection {
    pub transform: Transform,
    pub n: usize,
    #[serde(with = "decimal_vec")]
    pub transform_values: Vec<f64>,
    #[serde(with = "decimal")]
    pub ks_statistic: f64,
    #[serde(with = "decimal")]
    pub p_value: f64,
    pub caveat: String,
}

impl From<&GofReport> for GofSection {
    fn from(g: &GofReport) -> Self {
        Self {
            transform: g.transform,
            n: g.n,
            transform_values: g.transform_values.clone(),
            ks_statistic: g.ks_statistic,
            p_value: g.p_value,
            caveat: g.caveat.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSection {
    pub k: usize,
    #[serde(with = "decimal")]
    pub alpha_hat: f64,
    #[serde(with = "decimal")]
    pub beta_hat: f64,
    #[serde(with = "decimal")]
    pub predicted_next: f64,
    #[serde(with = "decimal")]
    pub observed_next: f64,
}

impl From<&BacktestRow> for BacktestSection {
    fn from(r: &BacktestRow) -> Self {
        Self {
            k: r.k,
            alpha_hat: r.alpha_hat,
            beta_hat: r.beta_hat,
            predicted_next: r.predicted_next,
            observed_next: r.observed_next,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSection {
    #[serde(with = "decimal")]
    pub alpha: f64,
    #[serde(with = "decimal")]
    pub beta: f64,
    pub m: usize,
    pub seed: u64,
    #[serde(with = "decimal_vec")]
    pub positions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSection {
    /// `rate` or `density`.
    pub kind: String,
    pub columns: [String; 2],
    #[serde(with = "decimal_vec")]
    pub x: Vec<f64>,
    #[serde(with = "decimal_vec")]
    pub y: Vec<f64>,
}
