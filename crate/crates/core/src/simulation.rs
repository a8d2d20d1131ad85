//! Seeded simulation of corrosion positions and Monte-Carlo studies.
//!
//! Random streams: every generator here is ChaCha20 keyed by
//! `seed_from_u64(seed)`. A single path uses stream 0; replicate `k` of a
//! study uses stream `k`. A replicate's draws therefore depend only on
//! `(seed, k)`, so serial and parallel runs produce identical results.
//!
//! Unit exponentials are drawn by inversion, `−ln(1 − U)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecast::PredictionQuery;
use crate::inference::{fit_mle, RecordSequence};
use crate::model::PowerLawRate;

/// Generator for replicate `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    -(-u).ln_1p()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedPath {
    pub positions: Vec<f64>,
    pub rate_used: PowerLawRate,
    pub seed: u64,
}

impl SimulatedPath {
    pub fn records(&self) -> Result<RecordSequence> {
        RecordSequence::new(self.positions.clone())
    }

    /// Number of positions `<= t`.
    pub fn count_at(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("count_at requires t >= 0, got {t}")));
        }
        Ok(self.positions.partition_point(|&x| x <= t))
    }
}

/// First `m` event positions from any generator: unit-rate arrival times
/// mapped through `Λ⁻¹`.
pub fn first_m_positions<R: Rng + ?Sized>(rate: &PowerLawRate, m: usize, rng: &mut R) -> Result<Vec<f64>> {
    let mut arrival = 0.0;
    (0..m)
        .map(|_| {
            arrival += unit_exponential(rng);
            rate.inverse_cumulative_intensity(arrival)
        })
        .collect()
}

pub fn simulate_first_m(rate: &PowerLawRate, m: usize, seed: u64) -> Result<SimulatedPath> {
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let mut rng = stream_rng(seed, 0);
    Ok(SimulatedPath {
        positions: first_m_positions(rate, m, &mut rng)?,
        rate_used: *rate,
        seed,
    })
}

/// All event positions in `[0, horizon]`.
pub fn simulate_to_horizon(rate: &PowerLawRate, horizon: f64, seed: u64) -> Result<SimulatedPath> {
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::domain(format!("horizon must be finite and >= 0, got {horizon}")));
    }
    let mut rng = stream_rng(seed, 0);
    let limit = rate.cumulative_intensity(horizon)?;
    let mut positions = Vec::new();
    let mut arrival = unit_exponential(&mut rng);
    while arrival <= limit {
        positions.push(rate.inverse_cumulative_intensity(arrival)?.min(horizon));
        arrival += unit_exponential(&mut rng);
    }
    Ok(SimulatedPath {
        positions,
        rate_used: *rate,
        seed,
    })
}

/// First `m` upper records of an iid sequence whose hazard is the
/// intensity of `hazard_rate`, i.e. `F(x) = 1 − exp(−Λ(x))`.
///
/// Each new record is drawn from the law of an observation conditioned on
/// exceeding the current record: with survival `S = 1 − F`,
/// `R_{k+1} = S⁻¹(V · S(R_k))` for `V` uniform. Scanning the iid sequence
/// itself would need unbounded expected draws beyond the first record.
/// The resulting law is that of the first `m` points of the Poisson process
/// with the same intensity.
pub fn simulate_records_from_iid(hazard_rate: &PowerLawRate, m: usize, seed: u64) -> Result<SimulatedPath> {
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let mut rng = stream_rng(seed, 0);
    // −ln S(R_k), accumulated in log space so that S never underflows.
    let mut neg_log_survival = 0.0;
    let mut positions = Vec::with_capacity(m);
    for _ in 0..m {
        let v: f64 = 1.0 - rng.gen::<f64>();
        neg_log_survival -= v.ln();
        positions.push(hazard_rate.inverse_cumulative_intensity(neg_log_survival)?);
    }
    Ok(SimulatedPath {
        positions,
        rate_used: *hazard_rate,
        seed,
    })
}

/// Location and spread of an estimator over replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
    /// Monte-Carlo standard error of `mean`.
    pub mean_std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub true_rate: PowerLawRate,
    pub m: usize,
    pub n_replicates: usize,
    pub seed: u64,
    pub level: f64,
    pub alpha_hat: EstimatorSummary,
    pub beta_hat: EstimatorSummary,
    /// Fraction of replicates whose position `m + 1` fell in the plug-in interval.
    pub coverage: f64,
    pub coverage_std_error: f64,
    /// Mean of (predicted mean − realized position `m + 1`).
    pub mean_prediction_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Replicate {
    alpha: f64,
    beta: f64,
    covered: bool,
    prediction_error: f64,
}

fn run_replicate(rate: &PowerLawRate, m: usize, level: f64, seed: u64, k: u64) -> Result<Replicate> {
    let mut rng = stream_rng(seed, k);
    let positions = first_m_positions(rate, m + 1, &mut rng)?;
    let next = positions[m];
    let fit = fit_mle(&RecordSequence::new(positions[..m].to_vec())?)?;
    let query = PredictionQuery::from_fit(&fit, m + 1)?;
    let (low, high) = query.prediction_interval(level)?;
    Ok(Replicate {
        alpha: fit.alpha(),
        beta: fit.beta(),
        covered: low <= next && next <= high,
        prediction_error: query.predict_mean()? - next,
    })
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn summarize(values: &[f64]) -> EstimatorSummary {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let var = compensated_sum(values.iter().map(|v| (v - mean).powi(2))) / (n - 1.0);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 0 {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    };
    EstimatorSummary {
        mean,
        median,
        stddev: var.sqrt(),
        mean_std_error: (var / n).sqrt(),
    }
}

/// Simulate `m + 1` positions per replicate, fit on the first `m`, and check
/// the plug-in prediction of position `m + 1`. Replicates run in parallel;
/// the summary depends only on the arguments.
pub fn estimator_study(
    true_rate: &PowerLawRate,
    m: usize,
    n_replicates: usize,
    seed: u64,
    level: f64,
) -> Result<StudySummary> {
    if m < 3 {
        return Err(Error::domain(format!("estimator study needs m >= 3, got {m}")));
    }
    if n_replicates < 100 {
        return Err(Error::domain(format!(
            "estimator study needs at least 100 replicates, got {n_replicates}"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("interval level must lie in (0, 1), got {level}")));
    }
    let replicates: Vec<Replicate> = (0..n_replicates as u64)
        .into_par_iter()
        .map(|k| run_replicate(true_rate, m, level, seed, k))
        .collect::<Result<_>>()?;

    let alphas: Vec<f64> = replicates.iter().map(|r| r.alpha).collect();
    let betas: Vec<f64> = replicates.iter().map(|r| r.beta).collect();
    let n = n_replicates as f64;
    let coverage = replicates.iter().filter(|r| r.covered).count() as f64 / n;
    Ok(StudySummary {
        true_rate: *true_rate,
        m,
        n_replicates,
        seed,
        level,
        alpha_hat: summarize(&alphas),
        beta_hat: summarize(&betas),
        coverage,
        coverage_std_error: (coverage * (1.0 - coverage) / n).sqrt(),
        mean_prediction_error: compensated_sum(replicates.iter().map(|r| r.prediction_error)) / n,
    })
}
