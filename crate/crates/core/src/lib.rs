//! Corrosion-position prediction for pipelines.
//!
//! Successive corrosion positions along a pipeline are modelled as the event
//! positions of a non-homogeneous Poisson process with power-law cumulative
//! intensity `Λ(t) = β·t^α`. Equivalently they are the upper records of an iid
//! sequence whose hazard is `λ(t) = α·β·t^(α−1)`.
//!
//! The crate covers the whole workflow:
//!
//! * [`model`]: the rate family, survival, density and log-likelihood.
//! * [`inference`]: closed-form maximum-likelihood fits and prefix fits.
//! * [`forecast`]: conditional predictive law of a future corrosion
//!   (mean, quantiles, intervals, density curves, backtest).
//! * [`diagnostics`]: time-rescaling transform and Kolmogorov–Smirnov tests.
//! * [`simulation`]: seeded path generators and Monte-Carlo studies.
//! * [`numerics`]: special functions, quadrature and root finding.
//! * [`cli`]: CSV ingestion, reports and the `pipecorr` command line.
//!
//! ```
//! use pipecorr_core::{fit_mle, PredictionQuery, RecordSequence};
//!
//! let records = RecordSequence::new(vec![0.8, 2.7, 3.2, 16.6, 25.5, 25.6]).unwrap();
//! let fit = fit_mle(&records).unwrap();
//! let next = PredictionQuery::from_fit(&fit, 7).unwrap();
//! let (lo, hi) = next.prediction_interval(0.9).unwrap();
//! assert!(25.6 < lo && lo < next.predict_quantile(0.5).unwrap() && hi > lo);
//! ```

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod forecast;
pub mod inference;
pub mod model;
pub mod numerics;
pub mod simulation;

pub use diagnostics::{exponential_transform, ks_exponential_test, GofReport, Transform};
pub use error::{Error, Result, ValidationKind};
pub use forecast::{backtest, BacktestRow, PredictionQuery, PredictionResult};
pub use inference::{fit_mle, sequential_fits, FittedModel, RecordSequence};
pub use model::PowerLawRate;
pub use simulation::SimulatedPath;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
#[allow(dead_code)]
pub(crate) mod oracle;

#[cfg(test)]
#[path = "../tests/common/data.rs"]
#[allow(dead_code)]
pub(crate) mod data;
