//! Python bindings: `import pipecorr`.

use pipecorr_core::diagnostics::{gof_report, Transform};
use pipecorr_core::forecast::{backtest as run_backtest, PredictionQuery};
use pipecorr_core::inference::{fit_mle, RecordSequence};
use pipecorr_core::simulation::{simulate_first_m, simulate_records_from_iid};
use pipecorr_core::Error;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Numeric { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn records(positions: Vec<f64>) -> PyResult<RecordSequence> {
    RecordSequence::new(positions).map_err(py_err)
}

#[pyclass(frozen, skip_from_py_object, module = "pipecorr")]
#[derive(Clone, Copy)]
struct PowerLawRate(pipecorr_core::PowerLawRate);

#[pymethods]
impl PowerLawRate {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        pipecorr_core::PowerLawRate::new(alpha, beta).map(Self).map_err(py_err)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    fn intensity(&self, t: f64) -> PyResult<f64> {
        self.0.intensity_at(t).map_err(py_err)
    }

    fn cumulative_intensity(&self, t: f64) -> PyResult<f64> {
        self.0.cumulative_intensity(t).map_err(py_err)
    }

    fn inverse_cumulative_intensity(&self, w: f64) -> PyResult<f64> {
        self.0.inverse_cumulative_intensity(w).map_err(py_err)
    }

    fn survival(&self, t: f64) -> PyResult<f64> {
        self.0.survival(t).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("PowerLawRate(alpha={}, beta={})", self.0.alpha(), self.0.beta())
    }
}

#[pyclass(frozen, module = "pipecorr", get_all)]
struct FittedModel {
    alpha: f64,
    beta: f64,
    m: usize,
    r_m: f64,
    loglik: f64,
}

#[pymethods]
impl FittedModel {
    fn rate(&self) -> PyResult<PowerLawRate> {
        PowerLawRate::new(self.alpha, self.beta)
    }

    fn __repr__(&self) -> String {
        format!("FittedModel(alpha={}, beta={}, m={}, r_m={})", self.alpha, self.beta, self.m, self.r_m)
    }
}

#[pyclass(frozen, module = "pipecorr", get_all)]
struct PredictionResult {
    s: usize,
    m: usize,
    mean: f64,
    median: f64,
    interval: (f64, f64),
    level: f64,
}

#[pymethods]
impl PredictionResult {
    fn __repr__(&self) -> String {
        format!(
            "PredictionResult(s={}, mean={}, median={}, interval=({}, {}))",
            self.s, self.mean, self.median, self.interval.0, self.interval.1
        )
    }
}

/// Maximum-likelihood fit on increasing positions (km).
#[pyfunction]
fn fit(positions: Vec<f64>) -> PyResult<FittedModel> {
    let f = fit_mle(&records(positions)?).map_err(py_err)?;
    Ok(FittedModel {
        alpha: f.alpha(),
        beta: f.beta(),
        m: f.m(),
        r_m: f.r_m(),
        loglik: f.loglik(),
    })
}

/// Predict record m + steps from the fit on all `positions`.
#[pyfunction]
#[pyo3(signature = (positions, steps = 1, level = 0.95))]
fn predict(positions: Vec<f64>, steps: usize, level: f64) -> PyResult<PredictionResult> {
    if steps == 0 {
        return Err(PyValueError::new_err("steps must be positive"));
    }
    let f = fit_mle(&records(positions)?).map_err(py_err)?;
    let p = PredictionQuery::from_fit(&f, f.m() + steps)
        .and_then(|q| q.predict(level))
        .map_err(py_err)?;
    Ok(PredictionResult {
        s: p.s,
        m: p.m,
        mean: p.mean,
        median: p.median,
        interval: (p.interval_low, p.interval_high),
        level: p.level,
    })
}

/// KS check of the exponential transform; returns a dict.
#[pyfunction]
#[pyo3(signature = (positions, transform = "rescaling"))]
fn gof<'py>(py: Python<'py>, positions: Vec<f64>, transform: &str) -> PyResult<Bound<'py, PyDict>> {
    let transform = match transform {
        "rescaling" => Transform::Rescaling,
        "log-ratio" => Transform::LogRatio,
        other => return Err(PyValueError::new_err(format!("unknown transform `{other}`"))),
    };
    let recs = records(positions)?;
    let f = fit_mle(&recs).map_err(py_err)?;
    let g = gof_report(&recs, &f, transform).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("transform_values", g.transform_values)?;
    d.set_item("ks_statistic", g.ks_statistic)?;
    d.set_item("p_value", g.p_value)?;
    d.set_item("n", g.n)?;
    d.set_item("caveat", g.caveat)?;
    Ok(d)
}

/// One row (k, alpha_hat, beta_hat, predicted_next, observed_next) per prefix.
#[pyfunction]
fn backtest(positions: Vec<f64>) -> PyResult<Vec<(usize, f64, f64, f64, f64)>> {
    let rows = run_backtest(&records(positions)?).map_err(py_err)?;
    Ok(rows
        .iter()
        .map(|r| (r.k, r.alpha_hat, r.beta_hat, r.predicted_next, r.observed_next))
        .collect())
}

/// First m positions of the process, or the first m records of iid
/// lifetimes with `records=True`.
#[pyfunction]
#[pyo3(signature = (rate, m, seed = 0, records = false))]
fn simulate(rate: &PowerLawRate, m: usize, seed: u64, records: bool) -> PyResult<Vec<f64>> {
    let path = if records {
        simulate_records_from_iid(&rate.0, m, seed)
    } else {
        simulate_first_m(&rate.0, m, seed)
    };
    Ok(path.map_err(py_err)?.positions)
}

#[pymodule]
fn pipecorr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PowerLawRate>()?;
    m.add_class::<FittedModel>()?;
    m.add_class::<PredictionResult>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(gof, m)?)?;
    m.add_function(wrap_pyfunction!(backtest, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
