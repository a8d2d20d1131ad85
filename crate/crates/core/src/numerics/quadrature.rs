use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use super::Tolerances;
use crate::error::{Error, Result};

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute difference between the last two orders.
    pub est_error: f64,
    /// Total integrand evaluations across all orders tried.
    pub evaluations: usize,
}

/// Gauss–Laguerre rule for the normalized gamma weight
/// `w^(k−1) e^(−w) / Γ(k)` on `[0, ∞)`. Weights sum to one.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix of the
    /// generalized Laguerre polynomials `L_n^(k−1)`, weights the squared first
    /// components of the normalized eigenvectors.
    pub fn gamma_weight(shape: f64, order: usize) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::domain(format!("gamma weight needs shape > 0, got {shape}")));
        }
        if order == 0 {
            return Err(Error::domain("quadrature order must be positive"));
        }
        let a = shape - 1.0;
        let mut jacobi = DMatrix::<f64>::zeros(order, order);
        for i in 0..order {
            jacobi[(i, i)] = 2.0 * i as f64 + a + 1.0;
            if i + 1 < order {
                let j = (i + 1) as f64;
                let off = (j * (j + a)).sqrt();
                jacobi[(i, i + 1)] = off;
                jacobi[(i + 1, i)] = off;
            }
        }
        let eig = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0.max(0.0)).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        })
    }

    /// Like [`gamma_weight`](Self::gamma_weight), memoized per `(shape, order)`.
    pub fn cached(shape: f64, order: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<GaussRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (shape.to_bits(), order);
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::gamma_weight(shape, order)?);
        cache
            .lock()
            .expect("rule cache poisoned")
            .insert(key, Arc::clone(&rule));
        Ok(rule)
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `E[g(W)]` for `W ~ Gamma(shape, 1)`, by Gauss–Laguerre rules of doubling
/// order until two successive orders agree to
/// `max(quadrature_rel·|value|, quadrature_abs)`.
pub fn expectation_semi_infinite<F>(integrand: F, shape: f64, tol: &Tolerances) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let mut order = tol.quadrature_min_order.max(1);
    let mut evaluations = 0;
    let mut previous: Option<f64> = None;
    loop {
        let rule = GaussRule::cached(shape, order)?;
        let value = rule.apply(&integrand);
        evaluations += order;
        if !value.is_finite() {
            return Err(Error::Numeric {
                routine: "expectation_semi_infinite",
                detail: format!("non-finite estimate {value} at order {order}"),
            });
        }
        if let Some(prev) = previous {
            let diff = (value - prev).abs();
            if diff <= (tol.quadrature_rel * value.abs()).max(tol.quadrature_abs) {
                return Ok(QuadratureResult {
                    value,
                    est_error: diff,
                    evaluations,
                });
            }
            if order * 2 > tol.quadrature_max_order {
                return Err(Error::Numeric {
                    routine: "expectation_semi_infinite",
                    detail: format!(
                        "orders {} and {order} disagree: {prev} vs {value}",
                        order / 2
                    ),
                });
            }
        }
        previous = Some(value);
        order *= 2;
    }
}
