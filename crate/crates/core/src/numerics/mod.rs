//! Numerical kernels shared by the forecasting, diagnostics and simulation
//! code: log-gamma, the regularized incomplete gamma function and its
//! inverse, Gauss–Laguerre expectations over `[0, ∞)`, and bracketed root
//! finding.

mod gamma;
mod quadrature;
mod roots;

pub use gamma::{gamma_cdf, gamma_quantile, gamma_sf, log_gamma, standard_normal_quantile};
pub use quadrature::{expectation_semi_infinite, GaussRule, QuadratureResult};
pub use roots::find_root_bracketed;

/// Convergence settings for every iterative routine in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative agreement required between successive quadrature orders.
    pub quadrature_rel: f64,
    /// Absolute agreement accepted when the expectation is near zero.
    pub quadrature_abs: f64,
    /// First Gauss–Laguerre order tried.
    pub quadrature_min_order: usize,
    /// Order escalation stops (with an error) beyond this.
    pub quadrature_max_order: usize,
    /// Root finding stops once the bracket is narrower than this times `max(1, |x|)`.
    pub root_rel_width: f64,
    /// Root finding also stops when `|f(x)|` falls to this value.
    pub root_abs_residual: f64,
    pub root_max_iter: usize,
    /// Relative step size at which the gamma quantile Newton iteration stops.
    pub quantile_rel_step: f64,
    pub quantile_max_iter: usize,
    /// Truncation threshold for the incomplete gamma series and continued fraction.
    pub series_eps: f64,
    pub series_max_iter: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        quadrature_rel: 1e-8,
        quadrature_abs: 1e-10,
        quadrature_min_order: 8,
        quadrature_max_order: 256,
        root_rel_width: 1e-12,
        root_abs_residual: 0.0,
        root_max_iter: 200,
        quantile_rel_step: 1e-14,
        quantile_max_iter: 100,
        series_eps: 1e-16,
        series_max_iter: 10_000,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
