use std::f64::consts::PI;

use super::Tolerances;
use crate::error::{Error, Result};

// Lanczos-type coefficients (g = 607/128, 14 terms).
const LANCZOS_G_SHIFT: f64 = 5.242_187_5;
const LANCZOS_SERIES_0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `ln Γ(a)` for `a > 0`.
pub fn log_gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("log_gamma requires a > 0, got {a}")));
    }
    Ok(log_gamma_unchecked(a))
}

pub(crate) fn log_gamma_unchecked(a: f64) -> f64 {
    if a < 0.5 {
        // Reflection keeps the series in its accurate range.
        return (PI / (PI * a).sin()).ln() - lanczos(1.0 - a);
    }
    lanczos(a)
}

fn lanczos(x: f64) -> f64 {
    let t = x + LANCZOS_G_SHIFT;
    let head = (x + 0.5) * t.ln() - t;
    let mut y = x;
    let mut series = LANCZOS_SERIES_0;
    for c in LANCZOS_COEF {
        y += 1.0;
        series += c / y;
    }
    head + (SQRT_2PI * series / x).ln()
}

fn check_shape(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("gamma shape must be positive, got {k}")));
    }
    Ok(())
}

/// Regularized lower incomplete gamma `P(k, x)`: the CDF of a unit-scale
/// gamma variable with shape `k`.
pub fn gamma_cdf(k: f64, x: f64) -> Result<f64> {
    check_shape(k)?;
    if !(x >= 0.0) {
        return Err(Error::domain(format!("gamma_cdf requires x >= 0, got {x}")));
    }
    let (p, _) = incomplete_gamma(k, x, &Tolerances::DEFAULT)?;
    Ok(p)
}

/// Regularized upper incomplete gamma `Q(k, x) = 1 − P(k, x)`, computed
/// directly so the upper tail keeps its relative accuracy.
pub fn gamma_sf(k: f64, x: f64) -> Result<f64> {
    check_shape(k)?;
    if !(x >= 0.0) {
        return Err(Error::domain(format!("gamma_sf requires x >= 0, got {x}")));
    }
    let (_, q) = incomplete_gamma(k, x, &Tolerances::DEFAULT)?;
    Ok(q)
}

/// Returns `(P, Q)`.
fn incomplete_gamma(k: f64, x: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let log_prefactor = -x + k * x.ln() - log_gamma_unchecked(k);
    if x < k + 1.0 {
        let p = lower_series(k, x, log_prefactor, tol)?;
        Ok((p, 1.0 - p))
    } else {
        let q = upper_continued_fraction(k, x, log_prefactor, tol)?;
        Ok((1.0 - q, q))
    }
}

fn lower_series(k: f64, x: f64, log_prefactor: f64, tol: &Tolerances) -> Result<f64> {
    let mut denom = k;
    let mut term = 1.0 / k;
    let mut sum = term;
    for _ in 0..tol.series_max_iter {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * tol.series_eps {
            return Ok((sum.ln() + log_prefactor).exp().min(1.0));
        }
    }
    Err(Error::Numeric {
        routine: "gamma_cdf series",
        detail: format!("no convergence for k={k}, x={x}"),
    })
}

// Modified Lentz evaluation of the continued fraction for Q(k, x).
fn upper_continued_fraction(k: f64, x: f64, log_prefactor: f64, tol: &Tolerances) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - k;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=tol.series_max_iter {
        let an = -(i as f64) * (i as f64 - k);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < tol.series_eps {
            return Ok((h.ln() + log_prefactor).exp().min(1.0));
        }
    }
    Err(Error::Numeric {
        routine: "gamma_sf continued fraction",
        detail: format!("no convergence for k={k}, x={x}"),
    })
}

fn gamma_log_density(k: f64, x: f64) -> f64 {
    (k - 1.0) * x.ln() - x - log_gamma_unchecked(k)
}

/// Inverse of [`gamma_cdf`] in `x`: the `p`-quantile of a unit-scale gamma
/// distribution with shape `k`.
///
/// Safeguarded Newton iteration started from a Wilson–Hilferty estimate. The
/// iterate is kept inside a bracket that shrinks on every step; a step that
/// would leave it is replaced by bisection.
pub fn gamma_quantile(k: f64, p: f64) -> Result<f64> {
    check_shape(k)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("gamma_quantile requires 0 < p < 1, got {p}")));
    }
    let tol = Tolerances::DEFAULT;
    // Work on the smaller tail so that 1 − p does not lose digits.
    let upper = p > 0.5;
    let target = if upper { 1.0 - p } else { p };
    let residual = |x: f64| -> Result<f64> {
        let (lo, hi) = incomplete_gamma(k, x, &tol)?;
        Ok(if upper { target - hi } else { lo - target })
    };

    let mut x = initial_quantile_guess(k, p);
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    for _ in 0..tol.quantile_max_iter {
        let r = residual(x)?;
        if r == 0.0 {
            return Ok(x);
        }
        // residual is increasing in x
        if r > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let density = gamma_log_density(k, x).exp();
        let mut next = x - r / density;
        if !next.is_finite() || next <= lo || next >= hi {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * x.max(lo) + 1.0 };
        }
        if (next - x).abs() <= tol.quantile_rel_step * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        if hi.is_finite() && hi - lo <= tol.quantile_rel_step * hi {
            return Ok(0.5 * (lo + hi));
        }
        x = next;
    }
    Err(Error::Numeric {
        routine: "gamma_quantile",
        detail: format!("no convergence for k={k}, p={p}; last iterate {x}, bracket [{lo}, {hi}]"),
    })
}

fn initial_quantile_guess(k: f64, p: f64) -> f64 {
    let z = standard_normal_quantile(p);
    let c = 1.0 / (9.0 * k);
    let wh = k * (1.0 - c + z * c.sqrt()).powi(3);
    if wh > 0.0 && k > 0.5 {
        return wh;
    }
    // Small-x expansion P(k, x) ≈ x^k / Γ(k + 1).
    let small = ((p.ln() + log_gamma_unchecked(k + 1.0)) / k).exp();
    if small.is_finite() && small > 0.0 {
        small
    } else {
        k
    }
}

/// Rational approximation to the standard normal quantile (relative error
/// about 1e-9). Used only to seed iterations.
pub fn standard_normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
