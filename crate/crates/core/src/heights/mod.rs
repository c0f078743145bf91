//! Mahler measures and absolute logarithmic heights.

mod fixed;
mod roots;

pub use roots::{complex_roots, isolate_roots, RootBall};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;

/// Default relative tolerance for root balls and Mahler measures.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Additive slack used when comparing floating heights against bounds.
pub const HEIGHT_SLACK: f64 = 1e-6;

/// Natural log of `|n|`, accurate for integers of any size. `ln 0 = -inf`.
pub fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let drop = bits.saturating_sub(64);
    let top = (n.abs() >> drop).to_f64().unwrap();
    top.ln() + drop as f64 * std::f64::consts::LN_2
}

/// `h(a/b) = log max(|a|, |b|)` for a rational in lowest terms.
pub fn rational_height(q: &BigRational) -> f64 {
    ln_abs(q.numer()).max(ln_abs(q.denom()))
}

#[derive(Clone, Debug, Serialize)]
pub struct MahlerEstimate {
    pub value: f64,
    pub abs_error: f64,
    /// `log M`, finite even when `M` itself overflows a double.
    pub log_value: f64,
    pub log_abs_error: f64,
    pub source_poly: IntPolynomial,
}

pub fn mahler_measure(f: &IntPolynomial) -> Result<MahlerEstimate> {
    mahler_measure_with_tol(f, DEFAULT_TOL)
}

/// `M(f) = |a_d| ∏ max(1, |α_i|)` with an error bound derived from the
/// certified root balls; `abs_error ≤ tol · max(1, M)`.
pub fn mahler_measure_with_tol(f: &IntPolynomial, tol: f64) -> Result<MahlerEstimate> {
    let lc = f.leading_coeff().ok_or(Error::ZeroPolynomial)?;
    let mut log_mid = ln_abs(lc);
    let mut log_lo = log_mid;
    let mut log_hi = log_mid;
    let mut direct = lc.to_f64().unwrap_or(f64::INFINITY).abs();
    if f.deg() > 0 {
        // per-root radii add up in the log, so split the budget
        let per_root = tol / (2.0 * f.deg() as f64 + 2.0);
        for b in isolate_roots(f, per_root)? {
            let a = b.center.norm();
            let k = b.multiplicity as f64;
            direct *= a.max(1.0).powi(b.multiplicity as i32);
            log_mid += k * a.max(1.0).ln();
            log_lo += k * (a - b.radius).max(1.0).ln();
            log_hi += k * (a + b.radius).max(1.0).ln();
        }
    }
    // double rounding across the sum of logs
    let round = 4.0 * (f.deg() as f64 + 1.0) * f64::EPSILON * log_mid.abs().max(1.0);
    let ball_err = (log_hi - log_mid).max(log_mid - log_lo);
    let log_err = ball_err + round;
    let value = if direct.is_finite() {
        direct
    } else {
        log_mid.exp()
    };
    let abs_error = value * (log_err.exp_m1());
    if !(ball_err <= tol) {
        return Err(Error::NoConvergence(f.deg()));
    }
    Ok(MahlerEstimate {
        value,
        abs_error,
        log_value: log_mid,
        log_abs_error: log_err,
        source_poly: f.clone(),
    })
}

/// `h(α) = log M(f) / deg f` for the minimal polynomial `f` of `α`.
pub fn abs_log_height(min_poly: &IntPolynomial) -> Result<f64> {
    Ok(abs_log_height_estimate(min_poly)?.0)
}

/// Height together with its absolute error bound.
pub fn abs_log_height_estimate(min_poly: &IntPolynomial) -> Result<(f64, f64)> {
    let d = min_poly.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::DegreeTooSmall(0));
    }
    let m = mahler_measure(min_poly)?;
    Ok((
        (m.log_value / d as f64).max(0.0),
        m.log_abs_error / d as f64,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightMahlerReport {
    pub degree: usize,
    pub height: f64,
    pub mahler: f64,
    pub mahler_error: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Checks `H(f)·2^{-d} ≤ M(f) ≤ H(f)·√(d+1)` within the propagated error
/// plus [`HEIGHT_SLACK`].
pub fn check_height_mahler_inequality(f: &IntPolynomial) -> Result<HeightMahlerReport> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let m = mahler_measure(f)?;
    let ln_h = ln_abs(&f.height());
    let lower = (ln_h - d as f64 * std::f64::consts::LN_2).exp();
    let upper = (ln_h + 0.5 * ((d + 1) as f64).ln()).exp();
    let report = HeightMahlerReport {
        degree: d,
        height: ln_h.exp(),
        mahler: m.value,
        mahler_error: m.abs_error,
        lower,
        upper,
    };
    let slack = m.abs_error + HEIGHT_SLACK;
    if lower > m.value + slack || m.value - slack > upper {
        return Err(Error::InequalityViolated(format!(
            "H·2^-d = {lower} ≤ M = {} ≤ H·√(d+1) = {upper} fails for {f}",
            m.value
        )));
    }
    Ok(report)
}
