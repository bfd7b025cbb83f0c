//! The series `f(x) = Σ_m x^m / (Γ(1 + m/2) m!)` and the bounds built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid used to calibrate the constant in `f(x) ≤ exp(c x^{2/3})`.
pub const SCAN_POINTS: usize = 400;
pub const SCAN_LOG10_RANGE: (f64, f64) = (-2.0, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightValue {
    pub value: f64,
    pub terms_used: usize,
    /// Upper bound on the omitted tail, relative to `value`.
    pub relative_tail: f64,
}

/// Partial sum of the series, stopping once the next term falls below
/// `1e-16` of the running sum (or after `terms` terms).
///
/// Terms follow `a_m = a_{m−2} · x² / ((m/2) m (m−1))` from
/// `a_0 = 1`, `a_1 = 2x/√π`; the tail estimate uses the geometric decay
/// of that ratio.
pub fn wright_f(x: f64, terms: usize) -> Result<WrightValue> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid(
            "the series argument must be finite and nonnegative",
        ));
    }
    if terms == 0 {
        return Err(Error::invalid("at least one term is required"));
    }
    let x2 = x * x;
    let mut prev = [1.0, 2.0 * x / std::f64::consts::PI.sqrt()];
    let mut sum = 0.0;
    let mut m = 0;
    while m < terms {
        let term = if m < 2 {
            prev[m]
        } else {
            let t = prev[m % 2] * x2 / (0.5 * m as f64 * m as f64 * (m as f64 - 1.0));
            prev[m % 2] = t;
            t
        };
        sum += term;
        m += 1;
        if m >= 2 && next_term(prev, m, x2) < 1e-16 * sum && ratio(m, x2) < 0.5 {
            break;
        }
    }
    let a = next_term(prev, m, x2);
    let b = next_term([prev[0], prev[1]], m + 1, x2);
    let r = ratio(m + 2, x2);
    let tail = if r < 1.0 {
        (a + b) / (1.0 - r)
    } else {
        f64::INFINITY
    };
    Ok(WrightValue {
        value: sum,
        terms_used: m,
        relative_tail: if sum > 0.0 { tail / sum } else { 0.0 },
    })
}

/// `a_{m}/a_{m−2}`.
fn ratio(m: usize, x2: f64) -> f64 {
    let m = m as f64;
    x2 / (0.5 * m * m * (m - 1.0))
}

/// `a_m` given the latest computed terms of each parity.
fn next_term(prev: [f64; 2], m: usize, x2: f64) -> f64 {
    if m < 2 {
        return prev[m];
    }
    // prev[m % 2] holds a_{m−2} when a_{m−1} was the last term computed
    prev[m % 2] * ratio(m, x2)
}

/// `exp(c · v1^{2/3})`.
pub fn mag_v1_bound(v1: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::invalid("the constant must be positive"));
    }
    if !(v1 >= 0.0) {
        return Err(Error::invalid("V1 must be nonnegative"));
    }
    Ok((c * v1.powf(2.0 / 3.0)).exp())
}

/// `Σ (ω_m/m!) (V₁/4)^m = f(√π V₁ / 4)`.
pub fn chain_bound(v1: f64) -> Result<f64> {
    Ok(wright_f(std::f64::consts::PI.sqrt() * v1 / 4.0, 400)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantScan {
    /// `max log f(x) / x^{2/3}` over the grid.
    pub c_raw: f64,
    /// `c_raw` rounded up to three decimals.
    pub c_star: f64,
    pub argmax: f64,
    pub grid: Vec<f64>,
}

/// `logspace(−2, 2, 400)`.
pub fn scan_grid() -> Vec<f64> {
    let (lo, hi) = SCAN_LOG10_RANGE;
    (0..SCAN_POINTS)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64))
        .collect()
}

/// Smallest three-decimal `c` with `f(x) ≤ exp(c x^{2/3})` on the scan grid.
pub fn wright_constant_scan() -> Result<ConstantScan> {
    let grid = scan_grid();
    let mut c_raw = f64::NEG_INFINITY;
    let mut argmax = grid[0];
    for &x in &grid {
        let c = wright_f(x, 400)?.value.ln() / x.powf(2.0 / 3.0);
        if c > c_raw {
            c_raw = c;
            argmax = x;
        }
    }
    Ok(ConstantScan {
        c_raw,
        c_star: (c_raw * 1000.0).ceil() / 1000.0,
        argmax,
        grid,
    })
}
