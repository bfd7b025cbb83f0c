//! Volume product of a zonotope and its polar against `4ⁿ/n!`.

use serde::{Deserialize, Serialize};

use crate::convex::{
    polar_volume, ConvexBody, Hull, McEstimate, VPolytope, Zonotope, MAX_VPOLYTOPE_DIM,
};
use crate::error::{Error, Result};
use crate::intrinsic::ht_intrinsic_volumes;
use crate::measures::GeneratingMeasure;

/// Default scales for the magnitude comparison rows.
pub const DEFAULT_TS: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// One scale of the comparison `tⁿ/n! ≤ Mag(tB) ≤ Σ 4^{−m} μ_m(B) t^m`
/// where `B = Z°` is the unit ball of the norm `h_Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeRow {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    /// `upper / tⁿ`, which tends to `vol(Z) vol(Z°) / 4ⁿ`.
    pub upper_leading: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahlerReport {
    pub dim: usize,
    pub vol_z: f64,
    pub vol_polar: McEstimate,
    /// `vol_z · vol_polar.value`.
    pub product: f64,
    pub product_std_err: f64,
    /// `4ⁿ / n!`.
    pub bound: f64,
    /// `(product − bound) / product_std_err`.
    pub slack_sigmas: f64,
    /// Polar volume from the exact vertex hull.
    pub vol_polar_exact: f64,
    pub product_exact: f64,
    pub rows: Vec<MagnitudeRow>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `4ⁿ / n!`.
pub fn mahler_bound(n: usize) -> f64 {
    4f64.powi(n as i32) / factorial(n)
}

/// Closed-form volumes of the cube `B∞ⁿ` and its polar `B₁ⁿ`:
/// `(2ⁿ, 2ⁿ/n!, product, 4ⁿ/n!)`.
pub fn mahler_closed_form_cube(n: usize) -> (f64, f64, f64, f64) {
    let vol = 2f64.powi(n as i32);
    let vol_polar = vol / factorial(n);
    (vol, vol_polar, vol * vol_polar, mahler_bound(n))
}

/// Exact `vol(Z)`, Monte Carlo and exact `vol(Z°)`, and magnitude rows
/// at [`DEFAULT_TS`].
pub fn mahler_pipeline(
    z: &Zonotope,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<MahlerReport> {
    mahler_pipeline_with_ts(z, samples, seed, workers, &DEFAULT_TS)
}

pub fn mahler_pipeline_with_ts(
    z: &Zonotope,
    samples: u64,
    seed: u64,
    workers: usize,
    ts: &[f64],
) -> Result<MahlerReport> {
    let n = z.dim();
    if n > MAX_VPOLYTOPE_DIM {
        return Err(Error::DimensionCap {
            what: "zonotope dimension for the polar volume",
            got: n,
            limit: MAX_VPOLYTOPE_DIM,
        });
    }
    let vol_z = z.volume()?;
    if vol_z <= 0.0 {
        return Err(Error::DegenerateBody(
            "zonotope is not full-dimensional".into(),
        ));
    }
    let polar = VPolytope::new(z.polar_vertices()?)?;
    let vol_polar_exact = Hull::new(polar.vertices())?.volume();
    let vol_polar = polar_volume(z, samples, seed, workers)?;
    let product = vol_z * vol_polar.value;
    let product_std_err = vol_z * vol_polar.std_err;
    let bound = mahler_bound(n);
    let slack_sigmas = if product_std_err > 0.0 {
        (product - bound) / product_std_err
    } else {
        0.0
    };
    let rows = magnitude_rows(z, &polar.into(), ts)?;
    Ok(MahlerReport {
        dim: n,
        vol_z,
        vol_polar,
        product,
        product_std_err,
        bound,
        slack_sigmas,
        vol_polar_exact,
        product_exact: vol_z * vol_polar_exact,
        rows,
    })
}

fn magnitude_rows(z: &Zonotope, polar: &ConvexBody, ts: &[f64]) -> Result<Vec<MagnitudeRow>> {
    let n = z.dim();
    let measure = GeneratingMeasure::from_vectors(z.generators())?;
    let mu = ht_intrinsic_volumes(polar, &measure)?;
    ts.iter()
        .map(|&t| {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::invalid("scales must be positive and finite"));
            }
            let upper: f64 = mu
                .values
                .iter()
                .enumerate()
                .map(|(m, v)| v * (t / 4.0).powi(m as i32))
                .sum();
            let lower = t.powi(n as i32) / factorial(n);
            Ok(MagnitudeRow {
                t,
                lower,
                upper,
                upper_leading: upper / t.powi(n as i32),
                ok: lower <= upper * (1.0 + 1e-12),
            })
        })
        .collect()
}
