//! Verifiers for the ℓ1 Steiner formula, the Wills-type lattice bound and
//! the first-order behavior of magnitude at small scales.

use serde::{Deserialize, Serialize};

use crate::convex::{
    lattice_points, minkowski_cube_volume, minkowski_sum_cube, ConvexBody, MAX_LATTICE_DIM,
    MAX_VPOLYTOPE_DIM,
};
use crate::error::{Error, Result};
use crate::finite_metric::{build_space, grid_sample, magnitude, scale_space, NormSpec};
use crate::intrinsic::{ht_intrinsic_volumes, l1_intrinsic_volumes};
use crate::measures::GeneratingMeasure;

use super::l1_magnitude_exact;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteinerRow {
    pub t: f64,
    /// `vol(X + t[0,1]ⁿ)`.
    pub minkowski: f64,
    /// `Σ V′_m(X) t^{n−m}`.
    pub polynomial: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerReport {
    pub rows: Vec<SteinerRow>,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
}

/// Compare the volume of `X + t[0,1]ⁿ` with the `V′` polynomial.
///
/// Planar bodies use the polygon edge merge; dimensions 3 and 4 use the
/// exact cube-sum volume.
pub fn steiner_check(body: &ConvexBody, ts: &[f64]) -> Result<SteinerReport> {
    let n = body.dim();
    if n > MAX_VPOLYTOPE_DIM {
        return Err(Error::DimensionCap {
            what: "Steiner check dimension",
            got: n,
            limit: MAX_VPOLYTOPE_DIM,
        });
    }
    let v = l1_intrinsic_volumes(body)?;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let minkowski = if n == 2 {
            crate::convex::polygon::area(
                &minkowski_sum_cube(body, t)?
                    .vertices()
                    .iter()
                    .map(|p| [p[0], p[1]])
                    .collect::<Vec<_>>(),
            )
        } else {
            minkowski_cube_volume(body, t)?
        };
        let polynomial: f64 = v
            .values
            .iter()
            .enumerate()
            .map(|(m, x)| x * t.powi((n - m) as i32))
            .sum();
        let abs_dev = (minkowski - polynomial).abs();
        rows.push(SteinerRow {
            t,
            minkowski,
            polynomial,
            abs_dev,
            rel_dev: if polynomial > 0.0 {
                abs_dev / polynomial
            } else {
                abs_dev
            },
        });
    }
    Ok(SteinerReport {
        max_abs_dev: rows.iter().map(|r| r.abs_dev).fold(0.0, f64::max),
        max_rel_dev: rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WillsReport {
    pub count: u64,
    /// `W′ = Σ V′_m`.
    pub wills: f64,
    pub ok: bool,
}

/// `#(X ∩ Zⁿ) ≤ Σ V′_m(X)`.
pub fn wills_check(body: &ConvexBody) -> Result<WillsReport> {
    if body.dim() > MAX_LATTICE_DIM {
        return Err(Error::DimensionCap {
            what: "lattice enumeration dimension",
            got: body.dim(),
            limit: MAX_LATTICE_DIM,
        });
    }
    let count = lattice_points(body)?;
    let wills: f64 = l1_intrinsic_volumes(body)?.values.iter().sum();
    Ok(WillsReport {
        count,
        wills,
        ok: count as f64 <= wills + 1e-9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub t: f64,
    pub grid_magnitude: f64,
    /// `(grid magnitude − 1) / t`.
    pub slope: f64,
    /// `(Mag(tK) − 1) / t` from the exact ℓ1 formula, when it applies.
    pub exact_slope: Option<f64>,
    /// `Σ_{m≥1} 4^{−m} μ_m t^{m−1}`, the slope of the sum bound at `t`.
    pub finite_bound: f64,
    /// `slope ≤ μ₁/4 + 1e-9`.
    pub ok: bool,
    /// `slope ≤ finite_bound + 1e-9`.
    pub ok_finite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub mu1: f64,
    /// `μ₁ / 4`.
    pub bound: f64,
    pub grid_points: usize,
    pub rows: Vec<SlopeRow>,
    pub ok: bool,
}

/// `(Mag(tG) − 1)/t` for a grid `G ⊆ K` against `μ₁(K)/4`.
///
/// The comparison with `μ₁/4` is a statement about the limit `t → 0⁺`; at a
/// fixed `t` the higher intrinsic volumes add `O(t)` to the slope, so `ok`
/// can fail for bodies of dimension two or more. `ok_finite` compares with
/// the slope of the full sum bound, which holds at every `t`.
pub fn small_t_slope_check(
    body: &ConvexBody,
    measure: &GeneratingMeasure,
    ts: &[f64],
    grid_k: usize,
) -> Result<SlopeReport> {
    let mu = ht_intrinsic_volumes(body, measure)?;
    let mu1 = mu.values.get(1).copied().unwrap_or(0.0);
    let bound = mu1 / 4.0;
    let grid = grid_sample(body, grid_k)?;
    let space = build_space(&grid, &NormSpec::Measure(measure.clone()))?;
    let exact = measure.is_l1() && body.volume()? > 0.0;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid("scales must be positive and finite"));
        }
        let grid_magnitude = magnitude(&scale_space(&space, t)?)?;
        let slope = (grid_magnitude - 1.0) / t;
        let exact_slope = if exact {
            Some((l1_magnitude_exact(&body.scale(t)?)? - 1.0) / t)
        } else {
            None
        };
        let finite_bound: f64 = mu
            .values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, v)| v * 0.25f64.powi(m as i32) * t.powi(m as i32 - 1))
            .sum();
        rows.push(SlopeRow {
            t,
            grid_magnitude,
            slope,
            exact_slope,
            finite_bound,
            ok: slope <= bound + 1e-9,
            ok_finite: slope <= finite_bound + 1e-9,
        });
    }
    Ok(SlopeReport {
        mu1,
        bound,
        grid_points: grid.len(),
        ok: rows.iter().all(|r| r.ok),
        rows,
    })
}
