//! Greedy ε-packings and the counting-measure lower bound on magnitude.
//!
//! For an ε-separated set of `N` points, `Mag(t·X) ≥ N / (1 + N e^{−tε})`;
//! at `t* = log(2N)/ε` this is `2N/3`.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::finite_metric::{
    build_space, grid_sample, magnitude, max_diversity, scale_space, NormSpec,
};
use crate::intrinsic::{euclidean_box, euclidean_polygon};

/// Multiples of `t*` at which the counting bound is rechecked.
pub const EXTRA_SCALES: [f64; 5] = [0.25, 0.5, 1.5, 2.0, 4.0];

#[derive(Debug, Clone, PartialEq)]
pub struct SudakovOptions {
    /// Candidate grid points per side; `None` picks 256, 64 or 24 by dimension.
    pub grid_k: Option<usize>,
    pub norm: NormSpec,
}

impl Default for SudakovOptions {
    fn default() -> Self {
        SudakovOptions {
            grid_k: None,
            norm: NormSpec::l2(),
        }
    }
}

fn default_grid_k(dim: usize) -> usize {
    match dim {
        0 | 1 => 256,
        2 => 64,
        _ => 24,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingCheck {
    pub t: f64,
    pub magnitude: f64,
    pub counting_bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub centers: Vec<Vec<f64>>,
    pub epsilon: f64,
    #[serde(rename = "N")]
    pub n: usize,
    /// `log(2N) / ε`.
    pub t_star: f64,
    /// Exact magnitude of `t*·centers`.
    pub mag_lower: f64,
    /// `2N/3`.
    pub counting_bound: f64,
    pub checks: Vec<CountingCheck>,
    /// Maximum diversity of `t*·centers`, when certified.
    pub d_max: Option<f64>,
    /// Euclidean `V₁(K)` when a closed form is available.
    pub v1: Option<f64>,
    /// `V₁ / (ε √log N)`, for `N ≥ 2`.
    pub v1_ratio: Option<f64>,
    pub candidates: usize,
    pub grid_k: usize,
    pub seed: u64,
    /// Every counting check holds (vacuous when `N = 1`).
    pub ok: bool,
}

pub fn sudakov_pipeline(body: &ConvexBody, epsilon: f64, seed: u64) -> Result<PackingResult> {
    sudakov_pipeline_with(body, epsilon, seed, &SudakovOptions::default())
}

/// Greedy farthest-point packing over a candidate grid, then exact
/// magnitudes of the scaled packing.
///
/// The seed picks an anchor candidate; the first center is the candidate
/// farthest from it, and each later center is the candidate farthest from
/// the current centers, while that distance is at least `ε`.
pub fn sudakov_pipeline_with(
    body: &ConvexBody,
    epsilon: f64,
    seed: u64,
    opts: &SudakovOptions,
) -> Result<PackingResult> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be positive and finite"));
    }
    let grid_k = opts.grid_k.unwrap_or_else(|| default_grid_k(body.dim()));
    let candidates = grid_sample(body, grid_k)?;
    let centers = greedy_packing(&candidates, epsilon, seed, &opts.norm);
    let n = centers.len();
    let t_star = (2.0 * n as f64).ln() / epsilon;

    let space = build_space(&centers, &opts.norm)?;
    let counting = |t: f64| n as f64 / (1.0 + n as f64 * (-t * epsilon).exp());
    let at_star = scale_space(&space, t_star)?;
    let mag_lower = magnitude(&at_star)?;
    let counting_bound = counting(t_star);
    let mut checks = vec![CountingCheck {
        t: t_star,
        magnitude: mag_lower,
        counting_bound,
        ok: mag_lower >= counting_bound - 1e-9,
    }];
    for f in EXTRA_SCALES {
        let t = f * t_star;
        let mag = magnitude(&scale_space(&space, t)?)?;
        let bound = counting(t);
        checks.push(CountingCheck {
            t,
            magnitude: mag,
            counting_bound: bound,
            ok: mag >= bound - 1e-9,
        });
    }
    let d_max = max_diversity(&at_star, 1e-9, 10_000).ok().map(|w| w.d_max);
    let v1 = euclidean_v1(body);
    let v1_ratio = match v1 {
        Some(v) if n >= 2 => Some(v / (epsilon * (n as f64).ln().sqrt())),
        _ => None,
    };
    Ok(PackingResult {
        ok: n < 2 || checks.iter().all(|c| c.ok),
        centers,
        epsilon,
        n,
        t_star,
        mag_lower,
        counting_bound,
        checks,
        d_max,
        v1,
        v1_ratio,
        candidates: candidates.len(),
        grid_k,
        seed,
    })
}

fn greedy_packing(
    candidates: &[Vec<f64>],
    epsilon: f64,
    seed: u64,
    norm: &NormSpec,
) -> Vec<Vec<f64>> {
    let anchor = &candidates[(seed % candidates.len() as u64) as usize];
    let first = argmax(candidates.iter().map(|c| norm.distance(c, anchor)));
    let mut centers = vec![candidates[first].clone()];
    let mut gap: Vec<f64> = candidates
        .iter()
        .map(|c| norm.distance(c, &candidates[first]))
        .collect();
    loop {
        let next = argmax(gap.iter().copied());
        if gap[next] < epsilon {
            break;
        }
        let c = candidates[next].clone();
        for (g, x) in gap.iter_mut().zip(candidates) {
            *g = g.min(norm.distance(x, &c));
        }
        centers.push(c);
    }
    centers
}

/// First index of the maximum.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn euclidean_v1(body: &ConvexBody) -> Option<f64> {
    match body {
        ConvexBody::AxisBox(b) => euclidean_box(&b.lengths()).ok().map(|v| v.values[1]),
        ConvexBody::Zonotope(z) => Some(z.euclidean_v1()),
        ConvexBody::VPolytope(_) if body.dim() == 2 => {
            euclidean_polygon(body).ok().map(|v| v.values[1])
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::AxisBox;

    #[test]
    fn unit_interval_with_unit_separation() {
        let seg: ConvexBody = AxisBox::new(vec![0.0], vec![1.0]).unwrap().into();
        let r = sudakov_pipeline(&seg, 1.0, 0).unwrap();
        assert_eq!(r.n, 2);
        assert!((r.t_star - 4f64.ln()).abs() < 1e-15);
        // 2 / (1 + 2·¼) = 4/3
        assert!((r.counting_bound - 4.0 / 3.0).abs() < 1e-15);
        assert!(r.ok);
    }

    #[test]
    fn single_point() {
        let pt = ConvexBody::point(vec![0.3, 0.3]).unwrap();
        let r = sudakov_pipeline(&pt, 0.5, 9).unwrap();
        assert_eq!(r.n, 1);
        assert_eq!(r.mag_lower, 1.0);
        assert!(r.ok && r.v1_ratio.is_none());
    }

    #[test]
    fn unit_square() {
        let sq: ConvexBody = AxisBox::cube(2, 0.0, 1.0).unwrap().into();
        let r = sudakov_pipeline(&sq, 0.5, 1).unwrap();
        assert!(r.n >= 4);
        assert!(r.mag_lower >= 2.0 * r.n as f64 / 3.0 - 1e-9);
        assert!(r.ok);
        assert_eq!(r.v1, Some(2.0));
        for i in 0..r.n {
            for j in 0..i {
                assert!(NormSpec::l2().distance(&r.centers[i], &r.centers[j]) >= 0.5 - 1e-12);
            }
        }
    }

    #[test]
    fn seed_changes_only_the_anchor() {
        let sq: ConvexBody = AxisBox::cube(2, 0.0, 1.0).unwrap().into();
        let a = sudakov_pipeline(&sq, 0.4, 3).unwrap();
        let b = sudakov_pipeline(&sq, 0.4, 3).unwrap();
        assert_eq!(a, b);
    }
}
