//! Upper bounds on magnitude from intrinsic volumes, and the pipelines
//! that exercise them.

pub mod checks;
pub mod mahler;
pub mod sudakov;
pub mod wright;

use serde::{Deserialize, Serialize};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::intrinsic::{ht_intrinsic_volumes, l1_intrinsic_volumes, IntrinsicVolumeVector};
use crate::linalg::pairwise_sum;
use crate::measures::GeneratingMeasure;

pub use checks::{
    small_t_slope_check, steiner_check, wills_check, SlopeReport, SteinerReport, WillsReport,
};
pub use mahler::{mahler_closed_form_cube, mahler_pipeline, MahlerReport};
pub use sudakov::{sudakov_pipeline, sudakov_pipeline_with, PackingResult, SudakovOptions};
pub use wright::{
    chain_bound, mag_v1_bound, wright_constant_scan, wright_f, ConstantScan, WrightValue,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `Σ_m 4^{−m} μ_m`.
    pub sum_bound: f64,
    /// `exp(μ₁ / 4)`.
    pub exp_bound: f64,
    pub mu_vector: IntrinsicVolumeVector,
    /// Worst relative norm error of a discretized measure, if any.
    pub caveat: Option<f64>,
}

impl BoundReport {
    /// `sum_bound` of `tK`, by homogeneity.
    pub fn sum_bound_at_scale(&self, t: f64) -> f64 {
        sum_bound(&self.mu_vector.scaled(t).values)
    }

    pub fn exp_bound_at_scale(&self, t: f64) -> f64 {
        (t * self.mu_vector.values.get(1).copied().unwrap_or(0.0) / 4.0).exp()
    }
}

fn sum_bound(mu: &[f64]) -> f64 {
    let terms: Vec<f64> = mu
        .iter()
        .enumerate()
        .map(|(m, v)| v * 0.25f64.powi(m as i32))
        .collect();
    pairwise_sum(&terms)
}

/// `Mag(K) ≤ Σ 4^{−m} μ_m(K) ≤ exp(μ₁(K)/4)` for the norm of `measure`.
pub fn magnitude_upper_bound(
    body: &ConvexBody,
    measure: &GeneratingMeasure,
) -> Result<BoundReport> {
    let mu = ht_intrinsic_volumes(body, measure)?;
    let mu1 = mu.values.get(1).copied().unwrap_or(0.0);
    Ok(BoundReport {
        sum_bound: sum_bound(&mu.values),
        exp_bound: (mu1 / 4.0).exp(),
        mu_vector: mu,
        caveat: measure.discretization_error(),
    })
}

/// Magnitude of a full-dimensional body in `ℓ1ⁿ`: `Σ 2^{−m} V′_m(K)`.
///
/// Lower-dimensional bodies are refused, since the same sum is then only
/// an upper bound.
pub fn l1_magnitude_exact(body: &ConvexBody) -> Result<f64> {
    if body.volume()? <= 0.0 {
        return Err(Error::DegenerateBody(
            "exact ℓ1 magnitude needs a body with nonempty interior".into(),
        ));
    }
    let v = l1_intrinsic_volumes(body)?;
    let terms: Vec<f64> = v
        .values
        .iter()
        .enumerate()
        .map(|(m, x)| x * 0.5f64.powi(m as i32))
        .collect();
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{AxisBox, VPolytope};
    use crate::measures::{l1_measure, random_measure};

    #[test]
    fn bound_examples() {
        let pt = ConvexBody::point(vec![0.0, 0.0]).unwrap();
        let r = magnitude_upper_bound(&pt, &l1_measure(2).unwrap()).unwrap();
        assert_eq!((r.sum_bound, r.exp_bound), (1.0, 1.0));

        let sq: ConvexBody = AxisBox::cube(2, 0.0, 2.0).unwrap().into();
        let r = magnitude_upper_bound(&sq, &l1_measure(2).unwrap()).unwrap();
        assert!((r.sum_bound - 4.0).abs() < 1e-14);
        assert!(r.sum_bound <= r.exp_bound);
        assert_eq!(r.caveat, None);
    }

    #[test]
    fn scaling_by_homogeneity_matches_recomputation() {
        let m = random_measure(2, 4, 5).unwrap();
        let tri: ConvexBody = VPolytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 0.9]])
            .unwrap()
            .into();
        let r = magnitude_upper_bound(&tri, &m).unwrap();
        for t in [0.5, 2.0, 3.0] {
            let direct = magnitude_upper_bound(&tri.scale(t).unwrap(), &m).unwrap();
            assert!((r.sum_bound_at_scale(t) - direct.sum_bound).abs() < 1e-9 * direct.sum_bound);
            assert!((r.exp_bound_at_scale(t) - direct.exp_bound).abs() < 1e-9 * direct.exp_bound);
        }
    }

    #[test]
    fn l1_exact_examples() {
        let seg: ConvexBody = AxisBox::new(vec![0.0], vec![2.0]).unwrap().into();
        assert_eq!(l1_magnitude_exact(&seg).unwrap(), 2.0);
        let sq: ConvexBody = AxisBox::cube(2, 0.0, 2.0).unwrap().into();
        assert_eq!(l1_magnitude_exact(&sq).unwrap(), 4.0);
        let tri: ConvexBody = VPolytope::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]])
            .unwrap()
            .into();
        assert!((l1_magnitude_exact(&tri).unwrap() - 3.5).abs() < 1e-12);
        let flat: ConvexBody = VPolytope::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]])
            .unwrap()
            .into();
        assert!(matches!(
            l1_magnitude_exact(&flat),
            Err(Error::DegenerateBody(_))
        ));
    }
}
