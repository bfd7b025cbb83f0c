//! Intrinsic volume vectors: ℓ1 intrinsic volumes from coordinate
//! projections, Holmes–Thompson intrinsic volumes from a discrete
//! generating measure, and the classical closed forms used as oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{polygon, ConvexBody, ProjectionMatrix, MAX_VPOLYTOPE_DIM};
use crate::error::{Error, Result};
use crate::linalg::{binomial, combinations, orthonormal_basis, pairwise_sum};
use crate::measures::GeneratingMeasure;

/// Cap on the number of atom subsets evaluated across all orders.
pub const SUBSET_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VolumeKind {
    L1Prime,
    HolmesThompson,
    HolmesThompsonNormalized,
    Euclidean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    MonteCarlo { std_err: Vec<f64> },
}

/// Entries `0..=n` of an intrinsic volume sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumeVector {
    pub values: Vec<f64>,
    pub kind: VolumeKind,
    pub provenance: Provenance,
}

impl IntrinsicVolumeVector {
    fn exact(values: Vec<f64>, kind: VolumeKind) -> Self {
        IntrinsicVolumeVector {
            values,
            kind,
            provenance: Provenance::Exact,
        }
    }

    /// Top index `n`.
    pub fn order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// The values of `tK`, using `m`-homogeneity.
    pub fn scaled(&self, t: f64) -> Self {
        let mut out = self.clone();
        let mut p = 1.0;
        for v in out.values.iter_mut() {
            *v *= p;
            p *= t;
        }
        out
    }
}

/// Unit-ball volumes `ω_m = π^{m/2} / Γ(1 + m/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicConstants {
    pub omegas: Vec<f64>,
}

impl IntrinsicConstants {
    /// `ω_0..=ω_n` via `ω_m = ω_{m−2} · 2π / m`.
    pub fn new(n: usize) -> Self {
        let mut omegas = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let w = match m {
                0 => 1.0,
                1 => 2.0,
                _ => omegas[m - 2] * 2.0 * std::f64::consts::PI / m as f64,
            };
            omegas.push(w);
        }
        IntrinsicConstants { omegas }
    }
}

/// Dimension of the affine hull, with a tolerance relative to the body's
/// extent.
pub fn affine_dim(body: &ConvexBody) -> Result<usize> {
    let dirs: Vec<Vec<f64>> = match body {
        ConvexBody::Zonotope(z) => z.generators().to_vec(),
        ConvexBody::AxisBox(b) => b
            .lengths()
            .iter()
            .enumerate()
            .filter(|(_, l)| **l > 0.0)
            .map(|(k, l)| {
                let mut e = vec![0.0; b.dim()];
                e[k] = *l;
                e
            })
            .collect(),
        ConvexBody::VPolytope(p) => {
            let o = &p.vertices()[0];
            p.vertices()
                .iter()
                .map(|v| v.iter().zip(o).map(|(a, b)| a - b).collect())
                .collect()
        }
    };
    let scale = dirs
        .iter()
        .map(|d| crate::linalg::norm2(d))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0);
    }
    Ok(orthonormal_basis(&dirs, 1e-10 * scale).len())
}

fn check_engine(body: &ConvexBody) -> Result<()> {
    if matches!(body, ConvexBody::VPolytope(_)) && body.dim() > MAX_VPOLYTOPE_DIM {
        return Err(Error::DimensionCap {
            what: "V-polytope dimension",
            got: body.dim(),
            limit: MAX_VPOLYTOPE_DIM,
        });
    }
    Ok(())
}

/// `V′_m(K) = Σ vol_m(K | P)` over coordinate `m`-subspaces `P`.
pub fn l1_intrinsic_volumes(body: &ConvexBody) -> Result<IntrinsicVolumeVector> {
    check_engine(body)?;
    let n = body.dim();
    let top = affine_dim(body)?;
    let mut values = vec![0.0; n + 1];
    values[0] = 1.0;
    for m in 1..=top {
        let terms = combinations(n, m)
            .map(|s| body.projected_volume(&ProjectionMatrix::coordinate(&s, n)?))
            .collect::<Result<Vec<f64>>>()?;
        values[m] = pairwise_sum(&terms);
    }
    Ok(IntrinsicVolumeVector::exact(values, VolumeKind::L1Prime))
}

/// Holmes–Thompson intrinsic volumes for the norm generated by `measure`.
///
/// With atoms `(θ_j, W_j)`, `μ_m(K) = 2^m Σ_{|S| = m} (Π_{j∈S} W_j) vol_m(A_S K)`
/// where `A_S` has rows `θ_j, j ∈ S`. Tuples that repeat an atom are rank
/// deficient and contribute nothing, so only subsets are visited.
pub fn ht_intrinsic_volumes(
    body: &ConvexBody,
    measure: &GeneratingMeasure,
) -> Result<IntrinsicVolumeVector> {
    ht_intrinsic_volumes_with_budget(body, measure, SUBSET_BUDGET)
}

pub fn ht_intrinsic_volumes_with_budget(
    body: &ConvexBody,
    measure: &GeneratingMeasure,
    budget: u64,
) -> Result<IntrinsicVolumeVector> {
    let n = body.dim();
    if measure.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: measure.dim(),
        });
    }
    check_engine(body)?;
    let atoms = measure.atoms();
    let top = affine_dim(body)?.min(atoms.len());
    let needed: u128 = (1..=top).map(|m| binomial(atoms.len(), m)).sum();
    if needed > budget as u128 {
        return Err(Error::TupleBudgetExceeded { needed, budget });
    }
    let mut values = vec![0.0; n + 1];
    values[0] = 1.0;
    for m in 1..=top {
        let subsets: Vec<Vec<usize>> = combinations(atoms.len(), m).collect();
        let terms = subsets
            .par_iter()
            .map(|s| {
                let rows: Vec<Vec<f64>> = s.iter().map(|&j| atoms[j].dir.clone()).collect();
                let weight: f64 = s.iter().map(|&j| atoms[j].w).product();
                Ok(weight * body.projected_volume(&ProjectionMatrix::new(rows, n)?)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        values[m] = 2f64.powi(m as i32) * pairwise_sum(&terms);
    }
    Ok(IntrinsicVolumeVector::exact(
        values,
        VolumeKind::HolmesThompson,
    ))
}

/// `μ̃_m = μ_m / ω_m`.
pub fn normalize(
    v: &IntrinsicVolumeVector,
    constants: &IntrinsicConstants,
) -> Result<IntrinsicVolumeVector> {
    if v.kind != VolumeKind::HolmesThompson {
        return Err(Error::invalid(format!(
            "normalization expects Holmes–Thompson values, got {:?}",
            v.kind
        )));
    }
    if constants.omegas.len() < v.values.len() {
        return Err(Error::invalid("not enough normalization constants"));
    }
    let values = v
        .values
        .iter()
        .zip(&constants.omegas)
        .map(|(x, w)| x / w)
        .collect();
    let provenance = match &v.provenance {
        Provenance::Exact => Provenance::Exact,
        Provenance::MonteCarlo { std_err } => Provenance::MonteCarlo {
            std_err: std_err
                .iter()
                .zip(&constants.omegas)
                .map(|(e, w)| e / w)
                .collect(),
        },
    };
    Ok(IntrinsicVolumeVector {
        values,
        kind: VolumeKind::HolmesThompsonNormalized,
        provenance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupermultiplicativityRow {
    pub i: usize,
    pub j: usize,
    /// `μ_{i+j}`.
    pub lhs: f64,
    /// `i! j! / (i+j)! · μ_i μ_j`.
    pub rhs: f64,
    pub ok: bool,
}

/// Every pair `i, j ≥ 0` with `i + j ≤ n`. Meant for Holmes–Thompson
/// vectors; ℓ1 vectors satisfy the same inequality since they differ by
/// the factor `2^m`.
pub fn check_supermultiplicativity(v: &IntrinsicVolumeVector) -> Vec<SupermultiplicativityRow> {
    let n = v.order();
    let mut rows = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            // i! j! / (i+j)! = 1 / C(i+j, i)
            let lhs = v.values[i + j];
            let rhs = v.values[i] * v.values[j] / binomial(i + j, i) as f64;
            rows.push(SupermultiplicativityRow {
                i,
                j,
                lhs,
                rhs,
                ok: lhs <= rhs + 1e-9 * rhs,
            });
        }
    }
    rows
}

/// Elementary symmetric polynomials `e_0..=e_n` of the inputs.
pub fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (k, &x) in xs.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            e[m] += x * e[m - 1];
        }
    }
    e
}

/// `V′` of an axis box with the given side lengths.
pub fn box_l1_closed_form(lengths: &[f64]) -> Result<IntrinsicVolumeVector> {
    if lengths.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
        return Err(Error::invalid(
            "side lengths must be finite and nonnegative",
        ));
    }
    Ok(IntrinsicVolumeVector::exact(
        elementary_symmetric(lengths),
        VolumeKind::L1Prime,
    ))
}

/// Classical intrinsic volumes of an axis box (same closed form as `V′`).
pub fn euclidean_box(lengths: &[f64]) -> Result<IntrinsicVolumeVector> {
    let mut v = box_l1_closed_form(lengths)?;
    v.kind = VolumeKind::Euclidean;
    Ok(v)
}

/// Classical intrinsic volumes `(1, half perimeter, area)` of a planar body.
pub fn euclidean_polygon(body: &ConvexBody) -> Result<IntrinsicVolumeVector> {
    let poly = body.polygon()?;
    Ok(IntrinsicVolumeVector::exact(
        vec![1.0, 0.5 * polygon::perimeter(&poly), polygon::area(&poly)],
        VolumeKind::Euclidean,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{AxisBox, VPolytope, Zonotope};
    use crate::measures::{euclidean_measure, l1_measure};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    #[test]
    fn constants() {
        let c = IntrinsicConstants::new(4);
        assert!((c.omegas[0] - 1.0).abs() < 1e-12);
        assert!((c.omegas[1] - 2.0).abs() < 1e-12);
        assert!((c.omegas[2] - std::f64::consts::PI).abs() < 1e-12);
        assert!((c.omegas[3] - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn l1_examples() {
        let b: ConvexBody = AxisBox::new(vec![0.0, 0.0], vec![1.5, 2.5]).unwrap().into();
        assert!(close(
            &l1_intrinsic_volumes(&b).unwrap().values,
            &[1.0, 4.0, 3.75],
            1e-15
        ));
        let seg: ConvexBody = AxisBox::new(vec![0.0], vec![3.0]).unwrap().into();
        assert_eq!(l1_intrinsic_volumes(&seg).unwrap().values, vec![1.0, 3.0]);
        let pt = ConvexBody::point(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            l1_intrinsic_volumes(&pt).unwrap().values,
            vec![1.0, 0.0, 0.0, 0.0]
        );
        let tri: ConvexBody = VPolytope::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]])
            .unwrap()
            .into();
        assert!(close(
            &l1_intrinsic_volumes(&tri).unwrap().values,
            &[1.0, 4.0, 2.0],
            1e-12
        ));
    }

    #[test]
    fn ht_point_and_square() {
        let pt = ConvexBody::point(vec![0.0, 0.0]).unwrap();
        let m = l1_measure(2).unwrap();
        assert_eq!(
            ht_intrinsic_volumes(&pt, &m).unwrap().values,
            vec![1.0, 0.0, 0.0]
        );
        // [−1,1]²: 2^m V′_m = (1, 8, 16); the top entry is vol(B∞²)·vol(B₁²) = 4·4
        let sq: ConvexBody = AxisBox::cube(2, -1.0, 1.0).unwrap().into();
        let v = ht_intrinsic_volumes(&sq, &m).unwrap();
        assert!(close(&v.values, &[1.0, 8.0, 16.0], 1e-14));
    }

    #[test]
    fn top_entry_is_volume_times_polar_zonotope() {
        let m = crate::measures::random_measure(3, 5, 11).unwrap();
        let gens: Vec<Vec<f64>> = m
            .atoms()
            .iter()
            .map(|a| a.dir.iter().map(|x| x * a.w).collect())
            .collect();
        let z = Zonotope::new(gens, 3).unwrap();
        let body: ConvexBody = AxisBox::new(vec![0.0, -1.0, 0.5], vec![1.0, 1.0, 2.0])
            .unwrap()
            .into();
        let v = ht_intrinsic_volumes(&body, &m).unwrap();
        let expect = body.volume().unwrap() * z.volume().unwrap();
        assert!((v.values[3] - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn budget_is_enforced() {
        let m = crate::measures::random_measure(2, 40, 3).unwrap();
        let sq: ConvexBody = AxisBox::cube(2, 0.0, 1.0).unwrap().into();
        match ht_intrinsic_volumes_with_budget(&sq, &m, 100) {
            Err(Error::TupleBudgetExceeded { needed, budget }) => {
                assert_eq!(needed, 40 + 780);
                assert_eq!(budget, 100);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normalization() {
        let v = IntrinsicVolumeVector::exact(
            vec![1.0, 4.0, std::f64::consts::PI.powi(2)],
            VolumeKind::HolmesThompson,
        );
        let n = normalize(&v, &IntrinsicConstants::new(2)).unwrap();
        assert!(close(&n.values, &[1.0, 2.0, std::f64::consts::PI], 1e-15));
        assert_eq!(n.kind, VolumeKind::HolmesThompsonNormalized);
        assert!(normalize(&n, &IntrinsicConstants::new(2)).is_err());
    }

    #[test]
    fn euclidean_measure_recovers_half_perimeter() {
        let sq: ConvexBody = AxisBox::cube(2, 0.0, 1.0).unwrap().into();
        let m = euclidean_measure(2, 90).unwrap();
        let v = normalize(
            &ht_intrinsic_volumes(&sq, &m).unwrap(),
            &IntrinsicConstants::new(2),
        )
        .unwrap();
        let classical = euclidean_polygon(&sq).unwrap();
        assert_eq!(classical.values, vec![1.0, 2.0, 1.0]);
        assert!((v.values[1] - 2.0).abs() < 0.005 * 2.0);
        assert!((v.values[2] - 1.0).abs() < 0.01);
    }

    #[test]
    fn supermultiplicativity_rows() {
        let v = IntrinsicVolumeVector::exact(vec![1.0, 4.0, 4.0], VolumeKind::HolmesThompson);
        let rows = check_supermultiplicativity(&v);
        assert_eq!(rows.len(), 6);
        let r = rows.iter().find(|r| r.i == 1 && r.j == 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ok), (4.0, 8.0, true));
        let pt = IntrinsicVolumeVector::exact(vec![1.0, 0.0, 0.0], VolumeKind::HolmesThompson);
        assert!(check_supermultiplicativity(&pt).iter().all(|r| r.ok));
    }

    #[test]
    fn box_closed_forms() {
        assert_eq!(
            box_l1_closed_form(&[2.0, 2.0]).unwrap().values,
            vec![1.0, 4.0, 4.0]
        );
        assert_eq!(box_l1_closed_form(&[5.0]).unwrap().values, vec![1.0, 5.0]);
        assert_eq!(
            box_l1_closed_form(&[1.0, 1.0, 1.0]).unwrap().values,
            vec![1.0, 3.0, 3.0, 1.0]
        );
        assert!(box_l1_closed_form(&[-1.0]).is_err());
    }

    #[test]
    fn lower_dimensional_bodies_vanish_above_their_dimension() {
        let seg: ConvexBody = VPolytope::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 3.0]])
            .unwrap()
            .into();
        let v = l1_intrinsic_volumes(&seg).unwrap();
        assert_eq!(v.values, vec![1.0, 6.0, 0.0, 0.0]);
        let flat = Zonotope::new(vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]], 3)
            .unwrap()
            .into();
        let m = crate::measures::random_measure(3, 4, 2).unwrap();
        let v = ht_intrinsic_volumes(&flat, &m).unwrap();
        assert_eq!(v.values[3], 0.0);
        assert!(v.values[2] > 0.0);
    }
}
