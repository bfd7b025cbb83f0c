//! Finite metric spaces, their similarity matrices, magnitude and maximum
//! diversity.
//!
//! For a finite positive definite space with similarity matrix
//! `Z_ij = exp(−d(x_i, x_j))`, magnitude is `1ᵀ Z⁻¹ 1` and maximum
//! diversity is `1 / min { vᵀ Z v : v ≥ 0, Σ v = 1 }`.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{pairwise_sum, symmetric_min_eigenvalue, Cholesky};
use crate::measures::GeneratingMeasure;

/// Default cap on the number of points in a dense similarity matrix.
pub const DEFAULT_MAX_POINTS: usize = 8192;
/// Pivot threshold, relative to the largest diagonal entry.
pub const PIVOT_THRESHOLD: f64 = 1e-12;
/// Slack for the triangle inequality on user-supplied matrices.
pub const TRIANGLE_SLACK: f64 = 1e-12;
/// Above this size the smallest pivot stands in for the smallest eigenvalue.
pub const EIGEN_LIMIT: usize = 512;

/// Norm used to turn coordinate vectors into a metric space.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `ℓ_p` with `p ∈ [1, 2]`.
    Lp(f64),
    Measure(GeneratingMeasure),
}

impl NormSpec {
    pub fn l1() -> Self {
        NormSpec::Lp(1.0)
    }

    pub fn l2() -> Self {
        NormSpec::Lp(2.0)
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            NormSpec::Lp(p) if !(1.0..=2.0).contains(p) => Err(Error::invalid(format!(
                "p = {p} is outside the hypermetric range [1, 2]"
            ))),
            NormSpec::Measure(m) if m.dim() != dim => Err(Error::DimensionMismatch {
                expected: m.dim(),
                got: dim,
            }),
            _ => Ok(()),
        }
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            NormSpec::Lp(p) if *p == 1.0 => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
            NormSpec::Lp(p) if *p == 2.0 => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            NormSpec::Lp(p) => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b).abs().powf(*p))
                .sum::<f64>()
                .powf(1.0 / p),
            NormSpec::Measure(m) => m.distance(x, y),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    points: Option<Vec<Vec<f64>>>,
    dist: Vec<f64>,
    k: usize,
}

/// Metric space on `points` with distances from `norm`.
pub fn build_space(points: &[Vec<f64>], norm: &NormSpec) -> Result<FiniteMetricSpace> {
    build_space_capped(points, norm, DEFAULT_MAX_POINTS)
}

pub fn build_space_capped(
    points: &[Vec<f64>],
    norm: &NormSpec,
    max_points: usize,
) -> Result<FiniteMetricSpace> {
    let k = points.len();
    if k > max_points {
        return Err(Error::DimensionCap {
            what: "finite metric space size",
            got: k,
            limit: max_points,
        });
    }
    if let Some(first) = points.first() {
        let n = first.len();
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("point coordinates must be finite"));
            }
        }
        norm.validate(n)?;
    }
    let mut dist = vec![0.0; k * k];
    for i in 0..k {
        for j in i + 1..k {
            let d = norm.distance(&points[i], &points[j]);
            dist[i * k + j] = d;
            dist[j * k + i] = d;
        }
    }
    Ok(FiniteMetricSpace {
        points: Some(points.to_vec()),
        dist,
        k,
    })
}

impl FiniteMetricSpace {
    /// From an explicit distance matrix, checking symmetry, the zero
    /// diagonal and the triangle inequality.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k > DEFAULT_MAX_POINTS {
            return Err(Error::DimensionCap {
                what: "finite metric space size",
                got: k,
                limit: DEFAULT_MAX_POINTS,
            });
        }
        let mut dist = Vec::with_capacity(k * k);
        for r in rows {
            if r.len() != k {
                return Err(Error::invalid("distance matrix must be square"));
            }
            dist.extend_from_slice(r);
        }
        for i in 0..k {
            if dist[i * k + i] != 0.0 {
                return Err(Error::invalid("distance matrix must have a zero diagonal"));
            }
            for j in 0..k {
                let d = dist[i * k + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid("distances must be finite and nonnegative"));
                }
                if d != dist[j * k + i] {
                    return Err(Error::invalid("distance matrix must be symmetric"));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                for m in 0..k {
                    if dist[i * k + j] > dist[i * k + m] + dist[m * k + j] + TRIANGLE_SLACK {
                        return Err(Error::invalid(format!(
                            "triangle inequality fails for ({i}, {j}) via {m}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace {
            points: None,
            dist,
            k,
        })
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.k + j]
    }

    pub fn points(&self) -> Option<&[Vec<f64>]> {
        self.points.as_deref()
    }

    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        self.dist
            .chunks(self.k.max(1))
            .take(self.k)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn similarity(&self) -> SimilarityMatrix {
        SimilarityMatrix {
            k: self.k,
            z: self.dist.iter().map(|d| (-d).exp()).collect(),
        }
    }
}

/// `Z_ij = exp(−d_ij)`, row-major.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    k: usize,
    z: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.z[i * self.k + j]
    }

    pub fn factor(&self) -> Result<Cholesky> {
        Cholesky::factor(&self.z, self.k, PIVOT_THRESHOLD).map_err(|f| Error::NotPositiveDefinite {
            row: f.row,
            pivot: f.pivot,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        symmetric_min_eigenvalue(&self.z, self.k)
    }

    fn mul(&self, v: &[f64]) -> Vec<f64> {
        self.z
            .chunks(self.k)
            .map(|row| crate::linalg::dot(row, v))
            .collect()
    }

    fn submatrix(&self, idx: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                out.push(self.z[i * self.k + j]);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdReport {
    pub is_pd: bool,
    pub min_eig: f64,
}

/// Positive definiteness by Cholesky with a relative pivot threshold.
/// `min_eig` is the smallest eigenvalue for up to 512 points, otherwise
/// the smallest pivot.
pub fn check_positive_definite(space: &FiniteMetricSpace) -> PdReport {
    let z = space.similarity();
    let fact = Cholesky::factor(&z.z, z.k, PIVOT_THRESHOLD);
    let is_pd = fact.is_ok();
    let min_eig = if z.k == 0 {
        f64::INFINITY
    } else if z.k <= EIGEN_LIMIT {
        z.min_eigenvalue()
    } else {
        match fact {
            Ok(c) => c.min_pivot(),
            Err(f) => f.pivot,
        }
    };
    PdReport { is_pd, min_eig }
}

/// Weighting vector `w` with `Z w = 1`.
pub fn weighting(space: &FiniteMetricSpace) -> Result<Vec<f64>> {
    if space.is_empty() {
        return Ok(Vec::new());
    }
    let chol = space.similarity().factor()?;
    Ok(chol.solve(&vec![1.0; space.len()]))
}

/// `1ᵀ Z⁻¹ 1`; zero for the empty space.
pub fn magnitude(space: &FiniteMetricSpace) -> Result<f64> {
    Ok(pairwise_sum(&weighting(space)?))
}

/// Multiply every distance by `t > 0`.
pub fn scale_space(space: &FiniteMetricSpace, t: f64) -> Result<FiniteMetricSpace> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("scale factor must be positive and finite"));
    }
    Ok(FiniteMetricSpace {
        points: space.points.clone(),
        dist: space.dist.iter().map(|d| d * t).collect(),
        k: space.k,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityWeights {
    pub v: Vec<f64>,
    /// `vᵀ Z v`.
    pub objective: f64,
    /// `1 / objective`.
    pub d_max: f64,
    /// `max_{v_i > 0} (Zv)_i − min_j (Zv)_j`.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub certified: bool,
}

/// Minimize `vᵀ Z v` over the probability simplex.
///
/// A short projected-gradient run picks the initial support; an active-set
/// method on `min ½ uᵀZu − 1ᵀu, u ≥ 0` then finishes exactly, and
/// `v = u / Σu`. The result is certified when the KKT residual is at most
/// `tol`. Otherwise `Error::IterationLimit` carries the uncertified weights.
pub fn max_diversity(
    space: &FiniteMetricSpace,
    tol: f64,
    max_iter: usize,
) -> Result<DiversityWeights> {
    let k = space.len();
    if k == 0 {
        return Err(Error::invalid("maximum diversity of the empty space"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let z = space.similarity();

    let warm = projected_gradient(&z, max_iter.min(50));
    let mut passive: Vec<usize> = (0..k).filter(|&i| warm[i] > 1e-9).collect();
    let mut u = vec![0.0; k];
    if !passive.is_empty() {
        let s = solve_on(&z, &passive)?;
        if s.iter().all(|&x| x > 0.0) {
            for (&i, &x) in passive.iter().zip(&s) {
                u[i] = x;
            }
        } else {
            passive.clear();
        }
    }

    let mut iterations = 0;
    let mut limited = false;
    loop {
        let zu = z.mul(&u);
        let candidate = (0..k)
            .filter(|i| !passive.contains(i))
            .map(|i| (i, 1.0 - zu[i]))
            .fold(None, |acc: Option<(usize, f64)>, (i, g)| match acc {
                Some((_, best)) if best >= g => acc,
                _ => Some((i, g)),
            });
        let Some((j, gain)) = candidate else { break };
        if gain <= 1e-14 {
            break;
        }
        if iterations >= max_iter {
            limited = true;
            break;
        }
        iterations += 1;
        passive.push(j);
        passive.sort_unstable();
        loop {
            let s = solve_on(&z, &passive)?;
            if s.iter().all(|&x| x > 0.0) {
                for (&i, &x) in passive.iter().zip(&s) {
                    u[i] = x;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&i, &si) in passive.iter().zip(&s) {
                if si <= 0.0 {
                    alpha = alpha.min(u[i] / (u[i] - si));
                }
            }
            for (&i, &si) in passive.iter().zip(&s) {
                u[i] += alpha * (si - u[i]);
            }
            passive.retain(|&i| {
                if u[i] <= 1e-15 {
                    u[i] = 0.0;
                    false
                } else {
                    true
                }
            });
            if passive.is_empty() {
                break;
            }
        }
    }

    let total: f64 = u.iter().sum();
    let v: Vec<f64> = if total > 0.0 {
        u.iter().map(|x| x / total).collect()
    } else {
        warm
    };
    let zv = z.mul(&v);
    let objective = crate::linalg::dot(&v, &zv);
    let min_all = zv.iter().copied().fold(f64::INFINITY, f64::min);
    let max_support = v
        .iter()
        .zip(&zv)
        .filter(|(vi, _)| **vi > 0.0)
        .map(|(_, g)| *g)
        .fold(f64::NEG_INFINITY, f64::max);
    let kkt_residual = (max_support - min_all).max(0.0);
    let certified = !limited && kkt_residual <= tol;
    let weights = DiversityWeights {
        v,
        objective,
        d_max: 1.0 / objective,
        kkt_residual,
        iterations,
        certified,
    };
    if certified {
        Ok(weights)
    } else {
        Err(Error::IterationLimit {
            residual: kkt_residual,
            weights: Box::new(weights),
        })
    }
}

fn solve_on(z: &SimilarityMatrix, idx: &[usize]) -> Result<Vec<f64>> {
    let sub = z.submatrix(idx);
    let chol = Cholesky::factor(&sub, idx.len(), PIVOT_THRESHOLD).map_err(|f| {
        Error::NotPositiveDefinite {
            row: idx[f.row],
            pivot: f.pivot,
        }
    })?;
    Ok(chol.solve(&vec![1.0; idx.len()]))
}

fn projected_gradient(z: &SimilarityMatrix, iters: usize) -> Vec<f64> {
    let k = z.len();
    let mut v = vec![1.0 / k as f64; k];
    // Lipschitz constant of the gradient 2Zv
    let lip = 2.0
        * z.z
            .chunks(k)
            .map(|r| r.iter().sum::<f64>())
            .fold(0.0, f64::max);
    for _ in 0..iters {
        let g = z.mul(&v);
        let step: Vec<f64> = v
            .iter()
            .zip(&g)
            .map(|(vi, gi)| vi - 2.0 * gi / lip)
            .collect();
        v = project_simplex(&step);
    }
    v
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut s = y.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in s.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Intersection of a uniform axis grid over the body's bounding box with
/// the body. Axes of zero extent get a single coordinate; `k = 1` uses the
/// box midpoint.
pub fn grid_sample(body: &ConvexBody, k_per_side: usize) -> Result<Vec<Vec<f64>>> {
    if k_per_side == 0 {
        return Err(Error::invalid("k_per_side must be at least 1"));
    }
    let bb = body.bounding_box();
    let n = bb.dim();
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|d| {
            let (lo, hi) = (bb.lows()[d], bb.highs()[d]);
            if hi == lo {
                vec![lo]
            } else if k_per_side == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..k_per_side)
                    .map(|i| {
                        if i + 1 == k_per_side {
                            hi
                        } else {
                            lo + (hi - lo) * i as f64 / (k_per_side - 1) as f64
                        }
                    })
                    .collect()
            }
        })
        .collect();
    let oracle = body.membership()?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    'outer: loop {
        for d in 0..n {
            x[d] = axes[d][idx[d]];
        }
        if oracle.contains(&x) {
            out.push(x.clone());
        }
        for d in 0..n {
            if idx[d] + 1 < axes[d].len() {
                idx[d] += 1;
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    if out.is_empty() {
        return Err(Error::DegenerateBody(
            "no grid point lies on the body; refine the grid".into(),
        ));
    }
    Ok(out)
}
