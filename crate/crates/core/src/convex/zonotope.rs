//! Zonotope geometry: determinant-subset volumes, facet normals,
//! half-space membership, and the polar body.
//!
//! A symmetric zonotope `c + Σ [−g_i, g_i]` has support function
//! `h(u) = ⟨c, u⟩ + Σ |⟨g_i, u⟩|`. Its facets are normal to the
//! hyperplanes spanned by `(n−1)`-subsets of generators.

use crate::error::{Error, Result};
use crate::linalg::{
    combinations, cross_normal, det_rows, dot, norm2, orthonormal_basis, pairwise_sum,
};

/// Cap on the number of generators for exact determinant enumeration.
pub const MAX_GENERATORS: usize = 12;

/// `vol(Σ [−g_i, g_i]) = 2ⁿ Σ_{|S| = n} |det g_S|`.
pub fn volume(generators: &[Vec<f64>], dim: usize) -> Result<f64> {
    if generators.len() > MAX_GENERATORS {
        return Err(Error::DimensionCap {
            what: "zonotope generators",
            got: generators.len(),
            limit: MAX_GENERATORS,
        });
    }
    if generators.len() < dim {
        return Ok(0.0);
    }
    let terms: Vec<f64> = combinations(generators.len(), dim)
        .map(|s| {
            let rows: Vec<&[f64]> = s.iter().map(|&i| generators[i].as_slice()).collect();
            det_rows(&rows).abs()
        })
        .collect();
    Ok(2f64.powi(dim as i32) * pairwise_sum(&terms))
}

/// `Σ |⟨g_i, u⟩|`, the support function of the centered zonotope.
pub fn support(generators: &[Vec<f64>], u: &[f64]) -> f64 {
    generators.iter().map(|g| dot(g, u).abs()).sum()
}

/// Unit normals of the facets of a full-dimensional zonotope, one per
/// antipodal pair, deduplicated.
pub fn facet_normals(generators: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let scale = generators
        .iter()
        .map(|g| norm2(g))
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut out: Vec<Vec<f64>> = Vec::new();
    if dim == 0 {
        return out;
    }
    for s in combinations(generators.len(), dim - 1) {
        let rows: Vec<&[f64]> = s.iter().map(|&i| generators[i].as_slice()).collect();
        let mut u = cross_normal(&rows, dim);
        let len = norm2(&u);
        if len <= 1e-12 * scale.powi(dim as i32 - 1) {
            continue;
        }
        u.iter_mut().for_each(|x| *x /= len);
        // canonical sign: first clearly nonzero coordinate positive
        if let Some(first) = u.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
        }
        if !out
            .iter()
            .any(|v| v.iter().zip(&u).all(|(a, b)| (a - b).abs() < 1e-12))
        {
            out.push(u);
        }
    }
    out
}

/// Exact half-space description of a zonotope, usable in any dimension
/// and for lower-dimensional zonotopes (through an orthonormal frame of
/// the generator span).
#[derive(Debug, Clone)]
pub struct ZonotopeHrep {
    center: Vec<f64>,
    basis: Vec<Vec<f64>>,
    full: bool,
    normals: Vec<Vec<f64>>,
    bounds: Vec<f64>,
    tol: f64,
}

impl ZonotopeHrep {
    pub fn new(generators: &[Vec<f64>], center: &[f64]) -> Self {
        let dim = center.len();
        let scale = 1.0
            + generators.iter().map(|g| norm2(g)).sum::<f64>()
            + center.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let tol = 1e-10 * scale;
        let basis = orthonormal_basis(generators, 1e-12 * scale);
        let r = basis.len();
        let full = r == dim;
        let local: Vec<Vec<f64>> = if full {
            generators.to_vec()
        } else {
            generators
                .iter()
                .map(|g| basis.iter().map(|b| dot(b, g)).collect())
                .collect()
        };
        let normals = if r == 0 {
            Vec::new()
        } else {
            facet_normals(&local, r)
        };
        let bounds = normals.iter().map(|u| support(&local, u)).collect();
        ZonotopeHrep {
            center: center.to_vec(),
            basis,
            full,
            normals,
            bounds,
            tol,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let local = if self.full {
            d
        } else {
            let c: Vec<f64> = self.basis.iter().map(|b| dot(b, &d)).collect();
            let mut resid = d;
            for (ci, b) in c.iter().zip(&self.basis) {
                resid.iter_mut().zip(b).for_each(|(r, bj)| *r -= ci * bj);
            }
            if norm2(&resid) > self.tol {
                return false;
            }
            c
        };
        self.normals
            .iter()
            .zip(&self.bounds)
            .all(|(u, b)| dot(u, &local).abs() <= b + self.tol)
    }
}

/// `y ∈ Z°` for the centered zonotope: `Σ |⟨y, g_i⟩| ≤ 1`.
pub fn polar_contains(generators: &[Vec<f64>], y: &[f64]) -> bool {
    support(generators, y) <= 1.0
}

/// Vertices of the polar of a full-dimensional centered zonotope: the
/// points `±u / h(u)` over facet normals `u`.
pub fn polar_vertices(generators: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for u in facet_normals(generators, dim) {
        let h = support(generators, &u);
        let v: Vec<f64> = u.iter().map(|x| x / h).collect();
        out.push(v.iter().map(|x| -x).collect());
        out.push(v);
    }
    out
}

/// All sign sums `c + Σ ±g_i`; a superset of the vertices.
pub fn corner_points(generators: &[Vec<f64>], center: &[f64]) -> Vec<Vec<f64>> {
    let k = generators.len();
    (0..1usize << k)
        .map(|mask| {
            let mut p = center.to_vec();
            for (i, g) in generators.iter().enumerate() {
                let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                p.iter_mut().zip(g).for_each(|(x, y)| *x += s * y);
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_hexagon_volumes() {
        let sq = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(volume(&sq, 2).unwrap(), 4.0);
        let hex = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(volume(&hex, 2).unwrap(), 12.0);
    }

    #[test]
    fn too_many_generators_is_capped() {
        let g: Vec<Vec<f64>> = (0..13).map(|i| vec![1.0, i as f64]).collect();
        assert!(matches!(volume(&g, 2), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn membership_matches_definition() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let h = ZonotopeHrep::new(&g, &[0.0, 0.0]);
        assert!(h.contains(&[2.0, 2.0]));
        assert!(h.contains(&[2.0, 0.0]));
        assert!(!h.contains(&[2.0, -0.1]));
        assert!(!h.contains(&[-2.0, 2.0]));
        assert!(h.contains(&[0.0, 0.0]));
    }

    #[test]
    fn flat_zonotope_membership() {
        let g = vec![vec![1.0, 1.0, 0.0]];
        let h = ZonotopeHrep::new(&g, &[0.0, 0.0, 1.0]);
        assert!(h.contains(&[0.5, 0.5, 1.0]));
        assert!(!h.contains(&[1.5, 1.5, 1.0]));
        assert!(!h.contains(&[0.5, 0.5, 1.1]));
    }

    #[test]
    fn polar_of_cube_is_cross_polytope() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(polar_contains(&g, &[0.5, 0.4]));
        assert!(!polar_contains(&g, &[0.6, 0.6]));
        let verts = polar_vertices(&g, 2);
        assert_eq!(verts.len(), 4);
        for v in verts {
            assert!((v[0].abs() + v[1].abs() - 1.0).abs() < 1e-15);
        }
    }
}
