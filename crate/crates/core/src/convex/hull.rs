//! Convex hulls of point sets in ambient dimension up to four.
//!
//! Points are first reduced to their affine hull. Inside that hull the
//! shape is a point, an interval, a counter-clockwise polygon, or a
//! simplicial polytope built by beneath–beyond insertion.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{cross_normal, det_in_place, dot, norm2, orthonormal_basis};

use super::polygon;

/// Largest intrinsic dimension the hull engine handles.
pub const MAX_HULL_DIM: usize = 4;

const REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Hull {
    ambient: usize,
    /// Affine frame; `None` means the hull is full-dimensional and uses the
    /// ambient coordinates unchanged.
    frame: Option<Frame>,
    shape: Shape,
    tol: f64,
}

#[derive(Debug, Clone)]
struct Frame {
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
enum Shape {
    Point,
    Interval(f64, f64),
    Polygon(Vec<[f64; 2]>),
    Simplicial(SimplicialHull),
}

impl Hull {
    pub fn new(points: &[Vec<f64>]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("hull of an empty point set"))?;
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::invalid("hull points have mixed dimensions"));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("hull points must be finite"));
        }
        let diffs: Vec<Vec<f64>> = points
            .iter()
            .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
            .collect();
        let extent = diffs.iter().map(|d| norm2(d)).fold(0.0, f64::max);
        let scale = 1.0 + extent + first.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let tol = REL_TOL * scale;
        let basis = orthonormal_basis(&diffs, tol);
        let r = basis.len();
        if r > MAX_HULL_DIM {
            return Err(Error::DimensionCap {
                what: "convex hull dimension",
                got: r,
                limit: MAX_HULL_DIM,
            });
        }
        let (frame, coords): (Option<Frame>, Vec<Vec<f64>>) = if r == ambient {
            (None, points.to_vec())
        } else {
            let coords = diffs
                .iter()
                .map(|d| basis.iter().map(|b| dot(b, d)).collect())
                .collect();
            (
                Some(Frame {
                    origin: first.clone(),
                    basis,
                }),
                coords,
            )
        };
        let shape = match r {
            0 => Shape::Point,
            1 => {
                let (lo, hi) = coords
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                        (lo.min(c[0]), hi.max(c[0]))
                    });
                Shape::Interval(lo, hi)
            }
            2 => {
                let pts: Vec<[f64; 2]> = coords.iter().map(|c| [c[0], c[1]]).collect();
                Shape::Polygon(polygon::convex_hull(&pts))
            }
            _ => Shape::Simplicial(SimplicialHull::build(coords, r, tol)?),
        };
        Ok(Hull {
            ambient,
            frame,
            shape,
            tol,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        match &self.shape {
            Shape::Point => 0,
            Shape::Interval(..) => 1,
            Shape::Polygon(_) => 2,
            Shape::Simplicial(s) => s.dim,
        }
    }

    /// Volume in the ambient space; zero for lower-dimensional hulls.
    pub fn volume(&self) -> f64 {
        if self.affine_dim() < self.ambient {
            return 0.0;
        }
        self.intrinsic_volume()
    }

    /// Volume measured inside the affine hull (a point has measure 1).
    pub fn intrinsic_volume(&self) -> f64 {
        match &self.shape {
            Shape::Point => 1.0,
            Shape::Interval(lo, hi) => hi - lo,
            Shape::Polygon(p) => polygon::area(p),
            Shape::Simplicial(s) => s.volume(),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_with_tol(x, self.tol)
    }

    pub fn contains_with_tol(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.ambient {
            return false;
        }
        let local: Vec<f64> = match &self.frame {
            None => x.to_vec(),
            Some(f) => {
                let d: Vec<f64> = x.iter().zip(&f.origin).map(|(a, b)| a - b).collect();
                let c: Vec<f64> = f.basis.iter().map(|b| dot(b, &d)).collect();
                let mut resid = d;
                for (ci, b) in c.iter().zip(&f.basis) {
                    for (r, bj) in resid.iter_mut().zip(b) {
                        *r -= ci * bj;
                    }
                }
                if norm2(&resid) > tol {
                    return false;
                }
                c
            }
        };
        match &self.shape {
            Shape::Point => true,
            Shape::Interval(lo, hi) => local[0] >= lo - tol && local[0] <= hi + tol,
            Shape::Polygon(p) => polygon::contains(p, [local[0], local[1]], tol),
            Shape::Simplicial(s) => s.contains(&local, tol),
        }
    }

    /// Number of boundary facets of a full-dimensional simplicial hull.
    pub fn facet_count(&self) -> usize {
        match &self.shape {
            Shape::Simplicial(s) => s.facets.len(),
            Shape::Polygon(p) => p.len(),
            Shape::Interval(..) => 2,
            Shape::Point => 0,
        }
    }
}

#[derive(Debug, Clone)]
struct Facet {
    verts: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

#[derive(Debug, Clone)]
struct SimplicialHull {
    dim: usize,
    pts: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    interior: Vec<f64>,
}

impl SimplicialHull {
    fn build(mut pts: Vec<Vec<f64>>, dim: usize, tol: f64) -> Result<Self> {
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        pts.dedup_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .all(|(x, y)| (x - y).abs() <= tol * 1e-2)
        });

        let simplex = initial_simplex(&pts, dim, tol)?;
        let mut interior = vec![0.0; dim];
        for &i in &simplex {
            for (c, x) in interior.iter_mut().zip(&pts[i]) {
                *c += x / (dim + 1) as f64;
            }
        }
        let mut hull = SimplicialHull {
            dim,
            pts,
            facets: Vec::new(),
            interior,
        };
        for skip in 0..=dim {
            let verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, &i)| i)
                .collect();
            let f = hull.make_facet(verts);
            hull.facets.push(f);
        }

        let in_simplex: Vec<bool> = {
            let mut v = vec![false; hull.pts.len()];
            for &i in &simplex {
                v[i] = true;
            }
            v
        };
        // Insert far points first so most of the rest are discarded as interior.
        let mut order: Vec<usize> = (0..hull.pts.len()).filter(|&i| !in_simplex[i]).collect();
        let dist: Vec<f64> = hull
            .pts
            .iter()
            .map(|p| {
                norm2(
                    &p.iter()
                        .zip(&hull.interior)
                        .map(|(a, b)| a - b)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        order.sort_by(|&a, &b| dist[b].partial_cmp(&dist[a]).unwrap().then(a.cmp(&b)));

        for p in order {
            hull.insert(p, tol);
        }
        Ok(hull)
    }

    fn make_facet(&self, verts: Vec<usize>) -> Facet {
        let base = &self.pts[verts[0]];
        let edges: Vec<Vec<f64>> = verts[1..]
            .iter()
            .map(|&i| self.pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let refs: Vec<&[f64]> = edges.iter().map(|e| e.as_slice()).collect();
        let mut normal = cross_normal(&refs, self.dim);
        let len = norm2(&normal);
        if len > 0.0 {
            normal.iter_mut().for_each(|x| *x /= len);
        }
        let mut offset = dot(&normal, base);
        if dot(&normal, &self.interior) > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Facet {
            verts,
            normal,
            offset,
        }
    }

    fn insert(&mut self, p: usize, tol: f64) {
        let point = &self.pts[p];
        let visible: Vec<bool> = self
            .facets
            .iter()
            .map(|f| dot(&f.normal, point) - f.offset > tol)
            .collect();
        if !visible.iter().any(|&v| v) {
            return;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut ridge_order: Vec<Vec<usize>> = Vec::new();
        for (f, _) in self.facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..f.verts.len() {
                let mut r: Vec<usize> = f
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                r.sort_unstable();
                let e = ridges.entry(r.clone()).or_insert(0);
                if *e == 0 {
                    ridge_order.push(r);
                }
                *e += 1;
            }
        }
        let mut kept: Vec<Facet> = self
            .facets
            .drain(..)
            .zip(visible)
            .filter(|(_, v)| !v)
            .map(|(f, _)| f)
            .collect();
        for r in ridge_order {
            if ridges[&r] == 1 {
                let mut verts = r;
                verts.push(p);
                kept.push(self.make_facet(verts));
            }
        }
        self.facets = kept;
    }

    fn volume(&self) -> f64 {
        let d = self.dim;
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        let mut m = vec![0.0; d * d];
        let mut total = 0.0;
        for f in &self.facets {
            for (r, &vi) in f.verts.iter().enumerate() {
                for c in 0..d {
                    m[r * d + c] = self.pts[vi][c] - self.interior[c];
                }
            }
            total += det_in_place(&mut m, d).abs();
        }
        total / fact
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets
            .iter()
            .all(|f| dot(&f.normal, x) - f.offset <= tol)
    }
}

fn initial_simplex(pts: &[Vec<f64>], dim: usize, tol: f64) -> Result<Vec<usize>> {
    let i0 = (0..pts.len())
        .min_by(|&a, &b| pts[a][0].partial_cmp(&pts[b][0]).unwrap())
        .ok_or_else(|| Error::invalid("empty hull input"))?;
    let mut chosen = vec![i0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < dim + 1 {
        let mut best = (usize::MAX, 0.0);
        for (i, p) in pts.iter().enumerate() {
            let mut r: Vec<f64> = p.iter().zip(&pts[i0]).map(|(a, b)| a - b).collect();
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let l = norm2(&r);
            if l > best.1 {
                best = (i, l);
            }
        }
        if best.0 == usize::MAX || best.1 <= tol {
            return Err(Error::DegenerateBody(
                "point set lost dimension during hull construction".into(),
            ));
        }
        let mut r: Vec<f64> = pts[best.0]
            .iter()
            .zip(&pts[i0])
            .map(|(a, b)| a - b)
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let l = norm2(&r);
        basis.push(r.into_iter().map(|x| x / l).collect());
        chosen.push(best.0);
    }
    Ok(chosen)
}
