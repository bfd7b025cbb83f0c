//! Convex bodies and volume machinery.
//!
//! Three representations cover everything the rest of the crate needs:
//! V-polytopes (vertex lists), centered-plus-offset symmetric zonotopes,
//! and axis-aligned boxes. Volumes are exact: products for boxes,
//! determinant enumeration for zonotopes, and hull triangulation for
//! V-polytopes in dimension at most four.

pub mod hull;
pub mod monte_carlo;
pub mod polygon;
pub mod zonotope;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;

pub use hull::Hull;
pub use monte_carlo::{polar_volume, volume_mc, McEstimate};
pub use zonotope::ZonotopeHrep;

/// Ambient dimension cap for exact V-polytope volumes.
pub const MAX_VPOLYTOPE_DIM: usize = 4;
/// Ambient dimension cap for boxes and zonotopes.
pub const MAX_EXACT_DIM: usize = 12;
/// Ambient dimension cap for lattice-point enumeration.
pub const MAX_LATTICE_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawBody", try_from = "RawBody")]
pub enum ConvexBody {
    VPolytope(VPolytope),
    Zonotope(Zonotope),
    AxisBox(AxisBox),
}

/// Convex hull of a nonempty finite point set.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    vertices: Vec<Vec<f64>>,
}

/// `center + Σ [−g_i, g_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    generators: Vec<Vec<f64>>,
    center: Vec<f64>,
}

/// `Π [lows_k, highs_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    lows: Vec<f64>,
    highs: Vec<f64>,
}

fn check_finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be finite")))
    }
}

impl VPolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices
            .first()
            .ok_or_else(|| Error::invalid("a V-polytope needs at least one vertex"))?
            .len();
        if n == 0 {
            return Err(Error::invalid("ambient dimension must be at least 1"));
        }
        for v in &vertices {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            check_finite(v, "vertices")?;
        }
        Ok(VPolytope { vertices })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }
}

impl Zonotope {
    /// Zonotope centered at the origin.
    pub fn new(generators: Vec<Vec<f64>>, dim: usize) -> Result<Self> {
        Self::with_center(generators, vec![0.0; dim])
    }

    pub fn with_center(generators: Vec<Vec<f64>>, center: Vec<f64>) -> Result<Self> {
        let n = center.len();
        if n == 0 {
            return Err(Error::invalid("ambient dimension must be at least 1"));
        }
        check_finite(&center, "center")?;
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
            check_finite(g, "generators")?;
            if g.iter().all(|&x| x == 0.0) {
                return Err(Error::invalid("zonotope generators must be nonzero"));
            }
        }
        Ok(Zonotope { generators, center })
    }

    /// Builds from possibly-zero images, dropping the zero generators.
    fn from_images(generators: Vec<Vec<f64>>, center: Vec<f64>) -> Self {
        let generators = generators
            .into_iter()
            .filter(|g| g.iter().any(|&x| x != 0.0))
            .collect();
        Zonotope { generators, center }
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_centered(&self) -> bool {
        self.center.iter().all(|&x| x == 0.0)
    }

    pub fn volume(&self) -> Result<f64> {
        zonotope::volume(&self.generators, self.dim())
    }

    /// Exact Euclidean mean width `V₁`: a segment of length `2|g|` per generator.
    pub fn euclidean_v1(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| 2.0 * crate::linalg::norm2(g))
            .sum()
    }

    /// `y ∈ Z°` for the centered zonotope.
    pub fn polar_contains(&self, y: &[f64]) -> bool {
        zonotope::polar_contains(&self.generators, y)
    }

    /// Vertices of the polar body; requires a centered, full-dimensional zonotope.
    pub fn polar_vertices(&self) -> Result<Vec<Vec<f64>>> {
        if !self.is_centered() {
            return Err(Error::invalid(
                "polar body requires a zonotope centered at the origin",
            ));
        }
        if self.volume()? <= 0.0 {
            return Err(Error::DegenerateBody(
                "zonotope is not full-dimensional, its polar is unbounded".into(),
            ));
        }
        Ok(zonotope::polar_vertices(&self.generators, self.dim()))
    }
}

impl AxisBox {
    pub fn new(lows: Vec<f64>, highs: Vec<f64>) -> Result<Self> {
        if lows.len() != highs.len() {
            return Err(Error::DimensionMismatch {
                expected: lows.len(),
                got: highs.len(),
            });
        }
        if lows.is_empty() {
            return Err(Error::invalid("ambient dimension must be at least 1"));
        }
        check_finite(&lows, "box bounds")?;
        check_finite(&highs, "box bounds")?;
        if lows.iter().zip(&highs).any(|(l, h)| l > h) {
            return Err(Error::invalid("box requires lows <= highs componentwise"));
        }
        Ok(AxisBox { lows, highs })
    }

    /// `[lo, hi]ⁿ`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn lows(&self) -> &[f64] {
        &self.lows
    }

    pub fn highs(&self) -> &[f64] {
        &self.highs
    }

    pub fn dim(&self) -> usize {
        self.lows.len()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.lows
            .iter()
            .zip(&self.highs)
            .map(|(l, h)| h - l)
            .collect()
    }

    pub fn volume(&self) -> f64 {
        self.lengths().iter().product()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter()
            .zip(self.lows.iter().zip(&self.highs))
            .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol)
    }

    pub fn to_zonotope(&self) -> Zonotope {
        let n = self.dim();
        let center = self
            .lows
            .iter()
            .zip(&self.highs)
            .map(|(l, h)| 0.5 * (l + h))
            .collect();
        let generators = (0..n)
            .map(|k| {
                let mut g = vec![0.0; n];
                g[k] = 0.5 * (self.highs[k] - self.lows[k]);
                g
            })
            .collect();
        Zonotope::from_images(generators, center)
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out: Vec<Vec<f64>> = (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            self.highs[k]
                        } else {
                            self.lows[k]
                        }
                    })
                    .collect()
            })
            .collect();
        out.dedup();
        out
    }
}

impl From<VPolytope> for ConvexBody {
    fn from(p: VPolytope) -> Self {
        ConvexBody::VPolytope(p)
    }
}

impl From<Zonotope> for ConvexBody {
    fn from(z: Zonotope) -> Self {
        ConvexBody::Zonotope(z)
    }
}

impl From<AxisBox> for ConvexBody {
    fn from(b: AxisBox) -> Self {
        ConvexBody::AxisBox(b)
    }
}

/// The matrix `A` of a linear map `Rⁿ → Rᵐ`, stored by rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionMatrix {
    rows: Vec<Vec<f64>>,
}

impl ProjectionMatrix {
    pub fn new(rows: Vec<Vec<f64>>, ambient: usize) -> Result<Self> {
        if rows.len() > ambient {
            return Err(Error::invalid(
                "projection has more rows than the ambient dimension",
            ));
        }
        for r in &rows {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: r.len(),
                });
            }
            check_finite(r, "projection rows")?;
        }
        Ok(ProjectionMatrix { rows })
    }

    /// Rows `e_{i_1}, …, e_{i_m}`.
    pub fn coordinate(indices: &[usize], ambient: usize) -> Result<Self> {
        let rows = indices
            .iter()
            .map(|&i| {
                if i >= ambient {
                    return Err(Error::invalid("coordinate index out of range"));
                }
                let mut r = vec![0.0; ambient];
                r[i] = 1.0;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, ambient)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    /// `Some(indices)` when every row is a distinct standard basis vector.
    fn as_coordinate_selection(&self) -> Option<Vec<usize>> {
        let mut seen = Vec::new();
        for r in &self.rows {
            let mut idx = None;
            for (k, &x) in r.iter().enumerate() {
                if x == 1.0 && idx.is_none() {
                    idx = Some(k);
                } else if x != 0.0 {
                    return None;
                }
            }
            let i = idx?;
            if seen.contains(&i) {
                return None;
            }
            seen.push(i);
        }
        Some(seen)
    }
}

/// A precomputed membership oracle for a body.
#[derive(Debug, Clone)]
pub enum Membership {
    AxisBox(AxisBox, f64),
    Zonotope(ZonotopeHrep),
    Polytope(Hull),
}

impl Membership {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Membership::AxisBox(b, tol) => b.contains(x, *tol),
            Membership::Zonotope(h) => h.contains(x),
            Membership::Polytope(h) => h.contains(x),
        }
    }
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::VPolytope(p) => p.dim(),
            ConvexBody::Zonotope(z) => z.dim(),
            ConvexBody::AxisBox(b) => b.dim(),
        }
    }

    /// A single point.
    pub fn point(x: Vec<f64>) -> Result<Self> {
        Ok(VPolytope::new(vec![x])?.into())
    }

    /// Exact volume; zero for lower-dimensional bodies.
    pub fn volume(&self) -> Result<f64> {
        match self {
            ConvexBody::AxisBox(b) => {
                cap(b.dim(), MAX_EXACT_DIM, "box dimension")?;
                Ok(b.volume())
            }
            ConvexBody::Zonotope(z) => {
                cap(z.dim(), MAX_EXACT_DIM, "zonotope dimension")?;
                z.volume()
            }
            ConvexBody::VPolytope(p) => {
                cap(p.dim(), MAX_VPOLYTOPE_DIM, "V-polytope dimension")?;
                Ok(Hull::new(p.vertices())?.volume())
            }
        }
    }

    pub fn membership(&self) -> Result<Membership> {
        Ok(match self {
            ConvexBody::AxisBox(b) => {
                let scale = 1.0
                    + b.lows
                        .iter()
                        .chain(&b.highs)
                        .map(|x| x.abs())
                        .fold(0.0, f64::max);
                Membership::AxisBox(b.clone(), 1e-10 * scale)
            }
            ConvexBody::Zonotope(z) => {
                if z.generators.len() > zonotope::MAX_GENERATORS {
                    return Err(Error::DimensionCap {
                        what: "zonotope generators",
                        got: z.generators.len(),
                        limit: zonotope::MAX_GENERATORS,
                    });
                }
                Membership::Zonotope(ZonotopeHrep::new(&z.generators, &z.center))
            }
            ConvexBody::VPolytope(p) => Membership::Polytope(Hull::new(p.vertices())?),
        })
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.membership()?.contains(x))
    }

    pub fn bounding_box(&self) -> AxisBox {
        match self {
            ConvexBody::AxisBox(b) => b.clone(),
            ConvexBody::Zonotope(z) => {
                let n = z.dim();
                let reach: Vec<f64> = (0..n)
                    .map(|k| z.generators.iter().map(|g| g[k].abs()).sum())
                    .collect();
                AxisBox {
                    lows: (0..n).map(|k| z.center[k] - reach[k]).collect(),
                    highs: (0..n).map(|k| z.center[k] + reach[k]).collect(),
                }
            }
            ConvexBody::VPolytope(p) => {
                let n = p.dim();
                let mut lows = vec![f64::INFINITY; n];
                let mut highs = vec![f64::NEG_INFINITY; n];
                for v in p.vertices() {
                    for k in 0..n {
                        lows[k] = lows[k].min(v[k]);
                        highs[k] = highs[k].max(v[k]);
                    }
                }
                AxisBox { lows, highs }
            }
        }
    }

    /// A finite set whose convex hull is the body.
    pub fn vertex_candidates(&self) -> Result<Vec<Vec<f64>>> {
        match self {
            ConvexBody::VPolytope(p) => Ok(p.vertices.clone()),
            ConvexBody::AxisBox(b) => Ok(b.corners()),
            ConvexBody::Zonotope(z) => {
                if z.generators.len() > zonotope::MAX_GENERATORS {
                    return Err(Error::DimensionCap {
                        what: "zonotope generators",
                        got: z.generators.len(),
                        limit: zonotope::MAX_GENERATORS,
                    });
                }
                Ok(zonotope::corner_points(&z.generators, &z.center))
            }
        }
    }

    /// Linear image `A K`.
    pub fn project(&self, a: &ProjectionMatrix) -> Result<ConvexBody> {
        if let Some(r) = a.rows.first() {
            if r.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    got: r.len(),
                });
            }
        }
        if a.rows.is_empty() {
            return Err(Error::invalid("projection to dimension zero"));
        }
        Ok(match self {
            ConvexBody::VPolytope(p) => ConvexBody::VPolytope(VPolytope {
                vertices: p.vertices.iter().map(|v| a.apply(v)).collect(),
            }),
            ConvexBody::Zonotope(z) => ConvexBody::Zonotope(Zonotope::from_images(
                z.generators.iter().map(|g| a.apply(g)).collect(),
                a.apply(&z.center),
            )),
            ConvexBody::AxisBox(b) => match a.as_coordinate_selection() {
                Some(idx) => ConvexBody::AxisBox(AxisBox {
                    lows: idx.iter().map(|&i| b.lows[i]).collect(),
                    highs: idx.iter().map(|&i| b.highs[i]).collect(),
                }),
                None => ConvexBody::Zonotope(b.to_zonotope()).project(a)?,
            },
        })
    }

    /// `m`-dimensional volume of `A K` where `A` has `m` rows.
    pub fn projected_volume(&self, a: &ProjectionMatrix) -> Result<f64> {
        self.project(a)?.volume()
    }

    pub fn translate(&self, v: &[f64]) -> Result<ConvexBody> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let add = |x: &[f64]| -> Vec<f64> { x.iter().zip(v).map(|(a, b)| a + b).collect() };
        Ok(match self {
            ConvexBody::VPolytope(p) => ConvexBody::VPolytope(VPolytope {
                vertices: p.vertices.iter().map(|x| add(x)).collect(),
            }),
            ConvexBody::Zonotope(z) => ConvexBody::Zonotope(Zonotope {
                generators: z.generators.clone(),
                center: add(&z.center),
            }),
            ConvexBody::AxisBox(b) => ConvexBody::AxisBox(AxisBox {
                lows: add(&b.lows),
                highs: add(&b.highs),
            }),
        })
    }

    /// Dilation `t K` about the origin, `t ≥ 0`.
    pub fn scale(&self, t: f64) -> Result<ConvexBody> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(
                "scale factor must be finite and nonnegative",
            ));
        }
        let mul = |x: &[f64]| -> Vec<f64> { x.iter().map(|a| a * t).collect() };
        Ok(match self {
            ConvexBody::VPolytope(p) => ConvexBody::VPolytope(VPolytope {
                vertices: p.vertices.iter().map(|x| mul(x)).collect(),
            }),
            ConvexBody::Zonotope(z) => ConvexBody::Zonotope(Zonotope::from_images(
                z.generators.iter().map(|g| mul(g)).collect(),
                mul(&z.center),
            )),
            ConvexBody::AxisBox(b) => ConvexBody::AxisBox(AxisBox {
                lows: mul(&b.lows),
                highs: mul(&b.highs),
            }),
        })
    }

    /// Permute coordinates: output coordinate `k` is input coordinate `perm[k]`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<ConvexBody> {
        let a = ProjectionMatrix::coordinate(perm, self.dim())?;
        if a.as_coordinate_selection().map(|s| s.len()) != Some(self.dim()) {
            return Err(Error::invalid("not a permutation"));
        }
        self.project(&a)
    }

    /// Planar vertices in counter-clockwise order.
    pub fn polygon(&self) -> Result<Vec<[f64; 2]>> {
        if self.dim() != 2 {
            return Err(Error::DimensionCap {
                what: "planar polygon dimension",
                got: self.dim(),
                limit: 2,
            });
        }
        let pts: Vec<[f64; 2]> = self
            .vertex_candidates()?
            .iter()
            .map(|v| [v[0], v[1]])
            .collect();
        Ok(polygon::convex_hull(&pts))
    }
}

fn cap(got: usize, limit: usize, what: &'static str) -> Result<()> {
    if got > limit {
        Err(Error::DimensionCap { what, got, limit })
    } else {
        Ok(())
    }
}

/// Exact planar Minkowski sum `K + t[0,1]²` by edge merging.
pub fn minkowski_sum_cube(body: &ConvexBody, t: f64) -> Result<VPolytope> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid("cube side must be finite and nonnegative"));
    }
    let poly = body.polygon()?;
    let square = polygon::convex_hull(&[[0.0, 0.0], [t, 0.0], [t, t], [0.0, t]]);
    let sum = polygon::minkowski_sum(&poly, &square);
    VPolytope::new(sum.iter().map(|p| p.to_vec()).collect())
}

/// Exact `vol_n(K + t[0,1]ⁿ)` for `n ≤ 4`.
///
/// Boxes and zonotopes stay in closed form (the cube adds `n` generators);
/// V-polytopes go through the hull of vertex-plus-corner sums.
pub fn minkowski_cube_volume(body: &ConvexBody, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid("cube side must be finite and nonnegative"));
    }
    let n = body.dim();
    match body {
        ConvexBody::AxisBox(b) => {
            cap(n, MAX_EXACT_DIM, "box dimension")?;
            Ok(b.lengths().iter().map(|l| l + t).product())
        }
        ConvexBody::Zonotope(z) => {
            cap(n, MAX_EXACT_DIM, "zonotope dimension")?;
            let mut gens = z.generators.clone();
            if t > 0.0 {
                for k in 0..n {
                    let mut g = vec![0.0; n];
                    g[k] = 0.5 * t;
                    gens.push(g);
                }
            }
            zonotope::volume(&gens, n)
        }
        ConvexBody::VPolytope(p) => {
            cap(n, MAX_VPOLYTOPE_DIM, "V-polytope dimension")?;
            let corners = AxisBox::cube(n, 0.0, t)?.corners();
            let sums: Vec<Vec<f64>> = p
                .vertices
                .iter()
                .flat_map(|v| {
                    corners
                        .iter()
                        .map(move |c| v.iter().zip(c).map(|(a, b)| a + b).collect())
                })
                .collect();
            Ok(Hull::new(&sums)?.volume())
        }
    }
}

/// `#(K ∩ Zⁿ)` by enumerating the integer points of the bounding box.
pub fn lattice_points(body: &ConvexBody) -> Result<u64> {
    let n = body.dim();
    cap(n, MAX_LATTICE_DIM, "lattice enumeration dimension")?;
    let oracle = body.membership()?;
    let bb = body.bounding_box();
    let ranges: Vec<(i64, i64)> = bb
        .lows
        .iter()
        .zip(&bb.highs)
        .map(|(l, h)| ((l - 1e-9).ceil() as i64, (h + 1e-9).floor() as i64))
        .collect();
    if ranges.iter().any(|(a, b)| a > b) {
        return Ok(0);
    }
    let mut count = 0u64;
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut x = vec![0.0; n];
    'outer: loop {
        for k in 0..n {
            x[k] = cur[k] as f64;
        }
        if oracle.contains(&x) {
            count += 1;
        }
        for k in 0..n {
            if cur[k] < ranges[k].1 {
                cur[k] += 1;
                continue 'outer;
            }
            cur[k] = ranges[k].0;
        }
        break;
    }
    Ok(count)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawBody {
    Vpolytope {
        vertices: Vec<Vec<f64>>,
    },
    Zonotope {
        generators: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Box {
        lows: Vec<f64>,
        highs: Vec<f64>,
    },
}

impl TryFrom<RawBody> for ConvexBody {
    type Error = Error;

    fn try_from(raw: RawBody) -> Result<Self> {
        Ok(match raw {
            RawBody::Vpolytope { vertices } => VPolytope::new(vertices)?.into(),
            RawBody::Box { lows, highs } => AxisBox::new(lows, highs)?.into(),
            RawBody::Zonotope {
                generators,
                center,
                dim,
            } => {
                let n = center
                    .as_ref()
                    .map(|c| c.len())
                    .or(dim)
                    .or_else(|| generators.first().map(|g| g.len()))
                    .ok_or_else(|| {
                        Error::invalid("zonotope without generators needs a center or dim")
                    })?;
                Zonotope::with_center(generators, center.unwrap_or_else(|| vec![0.0; n]))?.into()
            }
        })
    }
}

impl From<ConvexBody> for RawBody {
    fn from(b: ConvexBody) -> Self {
        match b {
            ConvexBody::VPolytope(p) => RawBody::Vpolytope {
                vertices: p.vertices,
            },
            ConvexBody::AxisBox(b) => RawBody::Box {
                lows: b.lows,
                highs: b.highs,
            },
            ConvexBody::Zonotope(z) => {
                let centered = z.is_centered();
                let dim = z.dim();
                RawBody::Zonotope {
                    generators: z.generators,
                    center: if centered { None } else { Some(z.center) },
                    dim: if centered { Some(dim) } else { None },
                }
            }
        }
    }
}
