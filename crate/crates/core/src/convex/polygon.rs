//! Planar convex polygons: hulls, areas, membership, Minkowski sums.

/// Convex hull by Andrew's monotone chain. Returns vertices in
/// counter-clockwise order without collinear points. Degenerate inputs
/// yield one or two points.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[inline]
pub fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Shoelace area of a counter-clockwise polygon.
pub fn area(poly: &[[f64; 2]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

pub fn perimeter(poly: &[[f64; 2]]) -> f64 {
    match poly.len() {
        0 | 1 => 0.0,
        2 => 2.0 * ((poly[1][0] - poly[0][0]).hypot(poly[1][1] - poly[0][1])),
        n => (0..n)
            .map(|i| {
                let a = poly[i];
                let b = poly[(i + 1) % n];
                (b[0] - a[0]).hypot(b[1] - a[1])
            })
            .sum(),
    }
}

/// Point-in-convex-polygon test with absolute slack `tol`.
pub fn contains(poly: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => (p[0] - poly[0][0]).hypot(p[1] - poly[0][1]) <= tol,
        2 => {
            let (a, b) = (poly[0], poly[1]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (len * len);
            let t = t.clamp(0.0, 1.0);
            let q = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            (p[0] - q[0]).hypot(p[1] - q[1]) <= tol
        }
        n => (0..n).all(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            cross(a, b, p) >= -tol * len
        }),
    }
}

/// Minkowski sum of two convex polygons by merging their edge sequences
/// in angular order. Inputs with fewer than three vertices go through the
/// hull of pairwise sums instead.
pub fn minkowski_sum(p: &[[f64; 2]], q: &[[f64; 2]]) -> Vec<[f64; 2]> {
    if p.len() < 3 || q.len() < 3 {
        let sums: Vec<[f64; 2]> = p
            .iter()
            .flat_map(|a| q.iter().map(move |b| [a[0] + b[0], a[1] + b[1]]))
            .collect();
        return convex_hull(&sums);
    }
    let p = rotate_to_bottom(p);
    let q = rotate_to_bottom(q);
    let (np, nq) = (p.len(), q.len());
    let mut out = Vec::with_capacity(np + nq);
    let (mut i, mut j) = (0usize, 0usize);
    while i < np || j < nq {
        out.push([p[i % np][0] + q[j % nq][0], p[i % np][1] + q[j % nq][1]]);
        let ep = sub(p[(i + 1) % np], p[i % np]);
        let eq = sub(q[(j + 1) % nq], q[j % nq]);
        let c = ep[0] * eq[1] - ep[1] * eq[0];
        if i >= np {
            j += 1;
        } else if j >= nq {
            i += 1;
        } else {
            if c >= 0.0 {
                i += 1;
            }
            if c <= 0.0 {
                j += 1;
            }
        }
    }
    out
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn rotate_to_bottom(poly: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let start = (0..poly.len())
        .min_by(|&a, &b| {
            (poly[a][1], poly[a][0])
                .partial_cmp(&(poly[b][1], poly[b][0]))
                .unwrap()
        })
        .unwrap_or(0);
    poly[start..]
        .iter()
        .chain(&poly[..start])
        .copied()
        .collect()
}
