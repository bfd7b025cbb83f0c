//! Library results against independent oracles.

mod common;

use common::*;
use hypermag::bounds::{steiner_check, wright_f};
use hypermag::convex::{
    lattice_points, polar_volume, AxisBox, ConvexBody, Hull, ProjectionMatrix, VPolytope, Zonotope,
};
use hypermag::intrinsic::{
    box_l1_closed_form, euclidean_polygon, ht_intrinsic_volumes, l1_intrinsic_volumes, normalize,
    IntrinsicConstants,
};
use hypermag::measures::{euclidean_measure, random_measure};
use hypermag::{build_space, magnitude, max_diversity, NormSpec};
use rand::Rng;

#[test]
fn collinear_magnitude_is_a_tanh_sum() {
    let mut rng = rng(100);
    for _ in 0..20 {
        let k = rng.random_range(2..40);
        let mut xs: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..5.0)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = 1.0
            + xs.windows(2)
                .map(|w| ((w[1] - w[0]) / 2.0).tanh())
                .sum::<f64>();
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let got = magnitude(&build_space(&pts, &NormSpec::l1()).unwrap()).unwrap();
        assert!(rel_close(got, expect, 1e-10), "{got} vs {expect}");
    }
}

#[test]
fn l1_grids_factorize() {
    for k in [2, 5, 9] {
        let h = 0.3;
        let pts: Vec<Vec<f64>> = (0..k * k)
            .map(|i| vec![(i / k) as f64 * h, (i % k) as f64 * h])
            .collect();
        let line = 1.0 + (k - 1) as f64 * (h / 2.0).tanh();
        let got = magnitude(&build_space(&pts, &NormSpec::l1()).unwrap()).unwrap();
        assert!((got - line * line).abs() < 1e-9);
    }
}

/// `min vᵀZv` over a grid on the simplex.
fn simplex_grid_min(z: &[Vec<f64>], steps: usize) -> f64 {
    let k = z.len();
    let q = |v: &[f64]| -> f64 {
        (0..k)
            .map(|i| (0..k).map(|j| v[i] * z[i][j] * v[j]).sum::<f64>())
            .sum()
    };
    let mut best = f64::INFINITY;
    match k {
        2 => {
            for a in 0..=steps {
                let p = a as f64 / steps as f64;
                best = best.min(q(&[p, 1.0 - p]));
            }
        }
        3 => {
            for a in 0..=steps {
                for b in 0..=steps - a {
                    let (p, r) = (a as f64 / steps as f64, b as f64 / steps as f64);
                    best = best.min(q(&[p, r, 1.0 - p - r]));
                }
            }
        }
        _ => unreachable!(),
    }
    best
}

#[test]
fn two_point_diversity_matches_grid_search() {
    for d in [0.05, 0.4, 1.0, 3.0] {
        let s = build_space(&[vec![0.0], vec![d]], &NormSpec::l1()).unwrap();
        let w = max_diversity(&s, 1e-12, 100).unwrap();
        let z = vec![vec![1.0, (-d).exp()], vec![(-d).exp(), 1.0]];
        let grid = simplex_grid_min(&z, 10_000);
        assert!(w.objective <= grid + 1e-15);
        assert!(grid - w.objective < 1e-8);
        assert!((w.d_max - 2.0 / (1.0 + (-d).exp())).abs() < 1e-12);
    }
}

#[test]
fn three_point_diversity_matches_grid_search() {
    let mut rng = rng(101);
    for trial in 0..30 {
        let spread = if trial % 2 == 0 { 0.1 } else { 2.0 };
        let pts: Vec<Vec<f64>> = (0..3)
            .map(|_| vec![rng.random_range(0.0..spread), rng.random_range(0.0..spread)])
            .collect();
        let s = build_space(&pts, &NormSpec::l2()).unwrap();
        let w = max_diversity(&s, 1e-10, 100).unwrap();
        let z: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| (-s.dist(i, j)).exp()).collect())
            .collect();
        let grid = simplex_grid_min(&z, 1000);
        assert!(w.objective <= grid + 1e-12, "{} vs {grid}", w.objective);
        assert!(grid - w.objective < 1e-5);
    }
}

/// Clip a convex polygon by `⟨a, y⟩ ≤ 1`.
fn clip(poly: &[[f64; 2]], a: [f64; 2]) -> Vec<[f64; 2]> {
    let f = |p: [f64; 2]| a[0] * p[0] + a[1] * p[1] - 1.0;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0) != (fq < 0.0) && fp != fq {
            let s = fp / (fp - fq);
            out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    out
}

fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1])
        .sum::<f64>()
        .abs()
}

#[test]
fn planar_polar_matches_half_plane_clipping() {
    let mut rng = rng(102);
    for _ in 0..10 {
        let z = random_zonotope(&mut rng, 2, true);
        // Z° = {y : ⟨y, Σ s_i g_i⟩ ≤ 1 for every sign vector s}
        let mut poly = vec![[-1e3, -1e3], [1e3, -1e3], [1e3, 1e3], [-1e3, 1e3]];
        let g = z.generators();
        for mask in 0..(1u32 << g.len()) {
            let mut a = [0.0, 0.0];
            for (i, gi) in g.iter().enumerate() {
                let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                a[0] += s * gi[0];
                a[1] += s * gi[1];
            }
            poly = clip(&poly, a);
        }
        let oracle = shoelace(&poly);
        let exact = Hull::new(&z.polar_vertices().unwrap()).unwrap().volume();
        assert!(rel_close(exact, oracle, 1e-10), "{exact} vs {oracle}");
        let mc = polar_volume(&z, 200_000, 7, 4).unwrap();
        assert!(
            (mc.value - oracle).abs() < 4.0 * mc.std_err,
            "{mc:?} vs {oracle}"
        );
    }
}

#[test]
fn zonotope_volume_matches_corner_hull() {
    let mut rng = rng(103);
    for n in 2..=4 {
        for _ in 0..5 {
            let z = random_zonotope(&mut rng, n, false);
            let body: ConvexBody = z.clone().into();
            let hull = Hull::new(&body.vertex_candidates().unwrap())
                .unwrap()
                .volume();
            assert!(rel_close(z.volume().unwrap(), hull, 1e-9));
        }
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// Holmes–Thompson volumes from ordered tuples with repetition.
fn ht_by_ordered_tuples(body: &ConvexBody, atoms: &[hypermag::Atom]) -> Vec<f64> {
    let n = body.dim();
    let mut out = vec![1.0];
    for m in 1..=n {
        let count = atoms.len().pow(m as u32);
        let mut sum = 0.0;
        for code in 0..count {
            let mut c = code;
            let mut rows = Vec::new();
            let mut w = 1.0;
            for _ in 0..m {
                let a = &atoms[c % atoms.len()];
                c /= atoms.len();
                rows.push(a.dir.clone());
                w *= a.w;
            }
            sum += w * body
                .projected_volume(&ProjectionMatrix::new(rows, n).unwrap())
                .unwrap();
        }
        out.push(2f64.powi(m as i32) / factorial(m) * sum);
    }
    out
}

#[test]
fn holmes_thompson_matches_ordered_tuple_sum() {
    let mut rng = rng(104);
    for trial in 0..12 {
        let n = 2 + trial % 2;
        let body = random_body(&mut rng, n, trial);
        let m = random_measure(n, rng.random_range(n..=5), trial as u64).unwrap();
        let fast = ht_intrinsic_volumes(&body, &m).unwrap().values;
        let slow = ht_by_ordered_tuples(&body, m.atoms());
        for (a, b) in fast.iter().zip(&slow) {
            assert!(
                (a - b).abs() <= 1e-9 * (1.0 + b.abs()),
                "{fast:?} vs {slow:?}"
            );
        }
    }
}

#[test]
fn box_projection_volumes_match_closed_form() {
    let mut rng = rng(105);
    for n in 1..=4 {
        let b = random_box(&mut rng, n);
        let direct = l1_intrinsic_volumes(&b.clone().into()).unwrap().values;
        let closed = box_l1_closed_form(&b.lengths()).unwrap().values;
        for (x, y) in direct.iter().zip(&closed) {
            assert!(rel_close(*x, *y, 1e-12));
        }
    }
}

#[test]
fn discretized_euclidean_measure_recovers_classical_volumes() {
    let mut rng = rng(106);
    let constants = IntrinsicConstants::new(2);
    for _ in 0..5 {
        let poly: ConvexBody = random_polygon(&mut rng).into();
        let classical = euclidean_polygon(&poly).unwrap().values;
        let mu = ht_intrinsic_volumes(&poly, &euclidean_measure(2, 180).unwrap()).unwrap();
        let v = normalize(&mu, &constants).unwrap().values;
        assert!((v[1] - classical[1]).abs() < 0.005 * classical[1]);
        assert!((v[2] - classical[2]).abs() < 0.01 * classical[2]);
    }
    // classical V₁ of a box is the sum of its edge lengths
    let b: ConvexBody = AxisBox::new(vec![0.0; 3], vec![1.0, 2.0, 0.5])
        .unwrap()
        .into();
    let m = euclidean_measure(3, 150).unwrap();
    let v = normalize(
        &ht_intrinsic_volumes(&b, &m).unwrap(),
        &IntrinsicConstants::new(3),
    )
    .unwrap();
    assert!((v.values[1] - 3.5).abs() < 0.02 * 3.5, "{:?}", v.values);
}

#[test]
fn series_matches_rational_oracle() {
    // independently computed to 60 digits
    let frozen = [
        (0.5, 1.706_245_713_726_511_5),
        (1.0, 2.777_345_100_500_995_7),
        (5.0, 61.154_177_077_496_366),
        (20.0, 169_655.540_667_093_7),
    ];
    for (x, f) in frozen {
        let got = wright_f(x, 400).unwrap().value;
        assert!(rel_close(got, f, 1e-13), "{x}: {got} vs {f}");
    }
    for (num, den) in [(1, 10), (3, 2), (7, 1), (40, 1)] {
        let x = num as f64 / den as f64;
        let oracle = wright_oracle(num, den, 160);
        assert!(
            rel_close(wright_f(x, 400).unwrap().value, oracle, 1e-12),
            "{x}"
        );
    }
}

#[test]
fn steiner_extension_in_three_and_four_dimensions() {
    let mut rng = rng(107);
    for n in [3, 4] {
        for kind in 0..3 {
            let body = random_body(&mut rng, n, kind);
            let r = steiner_check(&body, &[0.3, 1.0, 2.5]).unwrap();
            assert!(r.max_rel_dev < 1e-9, "{n}: {r:?}");
        }
    }
}

#[test]
fn lattice_count_matches_inequalities() {
    for s in 1..8 {
        let tri: ConvexBody = VPolytope::new(vec![
            vec![0.0, 0.0],
            vec![s as f64, 0.0],
            vec![0.0, s as f64],
        ])
        .unwrap()
        .into();
        // points with x, y ≥ 0 and x + y ≤ s
        let expect = (s + 1) * (s + 2) / 2;
        assert_eq!(lattice_points(&tri).unwrap(), expect as u64);
    }
    let z: ConvexBody = Zonotope::new(vec![vec![1.0, 1.0], vec![1.0, -1.0]], 2)
        .unwrap()
        .into();
    // |x| + |y| ≤ 2
    assert_eq!(lattice_points(&z).unwrap(), 13);
}
