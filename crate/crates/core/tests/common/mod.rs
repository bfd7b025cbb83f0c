//! Random bodies, measures and point sets shared by the integration tests.

#![allow(dead_code)]

use hypermag::convex::{AxisBox, ConvexBody, VPolytope, Zonotope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_vec<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_zonotope<R: Rng>(rng: &mut R, n: usize, centered: bool) -> Zonotope {
    let count = rng.random_range(n..=n + 3);
    let gens: Vec<Vec<f64>> = (0..count).map(|_| uniform_vec(rng, n, -1.0, 1.0)).collect();
    if centered {
        Zonotope::new(gens, n).unwrap()
    } else {
        Zonotope::with_center(gens, uniform_vec(rng, n, -1.0, 1.0)).unwrap()
    }
}

pub fn random_box<R: Rng>(rng: &mut R, n: usize) -> AxisBox {
    let lows = uniform_vec(rng, n, -1.0, 1.0);
    let highs = lows
        .iter()
        .map(|l| l + rng.random_range(0.2..2.0))
        .collect();
    AxisBox::new(lows, highs).unwrap()
}

pub fn random_polytope<R: Rng>(rng: &mut R, n: usize) -> VPolytope {
    let count = rng.random_range(n + 1..=n + 8);
    VPolytope::new((0..count).map(|_| uniform_vec(rng, n, -1.0, 1.0)).collect()).unwrap()
}

/// One of the three representations, chosen by `kind % 3`.
pub fn random_body<R: Rng>(rng: &mut R, n: usize, kind: usize) -> ConvexBody {
    match kind % 3 {
        0 => random_polytope(rng, n).into(),
        1 => random_zonotope(rng, n, false).into(),
        _ => random_box(rng, n).into(),
    }
}

/// Random point of a body by random convex combination of its vertex set.
pub fn random_point_in<R: Rng>(rng: &mut R, body: &ConvexBody) -> Vec<f64> {
    let verts = body.vertex_candidates().unwrap();
    let w: Vec<f64> = verts
        .iter()
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = w.iter().sum();
    let n = body.dim();
    let mut x = vec![0.0; n];
    for (v, wi) in verts.iter().zip(&w) {
        for k in 0..n {
            x[k] += v[k] * wi / total;
        }
    }
    x
}

/// Convex polygon from random points on a circle-ish ring.
pub fn random_polygon<R: Rng>(rng: &mut R) -> VPolytope {
    let count = rng.random_range(3..=12);
    let pts = (0..count)
        .map(|_| {
            let a = rng.random_range(0.0..std::f64::consts::TAU);
            let r = rng.random_range(0.5..2.0);
            vec![r * a.cos() + 0.3, r * a.sin() - 0.1]
        })
        .collect();
    VPolytope::new(pts).unwrap()
}

/// Random subset of `count` elements, order preserved.
pub fn subset<R: Rng, T: Clone>(rng: &mut R, items: &[T], count: usize) -> Vec<T> {
    let picked = rand::seq::index::sample(rng, items.len(), count.min(items.len()));
    let mut idx: Vec<usize> = picked.into_iter().collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| items[i].clone()).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300) || a == b
}

/// `1/√π` to 60 digits.
pub const INV_SQRT_PI: &str = "0.564189583547756286948079451560772585844050629328998856844086";

/// `f(x) = Σ x^m / (Γ(1 + m/2) m!)` in exact rational arithmetic, split as
/// `E + O/√π`: for `m = 2k`, `Γ(1+k) = k!`; for `m = 2k+1`,
/// `Γ(k + 3/2) = (2k+2)! √π / (4^{k+1} (k+1)!)`.
pub fn wright_oracle(x_num: i64, x_den: i64, pairs: u32) -> f64 {
    use num::{BigInt, BigRational, One, ToPrimitive, Zero};
    let x = BigRational::new(BigInt::from(x_num), BigInt::from(x_den));
    let fact = |n: u32| -> BigInt { (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)) };
    let mut even = BigRational::zero();
    let mut odd = BigRational::zero();
    let mut xp = BigRational::one();
    for k in 0..pairs {
        even += &xp / BigRational::from_integer(fact(k) * fact(2 * k));
        xp *= &x;
        let num = BigInt::from(4).pow(k + 1) * fact(k + 1);
        let den = fact(2 * k + 2) * fact(2 * k + 1);
        odd += &xp * BigRational::new(num, den);
        xp *= &x;
    }
    let digits = INV_SQRT_PI.trim_start_matches("0.");
    let inv = BigRational::new(
        digits.parse::<BigInt>().unwrap(),
        BigInt::from(10).pow(digits.len() as u32),
    );
    (even + odd * inv).to_f64().unwrap()
}
