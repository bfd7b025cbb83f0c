//! Hit-or-miss Monte Carlo volumes.
//!
//! Samples are split across `workers` substreams. Substream `w` is a
//! ChaCha8 generator seeded with `seed` and switched to stream `w`, so an
//! estimate is a pure function of `(seed, samples, workers)` no matter how
//! many threads actually run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AxisBox, Zonotope};
use crate::error::{Error, Result};

pub const MIN_SAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

pub(crate) fn substream(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Estimate the volume of `{x ∈ box : membership(x)}`.
pub fn volume_mc<F>(
    membership: F,
    bounding_box: &AxisBox,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples"
        )));
    }
    let workers = workers.max(1);
    let n = bounding_box.dim();
    let lows = bounding_box.lows();
    let lengths = bounding_box.lengths();
    let base = samples / workers as u64;
    let extra = samples % workers as u64;
    let hits: u64 = (0..workers)
        .into_par_iter()
        .map(|w| {
            let count = base + u64::from((w as u64) < extra);
            let mut rng = substream(seed, w);
            let mut x = vec![0.0; n];
            let mut hits = 0u64;
            for _ in 0..count {
                for k in 0..n {
                    x[k] = lows[k] + lengths[k] * rng.random::<f64>();
                }
                if membership(&x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let box_vol = bounding_box.volume();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        value: box_vol * p,
        std_err: box_vol * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
        workers,
    })
}

/// Tight axis box around the polar of a centered full-dimensional
/// zonotope, taken from its exact vertex set.
pub fn polar_bounding_box(z: &Zonotope) -> Result<AxisBox> {
    let verts = z.polar_vertices()?;
    let n = z.dim();
    let reach: Vec<f64> = (0..n)
        .map(|k| verts.iter().map(|v| v[k].abs()).fold(0.0, f64::max))
        .collect();
    AxisBox::new(reach.iter().map(|r| -r).collect(), reach)
}

/// Monte Carlo estimate of `vol(Z°)`.
pub fn polar_volume(z: &Zonotope, samples: u64, seed: u64, workers: usize) -> Result<McEstimate> {
    let bbox = polar_bounding_box(z)?;
    volume_mc(|y| z.polar_contains(y), &bbox, samples, seed, workers)
}
