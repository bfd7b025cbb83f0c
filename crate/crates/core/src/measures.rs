//! Discrete generating measures of hypermetric norms.
//!
//! A finite even measure on the sphere is stored with one representative
//! direction per antipodal pair carrying the pair's total weight. The
//! induced norm is `‖x‖ = Σ_j w_j |⟨x, θ_j⟩|`, which already accounts for
//! evenness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, orthonormal_basis};

const UNIT_TOL: f64 = 1e-12;
const RANDOM_RESAMPLE_LIMIT: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub dir: Vec<f64>,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct GeneratingMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    /// Worst relative norm error against the target norm, when the measure
    /// discretizes a continuous one.
    discretization_error: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    discretization_error: Option<f64>,
}

impl TryFrom<RawMeasure> for GeneratingMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        let mut m = GeneratingMeasure::new(raw.atoms)?;
        m.discretization_error = raw.discretization_error;
        Ok(m)
    }
}

impl From<GeneratingMeasure> for RawMeasure {
    fn from(m: GeneratingMeasure) -> Self {
        RawMeasure {
            atoms: m.atoms,
            discretization_error: m.discretization_error,
        }
    }
}

impl GeneratingMeasure {
    /// Validates unit directions (within 1e-12) and positive weights.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let dim = atoms
            .first()
            .ok_or_else(|| Error::invalid("a generating measure needs at least one atom"))?
            .dir
            .len();
        if dim == 0 {
            return Err(Error::invalid("atom directions must be nonempty"));
        }
        for a in &atoms {
            if a.dir.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.dir.len(),
                });
            }
            if !(a.w > 0.0) || !a.w.is_finite() {
                return Err(Error::invalid("atom weights must be positive and finite"));
            }
            if (norm2(&a.dir) - 1.0).abs() > UNIT_TOL {
                return Err(Error::invalid("atom directions must be unit vectors"));
            }
        }
        Ok(GeneratingMeasure {
            dim,
            atoms,
            discretization_error: None,
        })
    }

    /// The measure whose norm is `Σ |⟨x, v_i⟩|`: directions `v_i / |v_i|`
    /// with weights `|v_i|`. This is the generating measure of the zonotope
    /// `Σ [−v_i, v_i]`.
    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let atoms = vectors
            .iter()
            .map(|v| {
                let len = norm2(v);
                if !(len > 0.0) {
                    return Err(Error::invalid("zero vector cannot define an atom"));
                }
                Ok(Atom {
                    dir: v.iter().map(|x| x / len).collect(),
                    w: len,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn discretization_error(&self) -> Option<f64> {
        self.discretization_error
    }

    /// The induced seminorm is a norm iff the directions span `Rⁿ`.
    pub fn spans(&self) -> bool {
        let dirs: Vec<Vec<f64>> = self.atoms.iter().map(|a| a.dir.clone()).collect();
        orthonormal_basis(&dirs, 1e-10).len() == self.dim
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.atoms.iter().map(|a| a.w * dot(&a.dir, x).abs()).sum()
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let s: f64 = a
                    .dir
                    .iter()
                    .zip(x.iter().zip(y))
                    .map(|(t, (p, q))| t * (p - q))
                    .sum();
                a.w * s.abs()
            })
            .sum()
    }

    /// `x ↦ (w_j ⟨x, θ_j⟩)_j`, an isometry into `ℓ₁^N`.
    pub fn embed_l1(&self, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        if !self.spans() {
            return Err(Error::invalid("embedding requires a spanning measure"));
        }
        points
            .iter()
            .map(|p| {
                if p.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        got: p.len(),
                    });
                }
                Ok(self.atoms.iter().map(|a| a.w * dot(&a.dir, p)).collect())
            })
            .collect()
    }

    /// True when the atoms are exactly the coordinate axes with unit weight.
    pub fn is_l1(&self) -> bool {
        self.atoms.len() == self.dim
            && self.atoms.iter().enumerate().all(|(i, a)| {
                a.w == 1.0
                    && a.dir
                        .iter()
                        .enumerate()
                        .all(|(k, &x)| if k == i { x == 1.0 } else { x == 0.0 })
            })
    }
}

/// `½ Σ (δ_{e_i} + δ_{−e_i})`: representatives `e_i` with weight 1.
pub fn l1_measure(n: usize) -> Result<GeneratingMeasure> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let atoms = (0..n)
        .map(|i| {
            let mut dir = vec![0.0; n];
            dir[i] = 1.0;
            Atom { dir, w: 1.0 }
        })
        .collect();
    GeneratingMeasure::new(atoms)
}

/// Equal-weight discretization of the Euclidean generating measure with
/// `pairs` antipodal direction pairs, calibrated so that `‖e₁‖ = 1`.
///
/// The worst relative error against `|x|` over 1000 random unit vectors is
/// stored as the measure's discretization error.
pub fn euclidean_measure(n: usize, pairs: usize) -> Result<GeneratingMeasure> {
    if !(2..=3).contains(&n) {
        return Err(Error::invalid("euclidean_measure supports n = 2 or 3"));
    }
    if pairs < 2 * n {
        return Err(Error::invalid(format!(
            "need at least {} direction pairs",
            2 * n
        )));
    }
    let dirs: Vec<Vec<f64>> = if n == 2 {
        (0..pairs)
            .map(|j| {
                let a = std::f64::consts::PI * j as f64 / pairs as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    } else {
        // Fibonacci lattice on the upper half-sphere.
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..pairs)
            .map(|j| {
                let z = (j as f64 + 0.5) / pairs as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * j as f64;
                vec![r * phi.cos(), r * phi.sin(), z]
            })
            .collect()
    };
    let raw: f64 = dirs.iter().map(|d| d[0].abs()).sum();
    let w = 1.0 / raw;
    let mut m = GeneratingMeasure::new(dirs.into_iter().map(|dir| Atom { dir, w }).collect())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ede0_c11d);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random_unit(&mut rng, n);
        worst = worst.max((m.norm(&u) - 1.0).abs());
    }
    m.discretization_error = Some(worst);
    Ok(m)
}

/// `pairs` uniformly random unit directions with weights uniform in
/// `(0.1, 1]`, resampled until they span.
pub fn random_measure(n: usize, pairs: usize, seed: u64) -> Result<GeneratingMeasure> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if pairs < n {
        return Err(Error::invalid("need at least n atoms to span"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RESAMPLE_LIMIT {
        let atoms: Vec<Atom> = (0..pairs)
            .map(|_| {
                let dir = random_unit(&mut rng, n);
                let w = 1.0 - 0.9 * rng.random::<f64>();
                Atom { dir, w }
            })
            .collect();
        let m = GeneratingMeasure::new(atoms)?;
        if m.spans() {
            return Ok(m);
        }
    }
    Err(Error::invalid(
        "random directions failed to span after 100 draws",
    ))
}

pub(crate) fn random_unit<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let len = norm2(&v);
        if len > 1e-6 {
            let mut u: Vec<f64> = v.iter().map(|x| x / len).collect();
            // renormalize to land within the unit tolerance
            let l2 = norm2(&u);
            u.iter_mut().for_each(|x| *x /= l2);
            return u;
        }
    }
}
