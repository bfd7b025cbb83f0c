//! Loading bodies, point sets and measures from the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hypermag::measures::{euclidean_measure, l1_measure, random_measure};
use hypermag::{ConvexBody, GeneratingMeasure, NormSpec, Zonotope};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::CliError;

/// `l1`, `l2:N`, `random:N:SEED`, or a path to a measure JSON file.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    L1,
    Euclidean { pairs: usize },
    Random { pairs: usize, seed: u64 },
    File(PathBuf),
}

impl FromStr for MeasureSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str, what: &str| -> Result<u64, String> {
            x.parse::<u64>()
                .map_err(|_| format!("{what} in measure spec `{s}` is not a nonnegative integer"))
        };
        match parts.as_slice() {
            ["l1"] => Ok(MeasureSpec::L1),
            ["l2", n] => Ok(MeasureSpec::Euclidean {
                pairs: num(n, "pair count")? as usize,
            }),
            ["random", n, seed] => Ok(MeasureSpec::Random {
                pairs: num(n, "pair count")? as usize,
                seed: num(seed, "seed")?,
            }),
            ["l1", ..] | ["l2", ..] | ["random", ..] => Err(format!(
                "malformed measure spec `{s}`; expected l1, l2:N or random:N:SEED"
            )),
            _ => Ok(MeasureSpec::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::L1 => write!(f, "l1"),
            MeasureSpec::Euclidean { pairs } => write!(f, "l2:{pairs}"),
            MeasureSpec::Random { pairs, seed } => write!(f, "random:{pairs}:{seed}"),
            MeasureSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl MeasureSpec {
    pub fn resolve(&self, dim: usize) -> Result<GeneratingMeasure, CliError> {
        Ok(match self {
            MeasureSpec::L1 => l1_measure(dim)?,
            MeasureSpec::Euclidean { pairs } => euclidean_measure(dim, *pairs)?,
            MeasureSpec::Random { pairs, seed } => random_measure(dim, *pairs, *seed)?,
            MeasureSpec::File(p) => {
                let m: GeneratingMeasure = read_json(p)?;
                if m.dim() != dim {
                    return Err(hypermag::Error::DimensionMismatch {
                        expected: dim,
                        got: m.dim(),
                    }
                    .into());
                }
                m
            }
        })
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            MeasureSpec::Random { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

/// `l1`, `l2` or `lp:P` with `P ∈ [1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSpec(pub f64);

impl FromStr for LpSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let p = match s {
            "l1" => 1.0,
            "l2" => 2.0,
            _ => s
                .strip_prefix("lp:")
                .and_then(|p| p.parse::<f64>().ok())
                .ok_or_else(|| format!("malformed norm `{s}`; expected l1, l2 or lp:P"))?,
        };
        if (1.0..=2.0).contains(&p) {
            Ok(LpSpec(p))
        } else {
            Err(format!("norm exponent {p} is outside [1, 2]"))
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_body(path: &Path) -> Result<ConvexBody, CliError> {
    read_json(path)
}

/// Either a bare array of points or `{"points": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointsFile {
    Bare(Vec<Vec<f64>>),
    Wrapped { points: Vec<Vec<f64>> },
}

pub fn read_points(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    Ok(match read_json::<PointsFile>(path)? {
        PointsFile::Bare(p) | PointsFile::Wrapped { points: p } => p,
    })
}

/// Either a bare array of generators or `{"generators": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorsFile {
    Bare(Vec<Vec<f64>>),
    Wrapped { generators: Vec<Vec<f64>> },
}

pub fn read_zonotope(path: &Path) -> Result<Zonotope, CliError> {
    let gens = match read_json::<GeneratorsFile>(path)? {
        GeneratorsFile::Bare(g) | GeneratorsFile::Wrapped { generators: g } => g,
    };
    let dim = gens
        .first()
        .map(|g| g.len())
        .ok_or_else(|| CliError::Usage("generator file is empty".into()))?;
    Ok(Zonotope::new(gens, dim)?)
}

/// The norm for point-set commands plus its description for the report.
pub fn norm_for(
    lp: Option<LpSpec>,
    measure: Option<&MeasureSpec>,
    dim: usize,
) -> Result<(NormSpec, Value), CliError> {
    match (lp, measure) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--norm and --measure are mutually exclusive".into(),
        )),
        (_, Some(spec)) => {
            let m = spec.resolve(dim)?;
            let desc = json!({"measure": spec.to_string(), "atoms": m});
            Ok((NormSpec::Measure(m), desc))
        }
        (lp, None) => {
            let p = lp.map_or(1.0, |l| l.0);
            Ok((NormSpec::Lp(p), json!({"lp": p})))
        }
    }
}

/// Comma-separated positive reals.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| {
            let v: f64 = x
                .trim()
                .parse()
                .map_err(|_| format!("`{x}` is not a number"))?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{x}` must be positive and finite"))
            }
        })
        .collect()
}
