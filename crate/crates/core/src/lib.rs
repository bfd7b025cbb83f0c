//! Magnitude of finite metric spaces and Holmes–Thompson intrinsic volumes
//! in hypermetric normed spaces, with the bounds that connect them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod convex;
pub mod error;
pub mod finite_metric;
pub mod intrinsic;
pub mod linalg;
pub mod measures;

pub use convex::{AxisBox, ConvexBody, McEstimate, ProjectionMatrix, VPolytope, Zonotope};
pub use error::{Error, Result};
pub use finite_metric::{
    build_space, check_positive_definite, grid_sample, magnitude, max_diversity, scale_space,
    weighting, DiversityWeights, FiniteMetricSpace, NormSpec, PdReport,
};
pub use intrinsic::{IntrinsicConstants, IntrinsicVolumeVector, VolumeKind};
pub use measures::{euclidean_measure, l1_measure, random_measure, Atom, GeneratingMeasure};
