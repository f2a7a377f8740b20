//! Convex-relaxation denoising: projection operators for the constraint sets
//! used by shrinkage estimators, Monte-Carlo and closed-form estimates of the
//! Gaussian squared-complexity of tangent cones, risk experiments, and a
//! benchmark driver that tabulates runtime / sample-count tradeoffs across
//! relaxations of increasing looseness.

pub mod cones;
pub mod denoise;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod runtime;
pub mod tradeoff;

pub use error::{Error, Result};
