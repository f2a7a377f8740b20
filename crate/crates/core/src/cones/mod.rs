//! Tangent-cone projections and Gaussian squared-complexity estimation.
//!
//! The squared-complexity of a cone T is `E ||Pi_T(g)||^2` for standard
//! normal g, which by polarity equals the expected squared distance of g to
//! the polar cone. Two cone representations are supported: the tangent cone
//! of a body at a feasible anchor, reached through the body's projector, and
//! an explicit conic hull of generators at a vertex.

mod bounds;
mod nnls;

pub use bounds::{
    cap_solid_angle_formula, cap_solid_angle_lower_bound, cap_volume_bounds, l1_tangent_bound,
    nuclear_tangent_bound, vertex_transitive_bound, volume_complexity_bound,
};

use crate::error::{Error, Result};
use crate::geometry::{self, ConvexBody, Point};
use crate::linalg;
use crate::rng;
use crate::runtime;
use serde::{Deserialize, Serialize};

/// Feasibility slack for tangent-cone anchors.
const ANCHOR_TOL: f64 = 1e-7;

/// Default Monte-Carlo draw count; the standard error is always reported
/// alongside the mean.
pub const DEFAULT_MC_DRAWS: usize = 2000;

/// How a tangent cone is realized for projection purposes.
#[derive(Debug, Clone)]
pub enum TangentConeSpec {
    /// Differentiated projection onto the body at a feasible anchor:
    /// `Pi_T(d) ~= (Pi_C(anchor + t d) - anchor) / t` with
    /// `t = step * max(1, ||anchor||) / ||d||`. Exact for polytopes at small
    /// step; first-order bias O(step) on curved bodies.
    ApproxViaBodyProjection {
        body: ConvexBody,
        anchor: Point,
        step: f64,
    },
    /// Conic hull of explicit generators (`{b - a : b vertex}` at a vertex
    /// anchor a); projection solved as nonnegative least squares.
    ExactVertexCone { generators: Vec<Point> },
}

impl TangentConeSpec {
    /// Body-projection mode; verifies the anchor is feasible.
    pub fn approx(body: ConvexBody, anchor: Point, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step must be strictly positive, got {step}"
            )));
        }
        let projected = geometry::project(&body, &anchor)?;
        let distance = projected.distance_to(&anchor);
        if distance > ANCHOR_TOL {
            return Err(Error::InfeasibleAnchor { distance });
        }
        Ok(TangentConeSpec::ApproxViaBodyProjection { body, anchor, step })
    }

    /// Default step for the body-projection mode.
    pub fn approx_default(body: ConvexBody, anchor: Point) -> Result<Self> {
        Self::approx(body, anchor, 1e-3)
    }

    /// Explicit generator mode.
    pub fn exact(generators: Vec<Point>) -> Result<Self> {
        let dim = match generators.first() {
            Some(g) => g.len(),
            None => {
                return Err(Error::InvalidParameter(
                    "vertex cone needs at least one generator".into(),
                ))
            }
        };
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: g.len(),
                });
            }
        }
        Ok(TangentConeSpec::ExactVertexCone { generators })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            TangentConeSpec::ApproxViaBodyProjection { body, .. } => body.ambient_dim(),
            TangentConeSpec::ExactVertexCone { generators } => generators[0].len(),
        }
    }
}

/// Monte-Carlo estimate of a Gaussian squared-complexity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub draws: usize,
    pub seed: i64,
}

/// Euclidean projection of `direction` onto the cone described by `spec`.
pub fn project_tangent_cone(spec: &TangentConeSpec, direction: &Point) -> Result<Point> {
    let dim = spec.ambient_dim();
    if direction.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: direction.len(),
        });
    }
    match spec {
        TangentConeSpec::ApproxViaBodyProjection { body, anchor, step } => {
            let dnorm = direction.norm();
            if dnorm == 0.0 {
                return Point::new(vec![0.0; dim]);
            }
            let t = step * anchor.norm().max(1.0) / dnorm;
            let shifted: Vec<f64> = anchor
                .coords()
                .iter()
                .zip(direction.coords())
                .map(|(a, d)| a + t * d)
                .collect();
            let projected = geometry::project(body, &Point::new(shifted)?)?;
            let out: Vec<f64> = projected
                .coords()
                .iter()
                .zip(anchor.coords())
                .map(|(z, a)| (z - a) / t)
                .collect();
            Point::new(out)
        }
        TangentConeSpec::ExactVertexCone { generators } => {
            let columns: Vec<Vec<f64>> = generators.iter().map(|g| g.coords().to_vec()).collect();
            let out = nnls::nnls(&columns, direction.coords(), 1e-9, 200_000)?;
            Point::new(out.fitted)
        }
    }
}

/// Monte-Carlo Gaussian squared-complexity: the sample mean of
/// `||Pi_T(g_i)||^2` over i.i.d. standard normal draws, with its standard
/// error. Draw `i` comes from substream `(seed, i)`, so the estimate is
/// reproducible for any thread count.
pub fn mc_squared_complexity(
    spec: &TangentConeSpec,
    draws: usize,
    seed: i64,
) -> Result<ComplexityEstimate> {
    if draws < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 draws, got {draws}"
        )));
    }
    let dim = spec.ambient_dim();
    let values: Vec<Result<f64>> = runtime::parallel_map_indexed(draws, |i| {
        let mut stream = rng::substream(seed, rng::tag::MC_DRAW, i as u64);
        let g = rng::standard_normal_vec(&mut stream, dim);
        let pi = project_tangent_cone(spec, &Point::new(g)?)?;
        Ok(linalg::dot(pi.coords(), pi.coords()))
    });
    let mut sum = 0.0;
    let mut collected = Vec::with_capacity(draws);
    for v in values {
        let v = v?;
        sum += v;
        collected.push(v);
    }
    let mean = sum / draws as f64;
    let var = collected
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / (draws as f64 - 1.0);
    Ok(ComplexityEstimate {
        mean,
        std_error: (var / draws as f64).sqrt(),
        draws,
        seed,
    })
}
