//! Constraint-set descriptors and exact Euclidean projection operators.
//!
//! A [`ConvexBody`] is a declarative description of a constraint set; the
//! [`project`] dispatcher maps it to the matching operator. Matrix-shaped
//! sets are stored flattened in row-major order with the shape carried by the
//! descriptor. Bodies are immutable and `project` is a pure function, so
//! projections may run concurrently without coordination.

mod hull;
mod separable;
mod spectral;

pub use hull::{project_hull, project_hull_with, HullProjection};
pub use spectral::{project_elliptope_with, ElliptopeProjection};

use crate::error::{Error, Result};
use crate::linalg;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

/// A point of the ambient space. Matrix-shaped data is flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Wraps a coordinate vector, rejecting NaN and infinite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if !linalg::is_finite(&coords) {
            return Err(Error::NonFinite);
        }
        Ok(Point { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }

    pub fn distance_to(&self, other: &Point) -> f64 {
        linalg::dist(&self.coords, &other.coords)
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(d)?;
        Point::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Declarative descriptor of a constraint set; the unit of dispatch for
/// projection.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    /// `{ x : ||x||_2 <= radius }`
    EuclideanBall { radius: f64, ambient_dim: usize },
    /// `{ x : ||x||_1 <= radius }` (cross-polytope)
    L1Ball { radius: f64, ambient_dim: usize },
    /// `{ x : x >= 0, sum x = 1 }`
    Simplex { ambient_dim: usize },
    /// `scale * conv{0/1 vectors with exactly k ones}` =
    /// `{ 0 <= x <= scale, sum x = k * scale }`
    Hypersimplex {
        k: usize,
        scale: f64,
        ambient_dim: usize,
    },
    /// `{ X in R^{rows x cols} : sum of singular values <= radius }`
    NuclearBall {
        rows: usize,
        cols: usize,
        radius: f64,
    },
    /// Correlation matrices: `{ X : X PSD, diag X = 1 }`
    Elliptope { side: usize },
    /// Convex hull of an explicit vertex list (desk-scale oracle for
    /// polytopes with no tractable description).
    VertexHull { vertices: Vec<Vec<f64>> },
}

impl ConvexBody {
    pub fn ambient_dim(&self) -> usize {
        match self {
            ConvexBody::EuclideanBall { ambient_dim, .. }
            | ConvexBody::L1Ball { ambient_dim, .. }
            | ConvexBody::Simplex { ambient_dim }
            | ConvexBody::Hypersimplex { ambient_dim, .. } => *ambient_dim,
            ConvexBody::NuclearBall { rows, cols, .. } => rows * cols,
            ConvexBody::Elliptope { side } => side * side,
            ConvexBody::VertexHull { vertices } => vertices.first().map(|v| v.len()).unwrap_or(0),
        }
    }

    /// Matrix shape for matrix-valued sets, `None` for vector sets.
    pub fn shape(&self) -> Option<(usize, usize)> {
        match self {
            ConvexBody::NuclearBall { rows, cols, .. } => Some((*rows, *cols)),
            ConvexBody::Elliptope { side } => Some((*side, *side)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| -> Result<()> {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{what} must be strictly positive, got {v}"
                )));
            }
            Ok(())
        };
        match self {
            ConvexBody::EuclideanBall {
                radius,
                ambient_dim,
            } => {
                positive(*radius, "radius")?;
                require_dim(*ambient_dim)
            }
            ConvexBody::L1Ball {
                radius,
                ambient_dim,
            } => {
                positive(*radius, "radius")?;
                require_dim(*ambient_dim)
            }
            ConvexBody::Simplex { ambient_dim } => require_dim(*ambient_dim),
            ConvexBody::Hypersimplex {
                k,
                scale,
                ambient_dim,
            } => {
                positive(*scale, "scale")?;
                require_dim(*ambient_dim)?;
                if *k == 0 || k > ambient_dim {
                    return Err(Error::InvalidParameter(format!(
                        "hypersimplex needs 1 <= k <= ambient_dim, got k={k}, dim={ambient_dim}"
                    )));
                }
                Ok(())
            }
            ConvexBody::NuclearBall { rows, cols, radius } => {
                positive(*radius, "radius")?;
                require_dim(*rows)?;
                require_dim(*cols)
            }
            ConvexBody::Elliptope { side } => require_dim(*side),
            ConvexBody::VertexHull { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::InvalidParameter(
                        "vertex hull needs at least one vertex".into(),
                    ));
                }
                let dim = vertices[0].len();
                require_dim(dim)?;
                for v in vertices {
                    if v.len() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            actual: v.len(),
                        });
                    }
                    if !linalg::is_finite(v) {
                        return Err(Error::NonFinite);
                    }
                }
                Ok(())
            }
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            ConvexBody::EuclideanBall { .. } => "euclidean_ball",
            ConvexBody::L1Ball { .. } => "l1_ball",
            ConvexBody::Simplex { .. } => "simplex",
            ConvexBody::Hypersimplex { .. } => "hypersimplex",
            ConvexBody::NuclearBall { .. } => "nuclear_ball",
            ConvexBody::Elliptope { .. } => "elliptope",
            ConvexBody::VertexHull { .. } => "vertex_hull",
        }
    }
}

impl Serialize for ConvexBody {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("variant", self.variant_name())?;
        match self {
            ConvexBody::EuclideanBall {
                radius,
                ambient_dim,
            }
            | ConvexBody::L1Ball {
                radius,
                ambient_dim,
            } => {
                map.serialize_entry("radius", radius)?;
                map.serialize_entry("ambient_dim", ambient_dim)?;
            }
            ConvexBody::Simplex { ambient_dim } => {
                map.serialize_entry("ambient_dim", ambient_dim)?;
            }
            ConvexBody::Hypersimplex {
                k,
                scale,
                ambient_dim,
            } => {
                map.serialize_entry("k", k)?;
                map.serialize_entry("scale", scale)?;
                map.serialize_entry("ambient_dim", ambient_dim)?;
            }
            ConvexBody::NuclearBall { rows, cols, radius } => {
                map.serialize_entry("rows", rows)?;
                map.serialize_entry("cols", cols)?;
                map.serialize_entry("radius", radius)?;
            }
            ConvexBody::Elliptope { side } => {
                map.serialize_entry("side", side)?;
            }
            ConvexBody::VertexHull { vertices } => {
                map.serialize_entry("vertices", vertices)?;
            }
        }
        map.end()
    }
}

// Strict per-variant parameter schemas for deserialization. An internally
// tagged enum would silently accept unknown keys, and the interface contract
// is that they are rejected by name.
impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;

        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Ball {
            radius: f64,
            ambient_dim: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct SimplexParams {
            ambient_dim: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct HyperParams {
            k: usize,
            scale: f64,
            ambient_dim: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct NuclearParams {
            rows: usize,
            cols: usize,
            radius: f64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct ElliptopeParams {
            side: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct HullParams {
            vertices: Vec<Vec<f64>>,
        }

        let mut value = serde_json::Value::deserialize(d)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| DeError::custom("body descriptor must be a JSON object"))?;
        let variant = obj
            .remove("variant")
            .ok_or_else(|| DeError::missing_field("variant"))?;
        let variant = variant
            .as_str()
            .ok_or_else(|| DeError::custom("`variant` must be a string"))?
            .to_owned();
        let rest = serde_json::Value::Object(std::mem::take(obj));

        let body = match variant.as_str() {
            "euclidean_ball" => {
                let p: Ball = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::EuclideanBall {
                    radius: p.radius,
                    ambient_dim: p.ambient_dim,
                }
            }
            "l1_ball" => {
                let p: Ball = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::L1Ball {
                    radius: p.radius,
                    ambient_dim: p.ambient_dim,
                }
            }
            "simplex" => {
                let p: SimplexParams = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::Simplex {
                    ambient_dim: p.ambient_dim,
                }
            }
            "hypersimplex" => {
                let p: HyperParams = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::Hypersimplex {
                    k: p.k,
                    scale: p.scale,
                    ambient_dim: p.ambient_dim,
                }
            }
            "nuclear_ball" => {
                let p: NuclearParams = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::NuclearBall {
                    rows: p.rows,
                    cols: p.cols,
                    radius: p.radius,
                }
            }
            "elliptope" => {
                let p: ElliptopeParams = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::Elliptope { side: p.side }
            }
            "vertex_hull" => {
                let p: HullParams = serde_json::from_value(rest).map_err(DeError::custom)?;
                ConvexBody::VertexHull {
                    vertices: p.vertices,
                }
            }
            other => return Err(DeError::custom(format!("unknown body variant `{other}`"))),
        };
        body.validate().map_err(DeError::custom)?;
        Ok(body)
    }
}

fn require_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    Ok(())
}

/// Declared work units and iteration counts for one projection call.
///
/// Work units follow a per-operator cost model rather than wall time:
/// linear scans count `p`, sorting operators `p log2 p`, spectral operators
/// `p^1.5`, Dykstra `iterations x side^3`, hull `iterations x vertices x p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionStats {
    pub iterations: u64,
    pub work_units: u64,
}

fn sort_work(p: usize) -> u64 {
    let logs = (p.max(2) as f64).log2().ceil() as u64;
    (p as u64) * logs.max(1)
}

/// Euclidean projection of `point` onto the body. Returns the nearest point
/// of the set; the companion [`project_with_stats`] also reports operation
/// counts for runtime accounting.
pub fn project(body: &ConvexBody, point: &Point) -> Result<Point> {
    project_with_stats(body, point).map(|(p, _)| p)
}

pub fn project_with_stats(body: &ConvexBody, point: &Point) -> Result<(Point, ProjectionStats)> {
    body.validate()?;
    let dim = body.ambient_dim();
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: point.len(),
        });
    }
    if !linalg::is_finite(point.coords()) {
        return Err(Error::NonFinite);
    }
    let y = point.coords();
    match body {
        ConvexBody::EuclideanBall { radius, .. } => {
            let out = separable::euclidean_ball(*radius, y);
            Ok((
                Point { coords: out },
                ProjectionStats {
                    iterations: 1,
                    work_units: dim as u64,
                },
            ))
        }
        ConvexBody::L1Ball { radius, .. } => {
            let out = separable::l1_ball(*radius, y);
            Ok((
                Point { coords: out },
                ProjectionStats {
                    iterations: 1,
                    work_units: sort_work(dim),
                },
            ))
        }
        ConvexBody::Simplex { .. } => {
            let out = separable::simplex(y);
            Ok((
                Point { coords: out },
                ProjectionStats {
                    iterations: 1,
                    work_units: sort_work(dim),
                },
            ))
        }
        ConvexBody::Hypersimplex { k, scale, .. } => {
            let (out, iters) = separable::hypersimplex(*k, *scale, y);
            Ok((
                Point { coords: out },
                ProjectionStats {
                    iterations: iters as u64,
                    work_units: sort_work(dim),
                },
            ))
        }
        ConvexBody::NuclearBall { rows, cols, radius } => {
            let out = spectral::nuclear_ball(*rows, *cols, *radius, y);
            Ok((
                Point { coords: out },
                ProjectionStats {
                    iterations: 1,
                    work_units: (dim as f64).powf(1.5).ceil() as u64,
                },
            ))
        }
        ConvexBody::Elliptope { side } => {
            let out = spectral::project_elliptope_with(
                *side,
                y,
                spectral::DYKSTRA_TOL,
                spectral::DYKSTRA_MAX_ITER,
            )?;
            let eig_cost = (*side as u64).pow(3);
            Ok((
                Point { coords: out.matrix },
                ProjectionStats {
                    iterations: out.iterations as u64,
                    work_units: out.iterations as u64 * eig_cost,
                },
            ))
        }
        ConvexBody::VertexHull { vertices } => {
            let hp = hull::project_hull_slices(vertices, y, hull::DEFAULT_TOL, None)?;
            Ok((
                Point { coords: hp.point },
                ProjectionStats {
                    iterations: hp.iterations as u64,
                    work_units: hp.iterations as u64 * vertices.len() as u64 * dim as u64,
                },
            ))
        }
    }
}

/// Nearest positive semidefinite matrix: symmetrize, eigendecompose, clamp
/// negative eigenvalues at zero. The input must flatten a square matrix.
pub fn project_psd_cone(point: &Point) -> Result<Point> {
    let len = point.len();
    let side = (len as f64).sqrt().round() as usize;
    if side * side != len || side == 0 {
        return Err(Error::InvalidParameter(format!(
            "psd projection needs a square shape, got length {len}"
        )));
    }
    if !linalg::is_finite(point.coords()) {
        return Err(Error::NonFinite);
    }
    Ok(Point {
        coords: spectral::psd_project(side, point.coords()),
    })
}
