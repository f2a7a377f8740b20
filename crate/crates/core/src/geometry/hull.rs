//! Projection onto the convex hull of an explicit vertex list.
//!
//! Solves `min ||y - V lambda||` over the simplex with Wolfe's min-norm-point
//! active-set scheme: a linear vertex oracle drives major iterations and each
//! corral is resolved exactly by an affine least-squares solve, so the method
//! terminates at the optimum up to roundoff instead of stalling at a
//! first-order tolerance.

use super::Point;
use crate::error::{Error, Result};
use crate::linalg;

pub(crate) const DEFAULT_TOL: f64 = 1e-9;

/// Result of a hull projection: the nearest point, the simplex weights that
/// reproduce it (`point = sum_j weights[j] * vertices[j]`), and the number of
/// major iterations spent.
#[derive(Debug, Clone)]
pub struct HullProjection {
    pub point: Point,
    pub weights: Vec<f64>,
    pub iterations: usize,
}

pub(crate) struct HullSolution {
    pub point: Vec<f64>,
    pub weights: Vec<f64>,
    pub iterations: usize,
}

/// Projects `point` onto `conv(vertices)`.
pub fn project_hull(vertices: &[Point], point: &Point, tol: f64) -> Result<HullProjection> {
    project_hull_with(vertices, point, tol, None)
}

/// As [`project_hull`] with an explicit cap on major iterations.
pub fn project_hull_with(
    vertices: &[Point],
    point: &Point,
    tol: f64,
    max_major: Option<usize>,
) -> Result<HullProjection> {
    if vertices.is_empty() {
        return Err(Error::InvalidParameter(
            "vertex hull needs at least one vertex".into(),
        ));
    }
    let dim = vertices[0].len();
    for v in vertices {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
    }
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: point.len(),
        });
    }
    let slices: Vec<&[f64]> = vertices.iter().map(|v| v.coords()).collect();
    let sol = min_norm_point(&slices, point.coords(), tol, max_major)?;
    Ok(HullProjection {
        point: Point::new(sol.point)?,
        weights: sol.weights,
        iterations: sol.iterations,
    })
}

pub(crate) fn project_hull_slices(
    vertices: &[Vec<f64>],
    y: &[f64],
    tol: f64,
    max_major: Option<usize>,
) -> Result<HullSolution> {
    let slices: Vec<&[f64]> = vertices.iter().map(|v| v.as_slice()).collect();
    min_norm_point(&slices, y, tol, max_major)
}

/// Min-norm point of `conv(vertices - y)`, reported in the original frame.
fn min_norm_point(
    vertices: &[&[f64]],
    y: &[f64],
    tol: f64,
    max_major: Option<usize>,
) -> Result<HullSolution> {
    let nv = vertices.len();
    let dim = y.len();
    // Shift so the problem is the min-norm point of conv(w).
    let w: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| v.iter().zip(y).map(|(a, b)| a - b).collect())
        .collect();
    let scale2 = w.iter().map(|c| linalg::dot(c, c)).fold(1.0f64, f64::max);
    // Gap threshold: the user tolerance as a squared-distance certificate,
    // floored at roundoff level.
    let eps = (0.5 * tol * tol).max(1e-12 * scale2);
    let max_major = max_major.unwrap_or(50 * nv + 200);

    // Start from the vertex nearest the target.
    let start = (0..nv)
        .min_by(|&a, &b| {
            linalg::dot(&w[a], &w[a])
                .partial_cmp(&linalg::dot(&w[b], &w[b]))
                .unwrap()
                .then(a.cmp(&b))
        })
        .unwrap();
    let mut corral: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x: Vec<f64> = w[start].clone();

    let mut majors = 0;
    let mut stalls = 0;
    let mut prev_norm2 = f64::INFINITY;
    loop {
        // Linear oracle: the vertex most opposed to the current point.
        let mut best = 0usize;
        let mut best_val = f64::INFINITY;
        for (j, col) in w.iter().enumerate() {
            let v = linalg::dot(&x, col);
            if v < best_val {
                best_val = v;
                best = j;
            }
        }
        let norm2 = linalg::dot(&x, &x);
        let gap = norm2 - best_val;
        if gap <= eps || corral.contains(&best) {
            break;
        }
        // Roundoff can pin the oracle to a vertex that no longer helps; two
        // consecutive majors without norm decrease means we are at the
        // numerical floor.
        if norm2 >= prev_norm2 - 1e-15 * scale2 {
            stalls += 1;
            if stalls >= 2 {
                break;
            }
        } else {
            stalls = 0;
        }
        prev_norm2 = norm2;
        if majors >= max_major {
            let mut last: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            last.shrink_to_fit();
            return Err(Error::IterationBudget {
                what: "hull projection",
                iterations: majors,
                residual: gap,
                last,
            });
        }
        majors += 1;
        corral.push(best);
        lambda.push(0.0);

        // Minor cycles: move to the affine minimizer of the corral, dropping
        // vertices whose weight would turn negative, until the minimizer is a
        // proper convex combination.
        loop {
            let k = corral.len();
            let mut kkt = vec![0.0; (k + 1) * (k + 1)];
            for a in 0..k {
                for b in 0..k {
                    kkt[a * (k + 1) + b] = linalg::dot(&w[corral[a]], &w[corral[b]]);
                }
                kkt[a * (k + 1) + k] = 1.0;
                kkt[k * (k + 1) + a] = 1.0;
            }
            let mut rhs = vec![0.0; k + 1];
            rhs[k] = 1.0;
            let mut solved = linalg::solve_linear(&mut kkt, k + 1, &mut rhs);
            if !solved {
                // Near-degenerate corral: retry with a small ridge on the
                // Gram block before giving up on the newest vertex.
                let mut ridged = vec![0.0; (k + 1) * (k + 1)];
                for a in 0..k {
                    for b in 0..k {
                        ridged[a * (k + 1) + b] = linalg::dot(&w[corral[a]], &w[corral[b]]);
                    }
                    ridged[a * (k + 1) + a] += 1e-10 * scale2;
                    ridged[a * (k + 1) + k] = 1.0;
                    ridged[k * (k + 1) + a] = 1.0;
                }
                rhs = vec![0.0; k + 1];
                rhs[k] = 1.0;
                solved = linalg::solve_linear(&mut ridged, k + 1, &mut rhs);
            }
            if !solved {
                corral.pop();
                lambda.pop();
                break;
            }
            let alpha = &rhs[..k];

            if alpha.iter().all(|&a| a > -1e-12) {
                lambda = alpha.iter().map(|&a| a.max(0.0)).collect();
                break;
            }
            // Step toward alpha until the first weight hits zero.
            let mut theta = 1.0f64;
            for i in 0..k {
                if alpha[i] < 0.0 && lambda[i] > alpha[i] {
                    theta = theta.min(lambda[i] / (lambda[i] - alpha[i]));
                }
            }
            for i in 0..k {
                lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha[i];
            }
            let mut keep_idx = Vec::with_capacity(k);
            let mut keep_lambda = Vec::with_capacity(k);
            for i in 0..k {
                if lambda[i] > 1e-14 {
                    keep_idx.push(corral[i]);
                    keep_lambda.push(lambda[i]);
                }
            }
            if keep_idx.is_empty() {
                // Numerical fallback; keep the largest weight.
                let i = (0..k)
                    .max_by(|&a, &b| lambda[a].partial_cmp(&lambda[b]).unwrap())
                    .unwrap();
                keep_idx.push(corral[i]);
                keep_lambda.push(1.0);
            }
            corral = keep_idx;
            lambda = keep_lambda;
        }

        // Renormalize and rebuild the iterate from the corral.
        let total: f64 = lambda.iter().sum();
        for l in lambda.iter_mut() {
            *l /= total;
        }
        x = vec![0.0; dim];
        for (i, &j) in corral.iter().enumerate() {
            let l = lambda[i];
            for (xd, wd) in x.iter_mut().zip(&w[j]) {
                *xd += l * wd;
            }
        }
    }

    let mut weights = vec![0.0; nv];
    let total: f64 = lambda.iter().sum();
    for (i, &j) in corral.iter().enumerate() {
        weights[j] += lambda[i] / total;
    }
    let point: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    Ok(HullSolution {
        point,
        weights,
        iterations: majors.max(1),
    })
}
