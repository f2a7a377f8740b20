//! Spectral projections: PSD cone, nuclear-norm ball, elliptope.

use super::separable;
use crate::error::{Error, Result};
use crate::linalg;

/// Iterate-change tolerance for the elliptope Dykstra loop. Tight enough
/// that reprojecting an output moves it by well under 1e-9.
pub(crate) const DYKSTRA_TOL: f64 = 1e-12;
pub(crate) const DYKSTRA_MAX_ITER: usize = 10_000;

/// Nearest PSD matrix to the symmetric part of `y` (row-major side x side).
pub(crate) fn psd_project(side: usize, y: &[f64]) -> Vec<f64> {
    let mut sym = vec![0.0; side * side];
    for i in 0..side {
        for j in 0..side {
            sym[i * side + j] = 0.5 * (y[i * side + j] + y[j * side + i]);
        }
    }
    let eig = linalg::sym_eigen(&sym, side);
    let mut out = vec![0.0; side * side];
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        for i in 0..side {
            let vik = eig.vectors[i * side + k];
            if vik == 0.0 {
                continue;
            }
            let w = lambda * vik;
            for j in 0..side {
                out[i * side + j] += w * eig.vectors[j * side + k];
            }
        }
    }
    // Exact symmetry despite accumulation order.
    for i in 0..side {
        for j in (i + 1)..side {
            let avg = 0.5 * (out[i * side + j] + out[j * side + i]);
            out[i * side + j] = avg;
            out[j * side + i] = avg;
        }
    }
    out
}

/// Nuclear-ball projection: SVD, project the singular values onto the
/// l1 ball of the given radius, reconstruct.
pub(crate) fn nuclear_ball(rows: usize, cols: usize, radius: f64, y: &[f64]) -> Vec<f64> {
    let f = linalg::svd(y, rows, cols);
    let total: f64 = f.s.iter().sum();
    if total <= radius * (1.0 + 1e-12) {
        return y.to_vec();
    }
    let clipped = separable::l1_ball(radius, &f.s);
    let r = rows.min(cols);
    let mut out = vec![0.0; rows * cols];
    for (k, &sigma) in clipped.iter().enumerate() {
        if sigma <= 0.0 {
            continue;
        }
        for i in 0..rows {
            let w = sigma * f.u[i * r + k];
            if w == 0.0 {
                continue;
            }
            for j in 0..cols {
                out[i * cols + j] += w * f.vt[k * cols + j];
            }
        }
    }
    out
}

/// Output of the elliptope projector.
#[derive(Debug, Clone)]
pub struct ElliptopeProjection {
    /// Row-major side x side matrix with exact unit diagonal.
    pub matrix: Vec<f64>,
    pub iterations: usize,
    /// Frobenius gap between the PSD-feasible and diagonal-feasible iterates
    /// at the final cycle.
    pub residual: f64,
}

/// Dykstra's alternating projections between the PSD cone and the affine set
/// of unit-diagonal matrices. Converges to the Euclidean projection onto
/// their intersection (the correlation matrices).
pub fn project_elliptope_with(
    side: usize,
    y: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<ElliptopeProjection> {
    assert_eq!(y.len(), side * side);
    let mut x = vec![0.0; side * side];
    for i in 0..side {
        for j in 0..side {
            x[i * side + j] = 0.5 * (y[i * side + j] + y[j * side + i]);
        }
    }
    let scale = linalg::norm(&x).max(1.0);
    let mut p = vec![0.0; side * side];
    let mut q = vec![0.0; side * side];
    let mut residual = f64::INFINITY;

    for iter in 1..=max_iter {
        // PSD half-step with its correction.
        let shifted: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + b).collect();
        let a = psd_project(side, &shifted);
        for k in 0..p.len() {
            p[k] = shifted[k] - a[k];
        }
        // Diagonal half-step with its correction.
        let shifted: Vec<f64> = a.iter().zip(&q).map(|(u, v)| u + v).collect();
        let mut next = shifted.clone();
        for i in 0..side {
            next[i * side + i] = 1.0;
        }
        for k in 0..q.len() {
            q[k] = shifted[k] - next[k];
        }

        let change = linalg::dist(&next, &x);
        let gap = linalg::dist(&next, &a);
        residual = change.max(gap);
        x = next;
        if residual <= tol * scale {
            return Ok(ElliptopeProjection {
                matrix: x,
                iterations: iter,
                residual,
            });
        }
    }
    Err(Error::IterationBudget {
        what: "Dykstra elliptope projection",
        iterations: max_iter,
        residual,
        last: x,
    })
}
