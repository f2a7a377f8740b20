//! Nonnegative least squares by accelerated projected gradient.
//!
//! Minimizes `0.5 ||d - G lambda||^2` over `lambda >= 0`. The driver is a
//! FISTA loop with gradient restarts; once the active support settles, the
//! unconstrained least-squares solution on that support is checked against
//! the KKT conditions and accepted when exact, which removes the first-order
//! tail of plain projected gradient.

use crate::error::{Error, Result};
use crate::linalg;

pub(crate) struct NnlsOutcome {
    #[allow(dead_code)]
    pub coeffs: Vec<f64>,
    pub fitted: Vec<f64>,
    #[allow(dead_code)]
    pub iterations: usize,
}

pub(crate) fn nnls(
    columns: &[Vec<f64>],
    target: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<NnlsOutcome> {
    let k = columns.len();
    let dim = target.len();
    debug_assert!(columns.iter().all(|c| c.len() == dim));
    let scale = linalg::norm(target).max(1.0);
    let col_norms: Vec<f64> = columns
        .iter()
        .map(|c| linalg::norm(c).max(1e-300))
        .collect();

    // Lipschitz constant of the gradient via power iteration on G^T G.
    let lip = {
        let mut v = vec![1.0 / (k as f64).sqrt(); k];
        let mut lam = 0.0;
        for _ in 0..40 {
            let gv = apply(columns, &v, dim);
            let gtgv = apply_t(columns, &gv);
            lam = linalg::norm(&gtgv);
            if lam <= 1e-300 {
                break;
            }
            for (x, y) in v.iter_mut().zip(&gtgv) {
                *x = y / lam;
            }
        }
        (lam * 1.05).max(1e-12)
    };

    let mut lambda = vec![0.0; k];
    let mut momentum = lambda.clone();
    let mut t = 1.0f64;
    let mut fitted = vec![0.0; dim];

    for iter in 1..=max_iter {
        // Gradient at the momentum point.
        let fitted_m = apply(columns, &momentum, dim);
        let residual_m: Vec<f64> = target.iter().zip(&fitted_m).map(|(a, b)| a - b).collect();
        let grad: Vec<f64> = apply_t(columns, &residual_m).iter().map(|g| -g).collect();

        let prev = lambda.clone();
        for i in 0..k {
            lambda[i] = (momentum[i] - grad[i] / lip).max(0.0);
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        let mut restart = 0.0;
        for i in 0..k {
            restart += (momentum[i] - lambda[i]) * (lambda[i] - prev[i]);
        }
        if restart > 0.0 {
            t = 1.0;
            momentum.copy_from_slice(&lambda);
        } else {
            t = t_next;
            for i in 0..k {
                momentum[i] = lambda[i] + beta * (lambda[i] - prev[i]);
            }
        }

        // KKT residuals at the feasible iterate.
        fitted = apply(columns, &lambda, dim);
        let residual: Vec<f64> = target.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        let corr = apply_t(columns, &residual);
        let dual = corr
            .iter()
            .zip(&col_norms)
            .map(|(c, n)| c / n)
            .fold(f64::NEG_INFINITY, f64::max);
        let compl: f64 = corr.iter().zip(&lambda).map(|(c, l)| (c * l).abs()).sum();
        let stop = dual <= tol * scale && compl <= tol * scale * scale;

        // Exact polish on the current support: at the stopping point, and
        // periodically so a settled support short-circuits the tail.
        if stop || iter % 25 == 0 {
            if let Some(exact) = polish(columns, target, &lambda, &col_norms, tol * scale) {
                return Ok(NnlsOutcome {
                    coeffs: exact.0,
                    fitted: exact.1,
                    iterations: iter,
                });
            }
        }
        if stop {
            return Ok(NnlsOutcome {
                coeffs: lambda,
                fitted,
                iterations: iter,
            });
        }
    }
    Err(Error::IterationBudget {
        what: "nonnegative least squares",
        iterations: max_iter,
        residual: linalg::dist(target, &fitted),
        last: fitted,
    })
}

/// Unconstrained least squares on the positive support; accepted only when
/// the result is feasible and dual-feasible for the full problem.
fn polish(
    columns: &[Vec<f64>],
    target: &[f64],
    lambda: &[f64],
    col_norms: &[f64],
    slack: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let k = columns.len();
    let dim = target.len();
    let support: Vec<usize> = (0..k).filter(|&i| lambda[i] > 0.0).collect();
    if support.is_empty() || support.len() > dim + 1 {
        return None;
    }
    let s = support.len();
    let mut gram = vec![0.0; s * s];
    let mut rhs = vec![0.0; s];
    for a in 0..s {
        for b in 0..s {
            gram[a * s + b] = linalg::dot(&columns[support[a]], &columns[support[b]]);
        }
        rhs[a] = linalg::dot(&columns[support[a]], target);
    }
    if !linalg::solve_linear(&mut gram, s, &mut rhs) {
        return None;
    }
    if rhs.iter().any(|&v| v < -1e-11) {
        return None;
    }
    let mut coeffs = vec![0.0; k];
    for (slot, &i) in rhs.iter().zip(&support) {
        coeffs[i] = slot.max(0.0);
    }
    let fitted = apply(columns, &coeffs, dim);
    let residual: Vec<f64> = target.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let corr = apply_t(columns, &residual);
    let dual_ok = corr
        .iter()
        .zip(col_norms)
        .all(|(c, n)| c / n <= slack.max(1e-10));
    if dual_ok {
        Some((coeffs, fitted))
    } else {
        None
    }
}

fn apply(columns: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (c, col) in coeffs.iter().zip(columns) {
        if *c == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(col) {
            *o += c * v;
        }
    }
    out
}

fn apply_t(columns: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    columns.iter().map(|c| linalg::dot(c, v)).collect()
}
