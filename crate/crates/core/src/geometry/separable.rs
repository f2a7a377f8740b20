//! Projections with coordinate-separable structure: Euclidean ball, l1 ball,
//! simplex, hypersimplex.

use crate::linalg;

pub(crate) fn euclidean_ball(radius: f64, y: &[f64]) -> Vec<f64> {
    let n = linalg::norm(y);
    if n <= radius {
        return y.to_vec();
    }
    let f = radius / n;
    y.iter().map(|v| v * f).collect()
}

/// Sort-based l1-ball projection (soft thresholding at the exact multiplier).
/// Ties in magnitude are broken by ascending index; the threshold does not
/// depend on the tie order.
pub(crate) fn l1_ball(radius: f64, y: &[f64]) -> Vec<f64> {
    let sum_abs: f64 = y.iter().map(|v| v.abs()).sum();
    if sum_abs <= radius {
        return y.to_vec();
    }
    let theta = threshold(&y.iter().map(|v| v.abs()).collect::<Vec<_>>(), radius);
    y.iter()
        .map(|v| v.signum() * (v.abs() - theta).max(0.0))
        .collect()
}

/// Projection onto the unit simplex `{ x >= 0, sum x = 1 }`.
pub(crate) fn simplex(y: &[f64]) -> Vec<f64> {
    let theta = threshold(y, 1.0);
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// The largest multiplier theta with `sum_i max(u_i - theta, 0) = budget`,
/// found by descending sort and cumulative scan.
fn threshold(u: &[f64], budget: f64) -> f64 {
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&a, &b| u[b].partial_cmp(&u[a]).unwrap().then(a.cmp(&b)));
    let mut cumsum = 0.0;
    let mut theta = u[order[0]] - budget;
    for (rank, &idx) in order.iter().enumerate() {
        cumsum += u[idx];
        let t = (cumsum - budget) / (rank + 1) as f64;
        if u[idx] > t {
            theta = t;
        } else {
            break;
        }
    }
    theta
}

/// Projection onto `{ 0 <= x <= scale, sum x = k * scale }` by bisection on
/// the multiplier of the sum constraint with per-coordinate clamping.
/// Returns the projected point and the bisection step count.
pub(crate) fn hypersimplex(k: usize, scale: f64, y: &[f64]) -> (Vec<f64>, usize) {
    let target = k as f64 * scale;
    let max_y = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_y = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let clamp_sum =
        |tau: f64| -> f64 { y.iter().map(|v| (v - tau).clamp(0.0, scale)).sum::<f64>() };

    // sum(tau) is continuous and non-increasing; these endpoints bracket the
    // target for every feasible k.
    let mut lo = min_y - scale;
    let mut hi = max_y;
    let tol = 1e-12 * max_y.abs().max(min_y.abs()).max(scale).max(1.0);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        let mid = 0.5 * (lo + hi);
        if clamp_sum(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    let tau = 0.5 * (lo + hi);
    let mut x: Vec<f64> = y.iter().map(|v| (v - tau).clamp(0.0, scale)).collect();

    // Distribute the leftover equality residual over the strictly interior
    // coordinates so the sum constraint holds to machine precision.
    let margin = 1e-9 * scale;
    let free: Vec<usize> = (0..x.len())
        .filter(|&i| x[i] > margin && x[i] < scale - margin)
        .collect();
    if !free.is_empty() {
        let residual = x.iter().sum::<f64>() - target;
        let delta = residual / free.len() as f64;
        for &i in &free {
            x[i] = (x[i] - delta).clamp(0.0, scale);
        }
    }
    (x, iters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_interior_point_is_fixed() {
        let y = [0.2, -0.3];
        assert_eq!(l1_ball(1.0, &y), y.to_vec());
    }

    #[test]
    fn l1_projection_lands_on_sphere() {
        let y = [2.0, -1.0, 0.5, 0.0];
        let x = l1_ball(1.0, &y);
        let n1: f64 = x.iter().map(|v| v.abs()).sum();
        assert!((n1 - 1.0).abs() < 1e-12);
        // Signs are preserved and magnitudes shrink.
        for (a, b) in x.iter().zip(&y) {
            assert!(a.abs() <= b.abs() + 1e-12);
            assert!(a * b >= 0.0);
        }
    }

    #[test]
    fn simplex_handles_negative_coordinates() {
        let x = simplex(&[-1.0, 0.0, 1.5]);
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(x.iter().all(|v| *v >= 0.0));
        assert!((x[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hypersimplex_sum_and_bounds() {
        let (x, _) = hypersimplex(3, 2.0, &[5.0, -1.0, 0.5, 2.1, 1.9, 0.0]);
        let sum: f64 = x.iter().sum();
        assert!((sum - 6.0).abs() < 1e-10, "sum {sum}");
        assert!(x.iter().all(|v| *v >= -1e-12 && *v <= 2.0 + 1e-12));
    }

    #[test]
    fn hypersimplex_full_k_is_constant() {
        let (x, _) = hypersimplex(3, 1.5, &[9.0, -4.0, 0.3]);
        for v in x {
            assert!((v - 1.5).abs() < 1e-10);
        }
    }
}
