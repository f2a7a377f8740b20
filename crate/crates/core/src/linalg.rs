//! Small dense linear-algebra kernels backing the projection operators.
//!
//! Matrices are row-major `&[f64]` slices with explicit dimensions. All
//! routines are deterministic: no pivoting decision or sweep order depends on
//! anything but the input values.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn is_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Eigendecomposition of a symmetric matrix, `a = V diag(values) V^T`.
///
/// `vectors` is row-major n-by-n with eigenvector `j` stored in column `j`.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

/// Cyclic Jacobi eigendecomposition. The input must be symmetric; only the
/// symmetric part participates (callers symmetrize first).
pub fn sym_eigen(a: &[f64], n: usize) -> SymEigen {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return SymEigen {
            values: m,
            vectors: v,
            sweeps: 0,
        };
    }

    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = 1e-15 * frob.max(f64::MIN_POSITIVE);
    let max_sweeps = 64;
    let mut sweeps = 0;
    for _ in 0..max_sweeps {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += m[p * n + q] * m[p * n + q];
                }
            }
            s.sqrt()
        };
        if off <= stop {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= stop / (n as f64) {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotate rows/columns p and q of m.
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                // Accumulate the rotation into the eigenvector columns.
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    SymEigen {
        values,
        vectors: v,
        sweeps,
    }
}

/// Thin singular value decomposition, `a = U diag(s) Vt` with singular values
/// in descending order. `u` is m-by-r row-major, `vt` is r-by-n row-major,
/// r = min(m, n).
pub struct Svd {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub vt: Vec<f64>,
}

/// One-sided Jacobi SVD. Numerically robust at the small sizes used here and
/// fully deterministic.
pub fn svd(a: &[f64], m: usize, n: usize) -> Svd {
    assert_eq!(a.len(), m * n);
    if m < n {
        // Decompose the transpose and swap factors.
        let mut at = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                at[j * m + i] = a[i * n + j];
            }
        }
        let f = svd(&at, n, m);
        let r = m;
        // u of the transpose is n-by-r, vt is r-by-m; swap and transpose.
        let mut u = vec![0.0; m * r];
        for k in 0..r {
            for i in 0..m {
                u[i * r + k] = f.vt[k * m + i];
            }
        }
        let mut vt = vec![0.0; r * n];
        for k in 0..r {
            for j in 0..n {
                vt[k * n + j] = f.u[j * r + k];
            }
        }
        return Svd { u, s: f.s, vt };
    }

    // Column-major working copy of a (m >= n) and accumulator v (n-by-n).
    let mut b = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            b[j * m + i] = a[i * n + j];
        }
    }
    let mut v = vec![0.0; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }

    let eps = 1e-15;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                let (ci, cj) = (i * m, j * m);
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for k in 0..m {
                    let bi = b[ci + k];
                    let bj = b[cj + k];
                    alpha += bi * bi;
                    beta += bj * bj;
                    gamma += bi * bj;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let bi = b[ci + k];
                    let bj = b[cj + k];
                    b[ci + k] = c * bi - s * bj;
                    b[cj + k] = s * bi + c * bj;
                }
                for k in 0..n {
                    let vi = v[k * n + i];
                    let vj = v[k * n + j];
                    v[k * n + i] = c * vi - s * vj;
                    v[k * n + j] = s * vi + c * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Extract singular values and sort descending (ties by column index).
    let mut sv: Vec<(f64, usize)> = (0..n)
        .map(|j| {
            let col = &b[j * m..(j + 1) * m];
            (norm(col), j)
        })
        .collect();
    sv.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));

    let r = n;
    let mut u = vec![0.0; m * r];
    let mut s = vec![0.0; r];
    let mut vt = vec![0.0; r * n];
    for (k, &(sigma, j)) in sv.iter().enumerate() {
        s[k] = sigma;
        if sigma > 0.0 {
            for i in 0..m {
                u[i * r + k] = b[j * m + i] / sigma;
            }
        }
        for i in 0..n {
            vt[k * n + i] = v[i * n + j];
        }
    }
    Svd { u, s, vt }
}

/// Solves `a x = b` in place by LU with partial pivoting; `b` holds the
/// solution on success. Returns false when a pivot is negligible.
pub fn solve_linear(a: &mut [f64], n: usize, b: &mut [f64]) -> bool {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let scale: f64 = a.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1e-300);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for row in (col + 1)..n {
            let cand = a[row * n + col].abs();
            if cand > best {
                best = cand;
                piv = row;
            }
        }
        if best <= 1e-13 * scale {
            return false;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for row in (col + 1)..n {
            let f = a[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in (col + 1)..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut x = b[col];
        for k in (col + 1)..n {
            x -= a[col * n + k] * b[k];
        }
        b[col] = x / a[col * n + col];
    }
    true
}
