//! Dense vector/matrix helpers for desk-scale problems (dims well under 100).
//! Matrices are row-major `Vec<f64>` slabs; nothing here is tuned for size.

use crate::error::DcError;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// a + s*b
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Convex combination (1-t)*a + t*b.
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// y = M x for a row-major n x n matrix.
pub fn mat_vec(m: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(m.len(), n * n);
    debug_assert_eq!(x.len(), n);
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = dot(&m[i * n..(i + 1) * n], x);
    }
    y
}

/// Maximum |M[i][j] - M[j][i]| over all pairs.
pub fn max_asymmetry(m: &[f64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[i * n + j] - m[j * n + i]).abs());
        }
    }
    worst
}

/// Solves M x = b by Gaussian elimination with partial pivoting.
/// The inputs are copied; M must be n x n row-major.
pub fn solve_dense(m: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>, DcError> {
    if m.len() != n * n || b.len() != n {
        return Err(DcError::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut a = m.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        // Pivot on the largest remaining entry in this column.
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in (col + 1)..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best < 1e-300 {
            return Err(DcError::SingularSystem);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            rhs.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}

/// Cholesky factor of a symmetric matrix, or `None` when a pivot falls at or
/// below `tol * max_diagonal` (i.e. the matrix is not solidly positive
/// definite). This is the deterministic PD test used for dispatch decisions.
pub fn cholesky(m: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    let max_diag = (0..n).map(|i| m[i * n + i].abs()).fold(0.0, f64::max).max(1e-300);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= tol * max_diag {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Relative residual ||Mx - b|| / (1 + ||b||).
pub fn solve_residual(m: &[f64], n: usize, x: &[f64], b: &[f64]) -> f64 {
    let mx = mat_vec(m, n, x);
    let r: f64 = mx.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    r / (1.0 + norm(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [[2,1],[1,3]] x = [3,5] -> x = [4/5, 7/5]
        let m = vec![2.0, 1.0, 1.0, 3.0];
        let x = solve_dense(&m, 2, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14);
        assert!((x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let m = vec![0.0, 1.0, 1.0, 0.0];
        let x = solve_dense(&m, 2, &[2.0, 3.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-14);
        assert!((x[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = vec![1.0, 2.0, 2.0, 4.0];
        assert!(matches!(solve_dense(&m, 2, &[1.0, 2.0]), Err(DcError::SingularSystem)));
    }

    #[test]
    fn asymmetry_measure() {
        let m = vec![1.0, 2.0, 2.5, 1.0];
        assert!((max_asymmetry(&m, 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cholesky_accepts_pd_rejects_singular() {
        let pd = vec![4.0, 1.0, 1.0, 3.0];
        assert!(cholesky(&pd, 2, 1e-10).is_some());
        let singular = vec![2.0, 0.0, 0.0, 0.0];
        assert!(cholesky(&singular, 2, 1e-10).is_none());
        let indefinite = vec![1.0, 0.0, 0.0, -1.0];
        assert!(cholesky(&indefinite, 2, 1e-10).is_none());
    }
}
