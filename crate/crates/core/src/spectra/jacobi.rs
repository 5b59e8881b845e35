//! Cyclic Jacobi eigen-solver for small dense symmetric matrices.

use super::{fix_sign, Matrix};
use crate::error::SpectralError;

/// Largest matrix order accepted by [`dense_sym_evd`].
pub const DENSE_EVD_LIMIT: usize = 400;

const MAX_SWEEPS: usize = 80;

/// Full eigendecomposition `M = Q diag(values) Q^T`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector of `values[k]`.
    pub vectors: Matrix,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Rotations are skipped once an off-diagonal entry is negligible against
/// the geometric mean of the two diagonal entries it couples, so small
/// eigenvalues keep their relative accuracy. Iteration stops after a sweep
/// that performs no rotation.
pub fn dense_sym_evd(m: &Matrix) -> Result<SymEigen, SpectralError> {
    let n = m.rows();
    if n != m.cols() {
        return Err(SpectralError::NotSquare {
            rows: n,
            cols: m.cols(),
        });
    }
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    if n > DENSE_EVD_LIMIT {
        return Err(SpectralError::TooLarge {
            size: n,
            limit: DENSE_EVD_LIMIT,
        });
    }
    let norm = m.frob_norm();
    let asym = m.max_asymmetry();
    if asym > 1e-10 * norm.max(f64::MIN_POSITIVE) {
        return Err(SpectralError::NotSymmetric { asymmetry: asym });
    }
    if !norm.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    let (values, vectors) = jacobi_raw(m.as_slice(), n);
    Ok(sorted(values, vectors, n))
}

/// Jacobi on a row-major buffer without validation; returns unsorted
/// eigenvalues and the row-major eigenvector matrix (columns are vectors).
pub(crate) fn jacobi_raw(data: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = data.to_vec();
    // Exact symmetrization so rotations act on a symmetric matrix.
    for p in 0..n {
        for q in p + 1..n {
            let v = 0.5 * (a[p * n + q] + a[q * n + p]);
            a[p * n + q] = v;
            a[q * n + p] = v;
        }
    }
    let mut v = vec![0.0; n * n];
    for p in 0..n {
        v[p * n + p] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let floor = f64::EPSILON * 1e-3 * norm;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= floor
                    || apq.abs() <= 0.5 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt()
                {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let values = (0..n).map(|p| a[p * n + p]).collect();
    (values, v)
}

fn sorted(values: Vec<f64>, v: Vec<f64>, n: usize) -> SymEigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut out = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for r in 0..n {
            col[r] = v[r * n + old_k];
        }
        fix_sign(&mut col);
        for r in 0..n {
            out[r * n + new_k] = col[r];
        }
    }
    SymEigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: Matrix::from_vec(n, n, out),
    }
}
