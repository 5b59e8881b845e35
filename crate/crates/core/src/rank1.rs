//! Rounding of near-rank-1 tensors to `±x^{∘d}` with unit `x`.

use crate::error::TensorError;
use crate::spectra::{
    dense_sym_evd, fix_sign, gram_rows, leading_eigpair_sym, SpectralOptions, DENSE_EVD_LIMIT,
};
use crate::tensor::{contract_trailing, dot, norm2, DenseTensor};

/// Result of rounding a tensor to a signed rank-1 tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1 {
    /// Unit vector.
    pub x: Vec<f64>,
    /// `+1` or `-1`; always `+1` for even order.
    pub sign: f64,
    /// `‖X/‖X‖ - sign·x^{∘d}‖_F`.
    pub err: f64,
}

/// The solver's factored iterate: `Mat(X) = z z^T` or `z1 z2^T`.
#[derive(Debug, Clone, Copy)]
pub enum Factor<'a> {
    Even(&'a [f64]),
    Odd(&'a [f64], &'a [f64]),
}

/// Rounds `t` through the leading left singular vector of its mode-1
/// unfolding.
pub fn extract(t: &DenseTensor, tol: f64) -> Result<Rank1, TensorError> {
    let norm = t.frob_norm();
    if norm == 0.0 {
        return Err(TensorError::InvalidArgument(
            "cannot extract a rank-1 factor from the zero tensor".into(),
        ));
    }
    let (d, n) = (t.order(), t.dim());
    let data = t.as_slice();
    let x = mode1_leading(data, n, tol);
    let sign = if d % 2 == 1 && power_inner(data, &x, d) < 0.0 {
        -1.0
    } else {
        1.0
    };
    let err = distance_to_power(data, norm, &x, sign, d);
    Ok(Rank1 { x, sign, err })
}

fn mode1_leading(data: &[f64], n: usize, tol: f64) -> Vec<f64> {
    let cols = data.len() / n;
    let gram = gram_rows(data, n, cols);
    let mut x = if n <= DENSE_EVD_LIMIT {
        dense_sym_evd(&gram)
            .expect("Gram matrix is symmetric")
            .vector(0)
    } else {
        let opts = SpectralOptions {
            tol,
            ..SpectralOptions::default()
        };
        leading_eigpair_sym(&gram, &opts, None)
            .expect("Gram matrix is symmetric")
            .vector
    };
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    fix_sign(&mut x);
    x
}

/// `<T, x^{⊗k}>` for a flat buffer of `k` modes.
fn power_inner(data: &[f64], x: &[f64], k: usize) -> f64 {
    if k == 0 {
        return data[0];
    }
    let v = contract_trailing(data, x, k - 1);
    dot(&v, x)
}

/// `‖T/norm - s·x^{∘d}‖_F`, summed termwise so no cancellation occurs.
fn distance_to_power(data: &[f64], norm: f64, x: &[f64], sign: f64, d: usize) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    let mut idx = vec![0usize; d];
    // Prefix products of the current index, refreshed from the first
    // changed position only.
    let mut prefix = vec![1.0; d + 1];
    for k in 0..d {
        prefix[k + 1] = prefix[k] * x[0];
    }
    for &v in data {
        let diff = v / norm - sign * prefix[d];
        acc += diff * diff;
        let mut k = d;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
        for j in k..d {
            prefix[j + 1] = prefix[j] * x[idx[j]];
        }
    }
    acc.sqrt()
}

/// Fast path from the factored iterate of an order-`d` problem in
/// dimension `n`. Returns `x` with `<X, x^{∘d}> >= 0` and the distance of
/// `X` from `x^{∘d}`.
pub fn extract_from_factor(factor: Factor<'_>, d: usize, n: usize, tol: f64) -> Rank1 {
    match factor {
        Factor::Even(z) => {
            let half = d / 2;
            let x = extract_vector(z, half, n, tol);
            let p = crate::tensor::kron_power(&x, half);
            let nz = norm2(z);
            let c = dot(z, &p) / nz;
            let s = if c < 0.0 { -1.0 } else { 1.0 };
            let dz: f64 = z
                .iter()
                .zip(&p)
                .map(|(a, b)| (a / nz - s * b).powi(2))
                .sum();
            let err = (dz * (1.0 + c.abs())).sqrt();
            Rank1 { x, sign: 1.0, err }
        }
        Factor::Odd(z1, z2) => {
            let (a, b) = (d / 2, d.div_ceil(2));
            let mut x = extract_vector(z1, a, n, tol);
            let mut p = crate::tensor::kron_power(&x, a);
            let mut q = crate::tensor::kron_power(&x, b);
            if dot(z1, &p) * dot(z2, &q) < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
                p = crate::tensor::kron_power(&x, a);
                q = crate::tensor::kron_power(&x, b);
            }
            let (n1, n2) = (norm2(z1), norm2(z2));
            let s1 = if dot(z1, &p) < 0.0 { -1.0 } else { 1.0 };
            let s2 = if dot(z2, &q) < 0.0 { -1.0 } else { 1.0 };
            let h1: f64 = z1
                .iter()
                .zip(&p)
                .map(|(u, v)| (u / n1 - s1 * v).powi(2))
                .sum::<f64>()
                / 2.0;
            let h2: f64 = z2
                .iter()
                .zip(&q)
                .map(|(u, v)| (u / n2 - s2 * v).powi(2))
                .sum::<f64>()
                / 2.0;
            let alpha = 1.0 - h1;
            let err = (2.0 * (h1 + alpha * h2)).max(0.0).sqrt();
            Rank1 { x, sign: 1.0, err }
        }
    }
}

/// Unit `x` from a flat order-`k` buffer; for `k = 0` there is nothing to
/// read, so the first basis vector is returned.
fn extract_vector(z: &[f64], k: usize, n: usize, tol: f64) -> Vec<f64> {
    if k == 0 {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        return e;
    }
    mode1_leading(z, n, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_round_trip() {
        let x0 = [0.48, -0.6, 0.64];
        for d in 1..=5 {
            let t = DenseTensor::outer_power(&x0, d).unwrap();
            let r = extract(&t, 1e-12).unwrap();
            let aligned =
                r.x.iter()
                    .zip(&x0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
            let flipped =
                r.x.iter()
                    .zip(&x0)
                    .map(|(a, b)| (a + b).abs())
                    .fold(0.0, f64::max);
            assert!(aligned.min(flipped) < 1e-12, "d={d}");
            assert!(r.err < 1e-12, "d={d} err={}", r.err);
        }
    }

    #[test]
    fn odd_sign_is_resolved() {
        let x0 = [0.0, 1.0];
        let t = DenseTensor::outer_power(&x0, 3).unwrap().scaled(-2.0);
        let r = extract(&t, 1e-12).unwrap();
        assert_eq!(r.x, vec![0.0, 1.0]);
        assert_eq!(r.sign, -1.0);
        assert!(r.err < 1e-15);
    }

    #[test]
    fn even_negative_power_reports_error() {
        let t = DenseTensor::outer_power(&[1.0, 0.0], 2)
            .unwrap()
            .scaled(-1.0);
        let r = extract(&t, 1e-12).unwrap();
        assert_eq!(r.sign, 1.0);
        assert!((r.err - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_tensor_is_rejected() {
        assert!(extract(&DenseTensor::zeros(3, 2).unwrap(), 1e-12).is_err());
    }

    #[test]
    fn factor_of_kron_square() {
        let x0 = [0.6, 0.0, -0.8];
        let z = crate::tensor::kron_power(&x0, 2);
        let r = extract_from_factor(Factor::Even(&z), 4, 3, 1e-12);
        assert!((r.x[0] + 0.6).abs() < 1e-12 && (r.x[2] - 0.8).abs() < 1e-12);
        assert!(r.err < 1e-12);
    }

    #[test]
    fn odd_factor_with_flipped_pair() {
        let x0 = [0.6, 0.8];
        let z1: Vec<f64> = x0.iter().map(|v| -v).collect();
        let z2: Vec<f64> = crate::tensor::kron_power(&x0, 2)
            .iter()
            .map(|v| -v)
            .collect();
        let r = extract_from_factor(Factor::Odd(&z1, &z2), 3, 2, 1e-12);
        assert!((r.x[0] - 0.6).abs() < 1e-12 && (r.x[1] - 0.8).abs() < 1e-12);
        assert!(r.err < 1e-12);
    }
}
