//! Deterministic tensor families.
//!
//! Structured families are defined entrywise with 1-based indices and depend
//! only on the index multiset, so they are symmetric by construction. Random
//! families draw from one `ChaCha8Rng` stream per tensor, seeded from the
//! caller's `seed`, in storage order.

mod examples;

pub use examples::{example, example1, example2, example3, example4, example5, example5_terms};

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::TensorError;
use crate::tensor::{DenseTensor, OrbitTable};

fn check(d: usize, n: usize) -> Result<(), TensorError> {
    if d < 1 || n < 1 {
        return Err(TensorError::InvalidShape { order: d, dim: n });
    }
    Ok(())
}

/// Sum of a univariate term over the 1-based indices, accumulated in
/// sorted index order so equal multisets give bit-identical entries.
fn separable(d: usize, n: usize, f: impl Fn(usize) -> f64) -> Result<DenseTensor, TensorError> {
    check(d, n)?;
    let table: Vec<f64> = (1..=n).map(f).collect();
    let mut sorted = vec![0usize; d];
    DenseTensor::from_fn(d, n, |idx| {
        sorted.copy_from_slice(idx);
        sorted.sort_unstable();
        sorted.iter().map(|&i| table[i]).sum()
    })
}

/// `1 / (i_1 + .. + i_d - d + 1)`.
pub fn hilbert(d: usize, n: usize) -> Result<DenseTensor, TensorError> {
    check(d, n)?;
    DenseTensor::from_fn(d, n, |idx| 1.0 / (idx.iter().sum::<usize>() as f64 + 1.0))
}

/// `Σ_k (-1)^{i_k} ln(i_k)`.
pub fn log_tensor(d: usize, n: usize) -> Result<DenseTensor, TensorError> {
    separable(d, n, |i| alt(i) * (i as f64).ln())
}

/// `Σ_k arctan((-1)^{i_k} i_k / n)`.
pub fn arctan_tensor(d: usize, n: usize) -> Result<DenseTensor, TensorError> {
    separable(d, n, |i| (alt(i) * i as f64 / n as f64).atan())
}

/// `Σ_k (-1)^{i_k} / i_k`.
pub fn fraction_tensor(d: usize, n: usize) -> Result<DenseTensor, TensorError> {
    separable(d, n, |i| alt(i) / i as f64)
}

fn alt(i: usize) -> f64 {
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Symmetrized uniform `[0,1)` entries with `round(zero_frac · #orbits)`
/// whole orbits set to zero.
pub fn random_sparse_nonneg(
    d: usize,
    n: usize,
    zero_frac: f64,
    seed: u64,
) -> Result<DenseTensor, TensorError> {
    check(d, n)?;
    if !(0.0..1.0).contains(&zero_frac) {
        return Err(TensorError::InvalidArgument(format!(
            "zero fraction {zero_frac} outside [0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = OrbitTable::new(d, n);
    let len = n.pow(d as u32);
    let mut data: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    let mut scratch = Vec::new();
    table.symmetrize_in_place(&mut data, &mut scratch);

    let orbits = table.num_orbits();
    let zeroed = ((zero_frac * orbits as f64).round() as usize).min(orbits);
    let mut order: Vec<usize> = (0..orbits).collect();
    order.shuffle(&mut rng);
    let mut kill = vec![false; orbits];
    for &o in &order[..zeroed] {
        kill[o] = true;
    }
    for (flat, v) in data.iter_mut().enumerate() {
        if kill[table.orbit_of(flat)] {
            *v = 0.0;
        }
    }
    DenseTensor::from_vec(d, n, data)
}

/// Symmetrization of i.i.d. standard normal entries.
pub fn random_gaussian_sym(d: usize, n: usize, seed: u64) -> Result<DenseTensor, TensorError> {
    check(d, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = n.pow(d as u32);
    let data: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    Ok(DenseTensor::from_vec(d, n, data)?.symmetrize())
}

/// Tensor of the homogeneous polynomial `Σ coeff · x^α`.
///
/// Each index tuple whose content is `α` receives `coeff · Πα_j! / d!`, so
/// `<A, x^{∘d}>` reproduces the polynomial. Repeated exponents add up.
pub fn from_monomials(
    d: usize,
    n: usize,
    terms: &[(Vec<usize>, f64)],
) -> Result<DenseTensor, TensorError> {
    check(d, n)?;
    let mut coeffs: HashMap<Vec<usize>, f64> = HashMap::new();
    for (alpha, c) in terms {
        if alpha.len() != n {
            return Err(TensorError::InvalidArgument(format!(
                "exponent vector {alpha:?} has length {}, expected {n}",
                alpha.len()
            )));
        }
        let deg: usize = alpha.iter().sum();
        if deg != d {
            return Err(TensorError::InvalidArgument(format!(
                "monomial {alpha:?} has degree {deg}, expected {d}"
            )));
        }
        if !c.is_finite() {
            return Err(TensorError::InvalidArgument(format!(
                "non-finite coefficient {c}"
            )));
        }
        *coeffs.entry(alpha.clone()).or_insert(0.0) += c;
    }
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let d_fact = fact(d);
    let weights: HashMap<Vec<usize>, f64> = coeffs
        .into_iter()
        .map(|(alpha, c)| {
            let w = c * alpha.iter().map(|&a| fact(a)).product::<f64>() / d_fact;
            (alpha, w)
        })
        .collect();
    let mut content = vec![0usize; n];
    DenseTensor::from_fn(d, n, |idx| {
        content.iter_mut().for_each(|c| *c = 0);
        for &i in idx {
            content[i] += 1;
        }
        weights.get(&content).copied().unwrap_or(0.0)
    })
}
