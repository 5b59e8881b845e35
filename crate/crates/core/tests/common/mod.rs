//! Reference implementations used as test oracles. Nothing here calls the
//! crate's numerical kernels; tensors are only read through `as_slice`.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tenspec::DenseTensor;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.sample(StandardNormal)).collect()
}

pub fn unit_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(r, n);
        let nv = norm(&v);
        if nv > 1e-3 {
            return v.iter().map(|x| x / nv).collect();
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist_up_to_sign(a: &[f64], b: &[f64]) -> f64 {
    let plus = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let minus = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x + y).abs())
        .fold(0.0, f64::max);
    plus.min(minus)
}

/// Index tuple of flat position `flat` (last index fastest).
pub fn decode(mut flat: usize, d: usize, n: usize) -> Vec<usize> {
    let mut idx = vec![0; d];
    for k in (0..d).rev() {
        idx[k] = flat % n;
        flat /= n;
    }
    idx
}

pub fn encode(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// `x^{∘d}` entry by entry.
pub fn outer_power(x: &[f64], d: usize) -> Vec<f64> {
    let n = x.len();
    (0..n.pow(d as u32))
        .map(|f| decode(f, d, n).iter().map(|&i| x[i]).product())
        .collect()
}

/// `<A, x^{∘d}>` by full enumeration.
pub fn rayleigh(a: &DenseTensor, x: &[f64]) -> f64 {
    let (d, n) = (a.order(), a.dim());
    a.as_slice()
        .iter()
        .enumerate()
        .map(|(f, v)| v * decode(f, d, n).iter().map(|&i| x[i]).product::<f64>())
        .sum()
}

/// `A x^{d-1}` by full enumeration.
pub fn apply(a: &DenseTensor, x: &[f64]) -> Vec<f64> {
    let (d, n) = (a.order(), a.dim());
    let mut out = vec![0.0; n];
    for (f, v) in a.as_slice().iter().enumerate() {
        let idx = decode(f, d, n);
        out[idx[0]] += v * idx[1..].iter().map(|&i| x[i]).product::<f64>();
    }
    out
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

/// Average over all `d!` index permutations, applied tuple by tuple.
pub fn symmetrize(a: &DenseTensor) -> Vec<f64> {
    let (d, n) = (a.order(), a.dim());
    let perms = permutations(d);
    let data = a.as_slice();
    (0..data.len())
        .map(|f| {
            let idx = decode(f, d, n);
            let s: f64 = perms
                .iter()
                .map(|p| {
                    let q: Vec<usize> = p.iter().map(|&k| idx[k]).collect();
                    data[encode(&q, n)]
                })
                .sum();
            s / perms.len() as f64
        })
        .collect()
}

/// Eigenvalues (descending) and matching unit eigenvectors.
pub fn sym_eig(data: &[f64], m: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mat = DMatrix::from_row_slice(m, m, data);
    let e = SymmetricEigen::new(mat);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| e.eigenvalues[j].total_cmp(&e.eigenvalues[i]));
    let vals = order.iter().map(|&k| e.eigenvalues[k]).collect();
    let vecs = order
        .iter()
        .map(|&k| e.eigenvectors.column(k).iter().copied().collect())
        .collect();
    (vals, vecs)
}

/// Singular values (descending) of a row-major `rows × cols` matrix.
pub fn singular_values(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mat = DMatrix::from_row_slice(rows, cols, data);
    let mut s: Vec<f64> = mat.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value by power iteration on `M^T M`.
pub fn top_singular_power(data: &[f64], rows: usize, cols: usize, iters: usize) -> f64 {
    let mut v = vec![1.0; cols];
    let mut sigma = 0.0;
    for _ in 0..iters {
        let mv: Vec<f64> = (0..rows)
            .map(|i| (0..cols).map(|j| data[i * cols + j] * v[j]).sum())
            .collect();
        let mut w = vec![0.0; cols];
        for i in 0..rows {
            for j in 0..cols {
                w[j] += data[i * cols + j] * mv[i];
            }
        }
        let nw = norm(&w);
        sigma = nw.sqrt();
        v = w.iter().map(|x| x / nw).collect();
    }
    sigma
}

pub fn random_sym_matrix(r: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let g = gaussian_vec(r, m * m);
    let mut s = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            s[i * m + j] = 0.5 * (g[i * m + j] + g[j * m + i]);
        }
    }
    s
}

/// Shifted symmetric higher-order power method from `x0`.
pub fn ss_hopm(a: &DenseTensor, x0: &[f64]) -> (f64, Vec<f64>) {
    let d = a.order() as f64;
    let alpha = (d - 1.0) * a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut x = x0.to_vec();
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..200_000 {
        let g = apply(a, &x);
        let mut y: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi + alpha * xi).collect();
        let ny = norm(&y);
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
        let val = rayleigh(a, &x);
        if (val - prev).abs() <= 1e-15 * val.abs().max(1.0) {
            break;
        }
        prev = val;
    }
    (rayleigh(a, &x), x)
}

/// Maximum of `<A, x^{∘d}>` over the unit sphere: a dense grid (n = 3) or
/// random sample (other n), then SS-HOPM from the best candidates.
pub fn sphere_max(a: &DenseTensor, seed: u64) -> f64 {
    let n = a.dim();
    let mut cands: Vec<(f64, Vec<f64>)> = Vec::new();
    if n == 3 {
        let (nt, np) = (90, 180);
        for i in 0..=nt {
            let t = std::f64::consts::PI * i as f64 / nt as f64;
            for j in 0..np {
                let p = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
                let x = vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
                cands.push((rayleigh(a, &x), x));
            }
        }
    } else {
        let mut r = rng(seed);
        for _ in 0..4000 {
            let x = unit_vec(&mut r, n);
            cands.push((rayleigh(a, &x), x));
        }
    }
    cands.sort_by(|p, q| q.0.total_cmp(&p.0));
    cands
        .iter()
        .take(12)
        .map(|(_, x)| ss_hopm(a, x).0)
        .fold(f64::NEG_INFINITY, f64::max)
}
