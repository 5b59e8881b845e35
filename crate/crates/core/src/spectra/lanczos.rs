//! Thick-restart (Krylov–Schur) Lanczos for the largest algebraic
//! eigenpair of a symmetric operator given as a multiply callback.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::jacobi::jacobi_raw;
use super::{fix_sign, SpectralOptions, SpectralStatus};
use crate::tensor::{dot, norm2};

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
    pub restarts: usize,
    pub status: SpectralStatus,
}

struct Krylov<F> {
    op: F,
    m: usize,
    matvecs: usize,
    rng: ChaCha8Rng,
    scratch: Vec<f64>,
}

impl<F: FnMut(&[f64], &mut [f64])> Krylov<F> {
    fn apply(&mut self, x: &[f64], y: &mut [f64]) {
        self.matvecs += 1;
        (self.op)(x, y);
    }

    fn random_unit(&mut self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.m)
            .map(|_| StandardNormal.sample(&mut self.rng))
            .collect();
        let n = norm2(&v);
        v.iter_mut().for_each(|x| *x /= n);
        v
    }

    /// Random unit vector orthogonal to `basis`, or `None` if the basis
    /// already spans the space numerically.
    fn random_orthogonal(&mut self, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
        for _ in 0..3 {
            let mut v = self.random_unit();
            orthogonalize(&mut v, basis);
            orthogonalize(&mut v, basis);
            let n = norm2(&v);
            if n > 1e-8 {
                v.iter_mut().for_each(|x| *x /= n);
                return Some(v);
            }
        }
        None
    }

    /// Rayleigh quotient and true residual of a unit vector.
    fn evaluate(&mut self, y: &[f64]) -> (f64, f64) {
        let mut my = std::mem::take(&mut self.scratch);
        my.resize(self.m, 0.0);
        self.apply(y, &mut my);
        let rho = dot(y, &my);
        let r = my
            .iter()
            .zip(y)
            .map(|(a, b)| (a - rho * b) * (a - rho * b))
            .sum::<f64>()
            .sqrt();
        self.scratch = my;
        (rho, r)
    }
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    let mut last = 0.0;
    for b in basis {
        let c = dot(b, w);
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi -= c * bi;
        }
        last = c;
    }
    last
}

/// Top eigenpair of the `k×k` leading block of a row-major `h` with stride
/// `stride`. Returns all eigenvalues (descending) with their vectors.
fn small_evd(h: &[f64], k: usize, stride: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut block = vec![0.0; k * k];
    for i in 0..k {
        block[i * k..(i + 1) * k].copy_from_slice(&h[i * stride..i * stride + k]);
    }
    let (vals, vecs) = jacobi_raw(&block, k);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let values = order.iter().map(|&j| vals[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..k).map(|r| vecs[r * k + j]).collect())
        .collect();
    (values, vectors)
}

fn combine(basis: &[Vec<f64>], coef: &[f64], m: usize) -> Vec<f64> {
    let mut y = vec![0.0; m];
    for (b, &c) in basis.iter().zip(coef) {
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi += c * bi;
        }
    }
    let n = norm2(&y);
    if n > 0.0 {
        y.iter_mut().for_each(|x| *x /= n);
    }
    y
}

pub(crate) fn largest<F>(op: F, m: usize, opts: &SpectralOptions, warm: Option<&[f64]>) -> Outcome
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut k = Krylov {
        op,
        m,
        matvecs: 0,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        scratch: Vec::new(),
    };

    if m == 1 {
        let (rho, r) = k.evaluate(&[1.0]);
        return Outcome {
            value: rho,
            vector: vec![1.0],
            residual: r,
            matvecs: k.matvecs,
            restarts: 0,
            status: SpectralStatus::Converged,
        };
    }

    let kmax = opts.krylov_dim.clamp(2, m);
    let keep = (kmax / 3).clamp(1, kmax - 1);
    let min_steps = m.min(3);

    let start = match warm {
        Some(w) if w.len() == m && norm2(w) > 0.0 => {
            let n = norm2(w);
            w.iter().map(|x| x / n).collect()
        }
        _ => k.random_unit(),
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(kmax + 1);
    basis.push(start);
    let mut h = vec![0.0; kmax * kmax];
    let mut p = 0usize;
    let mut restarts = 0usize;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut w = vec![0.0; m];

    loop {
        let mut j = p;
        let (size, next, coupling) = loop {
            k.apply(&basis[j], &mut w);
            if w.iter().any(|x| !x.is_finite()) {
                let v = basis[j].clone();
                return Outcome {
                    value: f64::NAN,
                    vector: v,
                    residual: f64::INFINITY,
                    matvecs: k.matvecs,
                    restarts,
                    status: SpectralStatus::NotConverged,
                };
            }
            let a1 = orthogonalize(&mut w, &basis[..=j]);
            let a2 = orthogonalize(&mut w, &basis[..=j]);
            h[j * kmax + j] = a1 + a2;
            let beta = norm2(&w);
            let size = j + 1;

            let (theta, s) = small_evd(&h, size, kmax);
            let scale = theta.iter().fold(1.0f64, |acc, t| acc.max(t.abs()));
            let est = beta * s[0][size - 1].abs();
            let mut force_restart = false;
            if size >= min_steps && est <= opts.tol * scale {
                let y = combine(&basis, &s[0], m);
                let (rho, r) = k.evaluate(&y);
                if r <= opts.tol * scale.max(rho.abs()) {
                    return finish(rho, y, r, &k, restarts, SpectralStatus::Converged);
                }
                if best.as_ref().map_or(true, |b| r < b.2) {
                    best = Some((rho, y, r));
                }
                force_restart = true;
            }

            let breakdown = beta <= 1e-12 * scale;
            if breakdown && size == m {
                let y = combine(&basis, &s[0], m);
                let (rho, r) = k.evaluate(&y);
                return finish(rho, y, r, &k, restarts, SpectralStatus::Converged);
            }
            let (next, coupling) = if breakdown {
                match k.random_orthogonal(&basis) {
                    Some(v) => (v, 0.0),
                    None => {
                        let y = combine(&basis, &s[0], m);
                        let (rho, r) = k.evaluate(&y);
                        return finish(rho, y, r, &k, restarts, SpectralStatus::Converged);
                    }
                }
            } else {
                (w.iter().map(|x| x / beta).collect(), beta)
            };

            if k.matvecs >= opts.max_matvecs {
                let y = combine(&basis, &s[0], m);
                let (rho, r) = k.evaluate(&y);
                let (rho, y, r) = match best.take() {
                    Some(b) if b.2 < r => b,
                    _ => (rho, y, r),
                };
                let status = if r <= opts.tol * scale.max(rho.abs()) {
                    SpectralStatus::Converged
                } else {
                    SpectralStatus::NotConverged
                };
                return finish(rho, y, r, &k, restarts, status);
            }

            if size < kmax && !force_restart {
                h[(j + 1) * kmax + j] = coupling;
                h[j * kmax + j + 1] = coupling;
                basis.push(next);
                j += 1;
            } else {
                break (size, next, coupling);
            }
        };

        // Thick restart: keep the top Ritz vectors, couple them to the
        // residual direction through the last components of their
        // coordinate vectors.
        restarts += 1;
        let (theta, s) = small_evd(&h, size, kmax);
        let kept = keep.min(size - 1).max(1);
        let mut new_basis: Vec<Vec<f64>> = Vec::with_capacity(kmax + 1);
        for sv in s.iter().take(kept) {
            new_basis.push(combine(&basis, sv, m));
        }
        // Re-orthonormalize against accumulated rounding.
        for i in 0..new_basis.len() {
            let (done, rest) = new_basis.split_at_mut(i);
            orthogonalize(&mut rest[0], done);
            let n = norm2(&rest[0]);
            rest[0].iter_mut().for_each(|x| *x /= n);
        }
        h.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..kept {
            h[i * kmax + i] = theta[i];
            let c = coupling * s[i][size - 1];
            h[kept * kmax + i] = c;
            h[i * kmax + kept] = c;
        }
        let mut next = next;
        orthogonalize(&mut next, &new_basis);
        let n = norm2(&next);
        if n > 1e-8 {
            next.iter_mut().for_each(|x| *x /= n);
        } else if let Some(v) = k.random_orthogonal(&new_basis) {
            next = v;
            for i in 0..kept {
                h[kept * kmax + i] = 0.0;
                h[i * kmax + kept] = 0.0;
            }
        }
        new_basis.push(next);
        basis = new_basis;
        p = kept;
    }
}

fn finish<F>(
    value: f64,
    mut vector: Vec<f64>,
    residual: f64,
    k: &Krylov<F>,
    restarts: usize,
    status: SpectralStatus,
) -> Outcome {
    fix_sign(&mut vector);
    Outcome {
        value,
        vector,
        residual,
        matvecs: k.matvecs,
        restarts,
        status,
    }
}

/// Power iteration on `M + shift·I`, used when Lanczos stalls.
pub(crate) fn shifted_power<F>(
    mut op: F,
    m: usize,
    shift: f64,
    opts: &SpectralOptions,
    start: &[f64],
) -> Outcome
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut x = start.to_vec();
    let n = norm2(&x);
    x.iter_mut().for_each(|v| *v /= n);
    let mut y = vec![0.0; m];
    let mut matvecs = 0;
    let mut rho = 0.0;
    let mut r = f64::INFINITY;
    while matvecs < opts.max_matvecs {
        op(&x, &mut y);
        matvecs += 1;
        rho = dot(&x, &y);
        r = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - rho * b) * (a - rho * b))
            .sum::<f64>()
            .sqrt();
        if r <= opts.tol * rho.abs().max(1.0) {
            break;
        }
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        let ny = norm2(&y);
        if ny == 0.0 {
            break;
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / ny);
    }
    fix_sign(&mut x);
    let status = if r <= opts.tol * rho.abs().max(1.0) {
        SpectralStatus::Converged
    } else {
        SpectralStatus::NotConverged
    };
    Outcome {
        value: rho,
        vector: x,
        residual: r,
        matvecs,
        restarts: 0,
        status,
    }
}
