//! Nonconvex ADMM for the leading Z-eigenpair of a symmetric tensor.
//!
//! The problem `max <A, X>` over symmetric `X` whose balanced matricization
//! is a unit rank-1 matrix is split as `X ∈ C`, `Y` symmetric, `X = Y`,
//! with multiplier `Λ` and penalty `τ`:
//!
//! ```text
//! X+ = argmax_{X ∈ C} <Λ + τY, X>          (top eigen/singular pair of Mat)
//! Y+ = Sym(A - Λ + τX+) / τ
//! Λ+ = Λ - τ (X+ - Y+)
//! ```
//!
//! starting from `X = Y = 0`, `Λ = A`. The `X` iterate is kept factored
//! (`Mat X = u v^T`) and only expanded entrywise inside the update loops.

mod certify;
mod config;
mod trace;

pub use certify::{certify, eig_residual, Certificate, Certification, CERT_TOL, GAP_FLOOR};
pub use config::{SolverConfig, StopRule};
pub use trace::{write_trace_csv, TraceRow};

use serde::Serialize;

use crate::error::SolveError;
use crate::rank1::{extract_from_factor, Factor};
use crate::spectra::{leading_eigpair_op, leading_singular_triple, SpectralOptions};
use crate::tensor::{balanced_shape, dot, DenseTensor, MatricizedView, OrbitTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Converged,
    MaxIter,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverReport {
    /// `<A, x^{∘d}>` for the input tensor (original scale).
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
    pub status: SolveStatus,
    /// `‖A x^{d-1} - σ x‖`.
    pub residual: f64,
    pub certificate: Certificate,
    pub certification: Certification,
    /// Distance of the final `X` from `x^{∘d}`.
    pub extraction_error: f64,
    /// Penalty of the run that produced this report.
    pub tau: f64,
    /// `‖A‖_F` when the data was normalized, otherwise 1.
    pub scale: f64,
    pub retried: bool,
    pub subproblem_matvecs: usize,
    pub trace: Vec<TraceRow>,
    /// Final multiplier in the working scale.
    #[serde(skip)]
    pub multiplier: DenseTensor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum YUpdate {
    /// `Y+ = Sym(A - Λ + τX+) / τ`.
    Full,
    /// `Y+ = Sym(X+)`.
    Simplified,
}

/// Runs the ADMM and certifies the result.
pub fn solve(a: &DenseTensor, cfg: &SolverConfig) -> Result<SolverReport, SolveError> {
    run(a, cfg, YUpdate::Full)
}

/// The equivalent two-block form that drops `Y` in favour of `Sym(X)`.
pub fn solve_simplified(a: &DenseTensor, cfg: &SolverConfig) -> Result<SolverReport, SolveError> {
    run(a, cfg, YUpdate::Simplified)
}

fn run(a: &DenseTensor, cfg: &SolverConfig, mode: YUpdate) -> Result<SolverReport, SolveError> {
    cfg.validate()?;
    let d = a.order();
    if d < 2 {
        return Err(SolveError::OrderTooSmall(d));
    }
    let norm = a.frob_norm();
    if norm == 0.0 {
        return Err(SolveError::ZeroTensor);
    }
    let tolerance = 1e-8 * norm;
    let max_asymmetry = a.max_asymmetry();
    if max_asymmetry > tolerance {
        return Err(SolveError::NotSymmetric {
            max_asymmetry,
            tolerance,
        });
    }
    let scale = if cfg.normalize { norm } else { 1.0 };
    let working = a.scaled(1.0 / scale);
    let table = OrbitTable::new(d, a.dim());

    let tau = cfg.tau_for(d);
    let mut out = iterate(&working, &table, cfg, tau, mode)?;
    let mut retried = false;
    if out.status == SolveStatus::MaxIter {
        if let Some(f) = cfg.retry_tau_factor {
            out = iterate(&working, &table, cfg, tau * f, mode)?;
            retried = true;
        }
    }
    finish(a, &working, scale, cfg, out, retried)
}

struct RawRun {
    u: Vec<f64>,
    v: Vec<f64>,
    lambda: Vec<f64>,
    iterations: usize,
    status: SolveStatus,
    tau: f64,
    matvecs: usize,
    trace: Vec<TraceRow>,
}

fn sq_dist(a: &[f64], b: &[f64], sign: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - sign * y).powi(2)).sum()
}

fn iterate(
    aw: &DenseTensor,
    table: &OrbitTable,
    cfg: &SolverConfig,
    tau: f64,
    mode: YUpdate,
) -> Result<RawRun, SolveError> {
    let (d, n) = (aw.order(), aw.dim());
    let even = d % 2 == 0;
    let (rows, cols) = balanced_shape(d, n);
    let len = aw.len();
    let a_data = aw.as_slice();
    let opts: SpectralOptions = cfg.spectral_options();

    let mut lambda = a_data.to_vec();
    let mut y = vec![0.0; len];
    let mut buf = vec![0.0; len];
    let mut scratch = Vec::new();
    let mut u: Vec<f64> = Vec::new();
    let mut v: Vec<f64> = Vec::new();
    let mut prev_gap = 0.0f64;
    let mut matvecs = 0usize;
    let mut trace = Vec::new();

    for k in 0..cfg.max_iter {
        // X-update from Mat(Λ + τY).
        for ((b, l), yy) in buf.iter_mut().zip(&lambda).zip(&y) {
            *b = l + tau * yy;
        }
        let view = MatricizedView::from_slice(rows, cols, &buf)?;
        let spectral = |source| SolveError::Spectral {
            iteration: k + 1,
            source,
        };
        let warm = cfg.warm_start && !u.is_empty();
        let (nu, nv) = if even {
            let p = leading_eigpair_op(&view, &opts, warm.then_some(&u[..])).map_err(spectral)?;
            matvecs += p.matvecs;
            if !p.converged() {
                return Err(SolveError::SubproblemNotConverged {
                    iteration: k + 1,
                    residual: p.residual,
                    matvecs: p.matvecs,
                });
            }
            (p.vector.clone(), p.vector)
        } else {
            let t = leading_singular_triple(&view, &opts, warm.then_some((&u[..], &v[..])))
                .map_err(spectral)?;
            matvecs += t.matvecs;
            if !t.converged() {
                return Err(SolveError::SubproblemNotConverged {
                    iteration: k + 1,
                    residual: t.residual,
                    matvecs: t.matvecs,
                });
            }
            (t.left, t.right)
        };

        let dx = if u.is_empty() {
            1.0
        } else if even {
            let c = dot(&u, &nu);
            let s = if c < 0.0 { -1.0 } else { 1.0 };
            (sq_dist(&u, &nu, s) * (1.0 + c.abs())).sqrt()
        } else {
            let s = if dot(&u, &nu) < 0.0 { -1.0 } else { 1.0 };
            let one_minus_a = sq_dist(&u, &nu, s) / 2.0;
            let one_minus_b = sq_dist(&v, &nv, s) / 2.0;
            (2.0 * (one_minus_a + (1.0 - one_minus_a) * one_minus_b))
                .max(0.0)
                .sqrt()
        };
        u = nu;
        v = nv;

        // Y-update into `buf`.
        match mode {
            YUpdate::Full => {
                for (r, &ur) in u.iter().enumerate().take(rows) {
                    let base = r * cols;
                    for (c, &vc) in v.iter().enumerate().take(cols) {
                        let i = base + c;
                        buf[i] = a_data[i] - lambda[i] + tau * ur * vc;
                    }
                }
                table.symmetrize_in_place(&mut buf, &mut scratch);
                buf.iter_mut().for_each(|b| *b /= tau);
            }
            YUpdate::Simplified => {
                fill_x(&mut buf, &u, &v, cols);
                table.symmetrize_in_place(&mut buf, &mut scratch);
            }
        }
        let dy_rel = if k == 0 {
            None
        } else {
            let ny = dot(&y, &y).sqrt();
            Some(sq_dist(&buf, &y, 1.0).sqrt() / ny)
        };
        std::mem::swap(&mut y, &mut buf);

        // Multiplier update and primal gap.
        let mut gap2 = 0.0;
        for (r, &ur) in u.iter().enumerate().take(rows) {
            let base = r * cols;
            for (c, &vc) in v.iter().enumerate().take(cols) {
                let i = base + c;
                let diff = ur * vc - y[i];
                gap2 += diff * diff;
                lambda[i] -= tau * diff;
            }
        }
        let gap = gap2.sqrt();

        let (multiplier_residual, y_consistency) = if cfg.check_invariants {
            buf.copy_from_slice(&lambda);
            table.symmetrize_in_place(&mut buf, &mut scratch);
            let mr = sq_dist(&buf, a_data, 1.0).sqrt();
            fill_x(&mut buf, &u, &v, cols);
            table.symmetrize_in_place(&mut buf, &mut scratch);
            let yc = sq_dist(&buf, &y, 1.0).sqrt();
            (Some(mr), Some(yc))
        } else {
            (None, None)
        };

        let objective = MatricizedView::from_slice(rows, cols, a_data)?.bilinear(&u, &v);
        trace.push(TraceRow {
            iter: k + 1,
            primal_gap: gap,
            dx,
            dy_rel,
            objective,
            multiplier_residual,
            y_consistency,
        });

        let crit = match cfg.stop_rule {
            StopRule::Full => prev_gap.max(dx).max(dy_rel.unwrap_or(0.0)),
            StopRule::PrimalGap => gap,
        };
        prev_gap = gap;
        if crit <= cfg.eps {
            return Ok(RawRun {
                u,
                v,
                lambda,
                iterations: k + 1,
                status: SolveStatus::Converged,
                tau,
                matvecs,
                trace,
            });
        }
    }
    Ok(RawRun {
        u,
        v,
        lambda,
        iterations: cfg.max_iter,
        status: SolveStatus::MaxIter,
        tau,
        matvecs,
        trace,
    })
}

fn fill_x(buf: &mut [f64], u: &[f64], v: &[f64], cols: usize) {
    for (row, &ur) in buf.chunks_exact_mut(cols).zip(u) {
        for (b, &vc) in row.iter_mut().zip(v) {
            *b = ur * vc;
        }
    }
}

fn finish(
    a: &DenseTensor,
    working: &DenseTensor,
    scale: f64,
    cfg: &SolverConfig,
    raw: RawRun,
    retried: bool,
) -> Result<SolverReport, SolveError> {
    let (d, n) = (a.order(), a.dim());
    let factor = if d % 2 == 0 {
        Factor::Even(&raw.u)
    } else {
        Factor::Odd(&raw.u, &raw.v)
    };
    let r1 = extract_from_factor(factor, d, n, cfg.spectral_tol);
    let mut x = r1.x;
    let mut eigenvalue = a.rayleigh(&x)?;
    if d % 2 == 1 && eigenvalue < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
        eigenvalue = -eigenvalue;
    }
    let residual = eig_residual(a, &x, eigenvalue)?;
    let multiplier = DenseTensor::from_vec(d, n, raw.lambda)?;
    debug_assert!(multiplier.same_shape(working));
    let certification = certify(&multiplier, &x, &cfg.spectral_options())?;

    // Rescale the objective column to the input's scale.
    let mut trace = raw.trace;
    for row in &mut trace {
        row.objective *= scale;
    }
    Ok(SolverReport {
        eigenvalue,
        eigenvector: x,
        iterations: raw.iterations,
        status: raw.status,
        residual,
        certificate: certification.certificate,
        certification,
        extraction_error: r1.err,
        tau: raw.tau,
        scale,
        retried,
        subproblem_matvecs: raw.matvecs,
        trace,
        multiplier,
    })
}
