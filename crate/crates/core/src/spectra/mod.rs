//! Leading eigenpairs and singular triples by restarted Lanczos, plus a
//! dense Jacobi eigen-solver used as an oracle and for gap checks.

mod jacobi;
mod lanczos;

pub use jacobi::{dense_sym_evd, SymEigen, DENSE_EVD_LIMIT};

use crate::error::SpectralError;
use crate::tensor::{dot, norm2};

/// A real matrix available only through products.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `y = M x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// `y = M^T x`.
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]);
    /// Upper bound on the largest absolute column sum, if cheap to get.
    fn norm1_bound(&self) -> Option<f64> {
        None
    }
}

/// `y = M x` for a row-major `rows × cols` buffer.
pub(crate) fn gemv(data: &[f64], rows: usize, cols: usize, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(data.len(), rows * cols);
    for (yi, row) in y.iter_mut().zip(data.chunks_exact(cols)) {
        *yi = dot(row, x);
    }
}

/// `y = M^T x` for a row-major `rows × cols` buffer.
pub(crate) fn gemv_t(data: &[f64], rows: usize, cols: usize, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(data.len(), rows * cols);
    y.iter_mut().for_each(|v| *v = 0.0);
    for (&xi, row) in x.iter().zip(data.chunks_exact(cols)) {
        if xi != 0.0 {
            for (yj, &mij) in y.iter_mut().zip(row) {
                *yj += xi * mij;
            }
        }
    }
}

pub(crate) fn norm1_of(data: &[f64], cols: usize) -> f64 {
    let mut sums = vec![0.0; cols];
    for row in data.chunks_exact(cols) {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v.abs();
        }
    }
    sums.into_iter().fold(0.0, f64::max)
}

/// Flips `v` so its largest-magnitude entry is positive (first index wins
/// exact ties).
pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix buffer length mismatch");
        Self { rows, cols, data }
    }

    /// # Panics
    /// If the rows have different lengths.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        gemv(&self.data, self.rows, self.cols, x, &mut y);
        y
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// `M M^T`.
    pub fn gram(&self) -> Matrix {
        gram_rows(&self.data, self.rows, self.cols)
    }

    pub fn frob_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn norm1(&self) -> f64 {
        norm1_of(&self.data, self.cols)
    }

    /// `max |M_ij - M_ji|`; infinite for non-square matrices.
    pub fn max_asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn add_diag(&mut self, c: f64) {
        let n = self.rows.min(self.cols);
        for i in 0..n {
            self.data[i * self.cols + i] += c;
        }
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }
}

pub(crate) fn gram_rows(data: &[f64], rows: usize, cols: usize) -> Matrix {
    let mut g = Matrix::zeros(rows, rows);
    for i in 0..rows {
        let ri = &data[i * cols..(i + 1) * cols];
        for j in 0..=i {
            let v = dot(ri, &data[j * cols..(j + 1) * cols]);
            g.data[i * rows + j] = v;
            g.data[j * rows + i] = v;
        }
    }
    g
}

impl LinearOperator for Matrix {
    fn nrows(&self) -> usize {
        self.rows
    }
    fn ncols(&self) -> usize {
        self.cols
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        gemv(&self.data, self.rows, self.cols, x, y);
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        gemv_t(&self.data, self.rows, self.cols, x, y);
    }
    fn norm1_bound(&self) -> Option<f64> {
        Some(self.norm1())
    }
}

/// Settings shared by the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Relative residual tolerance.
    pub tol: f64,
    /// Budget of operator products.
    pub max_matvecs: usize,
    /// Largest Krylov basis kept between restarts.
    pub krylov_dim: usize,
    /// Seed of the random start vector.
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_matvecs: 5000,
            krylov_dim: 30,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralStatus {
    Converged,
    NotConverged,
    /// Leading singular value is zero; vectors are arbitrary.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖Mv - σv‖`.
    pub residual: f64,
    pub matvecs: usize,
    pub restarts: usize,
    pub status: SpectralStatus,
}

impl EigenPair {
    pub fn converged(&self) -> bool {
        self.status == SpectralStatus::Converged
    }
}

#[derive(Debug, Clone)]
pub struct SingularTriple {
    pub value: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// `max(‖Mv - σu‖, ‖M^T u - σv‖)`.
    pub residual: f64,
    pub matvecs: usize,
    pub status: SpectralStatus,
}

impl SingularTriple {
    pub fn converged(&self) -> bool {
        self.status != SpectralStatus::NotConverged
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGap {
    pub top: f64,
    pub second: f64,
    pub gap: f64,
}

impl SpectralGap {
    fn new(top: f64, second: f64) -> Self {
        let second = second.min(top);
        Self {
            top,
            second,
            gap: top - second,
        }
    }
}

fn check_symmetric(m: &Matrix) -> Result<(), SpectralError> {
    if m.rows() != m.cols() {
        return Err(SpectralError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(SpectralError::Empty);
    }
    let norm = m.frob_norm();
    if !norm.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    let asym = m.max_asymmetry();
    if asym > 1e-10 * norm.max(f64::MIN_POSITIVE) {
        return Err(SpectralError::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Largest algebraic eigenpair of a symmetric matrix.
pub fn leading_eigpair_sym(
    m: &Matrix,
    opts: &SpectralOptions,
    warm: Option<&[f64]>,
) -> Result<EigenPair, SpectralError> {
    check_symmetric(m)?;
    leading_eigpair_op(m, opts, warm)
}

/// Largest algebraic eigenpair of a square operator assumed symmetric.
///
/// A stalled Lanczos run falls back to power iteration on `M + ‖M‖₁ I`
/// when the operator reports a norm bound; the better of the two results
/// is returned.
pub fn leading_eigpair_op<O: LinearOperator + ?Sized>(
    op: &O,
    opts: &SpectralOptions,
    warm: Option<&[f64]>,
) -> Result<EigenPair, SpectralError> {
    let m = op.nrows();
    if m != op.ncols() {
        return Err(SpectralError::NotSquare {
            rows: m,
            cols: op.ncols(),
        });
    }
    if m == 0 {
        return Err(SpectralError::Empty);
    }
    if let Some(w) = warm {
        if w.len() != m {
            return Err(SpectralError::DimensionMismatch {
                expected: m,
                found: w.len(),
            });
        }
    }
    let mut out = lanczos::largest(|x, y| op.apply(x, y), m, opts, warm);
    if !out.value.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    if out.status == SpectralStatus::NotConverged {
        if let Some(shift) = op.norm1_bound() {
            let alt = lanczos::shifted_power(|x, y| op.apply(x, y), m, shift, opts, &out.vector);
            let matvecs = out.matvecs + alt.matvecs;
            if alt.residual < out.residual {
                out = alt;
            }
            out.matvecs = matvecs;
        }
    }
    Ok(EigenPair {
        value: out.value,
        vector: out.vector,
        residual: out.residual,
        matvecs: out.matvecs,
        restarts: out.restarts,
        status: out.status,
    })
}

/// Leading singular triple through Lanczos on the smaller Gram operator.
///
/// `warm` is a previous `(left, right)` pair. The left vector's
/// largest-magnitude entry is made positive and the right vector follows.
pub fn leading_singular_triple<O: LinearOperator + ?Sized>(
    op: &O,
    opts: &SpectralOptions,
    warm: Option<(&[f64], &[f64])>,
) -> Result<SingularTriple, SpectralError> {
    let (r, c) = (op.nrows(), op.ncols());
    if r == 0 || c == 0 {
        return Err(SpectralError::Empty);
    }
    if let Some((u, v)) = warm {
        if u.len() != r {
            return Err(SpectralError::DimensionMismatch {
                expected: r,
                found: u.len(),
            });
        }
        if v.len() != c {
            return Err(SpectralError::DimensionMismatch {
                expected: c,
                found: v.len(),
            });
        }
    }
    let gram_opts = SpectralOptions {
        tol: opts.tol * 0.5,
        ..*opts
    };
    let left_side = r <= c;
    let (small, big) = if left_side { (r, c) } else { (c, r) };
    let mut tmp = vec![0.0; big];
    let gram = |x: &[f64], y: &mut [f64]| {
        if left_side {
            op.apply_transpose(x, &mut tmp);
            op.apply(&tmp, y);
        } else {
            op.apply(x, &mut tmp);
            op.apply_transpose(&tmp, y);
        }
    };
    let warm_vec = warm.map(|(u, v)| if left_side { u } else { v });
    let out = lanczos::largest(gram, small, &gram_opts, warm_vec);
    if !out.value.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    let mut matvecs = 2 * out.matvecs;
    let sigma = out.value.max(0.0).sqrt();

    let mut other = vec![0.0; big];
    if left_side {
        op.apply_transpose(&out.vector, &mut other);
    } else {
        op.apply(&out.vector, &mut other);
    }
    matvecs += 1;
    let n_other = norm2(&other);
    if sigma <= f64::MIN_POSITIVE.sqrt() || n_other == 0.0 {
        let mut other = vec![0.0; big];
        other[0] = 1.0;
        let (left, right) = if left_side {
            (out.vector, other)
        } else {
            (other, out.vector)
        };
        return Ok(SingularTriple {
            value: 0.0,
            left,
            right,
            residual: 0.0,
            matvecs,
            status: SpectralStatus::Degenerate,
        });
    }
    other.iter_mut().for_each(|x| *x /= n_other);
    let (mut u, mut v) = if left_side {
        (out.vector, other)
    } else {
        (other, out.vector)
    };
    let before = u.clone();
    fix_sign(&mut u);
    if u != before {
        v.iter_mut().for_each(|x| *x = -*x);
    }

    let mut mv = vec![0.0; r];
    let mut mtu = vec![0.0; c];
    op.apply(&v, &mut mv);
    op.apply_transpose(&u, &mut mtu);
    matvecs += 2;
    let r1 = mv
        .iter()
        .zip(&u)
        .map(|(a, b)| (a - sigma * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let r2 = mtu
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - sigma * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let residual = r1.max(r2);
    let status = if out.status == SpectralStatus::Converged || residual <= opts.tol * sigma.max(1.0)
    {
        SpectralStatus::Converged
    } else {
        SpectralStatus::NotConverged
    };
    Ok(SingularTriple {
        value: sigma,
        left: u,
        right: v,
        residual,
        matvecs,
        status,
    })
}

/// Top two algebraic eigenvalues of a symmetric matrix.
pub fn spectral_gap_top(m: &Matrix, opts: &SpectralOptions) -> Result<SpectralGap, SpectralError> {
    check_symmetric(m)?;
    if m.rows() == 1 {
        return Ok(SpectralGap::new(m.get(0, 0), f64::NEG_INFINITY));
    }
    if m.rows() <= DENSE_EVD_LIMIT {
        let e = dense_sym_evd(m)?;
        return Ok(SpectralGap::new(e.values[0], e.values[1]));
    }
    spectral_gap_top_op(m, opts)
}

/// Top two algebraic eigenvalues of a symmetric operator by deflation:
/// the second is the top of `M - (σ₁ + ‖M‖₁) v₁ v₁^T`.
pub fn spectral_gap_top_op<O: LinearOperator + ?Sized>(
    op: &O,
    opts: &SpectralOptions,
) -> Result<SpectralGap, SpectralError> {
    let first = leading_eigpair_op(op, opts, None)?;
    let bound = op
        .norm1_bound()
        .unwrap_or_else(|| 2.0 * first.value.abs() + 1.0);
    deflated_second(|x, y| op.apply(x, y), op.nrows(), &first, bound, opts)
}

fn deflated_second<F: FnMut(&[f64], &mut [f64])>(
    mut apply: F,
    m: usize,
    first: &EigenPair,
    bound: f64,
    opts: &SpectralOptions,
) -> Result<SpectralGap, SpectralError> {
    if m == 1 {
        return Ok(SpectralGap::new(first.value, f64::NEG_INFINITY));
    }
    let shift = first.value.abs() + bound + 1.0;
    let v1 = &first.vector;
    let deflated = |x: &[f64], y: &mut [f64]| {
        apply(x, y);
        let c = (first.value + shift) * dot(v1, x);
        for (yi, vi) in y.iter_mut().zip(v1) {
            *yi -= c * vi;
        }
    };
    let opts2 = SpectralOptions {
        seed: opts.seed.wrapping_add(1),
        ..*opts
    };
    let second = lanczos::largest(deflated, m, &opts2, None);
    if !second.value.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    Ok(SpectralGap::new(first.value, second.value))
}

/// Top two singular values of a rectangular operator, from the Gram
/// matrix on the smaller side.
pub fn singular_gap_top<O: LinearOperator + ?Sized>(
    op: &O,
    opts: &SpectralOptions,
) -> Result<SpectralGap, SpectralError> {
    let (r, c) = (op.nrows(), op.ncols());
    if r == 0 || c == 0 {
        return Err(SpectralError::Empty);
    }
    let left_side = r <= c;
    let (small, big) = if left_side { (r, c) } else { (c, r) };
    let to_sv = |g: SpectralGap| {
        let top = g.top.max(0.0).sqrt();
        let second = if g.second.is_finite() {
            g.second.max(0.0).sqrt()
        } else {
            0.0
        };
        SpectralGap::new(top, second)
    };
    let mut tmp = vec![0.0; big];
    let mut gram = |x: &[f64], y: &mut [f64]| {
        if left_side {
            op.apply_transpose(x, &mut tmp);
            op.apply(&tmp, y);
        } else {
            op.apply(x, &mut tmp);
            op.apply_transpose(&tmp, y);
        }
    };
    if small == 1 {
        let mut y = [0.0];
        gram(&[1.0], &mut y);
        return Ok(SpectralGap::new(y[0].max(0.0).sqrt(), 0.0));
    }
    if small <= DENSE_EVD_LIMIT {
        let mut g = Matrix::zeros(small, small);
        let mut e = vec![0.0; small];
        let mut col = vec![0.0; small];
        for j in 0..small {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            gram(&e, &mut col);
            for (i, &ci) in col.iter().enumerate() {
                g.set(i, j, ci);
            }
        }
        // Exact symmetry for the dense solver.
        for i in 0..small {
            for j in 0..i {
                let v = 0.5 * (g.get(i, j) + g.get(j, i));
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        let ev = dense_sym_evd(&g)?;
        return Ok(to_sv(SpectralGap::new(ev.values[0], ev.values[1])));
    }
    let first = lanczos::largest(&mut gram, small, opts, None);
    if !first.value.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    let pair = EigenPair {
        value: first.value,
        vector: first.vector,
        residual: first.residual,
        matvecs: first.matvecs,
        restarts: first.restarts,
        status: first.status,
    };
    let bound = 2.0 * pair.value.abs() + 1.0;
    Ok(to_sv(deflated_second(gram, small, &pair, bound, opts)?))
}
