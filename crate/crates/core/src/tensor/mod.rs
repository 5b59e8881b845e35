//! Dense cubical tensors and the multilinear operations the solver needs.
//!
//! Storage is a flat row-major array over the index tuple `(i_1, .., i_d)`
//! with `i_d` varying fastest. The balanced matricization groups the first
//! `floor(d/2)` indices into the row and the rest into the column, so it is a
//! zero-copy reinterpretation of the same buffer.

mod io;
mod orbit;

pub use io::{read_tnsr, read_tnsr_file, write_tnsr, write_tnsr_file, TnsrLayout};
pub use orbit::OrbitTable;

use crate::error::TensorError;

/// A real tensor of order `d` with every mode of size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    data: Vec<f64>,
}

/// `n^d`, or `None` on overflow.
pub fn checked_len(order: usize, dim: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..order {
        len = len.checked_mul(dim)?;
    }
    Some(len)
}

fn validate_shape(order: usize, dim: usize) -> Result<usize, TensorError> {
    if order == 0 || dim == 0 {
        return Err(TensorError::InvalidShape { order, dim });
    }
    checked_len(order, dim).ok_or(TensorError::TooLarge { order, dim })
}

impl DenseTensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self, TensorError> {
        let len = validate_shape(order, dim)?;
        Ok(Self {
            order,
            dim,
            data: vec![0.0; len],
        })
    }

    /// Wraps a flat buffer in storage order. Rejects wrong lengths and
    /// non-finite entries.
    pub fn from_vec(order: usize, dim: usize, data: Vec<f64>) -> Result<Self, TensorError> {
        let len = validate_shape(order, dim)?;
        if data.len() != len {
            return Err(TensorError::LengthMismatch {
                expected: len,
                found: data.len(),
            });
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(TensorError::NonFinite { index, value });
        }
        Ok(Self { order, dim, data })
    }

    /// Builds a tensor entry by entry; the closure receives 0-based indices.
    pub fn from_fn(
        order: usize,
        dim: usize,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self, TensorError> {
        let len = validate_shape(order, dim)?;
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; order];
        for _ in 0..len {
            data.push(f(&idx));
            increment(&mut idx, dim);
        }
        Self::from_vec(order, dim, data)
    }

    pub(crate) fn from_vec_unchecked(order: usize, dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(Some(data.len()), checked_len(order, dim));
        Self { order, dim, data }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flat_index(idx)]
    }

    /// Sets one entry. Panics on a non-finite value.
    pub fn set(&mut self, idx: &[usize], value: f64) {
        assert!(value.is_finite(), "tensor entries must be finite");
        let k = self.flat_index(idx);
        self.data[k] = value;
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.order == other.order && self.dim == other.dim
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), TensorError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(TensorError::ShapeMismatch {
                left_order: self.order,
                left_dim: self.dim,
                right_order: other.order,
                right_dim: other.dim,
            })
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_vec_unchecked(
            self.order,
            self.dim,
            self.data.iter().map(|v| v * factor).collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn inner(&self, other: &Self) -> Result<f64, TensorError> {
        self.check_same_shape(other)?;
        Ok(dot(&self.data, &other.data))
    }

    pub fn frob_norm(&self) -> f64 {
        norm2(&self.data)
    }

    /// Mode permutation with the `permute` convention:
    /// `B(i_{p(1)}, .., i_{p(d)}) = A(i_1, .., i_d)`.
    pub fn permute(&self, perm: &PermIndex) -> Result<Self, TensorError> {
        if perm.len() != self.order {
            return Err(TensorError::InvalidPermutation(format!(
                "permutation of length {} applied to an order-{} tensor",
                perm.len(),
                self.order
            )));
        }
        let d = self.order;
        let n = self.dim;
        let strides = strides(d, n);
        // Source mode p(k) lands in destination slot k.
        let mut coef = vec![0usize; d];
        for (k, &src) in perm.as_slice().iter().enumerate() {
            coef[src] = strides[k];
        }
        let mut out = vec![0.0; self.data.len()];
        let mut idx = vec![0usize; d];
        for &v in &self.data {
            let dest: usize = idx.iter().zip(&coef).map(|(i, c)| i * c).sum();
            out[dest] = v;
            increment(&mut idx, n);
        }
        Ok(Self::from_vec_unchecked(d, n, out))
    }

    /// Orthogonal projection onto the symmetric tensors: the mean of the
    /// entry over its index orbit, which equals the average over all `d!`
    /// permutations.
    pub fn symmetrize(&self) -> Self {
        OrbitTable::new(self.order, self.dim).symmetrize(self)
    }

    /// Symmetrization by summing all `d!` permuted copies with a precomputed
    /// stride table. Quadratically slower than [`DenseTensor::symmetrize`];
    /// kept as an independent reference.
    pub fn symmetrize_exhaustive(&self) -> Self {
        let d = self.order;
        let n = self.dim;
        let strides = strides(d, n);
        let perms = all_permutations(d);
        let tables: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                let mut coef = vec![0usize; d];
                for (k, &src) in p.iter().enumerate() {
                    coef[src] = strides[k];
                }
                coef
            })
            .collect();
        let mut out = vec![0.0; self.data.len()];
        let mut idx = vec![0usize; d];
        for &v in &self.data {
            for coef in &tables {
                let dest: usize = idx.iter().zip(coef).map(|(i, c)| i * c).sum();
                out[dest] += v;
            }
            increment(&mut idx, n);
        }
        let scale = 1.0 / perms.len() as f64;
        out.iter_mut().for_each(|v| *v *= scale);
        Self::from_vec_unchecked(d, n, out)
    }

    /// Largest `|A - Per_p(A)|` over all permutations and entries.
    pub fn max_asymmetry(&self) -> f64 {
        OrbitTable::new(self.order, self.dim).max_spread(&self.data)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_asymmetry() <= tol
    }

    /// Balanced matricization `n^floor(d/2) x n^ceil(d/2)` sharing storage.
    pub fn matricize(&self) -> MatricizedView<'_> {
        let (rows, cols) = balanced_shape(self.order, self.dim);
        MatricizedView {
            rows,
            cols,
            data: &self.data,
        }
    }

    /// `A x^{d-1}`: contraction of modes `2..d` with `x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, TensorError> {
        if x.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(contract_trailing(&self.data, x, self.order - 1))
    }

    /// `<A, x^{∘d}>` by iterated contraction.
    pub fn rayleigh(&self, x: &[f64]) -> Result<f64, TensorError> {
        let v = self.apply(x)?;
        Ok(dot(&v, x))
    }

    /// `x ∘ x ∘ .. ∘ x` (`order` factors).
    pub fn outer_power(x: &[f64], order: usize) -> Result<Self, TensorError> {
        let n = x.len();
        validate_shape(order, n)?;
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(TensorError::NonFinite { index, value });
        }
        Ok(Self::from_vec_unchecked(order, n, kron_power(x, order)))
    }
}

impl std::ops::Neg for &DenseTensor {
    type Output = DenseTensor;
    fn neg(self) -> DenseTensor {
        self.scaled(-1.0)
    }
}

/// A permutation of `{0, .., d-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermIndex(Vec<usize>);

impl PermIndex {
    pub fn new(perm: Vec<usize>) -> Result<Self, TensorError> {
        let d = perm.len();
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || seen[p] {
                return Err(TensorError::InvalidPermutation(format!(
                    "{perm:?} is not a bijection on 0..{d}"
                )));
            }
            seen[p] = true;
        }
        Ok(Self(perm))
    }

    /// From the 1-based notation, e.g. `[2, 1, 3]`.
    pub fn from_one_based(perm: &[usize]) -> Result<Self, TensorError> {
        if perm.contains(&0) {
            return Err(TensorError::InvalidPermutation(
                "1-based permutation contains 0".into(),
            ));
        }
        Self::new(perm.iter().map(|p| p - 1).collect())
    }

    pub fn identity(d: usize) -> Self {
        Self((0..d).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Row-major `rows x cols` view of a tensor buffer.
#[derive(Debug, Clone, Copy)]
pub struct MatricizedView<'a> {
    rows: usize,
    cols: usize,
    data: &'a [f64],
}

impl<'a> MatricizedView<'a> {
    pub fn from_slice(rows: usize, cols: usize, data: &'a [f64]) -> Result<Self, TensorError> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(TensorError::LengthMismatch {
                expected: rows.saturating_mul(cols),
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &'a [f64] {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &'a [f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        (0..self.rows).map(|r| u[r] * dot(self.row(r), v)).sum()
    }

    /// Inverse of [`DenseTensor::matricize`].
    pub fn tensorize(&self, order: usize, dim: usize) -> Result<DenseTensor, TensorError> {
        let len = validate_shape(order, dim)?;
        if self.rows * self.cols != len {
            return Err(TensorError::LengthMismatch {
                expected: len,
                found: self.rows * self.cols,
            });
        }
        DenseTensor::from_vec(order, dim, self.data.to_vec())
    }
}

impl crate::spectra::LinearOperator for MatricizedView<'_> {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        crate::spectra::gemv(self.data, self.rows, self.cols, x, y);
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        crate::spectra::gemv_t(self.data, self.rows, self.cols, x, y);
    }

    fn norm1_bound(&self) -> Option<f64> {
        Some(crate::spectra::norm1_of(self.data, self.cols))
    }
}

/// `(n^floor(d/2), n^ceil(d/2))`.
pub fn balanced_shape(order: usize, dim: usize) -> (usize, usize) {
    let rows = dim.pow((order / 2) as u32);
    let cols = dim.pow(order.div_ceil(2) as u32);
    (rows, cols)
}

/// Kronecker power `x ⊗ .. ⊗ x` as a flat vector (last factor fastest).
pub fn kron_power(x: &[f64], times: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..times {
        let mut next = Vec::with_capacity(out.len() * x.len());
        for &a in &out {
            next.extend(x.iter().map(|&b| a * b));
        }
        out = next;
    }
    out
}

/// Contracts the last `times` modes of a flat cubical buffer with `x`.
pub(crate) fn contract_trailing(data: &[f64], x: &[f64], times: usize) -> Vec<f64> {
    let n = x.len();
    if times == 0 {
        return data.to_vec();
    }
    let mut cur: Vec<f64> = data.chunks_exact(n).map(|chunk| dot(chunk, x)).collect();
    for _ in 1..times {
        cur = cur.chunks_exact(n).map(|chunk| dot(chunk, x)).collect();
    }
    cur
}

pub(crate) fn strides(order: usize, dim: usize) -> Vec<usize> {
    let mut s = vec![1usize; order];
    for k in (0..order.saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dim;
    }
    s
}

/// Advances a row-major multi-index (last index fastest). Wraps to zero.
pub(crate) fn increment(idx: &mut [usize], dim: usize) {
    for i in idx.iter_mut().rev() {
        *i += 1;
        if *i < dim {
            return;
        }
        *i = 0;
    }
}

pub(crate) fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(d), &mut vec![false; d], &mut out);
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    // Four accumulators let the compiler vectorize the reduction.
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for k in 0..chunks {
        let i = 4 * k;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(order: usize, dim: usize, data: Vec<f64>) -> DenseTensor {
        DenseTensor::from_vec(order, dim, data).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            DenseTensor::zeros(0, 3),
            Err(TensorError::InvalidShape { .. })
        ));
        assert!(matches!(
            DenseTensor::from_vec(2, 2, vec![1.0; 3]),
            Err(TensorError::LengthMismatch { .. })
        ));
        assert!(matches!(
            DenseTensor::from_vec(1, 2, vec![1.0, f64::NAN]),
            Err(TensorError::NonFinite { index: 1, .. })
        ));
        assert!(matches!(
            DenseTensor::zeros(64, 1000),
            Err(TensorError::TooLarge { .. })
        ));
    }

    #[test]
    fn identity_permutation_is_bit_exact() {
        let a = DenseTensor::from_fn(4, 3, |i| {
            (i[0] * 27 + i[1] * 9 + i[2] * 3 + i[3]) as f64 * 0.37
        })
        .unwrap();
        assert_eq!(a.permute(&PermIndex::identity(4)).unwrap(), a);
    }

    #[test]
    fn swapping_two_modes_is_the_transpose() {
        let a = t(2, 3, (0..9).map(|v| v as f64).collect());
        let b = a
            .permute(&PermIndex::from_one_based(&[2, 1]).unwrap())
            .unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(b.matricize().get(r, c), a.matricize().get(c, r));
            }
        }
    }

    #[test]
    fn permute_moves_single_entry() {
        // A(1,2,1) = 5 (1-based) goes to (2,1,1) under [2,1,3].
        let mut a = DenseTensor::zeros(3, 2).unwrap();
        a.set(&[0, 1, 0], 5.0);
        let b = a
            .permute(&PermIndex::from_one_based(&[2, 1, 3]).unwrap())
            .unwrap();
        let nonzero: Vec<_> = (0..8).filter(|&k| b.as_slice()[k] != 0.0).collect();
        assert_eq!(nonzero, vec![b.flat_index(&[1, 0, 0])]);
        assert_eq!(b.get(&[1, 0, 0]), 5.0);
    }

    #[test]
    fn permute_errors() {
        let a = DenseTensor::zeros(3, 2).unwrap();
        assert!(a.permute(&PermIndex::identity(2)).is_err());
        assert!(PermIndex::new(vec![0, 0, 1]).is_err());
        assert!(PermIndex::new(vec![0, 3, 1]).is_err());
        assert!(PermIndex::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn symmetrize_matrix() {
        let a = t(2, 2, vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.symmetrize().as_slice(), &[0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn symmetrize_spreads_over_orbit() {
        // A(1,1,2) = 3: six permutations, two of which fix the tuple.
        let mut a = DenseTensor::zeros(3, 2).unwrap();
        a.set(&[0, 0, 1], 3.0);
        let s = a.symmetrize();
        for idx in [[0, 0, 1], [0, 1, 0], [1, 0, 0]] {
            assert!((s.get(&idx) - 1.0).abs() < 1e-15);
        }
        assert_eq!(s.get(&[0, 0, 0]), 0.0);
        assert_eq!(s.get(&[1, 1, 0]), 0.0);
        assert!(s.is_symmetric(0.0));
        let e = a.symmetrize_exhaustive();
        for (x, y) in s.as_slice().iter().zip(e.as_slice()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn asymmetric_tensor_is_detected() {
        let mut a = DenseTensor::zeros(3, 2).unwrap();
        a.set(&[0, 0, 1], 1.0);
        a.set(&[0, 1, 0], 2.0);
        a.set(&[1, 0, 0], 1.0);
        assert!(!a.is_symmetric(0.5));
        assert_eq!(a.max_asymmetry(), 1.0);
        assert!(a.is_symmetric(1.0));
    }

    #[test]
    fn matricize_shapes() {
        let a = DenseTensor::zeros(5, 3).unwrap();
        let m = a.matricize();
        assert_eq!((m.rows(), m.cols()), (9, 27));
        let x = [1.0, 0.0];
        let p = DenseTensor::outer_power(&x, 3).unwrap();
        let m = p.matricize();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        let nz: Vec<_> = (0..2)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| m.get(r, c) != 0.0)
            .collect();
        assert_eq!(nz, vec![(0, 0)]);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn tensorize_rejects_wrong_size() {
        let data = vec![0.0; 12];
        let m = MatricizedView::from_slice(3, 4, &data).unwrap();
        assert!(m.tensorize(2, 3).is_err());
        assert!(MatricizedView::from_slice(3, 5, &data).is_err());
    }

    #[test]
    fn outer_power_small() {
        let p = DenseTensor::outer_power(&[1.0, 2.0], 2).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 2.0, 2.0, 4.0]);
        let e = DenseTensor::outer_power(&[1.0, 0.0, 0.0], 3).unwrap();
        assert_eq!(e.get(&[0, 0, 0]), 1.0);
        assert_eq!(e.frob_norm(), 1.0);
    }

    #[test]
    fn apply_on_matrix_is_matvec() {
        let a = t(2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(a.apply(&[1.0, -1.0]).unwrap(), vec![-1.0, -1.0]);
        assert!(a.apply(&[1.0]).is_err());
    }

    #[test]
    fn inner_shape_mismatch() {
        let a = DenseTensor::zeros(2, 2).unwrap();
        let b = DenseTensor::zeros(2, 3).unwrap();
        assert!(a.inner(&b).is_err());
    }

    #[test]
    fn rayleigh_of_own_outer_power() {
        let x = [0.3, -1.2, 0.5];
        let p = DenseTensor::outer_power(&x, 4).unwrap();
        let nx2: f64 = x.iter().map(|v| v * v).sum();
        let r = p.rayleigh(&x).unwrap();
        assert!((r - nx2.powi(4)).abs() < 1e-12);
    }
}
