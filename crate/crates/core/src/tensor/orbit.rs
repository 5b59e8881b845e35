use super::{increment, DenseTensor};

/// Partition of the index tuples of an `n^d` tensor into permutation orbits
/// (index multisets).
///
/// A tensor is symmetric iff it is constant on every orbit, and the
/// symmetrization of a tensor replaces each entry by the mean over its orbit.
/// Orbit ids are assigned in storage order of the orbit's sorted
/// (non-decreasing) representative, which is its first member in storage
/// order.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    order: usize,
    dim: usize,
    ids: Vec<u32>,
    sizes: Vec<u32>,
    representatives: Vec<usize>,
}

impl OrbitTable {
    pub fn new(order: usize, dim: usize) -> Self {
        let len = super::checked_len(order, dim).expect("tensor size overflows usize");
        let mut ids = vec![u32::MAX; len];
        let mut sizes = Vec::new();
        let mut representatives = Vec::new();
        let mut idx = vec![0usize; order];
        let mut sorted = vec![0usize; order];
        for flat in 0..len {
            let is_sorted = idx.windows(2).all(|w| w[0] <= w[1]);
            let id = if is_sorted {
                let id = sizes.len() as u32;
                sizes.push(0);
                representatives.push(flat);
                id
            } else {
                sorted.copy_from_slice(&idx);
                sorted.sort_unstable();
                let canon = sorted.iter().fold(0, |acc, &i| acc * dim + i);
                ids[canon]
            };
            ids[flat] = id;
            sizes[id as usize] += 1;
            increment(&mut idx, dim);
        }
        Self {
            order,
            dim,
            ids,
            sizes,
            representatives,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_orbits(&self) -> usize {
        self.sizes.len()
    }

    pub fn orbit_of(&self, flat: usize) -> usize {
        self.ids[flat] as usize
    }

    pub fn orbit_size(&self, orbit: usize) -> usize {
        self.sizes[orbit] as usize
    }

    /// Flat index of the sorted representative of `orbit`.
    pub fn representative(&self, orbit: usize) -> usize {
        self.representatives[orbit]
    }

    /// Per-orbit sums of a flat buffer.
    pub fn orbit_sums(&self, data: &[f64], sums: &mut Vec<f64>) {
        assert_eq!(data.len(), self.ids.len());
        sums.clear();
        sums.resize(self.sizes.len(), 0.0);
        for (&id, &v) in self.ids.iter().zip(data) {
            sums[id as usize] += v;
        }
    }

    /// Replaces every entry by its orbit mean. `scratch` is reused between
    /// calls to avoid reallocation.
    pub fn symmetrize_in_place(&self, data: &mut [f64], scratch: &mut Vec<f64>) {
        self.orbit_sums(data, scratch);
        for (s, &size) in scratch.iter_mut().zip(&self.sizes) {
            *s /= size as f64;
        }
        for (v, &id) in data.iter_mut().zip(&self.ids) {
            *v = scratch[id as usize];
        }
    }

    pub fn symmetrize(&self, t: &DenseTensor) -> DenseTensor {
        assert_eq!((t.order(), t.dim()), (self.order, self.dim));
        let mut data = t.as_slice().to_vec();
        let mut scratch = Vec::new();
        self.symmetrize_in_place(&mut data, &mut scratch);
        DenseTensor::from_vec_unchecked(self.order, self.dim, data)
    }

    /// Largest `max - min` within any orbit; zero iff the buffer is
    /// exactly symmetric.
    pub fn max_spread(&self, data: &[f64]) -> f64 {
        assert_eq!(data.len(), self.ids.len());
        let mut lo = vec![f64::INFINITY; self.sizes.len()];
        let mut hi = vec![f64::NEG_INFINITY; self.sizes.len()];
        for (&id, &v) in self.ids.iter().zip(data) {
            let k = id as usize;
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
        lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max)
    }
}
