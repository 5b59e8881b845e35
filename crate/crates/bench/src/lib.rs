//! Inputs shared by the benchmarks.

use tenspec::{gen, DenseTensor, Matrix};

/// Solver inputs, labelled `family(d,n)`.
pub fn solve_inputs() -> Vec<(String, DenseTensor)> {
    let mut out = Vec::new();
    for (d, n) in [(3, 20), (3, 40), (4, 10)] {
        out.push((format!("hilbert({d},{n})"), gen::hilbert(d, n).unwrap()));
    }
    out.push((
        "gaussian(3,10)".into(),
        gen::random_gaussian_sym(3, 10, 1).unwrap(),
    ));
    out.push((
        "sparse(4,8)".into(),
        gen::random_sparse_nonneg(4, 8, 0.9, 1).unwrap(),
    ));
    out
}

/// Dense symmetric matrix `B + Bᵀ` with entries from a fixed LCG.
pub fn sym_matrix(m: usize, seed: u64) -> Matrix {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let raw: Vec<f64> = (0..m * m).map(|_| next()).collect();
    let data = (0..m * m)
        .map(|k| raw[k] + raw[(k % m) * m + k / m])
        .collect();
    Matrix::from_vec(m, m, data)
}
