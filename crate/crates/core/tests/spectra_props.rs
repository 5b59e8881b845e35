mod common;

use common::*;
use proptest::prelude::*;
use tenspec::spectra::{
    dense_sym_evd, leading_eigpair_sym, leading_singular_triple, spectral_gap_top,
};
use tenspec::{Matrix, SolverConfig, SpectralOptions};

fn opts() -> SpectralOptions {
    SpectralOptions::default()
}

fn sym(seed: u64, m: usize) -> Matrix {
    let mut r = rng(seed);
    Matrix::from_vec(m, m, random_sym_matrix(&mut r, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lanczos_matches_independent_evd(m in 1usize..=60, seed in any::<u64>()) {
        let a = sym(seed, m);
        let p = leading_eigpair_sym(&a, &opts(), None).unwrap();
        let (vals, vecs) = sym_eig(a.as_slice(), m);
        prop_assert!(p.converged());
        prop_assert!((p.value - vals[0]).abs() <= 1e-8 * vals[0].abs().max(1.0));
        prop_assert!((norm(&p.vector) - 1.0).abs() <= 1e-12);
        let av = a.matvec(&p.vector);
        let r: Vec<f64> = av.iter().zip(&p.vector).map(|(x, v)| x - p.value * v).collect();
        prop_assert!(norm(&r) <= 1e-10 * a.frob_norm().max(1.0));
        if m > 1 && vals[0] - vals[1] > 1e-3 {
            prop_assert!(dist_up_to_sign(&p.vector, &vecs[0]) <= 1e-6);
        }
    }

    #[test]
    fn dense_evd_reconstructs(m in 1usize..=40, seed in any::<u64>()) {
        let a = sym(seed, m);
        let e = dense_sym_evd(&a).unwrap();
        let q = &e.vectors;
        let qt = q.transpose();
        let qtq = qt.matmul(q);
        let mut orth = 0.0;
        for i in 0..m {
            for j in 0..m {
                let t = qtq.get(i, j) - if i == j { 1.0 } else { 0.0 };
                orth += t * t;
            }
        }
        prop_assert!(orth.sqrt() <= 1e-10);
        let rec = q.matmul(&Matrix::diag(&e.values)).matmul(&qt);
        let diff: f64 = rec.as_slice().iter().zip(a.as_slice()).map(|(x, y)| (x - y) * (x - y)).sum();
        prop_assert!(diff.sqrt() <= 1e-9 * a.frob_norm());
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let (vals, _) = sym_eig(a.as_slice(), m);
        for (x, y) in e.values.iter().zip(&vals) {
            prop_assert!((x - y).abs() <= 1e-10 * a.frob_norm());
        }
    }

    #[test]
    fn shift_moves_the_top_eigenvalue(m in 2usize..=30, seed in any::<u64>(), c in -50.0f64..50.0) {
        let a = sym(seed, m);
        let mut b = a.clone();
        b.add_diag(c);
        let pa = leading_eigpair_sym(&a, &opts(), None).unwrap();
        let pb = leading_eigpair_sym(&b, &opts(), None).unwrap();
        prop_assert!((pb.value - (pa.value + c)).abs() <= 1e-8 * (1.0 + c.abs() + pa.value.abs()));
    }

    #[test]
    fn smallest_eigenvalue_through_negation(m in 1usize..=30, seed in any::<u64>()) {
        let a = sym(seed, m);
        let neg = leading_eigpair_sym(&a.scaled(-1.0), &opts(), None).unwrap();
        let (vals, _) = sym_eig(a.as_slice(), m);
        prop_assert!((-neg.value - vals[m - 1]).abs() <= 1e-8 * a.frob_norm().max(1.0));
    }

    #[test]
    fn bottom_eigenvector_inequality(m in 2usize..=30, seed in any::<u64>()) {
        let b = sym(seed, m);
        let (vals, vecs) = sym_eig(b.as_slice(), m);
        let xm = &vecs[m - 1];
        let half_gap = 0.5 * (vals[m - 2] - vals[m - 1]);
        let mut r = rng(seed ^ 0x1e33a);
        for _ in 0..200 {
            let x = unit_vec(&mut r, m);
            let mut inner = 0.0;
            let mut fro = 0.0;
            for i in 0..m {
                for j in 0..m {
                    let dij = x[i] * x[j] - xm[i] * xm[j];
                    inner += b.get(i, j) * dij;
                    fro += dij * dij;
                }
            }
            prop_assert!(inner - half_gap * fro >= -1e-10, "slack {}", inner - half_gap * fro);
        }
    }

    #[test]
    fn singular_triple_matches_power_oracle(r in 1usize..=25, c in 1usize..=90, seed in any::<u64>()) {
        let mut g = rng(seed);
        let m = Matrix::from_vec(r, c, gaussian_vec(&mut g, r * c));
        let t = leading_singular_triple(&m, &opts(), None).unwrap();
        let s = singular_values(m.as_slice(), r, c);
        prop_assert!((t.value - s[0]).abs() <= 1e-8 * s[0].max(1.0));
        let mv = m.matvec(&t.right);
        let res1: f64 = mv.iter().zip(&t.left).map(|(x, u)| (x - t.value * u).powi(2)).sum::<f64>().sqrt();
        let mtu = m.transpose().matvec(&t.left);
        let res2: f64 = mtu.iter().zip(&t.right).map(|(x, v)| (x - t.value * v).powi(2)).sum::<f64>().sqrt();
        prop_assert!(res1 <= 1e-8 * s[0].max(1.0) && res2 <= 1e-8 * s[0].max(1.0));
        let (imax, _) = t.left.iter().enumerate().fold((0, 0.0f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
        prop_assert!(t.left[imax] > 0.0);
    }
}

#[test]
fn singular_value_of_wide_matrix_against_power_iteration() {
    let mut g = rng(2024);
    let m = Matrix::from_vec(20, 80, gaussian_vec(&mut g, 1600));
    let t = leading_singular_triple(&m, &opts(), None).unwrap();
    let oracle = top_singular_power(m.as_slice(), 20, 80, 3000);
    assert!(
        (t.value - oracle).abs() <= 1e-8 * oracle,
        "{} vs {oracle}",
        t.value
    );
}

#[test]
fn random_50_against_jacobi_and_nalgebra() {
    let a = sym(50, 50);
    let p = leading_eigpair_sym(&a, &opts(), None).unwrap();
    let e = dense_sym_evd(&a).unwrap();
    let (vals, _) = sym_eig(a.as_slice(), 50);
    assert!((p.value - e.values[0]).abs() <= 1e-8);
    assert!((p.value - vals[0]).abs() <= 1e-8);
}

#[test]
fn converged_hilbert_multiplier_has_a_gap() {
    let a = tenspec::gen::hilbert(4, 10).unwrap();
    let report = tenspec::solve(&a, &SolverConfig::default()).unwrap();
    let lam = report.multiplier.matricize();
    let m = Matrix::from_vec(lam.rows(), lam.cols(), lam.as_slice().to_vec());
    let gap = spectral_gap_top(&m, &opts()).unwrap();
    assert!(gap.top >= gap.second);
    let (vals, _) = sym_eig(m.as_slice(), m.rows());
    assert!((gap.gap - (vals[0] - vals[1])).abs() <= 1e-8);
    assert!(gap.gap > 0.0, "gap {}", gap.gap);
}
